use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, err, code) = mpalg_cli::execute(std::env::args_os());
    print!("{out}");
    let _ = std::io::stdout().flush();
    eprint!("{err}");
    ExitCode::from(code as u8)
}
