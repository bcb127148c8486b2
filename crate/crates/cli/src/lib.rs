//! Command-line front end: argument parsing, configuration merging and report
//! rendering. [`execute`] runs one invocation and returns its output and exit
//! status without touching the process, which is what `main` and the tests use.

pub mod config;
pub mod expr;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mpalg::cocycle::CocycleHandle;
use mpalg::coinv::{self, CoinvKind, CoinvReport, FPoint, Limits};
use mpalg::fock::{self, FockVector, VoaConfig};
use mpalg::scalar::{self, Rational};
use mpalg::verify;
use num_traits::Zero;
use serde::Serialize;

use crate::config::ConfigFile;
use crate::expr::{parse_element, print_element};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSTABILIZED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] expr::ParseError),
    #[error(transparent)]
    Print(#[from] expr::NotPrintable),
    #[error(transparent)]
    Core(#[from] mpalg::Error),
    #[error(transparent)]
    Fock(#[from] fock::ParseFockError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Quotient by sp_F
    #[default]
    A,
    /// Quotient by sp_F ⋉ F
    X,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mpalg",
    version,
    about = "Exact oscillator-representation algebra"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Read defaults from a `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket of two elements of the degree-two Weyl algebra
    Bracket { a: String, b: String },
    /// Evaluate psi, alpha, beta, gamma, mp (-1/2 alpha) or weyl (-1/2 alpha + beta)
    Cocycle { name: String, a: String, b: String },
    /// Apply an element (or its exponential) to a Fock vector such as "2*[2,1] - [3]"
    FockApply {
        expr: String,
        vector: String,
        #[arg(long)]
        channel: Option<usize>,
        /// Apply exp(expr) instead of expr
        #[arg(long)]
        exp: bool,
        /// Group scalar for exponentials of number operators
        #[arg(long, allow_hyphen_values = true)]
        group: Option<String>,
    },
    /// Truncated coinvariants at the point given by a gap set
    Coinv {
        /// Comma-separated gaps, e.g. "1,2,4"
        #[arg(long, allow_hyphen_values = true)]
        gaps: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        /// Top degree
        #[arg(long = "N")]
        n: Option<u32>,
        /// Source-degree cap
        #[arg(long = "M")]
        m: Option<u32>,
        /// Window
        #[arg(long = "W")]
        w: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Comma-separated steps `s` (M = W = s) or `m:w`
        #[arg(long)]
        schedule: Option<String>,
        /// Relation budget per degree; exceeding it yields an unstabilized report
        #[arg(long)]
        max_relations: Option<usize>,
    },
    /// Run every identity check
    VerifyAll {
        #[arg(long)]
        probe_bound: Option<i64>,
    },
    /// Central cocycles, fiber scalars and twisting multiples
    CentralScalars {
        /// Central charges (repeatable)
        #[arg(long = "c", allow_hyphen_values = true)]
        charges: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvConfig {
    pub gaps: Vec<i64>,
    pub rank: usize,
    pub n: u32,
    pub kind: CoinvKind,
    pub schedule: Vec<(u32, u32)>,
    pub limits: Limits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandConfig {
    Bracket {
        a: String,
        b: String,
    },
    Cocycle {
        name: String,
        a: String,
        b: String,
    },
    FockApply {
        expr: String,
        vector: String,
        channel: usize,
        exp: bool,
        group: Option<Rational>,
    },
    Coinv(CoinvConfig),
    VerifyAll {
        probe_bound: i64,
    },
    CentralScalars {
        charges: Vec<Rational>,
    },
}

/// A fully resolved invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub format: Format,
    pub command: CommandConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn rational_arg(s: &str) -> Result<Rational, CliError> {
    scalar::parse(s.trim()).ok_or_else(|| CliError::Usage(format!("not a rational number: {s:?}")))
}

pub fn parse_gaps(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad gap {t:?}")))
        })
        .collect()
}

pub fn parse_schedule(s: &str) -> Result<Vec<(u32, u32)>, CliError> {
    let bad = |t: &str| CliError::Usage(format!("bad schedule step {t:?}"));
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.split_once(':') {
            Some((m, w)) => Ok((
                m.trim().parse().map_err(|_| bad(t))?,
                w.trim().parse().map_err(|_| bad(t))?,
            )),
            None => {
                let v: u32 = t.parse().map_err(|_| bad(t))?;
                Ok((v, v))
            }
        })
        .collect()
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let format = file.merge(cli.format, "format")?.unwrap_or_default();
        let command = match cli.command {
            Command::Bracket { a, b } => CommandConfig::Bracket { a, b },
            Command::Cocycle { name, a, b } => CommandConfig::Cocycle { name, a, b },
            Command::FockApply {
                expr,
                vector,
                channel,
                exp,
                group,
            } => CommandConfig::FockApply {
                expr,
                vector,
                channel: file.merge(channel, "channel")?.unwrap_or(1),
                exp,
                group: group.as_deref().map(rational_arg).transpose()?,
            },
            Command::Coinv {
                gaps,
                rank,
                n,
                m,
                w,
                mode,
                schedule,
                max_relations,
            } => {
                let gaps = parse_gaps(file.merge(gaps, "gaps")?.as_deref().unwrap_or(""))?;
                let rank = file.merge(rank, "rank")?.unwrap_or(1);
                if rank == 0 {
                    return Err(CliError::Usage("--rank must be positive".into()));
                }
                let n = file.merge(n, "N")?.unwrap_or(6);
                let m = file.merge(m, "M")?;
                let w = file.merge(w, "W")?;
                let kind = match file.merge(mode, "mode")?.unwrap_or_default() {
                    Mode::A => CoinvKind::A,
                    Mode::X => CoinvKind::X,
                };
                let schedule = match file.merge(schedule, "schedule")? {
                    Some(s) => parse_schedule(&s)?,
                    None => default_schedule(n, m, w)?,
                };
                for &(sm, sw) in &schedule {
                    if n > sm || sm > sw {
                        return Err(CliError::Usage(format!(
                            "need N <= M <= W, got N = {n}, M = {sm}, W = {sw}"
                        )));
                    }
                }
                let max_relations = file.merge(max_relations, "max-relations")?;
                CommandConfig::Coinv(CoinvConfig {
                    gaps,
                    rank,
                    n,
                    kind,
                    schedule,
                    limits: Limits { max_relations },
                })
            }
            Command::VerifyAll { probe_bound } => {
                let probe_bound = file.merge(probe_bound, "probe-bound")?.unwrap_or(4);
                if probe_bound < 1 {
                    return Err(CliError::Usage("--probe-bound must be positive".into()));
                }
                CommandConfig::VerifyAll { probe_bound }
            }
            Command::CentralScalars { charges } => {
                let charges = if charges.is_empty() {
                    ["0", "1", "2", "26"]
                        .iter()
                        .map(|s| rational_arg(s))
                        .collect::<Result<_, _>>()?
                } else {
                    charges
                        .iter()
                        .map(|s| rational_arg(s))
                        .collect::<Result<_, _>>()?
                };
                CommandConfig::CentralScalars { charges }
            }
        };
        Ok(Self { format, command })
    }
}

/// Two steps ending at `(M, W)`, the first two lower when that keeps `N <= M`.
fn default_schedule(n: u32, m: Option<u32>, w: Option<u32>) -> Result<Vec<(u32, u32)>, CliError> {
    let m = m.unwrap_or(n.max(12));
    let w = w.unwrap_or(m);
    let prev_m = m.saturating_sub(2).max(n);
    let prev_w = w.saturating_sub(2).max(prev_m);
    if (prev_m, prev_w) == (m, w) {
        Ok(vec![(m, w)])
    } else {
        Ok(vec![(prev_m, prev_w), (m, w)])
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn cocycle_handle(name: &str) -> Result<CocycleHandle, CliError> {
    if let Some(h) = CocycleHandle::from_name(name) {
        return Ok(h);
    }
    match name {
        "weyl" => Ok(verify::weyl_cocycle()),
        "mp" => Ok(CocycleHandle::linear_combination(
            "mp",
            vec![(scalar::rat(-1, 2), CocycleHandle::Alpha)],
        )),
        _ => Err(CliError::Usage(format!(
            "unknown cocycle {name:?}; expected psi, alpha, beta, gamma, mp or weyl"
        ))),
    }
}

#[derive(Serialize)]
struct ValueReport<'a> {
    command: &'a str,
    result: String,
}

fn coinv_text(r: &CoinvReport) -> String {
    let gaps: Vec<String> = r.gaps.iter().map(|g| g.to_string()).collect();
    let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
    format!(
        "gaps: {{{}}}\nrank: {}\nN = {}, M = {}, W = {}\ngenerators: {}\ndims: {}\nstabilized: {}\n",
        gaps.join(","),
        r.rank,
        r.n,
        r.m,
        r.w,
        r.generators,
        dims.join(" "),
        r.stabilized
    )
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let json = cfg.format == Format::Json;
    let value = |command: &str, result: String| {
        let stdout = if json {
            to_json(&ValueReport { command, result }) + "\n"
        } else {
            result + "\n"
        };
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    };
    match &cfg.command {
        CommandConfig::Bracket { a, b } => {
            let x = parse_element(a)?.bracket(&parse_element(b)?);
            Ok(value("bracket", print_element(&x)?))
        }
        CommandConfig::Cocycle { name, a, b } => {
            let h = cocycle_handle(name)?;
            let (x, y) = (parse_element(a)?, parse_element(b)?);
            if !x.central_part().is_zero() || !y.central_part().is_zero() {
                return Err(CliError::Usage(
                    "cocycles are evaluated on elements without K".into(),
                ));
            }
            Ok(value("cocycle", scalar::format(&h.eval(&x, &y))))
        }
        CommandConfig::FockApply {
            expr,
            vector,
            channel,
            exp,
            group,
        } => {
            let a = parse_element(expr)?;
            let v: FockVector = vector.parse()?;
            let w = if *exp {
                fock::exp_apply(&a, &v, *channel, group.as_ref())?
            } else {
                fock::apply_quadratic(&a, &v, *channel)?
            };
            if json {
                Ok(Outcome {
                    stdout: to_json(&w.to_json()) + "\n",
                    code: EXIT_OK,
                })
            } else {
                Ok(value("fock-apply", w.to_string()))
            }
        }
        CommandConfig::Coinv(c) => {
            let point = FPoint::new(c.gaps.iter().copied())?;
            let voa = VoaConfig::heisenberg(c.rank)?;
            let report = coinv::stabilize(c.kind, &voa, &point, c.n, &c.schedule, c.limits)?;
            let stdout = if json {
                to_json(&report) + "\n"
            } else {
                coinv_text(&report)
            };
            let code = if report.stabilized {
                EXIT_OK
            } else {
                EXIT_UNSTABILIZED
            };
            Ok(Outcome { stdout, code })
        }
        CommandConfig::VerifyAll { probe_bound } => {
            let verdicts = verify::verify_all(*probe_bound);
            let pass = verdicts.iter().all(|v| v.pass);
            let stdout = if json {
                to_json(&verdicts) + "\n"
            } else {
                let mut s = String::new();
                for v in &verdicts {
                    let tag = if v.pass { "PASS" } else { "FAIL" };
                    let _ = writeln!(s, "{tag} {} {}", v.check, v.parameters);
                    for w in &v.witnesses {
                        let _ = writeln!(s, "  {w}");
                    }
                }
                let passed = verdicts.iter().filter(|v| v.pass).count();
                let _ = writeln!(s, "{passed}/{} checks passed", verdicts.len());
                s
            };
            Ok(Outcome {
                stdout,
                code: if pass { EXIT_OK } else { EXIT_FAILED },
            })
        }
        CommandConfig::CentralScalars { charges } => {
            let rows: Vec<_> = charges.iter().map(verify::central_scalars).collect();
            let ok = rows.iter().all(|r| r.consistent);
            let stdout = if json {
                to_json(&rows) + "\n"
            } else {
                let mut s = String::new();
                if let Some(r) = rows.first() {
                    let _ = writeln!(s, "mp cocycle: {}", r.mp_cocycle);
                    let _ = writeln!(s, "Weyl cocycle: {}", r.weyl_cocycle);
                    let _ = writeln!(s, "mp cocycle on (T(2), T(-2)): {}", r.mp_on_tau_2);
                    let _ = writeln!(s, "Lambda fiber scalar: {}", r.lambda_fiber_scalar);
                    let _ = writeln!(s, "Theta fiber scalar: {}", r.theta_fiber_scalar);
                }
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "c = {}: A-side {}, X-side {}",
                        r.central_charge, r.a_side_multiple, r.x_side_multiple
                    );
                }
                s
            };
            Ok(Outcome {
                stdout,
                code: if ok { EXIT_OK } else { EXIT_FAILED },
            })
        }
    }
}

/// Parses `args` (including the program name), runs, and returns `(stdout, stderr, code)`.
pub fn execute<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                (text, String::new(), code)
            } else {
                (String::new(), text, code)
            };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(o) => (o.stdout, String::new(), o.code),
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_USAGE),
    }
}
