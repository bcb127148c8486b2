use mpalg_cli::expr::{parse_element, print_element};
use mpalg_cli::{execute, EXIT_FAILED, EXIT_OK, EXIT_UNSTABILIZED, EXIT_USAGE};

const CORPUS: &str = include_str!("data/corpus.txt");

fn run(args: &[&str]) -> (String, String, i32) {
    execute(std::iter::once("mpalg").chain(args.iter().copied()))
}

#[test]
fn corpus_round_trips() {
    let lines: Vec<&str> = CORPUS.lines().filter(|l| !l.trim().is_empty()).collect();
    assert!(lines.len() >= 50);
    for s in lines {
        let x = parse_element(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(print_element(&x).unwrap(), s);
    }
}

#[test]
fn bracket_command() {
    let (out, _, code) = run(&["bracket", ":b(1)b(-2):", "b(-1)"]);
    assert_eq!((out.as_str(), code), ("b(-2)\n", EXIT_OK));
    let (out, _, _) = run(&["bracket", "b(-1)", ":b(1)b(1):", "--format", "json"]);
    assert_eq!(out, "{\"command\":\"bracket\",\"result\":\"-2*b(1)\"}\n");
}

#[test]
fn parse_errors_are_usage_errors() {
    let (_, err, code) = run(&["bracket", "b(0)", "K"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("central"), "{err}");
    let (_, err, code) = run(&["bracket", "b(1) * K", "K"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("position"));
    let (_, _, code) = run(&["coinv", "--N", "6", "--M", "4", "--W", "4"]);
    assert_eq!(code, EXIT_USAGE);
    let (_, _, code) = run(&["no-such-command"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn cocycle_command() {
    assert_eq!(run(&["cocycle", "gamma", ":b(1)b(1):", "b(-2)"]).0, "2\n");
    assert_eq!(run(&["cocycle", "mp", "T(2)", "T(-2)"]).0, "1/2\n");
    assert_eq!(run(&["cocycle", "psi", "b(1)", "b(-1)"]).0, "1\n");
    assert_eq!(run(&["cocycle", "psi", "K", "b(1)"]).2, EXIT_USAGE);
    assert_eq!(run(&["cocycle", "delta", "b(1)", "b(1)"]).2, EXIT_USAGE);
}

#[test]
fn fock_apply_command() {
    assert_eq!(run(&["fock-apply", "b(2)", "[2,2]"]).0, "4*[2]\n");
    assert_eq!(run(&["fock-apply", "T(0)", "[2,1]"]).0, "3*[2,1]\n");
    assert_eq!(
        run(&["fock-apply", ":b(1)b(1):", "[1,1]", "--exp"]).0,
        "2*[] + [1,1]\n"
    );
    assert_eq!(
        run(&[
            "fock-apply",
            ":b(-2)b(2):",
            "[2,2,1]",
            "--exp",
            "--group",
            "3"
        ])
        .0,
        "81*[2,2,1]\n"
    );
    assert_eq!(
        run(&["fock-apply", "b(-1)", "([]|[])", "--channel", "2"]).0,
        "([]|[1])\n"
    );
    assert_eq!(
        run(&["fock-apply", "b(-1)", "[]", "--channel", "2"]).2,
        EXIT_USAGE
    );
    let (out, _, _) = run(&["fock-apply", "b(1)", "[1]", "--format", "json"]);
    assert_eq!(
        out,
        "{\"rank\":1,\"terms\":[{\"coeff\":\"1\",\"label\":\"[]\"}]}\n"
    );
}

#[test]
fn coinv_command() {
    let (out, _, code) = run(&[
        "coinv", "--gaps", "", "--rank", "1", "--N", "6", "--M", "12", "--W", "12", "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "{\"gaps\":[],\"rank\":1,\"N\":6,\"M\":12,\"W\":12,\"dims\":[1,0,0,0,0,0,0],\"stabilized\":true,\"generators\":288}\n"
    );
    let (out, _, code) = run(&[
        "coinv",
        "--gaps",
        "1",
        "--N",
        "3",
        "--schedule",
        "4,5",
        "--mode",
        "x",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("stabilized: true"));
    let (_, _, code) = run(&[
        "coinv",
        "--N",
        "4",
        "--schedule",
        "4,5",
        "--max-relations",
        "1",
    ]);
    assert_eq!(code, EXIT_UNSTABILIZED);
    let (_, _, code) = run(&["coinv", "--N", "3", "--M", "3", "--W", "3"]);
    assert_eq!(code, EXIT_UNSTABILIZED);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("mpalg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(&path, "format = json\ngaps = 1\nN = 2\nM = 4\nW = 4\n").unwrap();
    let p = path.to_str().unwrap();
    let (out, _, code) = run(&["coinv", "--config", p]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.starts_with("{\"gaps\":[1],\"rank\":1,\"N\":2,\"M\":4,\"W\":4,\"dims\":[1,1,1]"),
        "{out}"
    );
    let (out, _, _) = run(&["coinv", "--config", p, "--format", "text", "--N", "1"]);
    assert!(out.starts_with("gaps: {1}"));
    assert!(out.contains("dims: 1 1\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn central_scalars_command() {
    let (out, _, code) = run(&["central-scalars", "--c", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("c = 2: A-side 1, X-side -2"));
    assert!(out.contains("mp cocycle on (T(2), T(-2)): 1/2"));
}

#[test]
fn verify_all_reports_the_pullback_failure() {
    let (out, _, code) = run(&["verify-all", "--probe-bound", "2"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("FAIL pullback_sigma"));
    assert!(out.contains("PASS jacobi"));
    assert_eq!(out.matches("FAIL").count(), 1);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["verify-all", "--probe-bound", "2", "--format", "json"],
        &[
            "coinv", "--gaps", "1,3", "--rank", "2", "--N", "4", "--M", "6", "--W", "6",
            "--format", "json",
        ],
        &["bracket", "T(3)", "S(-3)", "--format", "json"],
        &["central-scalars", "--format", "json"],
    ];
    for args in cases {
        let first = run(args);
        assert_eq!(run(args), first);
    }
}
