use dichotomy_cli::{run, Outcome, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use serde_json::Value;
use std::process::Command;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("dichotomy").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let o = cli(args);
    let v: Value = serde_json::from_str(&o.output).unwrap_or_else(|e| panic!("{e}: {}", o.output));
    assert_eq!(v["schema"], "1");
    (o.code, v)
}

#[test]
fn classify_interval_under_diagonal() {
    let (code, v) = json(&["classify", "--vars", "x,y", "--formula", "0 <= y & y <= x"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "defines_ordering");
    assert_eq!(v["verification"]["qe_check"], true);
    assert_eq!(v["verification"]["box_check"], true);
}

#[test]
fn rank_and_inradius_examples() {
    assert_eq!(cli(&["rank", "--vars", "x,y", "--formula", "y = 0", "--format", "text"]).output, "1\n");
    let (_, v) = json(&["rank", "--vars", "x,y", "--formula", "y = 0"]);
    assert_eq!(v["rank"], 1);
    let o = cli(&["inradius", "--dims", "2", "--halfspaces", "x>=0;y>=0", "--format", "text"]);
    assert_eq!((o.code, o.output.as_str()), (EXIT_OK, "infinite\n"));
    let (_, v) = json(&["inradius", "--dims", "2", "--halfspaces", "0 <= x; x <= 4; 0 <= y; y <= 4"]);
    assert_eq!(v["inradius"], "finite");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["classify", "--vars", "x", "--formula", "x <="]).code, EXIT_USAGE);
    assert_eq!(cli(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(cli(&["classify", "--formula", "x = 0"]).code, EXIT_USAGE);
    assert_eq!(cli(&["rank", "--vars", "x", "--formula", "x = y"]).code, EXIT_USAGE);
    let wrong = ["verify", "--vars", "x,y", "-f", "0 <= y & y <= x", "--verdict", "defines_ordering", "--witness", "A(0, x)"];
    assert_eq!(cli(&wrong).code, EXIT_VERIFY);
    let right = ["verify", "--vars", "x,y", "-f", "0 <= y & y <= x", "--verdict", "defines_ordering", "--witness", "A(x, 0)"];
    assert_eq!(cli(&right).code, EXIT_OK);
}

#[test]
fn errors_are_structured() {
    let (code, v) = json(&["qe", "--formula", "E x. x <"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["error"]["kind"], "parse");
    let o = cli(&["qe", "--formula", "E x. x <", "--format", "text"]);
    assert!(o.output.starts_with("error (parse)"), "{}", o.output);
}

#[test]
fn formula_from_file() {
    let dir = std::env::temp_dir().join(format!("dichotomy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("strip.txt");
    std::fs::write(&path, "x <= y & y <= x + 2\n").unwrap();
    let (code, v) = json(&["classify", "--vars", "x,y", "--file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "group_definable");
    let (code, v) = json(&["classify", "--vars", "x,y", "--file", dir.join("missing").to_str().unwrap()]);
    assert_eq!((code, v["error"]["kind"].as_str()), (EXIT_USAGE, Some("io")));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn eval_qe_cells_decompose() {
    let (_, v) = json(&["eval", "--vars", "x", "-f", "E z. x = 2*z", "--box", "3"]);
    assert_eq!(v["members"], serde_json::json!([["-2"], ["0"], ["2"]]));
    let (_, v) = json(&["eval", "--vars", "x,y", "-f", "x < y", "--point", "-4,3"]);
    assert_eq!(v["value"], "true");
    let o = cli(&["qe", "-f", "E z. x = 2*z", "--format", "text"]);
    assert_eq!(o.output, "x = 0 mod 2\n");
    let (code, v) = json(&["cells", "--vars", "x,y", "-f", "x <= y & y <= 2*x"]);
    assert_eq!(code, EXIT_OK);
    assert!(!v["decomposition"]["terms"].as_array().unwrap().is_empty());
    let (_, v) = json(&["decompose", "--vars", "x,y", "-f", "y = 2*x | x = 1 mod 3"]);
    assert_eq!(v["rank"], 2);
    let (code, v) = json(&["decompose", "--vars", "x,y", "-f", "x <= y"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (EXIT_USAGE, Some("order_atom")));
}

#[test]
fn parse_prints_canonical_text() {
    let (_, v) = json(&["parse", "-f", "E y. (x <= y & y <= x)"]);
    assert_eq!(v["free_vars"], serde_json::json!(["x"]));
    assert_eq!(v["quantifier_depth"], 1);
}

#[test]
fn selftest_subset_is_reproducible() {
    let args = ["selftest", "--suite", "arith.snf", "--suite", "groupsets.phi", "--scale", "0.1", "--seed", "11"];
    let a = cli(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.output);
    assert_eq!(a, cli(&args));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a, cli(&seq));
    assert_eq!(cli(&["selftest", "--suite", "no.such"]).code, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dichotomy");
    let ok = Command::new(bin).args(["rank", "--vars", "x,y", "-f", "y = 0", "--format", "text"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "1\n");
    let bad = Command::new(bin).args(["classify", "--vars", "x", "-f", "("]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty() && !bad.stderr.is_empty());
}
