mod common;

use std::io::Cursor;
use std::process::Command;

use common::{fixture, labels, oracle, BROKER_QUERIES};
use isa_core::cli::dispatch;
use isa_core::fixtures::broker;

fn isa(args: &[&str]) -> (i32, String, String) {
    isa_with_input(args, "")
}

fn isa_with_input(args: &[&str], input: &str) -> (i32, String, String) {
    let mut argv = vec!["isa".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dispatch(argv, &mut Cursor::new(input.to_string()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn equiv_of_broker_with_itself() {
    let (code, out, _) = isa(&["equiv", &f("broker.isa"), &f("broker.isa")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("equivalent\n"));
    let (code, out, _) = isa(&["equiv", &f("broker.isa"), &f("broker_preferred.isa"), "--weak"]);
    assert_eq!(code, 1);
    assert!(out.contains("first divergence: state X0, clause 3"));
}

#[test]
fn step_with_first_yes_script() {
    let (code, out, _) = isa(&["step", &f("broker.isa"), "--state", "X0", "--script", &f("yes0.env")]);
    assert_eq!(code, 0);
    assert!(out.contains("updates: {owner () := client0}"));
    assert!(out.contains("interp owner () = client0"));
    let (code, out, _) = isa(&[
        "step",
        &f("broker.isa"),
        "--state",
        "X0",
        "--script",
        &f("no1_stall.env"),
        "--format",
        "machine",
    ]);
    assert_eq!(code, 2);
    assert!(out.contains("outcome=hang\n"));
    assert!(out.contains("pending={(offer0), (timeout)}\n"));
}

#[test]
fn enumerate_count_matches_oracle() {
    let (code, out, _) = isa(&[
        "enumerate",
        &f("broker.isa"),
        "--state",
        "X0",
        "--max-phases",
        "2",
        "--pool",
        "yes,no,t",
        "--format",
        "machine",
    ]);
    assert_eq!(code, 0);
    let b = broker();
    let x = b.state("X0").unwrap();
    let expected = oracle(&b, x, &labels(&BROKER_QUERIES), &["yes", "no", "t"], 2, 8);
    assert!(out.contains(&format!("count={}\n", expected.len())), "{out}");
    for h in &expected {
        assert!(out.contains(&format!("={h}\n")), "missing {h}");
    }
}

#[test]
fn check_and_validate() {
    let (code, out, _) = isa(&["validate", &f("broker.isa")]);
    assert_eq!((code, out.starts_with("ok: algorithm broker")), (0, true));
    let (code, out, _) = isa(&[
        "check",
        &f("broker.isa"),
        "--iso",
        &f("broker_swap.iso"),
        "--pool",
        "yes,no,client0,client1,t",
        "--format",
        "machine",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("passed=true"));
}

#[test]
fn run_and_repl() {
    let (code, out, _) = isa(&["run", &f("broker.isa"), "--steps", "2", "--script", &f("tie.env")]);
    assert_eq!(code, 0);
    assert!(out.contains("== step 1") && out.ends_with("steps: 2\n"));
    let (code, out, _) = isa_with_input(
        &["repl", &f("broker.isa"), "--state", "X1"],
        "answer (offer1) = yes\ngo\n",
    );
    assert_eq!(code, 0);
    assert!(out.contains("phase 0: pending {(offer0), (offer1), (timeout)}"));
    assert!(out.contains("updates: {owner () := client0}"));
    let (code, _, _) = isa_with_input(&["repl", &f("broker.isa"), "--state", "X0"], "stall\n");
    assert_eq!(code, 2);
}

#[test]
fn errors_cite_spans_and_exit_4() {
    let dir = std::env::temp_dir().join(format!("isa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.isa");
    std::fs::write(&bad, "algorithm x\nvocabulary {\n  static f/0\n}\nlabels { a }\nstate S {\n  base true false undef\n  interp g () = true\n}\ninitial { S }\nbounds max_query_len 1 max_issued 1\n").unwrap();
    let (code, _, err) = isa(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("bad.isa:8:"), "{err}");

    let script = dir.join("bad.env");
    std::fs::write(&script, "phase { (offer0) -> yes }\nphase {\n").unwrap();
    let (code, _, err) = isa(&["step", &f("broker.isa"), "--state", "X0", "--script", script.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("bad.env:3:"), "{err}");

    let script = dir.join("wrong.env");
    std::fs::write(&script, "phase { (choose) -> yes }\n").unwrap();
    let (code, _, err) = isa(&["step", &f("broker.isa"), "--state", "X0", "--script", script.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("(choose)"), "{err}");

    let (code, _, err) = isa(&["step", &f("broker.isa"), "--state", "X0"]);
    assert_eq!(code, 4);
    assert!(err.contains("--script"));
    let (code, _, _) = isa(&["enumerate", &f("broker.isa"), "--pool", "nonsense"]);
    assert_eq!(code, 4);
    let (code, out, _) = isa(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("equiv"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_isa");
    let cases: Vec<Vec<String>> = vec![
        vec!["step".into(), f("broker.isa"), "--state".into(), "X0".into(), "--script".into(), f("tie.env")],
        vec!["enumerate".into(), f("broker.isa"), "--max-phases".into(), "2".into(), "--jobs".into(), "4".into()],
        vec!["equiv".into(), f("broker.isa"), f("broker_preferred.isa"), "--format".into(), "machine".into()],
        vec!["check".into(), f("broker.isa"), "--iso".into(), f("broker_swap.iso"), "--pool".into(), "yes,no,t".into()],
    ];
    for args in cases {
        let run = || Command::new(bin).args(&args).output().unwrap();
        let (a, b) = (run(), run());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
        assert!(!a.stdout.is_empty());
    }
    let out = Command::new(bin)
        .args(["step", &f("broker.isa"), "--state", "X0", "--script", &f("yes0.env")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
