use std::process::{Command, Output};

use serde_json::Value;

fn valtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn example_tree_in_ascii() {
    let out = valtree(&[
        "tree",
        "--poly",
        "x^2+y^2+x*y+x+y+1",
        "--p",
        "2",
        "--depth",
        "2",
        "--format",
        "ascii",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        lines,
        [
            "root: *",
            "  (0,0) mod 2^1: 0",
            "  (0,1) mod 2^1: 0",
            "  (1,0) mod 2^1: 0",
            "  (1,1) mod 2^1: *",
            "    (1,1) mod 2^2: 1",
            "    (1,3) mod 2^2: 1",
            "    (3,1) mod 2^2: 1",
            "    (3,3) mod 2^2: 1",
        ]
    );
    assert!(out.stderr.is_empty());
}

#[test]
fn univariate_defaults() {
    let out = valtree(&["tree", "--poly", "n^2+5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "padic-valtree/1");
    assert_eq!(v["depth"], 16);
    assert_eq!(v["mode"], "constancy");
    assert_eq!(v["root"]["children"][1]["label"]["terminal"], 1);
}

#[test]
fn tree_output_is_byte_identical_across_runs() {
    for format in ["ascii", "dot", "json"] {
        let args = ["tree", "--poly", "x*y+x+y+1", "--depth", "6", "--format", format];
        assert_eq!(valtree(&args).stdout, valtree(&args).stdout, "{format}");
    }
    let args = ["tree", "--poly", "x^2*y+5", "--sample-check", "20", "--seed", "7"];
    let out = valtree(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, valtree(&args).stdout);
    assert!(stdout(&out).contains(", 0 violations"));
}

#[test]
fn dot_output() {
    let out = valtree(&["tree", "--poly", "x^2+y^2", "--depth", "3", "--format", "dot"]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph valtree {"));
    assert!(text.contains("n1_1_1 [label=\"*\"];"));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn passing_theorem_exits_zero() {
    let out = valtree(&["verify", "--theorem", "6.1", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("theorem 6.1 at depth 6: PASS"));

    let out = valtree(&["verify", "--theorem", "2.4", "--depth", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "padic-theoremreport/1");
    assert_eq!(v["theorem_id"], "2.4");
    assert_eq!(v["passed"], true);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn failing_theorem_exits_one() {
    let out = valtree(&[
        "verify",
        "--theorem",
        "4.1",
        "--depth",
        "6",
        "--params",
        "0,1,1,1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["params"]["n"], "0");
    assert!(!v["failures"].as_array().unwrap().is_empty());

    let out = valtree(&["verify", "--theorem", "4.1", "--depth", "6", "--params", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn general_quadratic_range() {
    let out = valtree(&[
        "verify",
        "--theorem",
        "5.1",
        "--depth",
        "4",
        "--range",
        "-1..1",
        "--format",
        "json",
        "--threads",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["instances_checked"], 729);
    assert_eq!(v["claim_failures"], 0);
    assert!(v["table_failures"].as_u64().unwrap() > 0);
    let a = valtree(&[
        "verify",
        "--theorem",
        "5.1",
        "--depth",
        "4",
        "--range",
        "1",
        "--format",
        "json",
        "--threads",
        "1",
    ]);
    assert_eq!(a.stdout, out.stdout);
}

#[test]
fn classify_prints_four_children() {
    let out = valtree(&[
        "classify", "--c", "1", "--d", "0", "--e", "-2", "--i0", "1", "--j0", "0", "--alpha", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("child (0,1): * (rows 10; table says k)"));
    assert!(text.contains("child (1,1): * (rows 19; agrees)"));
}

#[test]
fn roots_certifies_the_exact_root() {
    let out = valtree(&[
        "roots", "--poly", "x^2*y+5", "--node", "1,1", "--p", "2", "--prec", "64",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: certified with x+1 = 0"));
    assert!(text.contains("root = (-1,-5) mod 2^64"));

    let out = valtree(&[
        "roots",
        "--poly",
        "x^2*y+5",
        "--node",
        "1,1",
        "--constraint",
        "y+5",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["schema"], "padic-hensel/1");
    assert_eq!(v["verdict"], "certified");
    let m = 1u128 << 64;
    let neg5 = (m - 5).to_string();
    assert_eq!(v["certificate"]["approximation"].to_string(), format!("[1,{neg5}]"));
    assert_eq!(v["certificate"]["quadratic_progress"], true);
}

#[test]
fn closed_form_and_stirling() {
    let out = valtree(&["closed-form", "--poly", "x^2+y^2+x*y+x+y+1", "--depth", "2"]);
    assert_eq!(stdout(&out).lines().next(), Some("Bounded(2)"));
    let out = valtree(&["closed-form", "--poly", "x^2+y^2", "--depth", "3"]);
    assert!(stdout(&out).starts_with("Unresolved at depth 3"));

    let out = valtree(&[
        "stirling", "--k", "4", "--levels", "6", "--nmax", "5000", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["stable_count"], 0);
    let out = valtree(&["stirling", "--k", "5", "--levels", "12", "--nmax", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn valuation_utilities() {
    let run = |args: &[&str]| stdout(&valtree(args)).trim().to_string();
    assert_eq!(run(&["val", "--n", "-96", "--p", "2"]), "5");
    assert_eq!(run(&["val", "--n", "0"]), "∞");
    assert_eq!(run(&["val", "--n", "1000000000000000000000000", "--p", "5"]), "24");
    assert_eq!(run(&["val-factorial", "--n", "100", "--p", "5"]), "24");
    assert_eq!(run(&["val-binomial", "--n", "1023"]), "10");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["tree", "--poly", "x^2+", "--depth", "2"][..],
        &["tree", "--poly", "x^2", "--bogus"],
        &["tree", "--poly", "z^2"],
        &["tree", "--poly", "x^2", "--p", "4"],
        &["verify", "--theorem", "9.9"],
        &["verify", "--theorem", "2.2", "--range", "2"],
        &[
            "classify", "--c", "1", "--d", "0", "--e", "0", "--i0", "2", "--j0", "0", "--alpha", "1",
        ],
        &["roots", "--poly", "x^2*y+5", "--node", "0,0"],
        &["val-factorial", "--n", "-3"],
        &[],
    ] {
        let out = valtree(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn resource_errors_exit_three() {
    let out = valtree(&["tree", "--poly", "x^2+y^2", "--depth", "20", "--node-budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let out = valtree(&["tree", "--poly", "x^2+y^2", "--depth", "25"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_for_every_subcommand() {
    for sub in [
        "tree",
        "verify",
        "classify",
        "roots",
        "closed-form",
        "stirling",
        "val",
        "val-factorial",
        "val-binomial",
    ] {
        let out = valtree(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(stdout(&out).contains("Usage: valtree"), "{sub}");
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("valtree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tree.json");
    let out = valtree(&[
        "tree",
        "--poly",
        "x^2+7",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["polynomial"], "x^2+7");
    std::fs::remove_dir_all(dir).unwrap();
}
