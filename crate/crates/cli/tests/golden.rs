use std::process::{Command, Output};

use serde_json::{json, Value};

const F: [&str; 4] = ["--top", "1/9,4/9,5/9", "--bottom", "1/3,1"];
const H: [&str; 4] = ["--top", "1/5,1/5,1/5,1/5", "--bottom", "1/3,59044/5"];

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypergeo"));
    cmd.args(args)
        .env_remove("HYPERGEO_PREC")
        .env_remove("HYPERGEO_PRIME_BOUND");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    json_with_env(args, &[])
}

fn json_with_env(args: &[&str], env: &[(&str, &str)]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all, env);
    assert!(
        out.status.success(),
        "{all:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn text_of(args: &[&str]) -> String {
    let out = run(args, &[]);
    assert!(out.status.success());
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn with<'a>(head: &[&'a str], params: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(params).copied().collect()
}

#[test]
fn classify_f() {
    let v = json_of(&with(&["classify"], &F));
    assert_eq!(v["globally_bounded"], json!(true));
    assert_eq!(v["algebraic"]["algebraic"], json!(false));
    assert_eq!(v["algebraic"]["kind"], json!("exact"));
}

#[test]
fn section_of_f_at_19() {
    let v = json_of(&with(&["modp", "section", "--p", "19", "--r", "8"], &F));
    assert_eq!(
        v["sections"][0],
        json!({
            "r": 8, "zero": false, "constant": 5, "exponent": 0,
            "tops": ["4/9", "5/9", "10/9"], "bottoms": ["1", "4/3"]
        })
    );
    assert_eq!(
        text_of(&with(&["modp", "section", "--p", "19", "--r", "8"], &F)),
        "5 * F((4/9,5/9,10/9);(1,4/3))"
    );
}

#[test]
fn valuation_renders_position() {
    assert_eq!(
        text_of(&with(&["padic", "valuation", "--p", "3", "--position"], &H)),
        "(-4, 2)"
    );
    let v = json_of(&with(&["padic", "valuation", "--p", "5"], &H));
    assert_eq!(v["value"], json!("-Infinity"));
    assert_eq!(v["position"], Value::Null);
}

#[test]
fn evaluation_renders_digits() {
    let s = text_of(&with(&["padic", "eval", "--p", "3", "--at", "1/3"], &H));
    assert!(s.starts_with("3^-5 + 2*3^-1 + 1 + 2*3 + "), "{s}");
    assert!(s.ends_with("O(3^13)"), "{s}");
    let v = json_of(&with(&["padic", "eval", "--p", "5", "--at", "5"], &F));
    assert_eq!(v["abs_precision"], json!(20));
    let digits: Vec<u64> = serde_json::from_value(v["digits"].clone()).unwrap();
    assert_eq!(digits[..5], [1, 0, 3, 0, 1]);
}

#[test]
fn newton_polygon_and_plot() {
    let v = json_of(&with(&["padic", "newton", "--p", "3", "--nu", "7/4"], &H));
    assert_eq!(
        v,
        json!({"vertices": [[0, "0"], [2, "-4"], [3, "-4"], [4, "-3"], [7, "2"]], "ray": "7/4"})
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.svg");
    let p = path.to_str().unwrap();
    text_of(&with(
        &["padic", "newton", "--p", "3", "--nu", "7/4", "--plot", p],
        &H,
    ));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("stroke-dasharray"));
}

#[test]
fn dwork_relation_json() {
    let v = json_of(&with(&["modp", "dwork", "--p", "19"], &F));
    assert_eq!(
        v,
        json!([
            {"tops": ["1/9", "4/9", "5/9"], "bottoms": ["1/3", "1"], "poly": [1, 14, 8]},
            {"tops": ["4/9", "5/9", "10/9"], "bottoms": ["1", "4/3"],
             "poly": [0, 0, 0, 0, 0, 0, 0, 15, 5]}
        ])
    );
}

#[test]
fn congruent_pair() {
    let v = json_of(&[
        "modp",
        "equal",
        "--p",
        "13",
        "--top",
        "1/12,1/4",
        "--bottom",
        "1/2",
        "--other-top",
        "1/12,1/6",
        "--other-bottom",
        "1/3",
    ]);
    assert_eq!(v["equal"], json!(true));
    assert_eq!(v["differing_index"], Value::Null);
}

#[test]
fn good_primes_of_g() {
    let v = json_of(&["primes", "--top", "1/2,5/6,1", "--bottom", "5/3,2"]);
    assert_eq!(
        v,
        json!({"modulus": 1, "classes": [0], "includes": [], "excludes": [2]})
    );
}

#[test]
fn flags_beat_environment() {
    let args = with(&["coranks"], &F);
    let small = json_with_env(&args, &[("HYPERGEO_PRIME_BOUND", "12")]);
    let scanned = |v: &Value| {
        v["coranks"]["2"]["excludes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(scanned(&small), [2, 3]);
    let s = json_with_env(
        &with(
            &["series", "--over", "qp", "--p", "3", "--max-terms", "2"],
            &["--top", "1/2"],
        ),
        &[("HYPERGEO_PREC", "3")],
    );
    assert_eq!(s["coefficients"][0], json!("1 + O(3^3)"));
    let s = json_with_env(
        &with(
            &[
                "series",
                "--over",
                "qp",
                "--p",
                "3",
                "--max-terms",
                "2",
                "--prec",
                "6",
            ],
            &["--top", "1/2"],
        ),
        &[("HYPERGEO_PREC", "3")],
    );
    assert_eq!(s["coefficients"][0], json!("1 + O(3^6)"));
}

#[test]
fn parameters_round_trip() {
    for args in [
        with(&["props"], &F),
        with(&["props"], &H),
        vec!["props", "--top", "-1", "--bottom", "-2"],
    ] {
        let v = json_of(&args);
        let tops = v["params"]["tops"].as_array().unwrap();
        let bottoms = v["params"]["bottoms"].as_array().unwrap();
        let join = |a: &Vec<Value>| {
            a.iter()
                .map(|x| x.as_str().unwrap().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let again = json_of(&["props", "--top", &join(tops), "--bottom", &join(bottoms)]);
        assert_eq!(again["key"], v["key"]);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["props", "--top", "-2", "--bottom", "-1"], &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["props", "--top", "1/0"], &[]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"], &[]).status.code(), Some(2));
    assert_eq!(
        run(&with(&["modp", "section", "--p", "9"], &F), &[])
            .status
            .code(),
        Some(2)
    );
    // bad reduction and an untruncated Newton polygon are mathematical failures
    assert_eq!(
        run(&with(&["modp", "pcurvature", "--p", "3"], &F), &[])
            .status
            .code(),
        Some(1)
    );
    let out = run(&with(&["padic", "newton", "--p", "3"], &H), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("less than 2"));
}
