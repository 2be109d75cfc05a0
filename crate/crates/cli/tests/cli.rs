use std::process::{Command, Output};

use serde_json::Value;

fn lgp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const GRIFFITHS: [&str; 8] = ["--p1", "1/2", "--p2", "1/3", "--p3", "1/5", "--lambda", "2"];

#[test]
fn eval_krawtchouk() {
    let o = lgp(&[
        "eval",
        "--family",
        "krawtchouk",
        "--i",
        "1",
        "--x",
        "1",
        "--p",
        "1/2",
        "--N",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn eval_griffiths_routes_agree() {
    let mut outs = Vec::new();
    for method in ["direct", "tratnik-xy", "tratnik-yx"] {
        let mut args = vec![
            "eval",
            "--family",
            "griffiths",
            "--i",
            "1",
            "--j",
            "1",
            "--x",
            "1",
            "--y",
            "2",
            "--N",
            "4",
        ];
        args.extend(GRIFFITHS);
        args.extend(["--method", method]);
        let o = lgp(&args);
        assert_eq!(o.status.code(), Some(0));
        outs.push(stdout(&o));
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn eval_json() {
    let o = lgp(&[
        "eval", "--family", "tratnik", "--i", "1", "--x", "0", "--p1", "1/3", "--p2", "1/5", "--N",
        "2", "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "1");
}

#[test]
fn biorth_gram_is_diagonal_with_closed_form() {
    let mut args = vec!["gram", "--kind", "biorth", "--N", "3", "--format", "json"];
    args.extend(GRIFFITHS);
    let o = lgp(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["diagonal"], true);
    // 3! / ((1/2)(2/3)(4/5))^3
    assert_eq!(v["matrix"][0][0], "10125/32");
    assert_eq!(v["matrix"].as_array().unwrap().len(), 10);
}

#[test]
fn omega_weight_gram_fails_the_check() {
    let mut args = vec!["gram", "--kind", "biorth", "--N", "2", "--weight", "omega"];
    args.extend(GRIFFITHS);
    let o = lgp(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("# diagonal: false"));
}

#[test]
fn krawtchouk_and_tratnik_grams() {
    let o = lgp(&["gram", "--kind", "krawtchouk", "--p", "2/7", "--N", "4"]);
    assert_eq!(o.status.code(), Some(0));
    for w in ["default", "solved"] {
        let o = lgp(&[
            "gram",
            "--kind",
            "tratnik-diagnostic",
            "--weight",
            w,
            "--p1",
            "1/3",
            "--p2",
            "1/5",
            "--N",
            "3",
        ]);
        assert_eq!(o.status.code(), Some(0), "{w}");
    }
}

#[test]
fn check_suites_pass() {
    let o = lgp(&["check", "--suite", "griffiths", "--N", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    for suite in ["krawtchouk-relations", "tratnik", "duality", "operators"] {
        let o = lgp(&[
            "check",
            "--suite",
            suite,
            "--N",
            "3",
            "--seed",
            "11",
            "--samples",
            "2",
        ]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        assert!(stdout(&o).contains("passed"));
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let runs = [
        vec![
            "check", "--suite", "duality", "--N", "4", "--seed", "99", "--format", "json",
        ],
        vec![
            "table",
            "--family",
            "griffiths",
            "--p1",
            "-2/3",
            "--p2",
            "7/4",
            "--p3",
            "3/11",
            "--lambda",
            "-5/2",
            "--N",
            "3",
        ],
        vec![
            "operators",
            "--dump",
            "--kind",
            "griffiths-diff-i",
            "--p1",
            "1/2",
            "--p2",
            "1/3",
            "--p3",
            "1/5",
            "--lambda",
            "2",
            "--N",
            "3",
        ],
        vec!["oscillator", "--verify", "--varphi", "0.3", "--N", "3"],
    ];
    for args in runs {
        let (a, b) = (lgp(&args), lgp(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn table_csv_schema() {
    let o = lgp(&[
        "table", "--family", "tratnik", "--p1", "1/3", "--p2", "1/5", "--N", "2",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,x,y,value"));
    assert_eq!(lines.count(), 36);
    let o = lgp(&["table", "--family", "krawtchouk", "--p", "1/2", "--N", "2"]);
    assert!(stdout(&o).starts_with("i,x,value\n0,0,1\n"));
}

#[test]
fn operator_dump_format() {
    let o = lgp(&[
        "operators",
        "--dump",
        "--kind",
        "griffiths-rec-x",
        "--p1",
        "1/2",
        "--p2",
        "1/3",
        "--p3",
        "1/5",
        "--lambda",
        "2",
        "--N",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "griffiths-rec-x");
    assert_eq!(v["N"], 2);
    assert_eq!(v["params"]["p3"], "1/5");
    let first = &v["entries"][0];
    assert!(first[0].is_array() && first[1].is_array() && first[2].is_string());
}

#[test]
fn oscillator_report() {
    let o = lgp(&["oscillator", "--verify", "--N", "4", "--varphi", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_mismatch"].as_f64().unwrap() <= 1e-8);
    assert!(v["unitarity_defect"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["plus_sqrt_mu"], true);
    let o = lgp(&["oscillator", "--verify", "--phi", "0", "--N", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["eval", "--family", "krawtchouk", "--p", "x/2", "--N", "2"],
        &["eval", "--family", "krawtchouk", "--p", "1", "--N", "2"],
        &[
            "eval",
            "--family",
            "krawtchouk",
            "--i",
            "3",
            "--p",
            "1/2",
            "--N",
            "2",
        ],
        &[
            "eval",
            "--family",
            "griffiths",
            "--p1",
            "1/2",
            "--p2",
            "1/3",
            "--p3",
            "1/5",
            "--lambda",
            "0",
            "--N",
            "2",
        ],
        &["eval", "--family", "tratnik", "--p1", "1/2", "--N", "2"],
        &["check", "--suite", "nonsense"],
    ];
    for args in cases {
        assert_eq!(lgp(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("lgp-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.csv");
    let o = lgp(&[
        "table",
        "--family",
        "krawtchouk",
        "--p",
        "1/3",
        "--N",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}
