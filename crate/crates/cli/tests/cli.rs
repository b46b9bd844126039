use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heunent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "`{}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// CSV body without the trailing `#` lines, as rows of fields.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "c_n", "n=3", "--exact"]), "33/40\n");
    assert_eq!(stdout(&["eval", "F", "n=1", "x=1/4", "--exact"]), "5/8\n");
    let k: f64 = stdout(&["eval", "K", "n=1", "x=1"]).trim().parse().unwrap();
    // K_1(1) = e^{-2} I_0(2)
    let i0_2 = 2.2795853023360673;
    assert!((k - (-2f64).exp() * i0_2).abs() < 1e-15);
    assert_eq!(
        stdout(&["eval", "kn_deriv_zero", "n=1", "j=2", "--exact"]),
        "6\n"
    );
}

#[test]
fn eval_prints_seventeen_significant_digits() {
    let s = stdout(&["eval", "K", "n=1", "x=1"]);
    let digits = s.trim().trim_start_matches("0.").len();
    assert_eq!(digits, 17, "{s}");
}

#[test]
fn eval_grid_and_json() {
    let rows = csv_rows(&stdout(&[
        "eval", "legendre", "n=2", "--grid", "-1:1:3", "--exact",
    ]));
    assert_eq!(
        rows,
        vec![vec!["-1", "1"], vec!["0", "-1/2"], vec!["1", "1"]]
            .into_iter()
            .map(|r| r.into_iter().map(String::from).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    let doc: Value =
        serde_json::from_str(&stdout(&["eval", "U", "n=2", "x=1", "--exact", "--json"])).unwrap();
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["params"]["function"], "U");
    // U_2(1) = (1 + 4 + 1) / 16
    assert_eq!(doc["rows"][0]["value"], "3/8");
}

#[test]
fn eval_bspline_density() {
    // hat on [-1, 1] with peak 1
    assert_eq!(
        stdout(&["eval", "bspline", "n=2", "x=1/2", "--exact"]),
        "1/2\n"
    );
    assert_eq!(
        stdout(&["eval", "bspline", "n=2", "x=3", "center=2", "--sigma", "const:2", "--exact"]),
        "1/4\n"
    );
}

#[test]
fn eval_usage_errors() {
    for args in [
        &["eval", "nope", "n=1", "x=0"][..],
        &["eval", "F", "x=0"],
        &["eval", "F", "n=1"],
        &["eval", "F", "n=1", "x=0", "--grid", "0:1:3"],
        &["eval", "c_n", "n=1", "x=0"],
        &["eval", "G", "n=1", "x=1/4", "--exact"],
        &["eval", "F", "n=1/2", "x=0"],
        &["eval", "F", "n=1", "--grid", "0:1"],
        &[
            "eval", "hl", "a=1/2", "q=1", "alpha=1", "beta=1", "gamma=1", "delta=1", "x=2",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{}", args.join(" "));
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn verify_examples() {
    let out = run(&[
        "verify", "--id", "I39", "--params", "n=5", "--mode", "exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "I39");
    assert_eq!(rows[0][6], "true");
    assert_eq!(run(&["verify", "--id", "I99"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--id", "I39", "--mode", "fast"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}

#[test]
fn verify_default_ranges_for_one_identity() {
    let rows = csv_rows(&stdout(&["verify", "--id", "i49"]));
    // n in 1..=3, j in 0..=8
    assert_eq!(rows.len(), 27);
    assert!(rows.iter().all(|r| r[6] == "true"));
}

#[test]
fn verify_failure_exits_one() {
    let out = run(&[
        "verify", "--id", "I31", "--params", "q=1/2", "--mode", "numeric", "--tol", "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# 1 checks, 1 failed"));
}

#[test]
fn verify_json_report() {
    let doc: Value = serde_json::from_str(&stdout(&[
        "verify", "--id", "I314", "--params", "n=3,i=1", "--json",
    ]))
    .unwrap();
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["pass"], true);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["id"], "I314");
        assert_eq!(r["params"]["i"], "1");
        assert!(!r["routes"].as_array().unwrap().is_empty());
    }
}

#[test]
fn entropy_bspline_constant_width() {
    let text = stdout(&[
        "entropy", "--op", "bspline", "--n", "1", "--sigma", "const:1", "--grid", "0:1:3",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let renyi: f64 = r[2].parse().unwrap();
        let variance: f64 = r[4].parse().unwrap();
        assert!((renyi - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((variance - 1.0 / 3.0).abs() < 1e-16);
    }
    assert!(text.lines().last().unwrap().starts_with("# synchronicity"));
}

#[test]
fn entropy_kantorovich_examples() {
    let rows = csv_rows(&stdout(&[
        "entropy",
        "--op",
        "kantorovich",
        "--n",
        "3",
        "--k",
        "2",
        "--grid",
        "0:1:5",
        "--csv",
    ]));
    let mid = rows.iter().find(|r| r[0] == "1/2").unwrap();
    assert_eq!(mid[1].parse::<f64>().unwrap(), 1.25);

    let rows = csv_rows(&stdout(&[
        "entropy",
        "--op",
        "kantorovich",
        "--n",
        "2",
        "--k",
        "2",
        "--grid",
        "0:1:5",
    ]));
    for r in &rows {
        assert!((r[3].parse::<f64>().unwrap() + 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn entropy_json_and_errors() {
    let doc: Value = serde_json::from_str(&stdout(&[
        "entropy", "--op", "bspline", "--n", "2", "--sigma", "quad:1:1", "--grid", "0:1:4",
        "--json",
    ]))
    .unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["synchronicity"]["variance/renyi"], true);
    for args in [
        &[
            "entropy",
            "--op",
            "kantorovich",
            "--n",
            "3",
            "--grid",
            "0:1:5",
        ][..],
        &[
            "entropy",
            "--op",
            "kantorovich",
            "--n",
            "3",
            "--k",
            "2",
            "--grid",
            "-1:1:5",
        ],
        &[
            "entropy", "--op", "bspline", "--n", "2", "--sigma", "const:-1", "--grid", "0:1:3",
        ],
        &["entropy", "--op", "bspline", "--n", "0", "--grid", "0:1:3"],
        &["entropy", "--op", "bspline", "--n", "2", "--grid", "0:1:0"],
        &["entropy", "--op", "poisson", "--n", "2", "--grid", "0:1:3"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{}", args.join(" "));
    }
}

#[test]
fn registry_table_and_json() {
    let rows = csv_rows(&stdout(&["registry"]));
    assert_eq!(rows.len(), 21);
    let doc: Value = serde_json::from_str(&stdout(&["registry", "--json"])).unwrap();
    assert_eq!(doc["command"], "registry");
    let entries = doc["rows"].as_array().unwrap();
    assert_eq!(entries.len(), 21);
    for e in entries {
        for key in ["id", "equation", "statement", "default_ranges"] {
            assert!(e[key].is_string(), "{key} in {e}");
        }
        assert!(!e["modes"].as_array().unwrap().is_empty());
    }
    let labels: Vec<&str> = entries
        .iter()
        .map(|e| e["equation"].as_str().unwrap())
        .collect();
    assert!(labels.contains(&"(3.9)"));
    assert!(labels.contains(&"(4.8)"));
}
