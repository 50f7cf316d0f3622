use std::process::{Command, Output};

use serde_json::Value;

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn compute(params: [&str; 5]) -> Value {
    let out = qcorr(&[
        "compute", "--a", params[0], "--b", params[1], "--cx", params[2], "--cy", params[3],
        "--cz", params[4],
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// CSV body as (header, rows of fields).
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(field: &str) -> f64 {
    field.parse().unwrap()
}

#[test]
fn compute_singlet() {
    let v = compute(["0", "0", "-1", "-1", "-1"]);
    let r = &v["report"];
    assert!((r["discord"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((r["deficit"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["entanglement"]["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(r["theorem_branch"], "a_zero");
}

#[test]
fn compute_maximally_mixed() {
    let v = compute(["0", "0", "0", "0", "0"]);
    let r = &v["report"];
    for key in ["discord", "deficit"] {
        assert!(r[key]["value"].as_f64().unwrap().abs() < 1e-12);
    }
    for key in ["classical_correlation", "mutual_information"] {
        assert!(r[key].as_f64().unwrap().abs() < 1e-12);
    }
    assert!(v["entanglement"]["concurrence"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn compute_rejects_bad_input() {
    let out = qcorr(&[
        "compute", "--a", "1.5", "--b", "0", "--cx", "0", "--cy", "0", "--cz", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("outside [-1, 1]"), "{}", stderr(&out));

    let out = qcorr(&[
        "compute", "--a", "0", "--b", "0", "--cx", "1", "--cy", "1", "--cz", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("most negative eigenvalue"),
        "{}",
        stderr(&out)
    );

    let out = qcorr(&[
        "compute", "--a", "0", "--b", "0", "--cx", "0", "--cy", "0", "--cz", "0", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qcorr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qcorr(&["sweep-q", "--q-steps", "1"]).status.code(), Some(2));
    assert_eq!(qcorr(&["sweep-q", "--q-max", "1.5"]).status.code(), Some(2));
    assert_eq!(
        qcorr(&["sweep-gamma", "--gamma-min", "-0.1"]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_q_default() {
    let out = qcorr(&["sweep-q"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv(&stdout(&out));
    assert_eq!(header.join(","), qcorr_core::CSV_HEADER);
    assert_eq!(rows.len(), 201);

    let first = &rows[0];
    assert_eq!(num(&first[1]), 0.0);
    for field in &first[2..8] {
        assert!(num(field).abs() < 1e-12);
    }
    let last = &rows[200];
    assert!((num(&last[2]) - 1.0).abs() < 1e-9 && (num(&last[3]) - 1.0).abs() < 1e-9);

    for row in &rows {
        let q = num(&row[1]);
        if (0.68..1.0).contains(&q) {
            assert_eq!(row[8], "theta_half_pi", "q={q}");
            let closed = h((1.0 + (1.0 - 2.0 * q * (1.0 - q)).sqrt()) / 2.0) - h(q) + 1.0;
            assert!((num(&row[3]) - closed).abs() < 1e-6, "q={q}");
        }
    }
    let q08 = rows.iter().find(|r| r[1] == "0.8").unwrap();
    let closed = h((1.0 + 0.68f64.sqrt()) / 2.0) - h(0.8) + 1.0;
    assert!((num(&q08[3]) - closed).abs() < 1e-10);
}

#[test]
fn sweep_gamma_default() {
    let out = qcorr(&["sweep-gamma"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 5 * 51);
    for row in &rows {
        assert!((num(&row[2]) - num(&row[3])).abs() <= 1e-8);
        assert_eq!(row[8], "a_zero");
    }

    let start = rows
        .iter()
        .find(|r| r[0] == "cy=0.55" && r[1] == "0")
        .unwrap();
    let v = compute(["0", "0.26", "0.13", "0.55", "0.08"]);
    let discord = v["report"]["discord"]["value"].as_f64().unwrap();
    assert!((num(&start[2]) - discord).abs() < 1e-11);

    let tails: Vec<&Vec<String>> = rows.iter().filter(|r| r[1] == "1").collect();
    assert_eq!(tails.len(), 5);
    assert!(tails.iter().all(|r| r[2..] == tails[0][2..]));
}

#[test]
fn sweep_output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = qcorr(&[
            "sweep-q",
            "--q-steps",
            "21",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let json = qcorr(&["sweep-q", "--q-steps", "3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let first = qcorr(&["verify", "--seed", "42"]);
    let second = qcorr(&["verify", "--seed", "42"]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.contains("discord_deficit_order"));
    assert!(text.contains("all suites passed"));
}

#[test]
fn verify_rejects_empty_sample() {
    let out = qcorr(&["verify", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sample count"));
}

#[test]
fn root_command() {
    let out = qcorr(&["root"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0.6752\n");

    let tight = qcorr(&["root", "--tol", "1e-14"]);
    assert_eq!(stdout(&tight), "0.6752\n");

    let out = qcorr(&["root", "--q-min", "0.7", "--q-max", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no root"));
}
