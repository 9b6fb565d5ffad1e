use std::process::{Command, Output};

use mdiqkd::cli::RunOutput;

fn mdiqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdiqkd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn json_run_reports_symmetric_attack() {
    let o = mdiqkd(&[
        "run", "--strategy", "hadamard-cnot", "--trials", "100000", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed: RunOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(parsed.all_pass);
    assert!((parsed.report.ber_ab.unwrap().value - 0.25).abs() < 0.01);
    assert_eq!(parsed.report.pi_e.unwrap().value, 1.0);
    assert_eq!(parsed.report.n_rounds, 100_000);
    assert_eq!(parsed.report.seed, 7);
}

#[test]
fn json_round_trips_and_is_byte_stable() {
    let args = ["run", "--strategy", "cnot", "--zeta", "0.5", "--trials", "5000", "--seed", "3", "--format", "json"];
    let first = stdout(&mdiqkd(&args));
    let second = stdout(&mdiqkd(&args));
    assert_eq!(first, second);

    let parsed: RunOutput = serde_json::from_str(&first).unwrap();
    let reencoded = mdiqkd::cli::render_json(&parsed);
    assert_eq!(reencoded, first);

    let raw: serde_json::Value = serde_json::from_str(&first).unwrap();
    for key in [
        "strategy", "zeta", "mode", "seed", "n_rounds", "n_kept", "keep_rate", "ber_ab",
        "p_e_attacked", "p_e_overall", "pi_e", "theory", "verdicts", "all_pass",
    ] {
        assert!(raw.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn honest_run_exits_zero() {
    let o = mdiqkd(&["run", "--strategy", "honest", "--trials", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ber_ab"));
}

#[test]
fn usage_errors_exit_two() {
    let o = mdiqkd(&["run", "--zeta", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(mdiqkd(&["run", "--strategy", "cnot", "--detect", "partial"]).status.code(), Some(2));
    assert_eq!(mdiqkd(&["sweep", "--strategy", "cnot", "--zetas", ""]).status.code(), Some(2));
    assert_eq!(mdiqkd(&["sweep", "--strategy", "cnot", "--zetas", "0,2"]).status.code(), Some(2));
}

#[test]
fn metric_failure_exits_one() {
    // a near-empty session cannot reach its reference values
    let o = mdiqkd(&["run", "--strategy", "cnot", "--zeta", "0.5", "--trials", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn sweep_tracks_zeta_and_agrees_with_run() {
    let o = mdiqkd(&[
        "sweep", "--strategy", "hadamard-cnot", "--zetas", "0,0.5,1", "--trials", "100000", "--seed", "11",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for (row, target) in rows.iter().zip([0.0, 0.125, 0.25]) {
        let ber: f64 = row[col("ber_ab")].parse().unwrap();
        assert!((ber - target).abs() < 0.01, "{ber} vs {target}");
    }

    let single = mdiqkd(&[
        "run", "--strategy", "hadamard-cnot", "--trials", "100000", "--seed", "11", "--format", "csv",
    ]);
    let single = stdout(&single);
    let last = text.lines().last().unwrap();
    assert_eq!(single.lines().nth(1).unwrap(), last);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = mdiqkd(&[
        "run", "--strategy", "honest", "--trials", "2000", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn verify_lists_every_check() {
    let o = mdiqkd(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("|+⟩,|-⟩ Ψ⁺_AB Ψ⁻_E1E2: computed -0.500000 expected -0.500000"));
    assert!(text.contains("P1|-0⟩ = |-1⟩"));
    assert!(text.contains("|1⟩,|1⟩ P(Φ⁺): computed 0.500000 expected 0.500000"));
    // verification is sampling-free
    assert_eq!(text, stdout(&mdiqkd(&["verify"])));
}
