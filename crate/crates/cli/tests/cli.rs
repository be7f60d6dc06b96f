//! End-to-end checks of the command-line surface: exit codes, output
//! formats and the run directory layout.

use std::process::Command;

fn forge() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcnn-forge"))
}

#[test]
fn memory_bound_prints_formula_and_oracle() {
    let out = forge()
        .args(["memory-bound", "-n", "8", "-k", "2", "-m", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "formula=19 oracle=19");
}

#[test]
fn memory_bound_rejects_non_power() {
    let out = forge()
        .args(["memory-bound", "-n", "10", "-k", "2", "-m", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metrics_emits_csv_row_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge()
        .args([
            "metrics",
            "--circuit",
            "C2",
            "--qubits",
            "2",
            "--arch",
            "regular",
            "--inputs",
            "2",
            "--samples",
            "60",
            "--seed",
            "7",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("circuit_id,qubits,arch"));
    assert!(stdout.contains("C2,2,regular,3,3,4"));
    assert!(dir.path().join("metrics.csv").exists());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert_eq!(json["params"], 3);
}

#[test]
fn metrics_exit_codes() {
    let unknown = forge()
        .args(["metrics", "--circuit", "C9", "--qubits", "2", "--arch", "regular"])
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(2));

    let missing_flag = forge()
        .args(["metrics", "--circuit", "C2", "--arch", "regular"])
        .output()
        .unwrap();
    assert_eq!(missing_flag.status.code(), Some(2));

    let too_big = forge()
        .args(["metrics", "--circuit", "C1", "--qubits", "25", "--arch", "regular"])
        .output()
        .unwrap();
    assert_eq!(too_big.status.code(), Some(3));
}

#[test]
fn reproduce_tables_s1_has_seven_rows_and_thresholds() {
    let out = forge()
        .args(["reproduce-tables", "--which", "s1", "--seeds", "30"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = stdout
        .lines()
        .filter(|l| l.starts_with("s1,hybrid,2,"))
        .collect();
    assert_eq!(rows.len(), 7, "stdout: {stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("# thresholds:")));

    let unknown = forge()
        .args(["reproduce-tables", "--which", "s99"])
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn search_exports_deterministic_trials() {
    let run = |dir: &std::path::Path| {
        let out = forge()
            .args([
                "search", "--qubits", "2", "--arch", "regular", "--trials", "48", "--seed",
                "5", "--top", "1", "--out",
            ])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.join("trials.jsonl")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let t1 = run(d1.path());
    let t2 = run(d2.path());
    assert_eq!(t1.lines().count(), 48);
    // strip the informational wall-clock field before comparing
    let strip = |s: &str| -> Vec<serde_json::Value> {
        s.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("wall_ms");
                v
            })
            .collect()
    };
    assert_eq!(strip(&t1), strip(&t2));
    assert!(d1.path().join("best_0.json").exists());
}

#[test]
fn train_writes_run_directory_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge()
        .args([
            "train",
            "--model",
            "regular-4q-best",
            "--task",
            "0v1",
            "--runs",
            "2",
            "--batches",
            "4",
            "--batch-size",
            "5",
            "--train-cap",
            "12",
            "--test-cap",
            "8",
            "--seed",
            "3",
            "--synthetic",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("final_accuracy_mean,"));
    for file in ["config.json", "history.csv", "model.json", "run0.json", "run1.json"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    let history = std::fs::read_to_string(dir.path().join("history.csv")).unwrap();
    assert!(history.starts_with("batch,mean_loss,std_loss,mean_accuracy,std_accuracy"));

    // a trained run evaluates back through the evaluate command
    let eval = forge()
        .args(["evaluate", "--model"])
        .arg(dir.path())
        .args(["--params"])
        .arg(dir.path().join("run0.json"))
        .args(["--task", "0v1", "--test-cap", "8", "--seed", "3", "--synthetic"])
        .output()
        .unwrap();
    assert!(eval.status.success(), "{}", String::from_utf8_lossy(&eval.stderr));
    assert!(String::from_utf8_lossy(&eval.stdout).contains("test_accuracy,"));
}

#[test]
fn train_rejects_unknown_model() {
    let out = forge()
        .args(["train", "--model", "no-such", "--qubits", "4", "--synthetic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
