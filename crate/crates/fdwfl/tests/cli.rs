//! End-to-end checks of the command-line interface.

use std::path::Path;
use std::process::Command;

fn fdwfl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fdwfl"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn simulate_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let status = fdwfl()
            .args([
                "simulate",
                "--seed",
                "7",
                "--snr",
                "20",
                "--periods",
                "3",
                "--out-dir",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["u_spectrum.csv", "y_spectrum.csv", "meta.json"] {
        assert_eq!(
            read(&a.join(name)),
            read(&b.join(name)),
            "{name} differs between runs"
        );
    }
}

#[test]
fn simulate_requires_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let output = fdwfl()
        .args(["simulate", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("--seed"));
}

#[test]
fn pe_check_and_evaluate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert!(fdwfl()
        .args(["simulate", "--seed", "3", "--out-dir"])
        .arg(&data)
        .status()
        .unwrap()
        .success());

    let out = fdwfl()
        .args(["pe-check", "--order", "9", "--augmented", "--spectrum"])
        .arg(data.join("u_spectrum.csv"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["is_pe"], serde_json::Value::Bool(true));
    assert_eq!(report["rank"], serde_json::json!(18));

    let out = fdwfl()
        .args([
            "evaluate", "--z-re", "1.0", "--z-im", "0.0", "--l0", "4", "--data",
        ])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success());
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let yz_re = result["yz"][0][0].as_f64().unwrap();
    assert!((yz_re - 2.1003173727059474).abs() < 1e-9);
}

#[test]
fn membership_pipeline_accepts_zero_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert!(fdwfl()
        .args(["simulate", "--seed", "5", "--out-dir"])
        .arg(&data)
        .status()
        .unwrap()
        .success());
    let traj = dir.path().join("traj.csv");
    std::fs::write(&traj, "t,u_0,y_0\n0,0.0,0.0\n1,0.0,0.0\n2,0.0,0.0\n").unwrap();
    let out = fdwfl()
        .args(["membership", "--data"])
        .arg(&data)
        .arg("--trajectory")
        .arg(&traj)
        .output()
        .unwrap();
    assert!(out.status.success());
    let solution: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(solution["feasible"], serde_json::Value::Bool(true));
}

#[test]
fn case_studies_pass_and_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let nf = dir.path().join("nf");
    let status = fdwfl()
        .args(["case-study", "--noise-free", "--seed", "1", "--out-dir"])
        .arg(&nf)
        .status()
        .unwrap();
    assert!(status.success());
    for name in [
        "errors.csv",
        "u_spectrum.csv",
        "y_spectrum.csv",
        "report.json",
    ] {
        assert!(nf.join(name).exists(), "{name} missing");
    }
    let report: serde_json::Value = serde_json::from_str(&read(&nf.join("report.json"))).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    assert!(report["max_frf_error"].as_f64().unwrap() < 1e-6);

    let noisy = dir.path().join("noisy");
    let status = fdwfl()
        .args(["case-study", "--noisy", "--seed", "1", "--out-dir"])
        .arg(&noisy)
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(&noisy.join("report.json"))).unwrap();
    assert!(report["max_frf_error"].as_f64().unwrap() < 0.3162);
    assert!(report["max_transient_error"].as_f64().unwrap() < 0.3162);
}

#[test]
fn user_model_json_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(
        &model,
        r#"{"A": [[0.5, 0.1], [0.0, 0.4]], "B": [[1.0], [0.5]], "C": [[1.0, 0.0]], "D": [[0.0]]}"#,
    )
    .unwrap();
    let data = dir.path().join("data");
    let status = fdwfl()
        .args(["simulate", "--seed", "2", "--m", "12"])
        .arg("--model")
        .arg(&model)
        .arg("--out-dir")
        .arg(&data)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(data.join("x_spectrum.csv").exists());
}
