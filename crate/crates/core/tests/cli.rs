use std::path::Path;
use std::process::{Command, Output};

fn epibandit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epibandit")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, out: &Path) -> String {
    let path = dir.join("tiny.toml");
    let text = format!(
        "r0_list = [1.4]\nbudgets = [70, 100]\nreplicates = 3\nground_truth_runs = 20\noutput_dir = \"{}\"\n",
        out.display()
    );
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = write_config(dir.path(), &out);

    let missing = epibandit(&["benchmark", "--config", &config]);
    assert_eq!(missing.status.code(), Some(3));
    let missing = epibandit(&["calibration", "--config", &config]);
    assert_eq!(missing.status.code(), Some(3));

    let gt = epibandit(&["ground-truth", "--config", &config, "--seed", "5"]);
    assert!(gt.status.success(), "{}", String::from_utf8_lossy(&gt.stderr));
    assert!(String::from_utf8_lossy(&gt.stdout).contains("r0=1.4 best_strategy="));
    let summary = std::fs::read_to_string(out.join("ground_truth.csv")).unwrap();
    assert!(summary.starts_with("r0,strategy_index,n_runs,n_established,mean_outcome,std_outcome\n"));
    assert_eq!(summary.lines().count(), 33);

    let bench = epibandit(&["benchmark", "--config", &config, "--seed", "5", "--workers", "2"]);
    assert!(bench.status.success(), "{}", String::from_utf8_lossy(&bench.stderr));
    let records = std::fs::read(out.join("benchmark.csv")).unwrap();
    let header = b"algorithm,r0,budget,replicate,recommended_arm,correct,p_success,pulls_json,wall_ms\n";
    assert!(records.starts_with(header));
    assert_eq!(records.iter().filter(|&&b| b == b'\n').count(), 1 + 4 * 2 * 3);
    let rates = std::fs::read_to_string(out.join("success_rate.csv")).unwrap();
    assert_eq!(rates.lines().count(), 1 + 4 * 2);

    let again = epibandit(&["benchmark", "--config", &config, "--seed", "5", "--workers", "1"]);
    assert!(again.status.success());
    assert_eq!(std::fs::read(out.join("benchmark.csv")).unwrap(), records);

    let cal = epibandit(&["calibration", "--config", &config]);
    assert!(cal.status.success(), "{}", String::from_utf8_lossy(&cal.stderr));
    let table = std::fs::read_to_string(out.join("calibration.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 11);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "replicates = 0\n").unwrap();
    assert_eq!(epibandit(&["benchmark", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(epibandit(&["ground-truth", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(epibandit(&["threshold", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(epibandit(&["threshold", "--bogus"]).status.code(), Some(2));
}

#[test]
fn threshold_report() {
    let ok = epibandit(&["threshold", "--r0", "1.4"]);
    assert!(ok.status.success());
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(text.contains("p_ext=0.8022946") && text.contains("T0=105"), "{text}");

    let sub = epibandit(&["threshold", "--r0", "1.1", "--controlled-fraction", "0.2"]);
    assert!(!sub.status.success());
    assert!(String::from_utf8_lossy(&sub.stderr).contains("subcritical"));
}

#[test]
fn committed_config_matches_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let config = epibandit::harness::ExperimentConfig::from_file(&path).unwrap();
    assert_eq!(config, epibandit::harness::ExperimentConfig::default());
}
