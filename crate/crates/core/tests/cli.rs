use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thin-korn"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn run_writes_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.conf",
        "experiment = counterexample_scaling\nprofile = as_example\neps = 0.2, 0.1, 0.05, 0.025\nresolution = 8x16x4\n",
    );
    let out = tmp.path().join("out");
    let status = bin().args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "9", "--resolution", "16x32x6"]).status().unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("experiment,surface,profile,eps,quantity,value\n"));
    assert!(csv.contains("counterexample_scaling,sphere,as_example,0.05,rayleigh,"));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 9);
    assert_eq!(summary["resolution"]["surface"]["n1"], 16);
    assert_eq!(summary["resolution"]["radial"], 6);
    assert_eq!(summary["passed"], true);
    assert!(summary["slopes"]["rayleigh"].as_f64().unwrap() < -0.8);
    assert!(summary["failures"].as_array().unwrap().is_empty());
}

#[test]
fn failing_suite_exits_nonzero_with_failure_list() {
    let tmp = tempfile::tempdir().unwrap();
    // e1 x y is not a Killing field compatible with the non-axisymmetric profiles
    let cfg = write(
        tmp.path(),
        "c.conf",
        "experiment = counterexample_scaling\nprofile = nas_example\nrotation = 1, 0, 0\neps = 0.2, 0.1, 0.05\nresolution = 8x16x2\n",
    );
    let out = tmp.path().join("out");
    let status = bin().args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status().unwrap();
    assert_eq!(status.code(), Some(1));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], false);
    assert!(summary["failures"][0].as_str().unwrap().contains("killing_field"));
}

#[test]
fn invalid_config_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.conf", "experiment = cov\neps =\n");
    let o = bin().args(["run", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eps"));
    let o = bin().args(["run", cfg.to_str().unwrap(), "--resolution", "4x4"]).output().unwrap();
    assert!(!o.status.success());
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.conf", "experiment = identities\nsurface = torus\nsamples = 60\nseed = 3\n");
    let mut csvs = Vec::new();
    for k in 0..2 {
        let out = tmp.path().join(format!("o{k}"));
        assert!(bin().args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status().unwrap().success());
        csvs.push(std::fs::read(out.join("results.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}
