use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn lab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shimura-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SHIMURA_LAB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn digest_dir(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, hex::encode(Sha256::digest(std::fs::read(&p).unwrap())))
        })
        .collect();
    files.sort();
    files
}

const SAMPLE: &[&str] = &["sample", "--height", "1", "--n", "300", "--seed", "7"];

#[test]
fn sample_output_is_reproducible_across_runs_and_workers() {
    let tmp = TempDir::new().unwrap();
    let mut digests = Vec::new();
    for (k, workers) in ["1", "1", "8"].iter().enumerate() {
        let out = tmp.path().join(format!("run{k}"));
        let mut args = SAMPLE.to_vec();
        args.extend(["--workers", workers]);
        let o = lab(&out, &args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        digests.push(digest_dir(&out));
    }
    assert!(!digests[0].is_empty());
    assert_eq!(digests[0], digests[1]);
    assert_eq!(digests[0], digests[2]);
}

#[test]
fn liecheck_and_fiberavg_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        assert_eq!(lab(out, &["liecheck", "--seed", "3", "--set", "trials=20"]).status.code(), Some(0));
        assert_eq!(lab(out, &["fiberavg", "--seed", "3", "--set", "forms=20"]).status.code(), Some(0));
    }
    assert_eq!(digest_dir(&a), digest_dir(&b));
}

#[test]
fn config_file_and_flags() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "schema_version = 1\nheight = 1\ncolour = red\n").unwrap();
    let o = lab(&tmp.path().join("x"), &["enumerate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    assert_eq!(lab(&tmp.path().join("x"), &["enumerate", "--set", "colour=red"]).status.code(), Some(2));
    assert_eq!(lab(&tmp.path().join("x"), &["bogus"]).status.code(), Some(2));

    std::fs::write(&cfg, "schema_version = 1\nheight = 1\n").unwrap();
    let out = tmp.path().join("ok");
    let o = lab(&out, &["enumerate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let reg = shimura_lab::registry::read_registry(&std::fs::read_to_string(out.join("registry.json")).unwrap()).unwrap();
    assert_eq!(reg.curves.len(), 4);
}

#[test]
fn selfint_reads_model_and_periods() {
    let tmp = TempDir::new().unwrap();
    let model = tmp.path().join("model.json");
    let periods = tmp.path().join("periods.json");
    std::fs::write(&model, r#"{"schema_version": 1, "gram": [["2", "0"], ["0", "-1"]]}"#).unwrap();
    std::fs::write(&periods, r#"{"schema_version": 1, "periods": [["1", "1"], ["10", "1"], ["100", "1"]]}"#).unwrap();
    let out = tmp.path().join("o");
    let o = lab(&out, &["selfint", "--set", &format!("model={}", model.display()), "--set", &format!("periods={}", periods.display())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("selfint.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("n,volume,self_intersection,ratio"));

    std::fs::write(&model, r#"{"schema_version": 1, "gram": [["1", "0", "0"], ["0", "1", "2"], ["0", "2", "4"]]}"#).unwrap();
    let o = lab(&out, &["selfint", "--set", &format!("model={}", model.display())]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SingularGram"));
}

#[test]
fn verify_passes_and_reports_controlled_failures() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("v");
    let o = lab(&out, &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);

    // 30 digits cannot reach a 1e-40 residual
    let o = lab(&out, &["verify", "--precision", "30", "--set", "tolerance=1e-40"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["failures"].as_array().unwrap().iter().any(|f| f == "conjugator"));
}
