mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flowids"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

/// First `rows` data rows of the synthetic fixture.
fn small_csv(dir: &Path, rows: usize) -> PathBuf {
    let full = std::fs::read_to_string(common::synthetic_csv()).unwrap();
    let head: Vec<&str> = full.lines().take(rows + 1).collect();
    let path = dir.join("flows.csv");
    std::fs::write(&path, head.join("\n") + "\n").unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["train", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["train", "--model", "svm", "--data", "x.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["evaluate", "--model", "m.json"]).status.code(), Some(2));
}

#[test]
fn pipeline_errors_exit_with_one_and_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "train",
        "--data",
        "/nonexistent.csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("[load]"));

    let csv = small_csv(dir.path(), 50);
    let out = run(&[
        "train",
        "--data",
        csv.to_str().unwrap(),
        "--drop",
        "id,nope",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("nope"));

    let out = run(&["train", "--data", csv.to_str().unwrap(), "--test-fraction", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("[config]"));
}

#[test]
fn train_then_evaluate_reproduces_manifest_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let csv = small_csv(dir.path(), 400);
    let out_dir = dir.path().join("rf");
    let out = run(&[
        "train",
        "--data",
        csv.to_str().unwrap(),
        "--model",
        "rf",
        "--trees",
        "15",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));

    let model = out_dir.join("model.json");
    let manifest = out_dir.join("manifest.json");
    let eval = run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(eval.status.success(), "{}", text(&eval.stderr));

    let stored = json(&manifest);
    let metrics = json(&out_dir.join("metrics.json"));
    assert_eq!(stored["test_indices"].as_array().unwrap().len(), 80);
    assert_eq!(stored["test_metrics"]["accuracy"], metrics["report"]["accuracy"]);
    assert_eq!(stored["test_metrics"]["auc"], metrics["roc"]["auc"]);
    assert_eq!(stored["test_metrics"]["confusion"], metrics["confusion"]);

    let printed = text(&eval.stdout);
    let line = printed.lines().find(|l| l.starts_with("accuracy: ")).unwrap();
    let shown: f64 = line["accuracy: ".len()..].parse().unwrap();
    assert_eq!(shown, metrics["report"]["accuracy"].as_f64().unwrap());
    assert!(printed.contains("macro avg"));

    let model_json = json(&model);
    assert_eq!(model_json["format_version"], 1);
    assert_eq!(model_json["model"]["kind"], "forest");
    assert_eq!(model_json["model"]["trees"].as_array().unwrap().len(), 15);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let csv = small_csv(dir.path(), 120);
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "data = {:?}\nseed = 7\nmodel = \"logreg\"\ntest_fraction = 0.25\n[logistic]\nmax_iterations = 50\n",
            csv.to_str().unwrap()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "train",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let manifest = json(&out_dir.join("manifest.json"));
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["test_fraction"], 0.25);
    let model = json(&out_dir.join("model.json"));
    assert_eq!(model["model"]["kind"], "logistic");
    assert!(model["model"]["iterations_used"].as_u64().unwrap() <= 50);
    assert_eq!(model["config"]["seed"], 9);
}

#[test]
fn unseen_categories_fail_strict_and_pass_lenient() {
    let dir = tempfile::tempdir().unwrap();
    let csv = small_csv(dir.path(), 150);
    let out_dir = dir.path().join("m");
    let out = run(&[
        "train",
        "--data",
        csv.to_str().unwrap(),
        "--model",
        "logreg",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));

    let full = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = full.lines().map(str::to_string).collect();
    lines[1] = lines[1]
        .replacen(",tcp,", ",icmp-never-seen,", 1)
        .replacen(",udp,", ",icmp-never-seen,", 1);
    assert!(lines[1].contains("icmp-never-seen"));
    let novel = dir.path().join("novel.csv");
    std::fs::write(&novel, lines.join("\n") + "\n").unwrap();

    let model = out_dir.join("model.json");
    let lenient = run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--data",
        novel.to_str().unwrap(),
        "--out",
        dir.path().join("eval").to_str().unwrap(),
    ]);
    assert!(lenient.status.success(), "{}", text(&lenient.stderr));
    assert_eq!(json(&dir.path().join("eval/metrics.json"))["n_samples"], 150);

    let strict = run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--manifest",
        out_dir.join("manifest.json").to_str().unwrap(),
        "--data",
        novel.to_str().unwrap(),
    ]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(text(&strict.stderr).contains("icmp-never-seen"));
}

#[test]
fn report_writes_figures_and_skips_importances_for_logistic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = small_csv(dir.path(), 200);
    let out_dir = dir.path().join("lr");
    assert!(run(&[
        "train",
        "--data",
        csv.to_str().unwrap(),
        "--model",
        "logreg",
        "--out",
        out_dir.to_str().unwrap(),
    ])
    .status
    .success());
    let model = out_dir.join("model.json");
    assert!(run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--manifest",
        out_dir.join("manifest.json").to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&[
        "report",
        "--model",
        model.to_str().unwrap(),
        "--metrics",
        out_dir.join("metrics.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("warning"));
    for f in ["confusion", "roc", "correlation"] {
        assert!(out_dir.join(format!("{f}.svg")).exists());
        assert!(out_dir.join(format!("{f}.json")).exists());
    }
    assert!(!out_dir.join("importances.svg").exists());
}
