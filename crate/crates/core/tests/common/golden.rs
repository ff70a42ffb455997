//! Fixed figure payloads and golden-file comparison. Set `UPDATE_GOLDEN=1`
//! to rewrite the files under `tests/golden/`.

use std::path::PathBuf;

use flowids::metrics::{roc, ConfusionMatrix, CorrelationMatrix, RocCurve};
use flowids::report::{
    render_confusion, render_correlation, render_importances, render_roc, Figure, FigureKind, FigureSpec,
};

use super::labels;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(name)
}

/// Compares the SVG and sidecar against the stored copies.
pub fn check_golden(name: &str, figure: &Figure) -> Result<(), String> {
    let svg = golden_path(&format!("{name}.svg"));
    let json = golden_path(&format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        figure.save(&svg).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    if read(&svg)? != figure.svg {
        return Err(format!("{name}.svg differs from golden copy"));
    }
    if read(&json)? != figure.sidecar {
        return Err(format!("{name}.json differs from golden copy"));
    }
    Ok(())
}

fn spec(kind: FigureKind, title: &str) -> FigureSpec {
    FigureSpec::new(kind, title, "unused.svg")
}

pub fn confusion_payload() -> ConfusionMatrix {
    ConfusionMatrix {
        counts: [[9012, 377], [241, 15370]],
    }
}

pub fn roc_payload() -> RocCurve {
    let y = [0u8, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0];
    let s = [0.05, 0.2, 0.3, 0.35, 0.4, 0.55, 0.6, 0.7, 0.8, 0.1, 0.95, 0.5];
    roc(&labels(&y), &s).unwrap()
}

pub fn importance_payload() -> Vec<(String, f64)> {
    [
        ("sttl", 0.1843),
        ("ct_state_ttl", 0.1172),
        ("sbytes", 0.0811),
        ("smean", 0.0654),
        ("dload", 0.0532),
        ("state=INT", 0.0409),
        ("dmean", 0.0388),
        ("ct_srv_dst", 0.0301),
        ("sload", 0.0299),
        ("rate", 0.0205),
    ]
    .iter()
    .map(|(n, v)| (n.to_string(), *v))
    .collect()
}

pub fn correlation_payload() -> CorrelationMatrix {
    let names = ["proto=tcp", "proto=udp", "service=-", "state=FIN", "label"];
    let r = |v: f64| Some(v);
    CorrelationMatrix {
        names: names.iter().map(|s| s.to_string()).collect(),
        values: vec![
            vec![r(1.0), r(-0.93), None, r(0.41), r(-0.27)],
            vec![r(-0.93), r(1.0), None, r(-0.38), r(0.19)],
            vec![None, None, None, None, None],
            vec![r(0.41), r(-0.38), None, r(1.0), r(-0.62)],
            vec![r(-0.27), r(0.19), None, r(-0.62), r(1.0)],
        ],
    }
}

pub fn golden_figures() -> Vec<(&'static str, Figure)> {
    vec![
        (
            "confusion",
            render_confusion(
                &confusion_payload(),
                &spec(FigureKind::ConfusionHeatmap, "Confusion Matrix for Random Forest"),
            )
            .unwrap(),
        ),
        (
            "roc",
            render_roc(
                &roc_payload(),
                &spec(
                    FigureKind::RocPlot,
                    "Receiver Operating Characteristic (ROC) Curve for Random Forest",
                ),
            )
            .unwrap(),
        ),
        (
            "importances",
            render_importances(
                &importance_payload(),
                &spec(FigureKind::ImportanceBars, "Feature Importances for Random Forest"),
            )
            .unwrap(),
        ),
        (
            "correlation",
            render_correlation(
                &correlation_payload(),
                &spec(FigureKind::CorrelationHeatmap, "Correlation Heatmap"),
            )
            .unwrap(),
        ),
    ]
}
