//! Golden-file tests for the SVG renderers.

mod common;

use common::golden::*;
use common::*;

use flowids::report::{roc_legend, UNDEFINED_FILL};

#[test]
fn renderers_match_golden_files() {
    for (name, figure) in golden_figures() {
        check_golden(name, &figure).unwrap();
    }
}

#[test]
fn renderers_are_deterministic() {
    assert_eq!(golden_figures(), golden_figures());
}

#[test]
fn confusion_annotations_round_trip() {
    let fig = &golden_figures()[0].1;
    let cm = confusion_payload();
    let shown: Vec<u64> = svg_texts(&fig.svg, "annotation")
        .iter()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(shown, cm.counts.iter().flatten().copied().collect::<Vec<_>>());
    let axes = svg_texts(&fig.svg, "axis-label");
    assert_eq!(axes, ["Predicted Labels", "True Labels"]);
}

#[test]
fn roc_legend_round_trips_auc() {
    let fig = &golden_figures()[1].1;
    let curve = roc_payload();
    let legend = svg_texts(&fig.svg, "legend-text");
    assert_eq!(legend, [roc_legend(curve.auc)]);
    let shown: f64 = legend[0]
        .trim_start_matches("ROC curve (area = ")
        .trim_end_matches(')')
        .parse()
        .unwrap();
    assert!((shown - curve.auc).abs() <= 0.005);
    assert_eq!(roc_legend(0.987), "ROC curve (area = 0.99)");
}

#[test]
fn roc_path_is_monotone_from_corner_to_corner() {
    let fig = &golden_figures()[1].1;
    let pts = svg_path_points(&fig.svg, "roc-curve");
    assert_eq!(pts.len(), roc_payload().fpr.len());
    // x grows to the right, y grows downwards in SVG
    assert!(pts.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 <= w[0].1));
    let reference = svg_path_points(&fig.svg, "reference");
    assert_eq!(pts.first(), reference.first());
    assert_eq!(pts.last().unwrap().0, reference.last().unwrap().0);
    assert!(fig.svg.contains("stroke-dasharray"));
}

#[test]
fn importance_bars_follow_values() {
    let fig = &golden_figures()[2].1;
    let top = importance_payload();
    let names = svg_texts(&fig.svg, "bar-label");
    assert_eq!(names, top.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>());
    let widths: Vec<f64> = fig
        .svg
        .lines()
        .filter(|l| l.starts_with("<rect class=\"bar\""))
        .map(|l| {
            let w = &l[l.find("width=\"").unwrap() + 7..];
            w[..w.find('"').unwrap()].parse().unwrap()
        })
        .collect();
    assert_eq!(widths.len(), 10);
    for (w, (_, v)) in widths.iter().zip(&top) {
        assert!((w / widths[0] - v / top[0].1).abs() < 1e-3);
    }
}

#[test]
fn correlation_cells_mark_undefined_pairs() {
    let fig = &golden_figures()[3].1;
    let cells: Vec<&str> = fig
        .svg
        .lines()
        .filter(|l| l.starts_with("<rect class=\"cell"))
        .collect();
    assert_eq!(cells.len(), 25);
    let undefined = cells
        .iter()
        .filter(|l| l.contains(&format!("fill=\"{UNDEFINED_FILL}\"")))
        .count();
    assert_eq!(undefined, 9);
    assert_eq!(svg_texts(&fig.svg, "row-label").len(), 5);
    assert!(fig.sidecar.contains("null"));
}
