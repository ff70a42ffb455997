//! SVG figures: confusion heatmap, ROC curve, importance bars and
//! correlation heatmap.
//!
//! Rendering is pure string building. Coordinates are printed with at most
//! two decimals and text widths come from the built-in Helvetica advance
//! table below, so the same payload always produces the same bytes.
//! Every figure also has a JSON sidecar carrying its exact payload.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{ConfusionMatrix, CorrelationMatrix, RocCurve};

/// Sequential map for count heatmaps, light to dark.
pub const SEQUENTIAL: [[u8; 3]; 9] = [
    [0xf7, 0xfb, 0xff],
    [0xde, 0xeb, 0xf7],
    [0xc6, 0xdb, 0xef],
    [0x9e, 0xca, 0xe1],
    [0x6b, 0xae, 0xd6],
    [0x42, 0x92, 0xc6],
    [0x21, 0x71, 0xb5],
    [0x08, 0x51, 0x9c],
    [0x08, 0x30, 0x6b],
];

/// Diverging map for correlations, −1 (blue) through 0 (near white) to +1 (red).
pub const DIVERGING: [[u8; 3]; 9] = [
    [0x21, 0x66, 0xac],
    [0x43, 0x93, 0xc3],
    [0x92, 0xc5, 0xde],
    [0xd1, 0xe5, 0xf0],
    [0xf7, 0xf7, 0xf7],
    [0xfd, 0xdb, 0xc7],
    [0xf4, 0xa5, 0x82],
    [0xd6, 0x60, 0x4d],
    [0xb2, 0x18, 0x2b],
];

/// Fill for undefined correlations.
pub const UNDEFINED_FILL: &str = "#b0b0b0";

const FONT: &str = "Helvetica, Arial, sans-serif";

/// Helvetica advance widths for ASCII 32..=126 in 1/1000 em.
const ADVANCE: [u16; 95] = [
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, // ' '..'/'
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, // '0'..'9'
    278, 278, 584, 584, 584, 556, 1015, // ':'..'@'
    667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, // 'A'..'M'
    722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, // 'N'..'Z'
    278, 278, 278, 469, 556, 333, // '['..'`'
    556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, // 'a'..'m'
    556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, // 'n'..'z'
    334, 260, 334, 584, // '{'..'~'
];

pub fn text_width(text: &str, font_size: f64) -> f64 {
    let units: u32 = text
        .chars()
        .map(|c| match c as u32 {
            code @ 32..=126 => u32::from(ADVANCE[(code - 32) as usize]),
            _ => 556,
        })
        .sum();
    f64::from(units) * font_size / 1000.0
}

fn interpolate(stops: &[[u8; 3]; 9], t: f64) -> String {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let pos = t * 8.0;
    let i = (pos.floor() as usize).min(7);
    let frac = pos - i as f64;
    let channel = |k: usize| {
        let a = f64::from(stops[i][k]);
        let b = f64::from(stops[i + 1][k]);
        (a + (b - a) * frac).round() as u8
    };
    format!("#{:02x}{:02x}{:02x}", channel(0), channel(1), channel(2))
}

/// Color for `t` in `[0, 1]` on the sequential map.
pub fn sequential_color(t: f64) -> String {
    interpolate(&SEQUENTIAL, t)
}

/// Color for a correlation in `[-1, 1]`; the scale is fixed to that range.
pub fn diverging_color(r: f64) -> String {
    interpolate(&DIVERGING, (r + 1.0) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureKind {
    ConfusionHeatmap,
    RocPlot,
    ImportanceBars,
    CorrelationHeatmap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub kind: FigureKind,
    pub title: String,
    pub output: PathBuf,
    pub width: u32,
    pub height: u32,
}

impl FigureSpec {
    pub fn new(kind: FigureKind, title: impl Into<String>, output: impl Into<PathBuf>) -> Self {
        let (width, height) = match kind {
            FigureKind::ConfusionHeatmap | FigureKind::RocPlot => (640, 480),
            FigureKind::ImportanceBars => (800, 480),
            FigureKind::CorrelationHeatmap => (960, 800),
        };
        Self {
            kind,
            title: title.into(),
            output: output.into(),
            width,
            height,
        }
    }

    fn expect(&self, kind: FigureKind) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Config("figure dimensions must be positive".into()));
        }
        if self.kind != kind {
            return Err(Error::FigureKind {
                expected: format!("{kind:?}"),
                got: format!("{:?}", self.kind),
            });
        }
        Ok(())
    }
}

/// A rendered SVG document plus its JSON sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure {
    pub svg: String,
    pub sidecar: String,
}

impl Figure {
    /// Writes the SVG to `path` and the sidecar next to it with a `.json`
    /// extension.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, &self.svg).map_err(|e| Error::io(path, e))?;
        let side = path.with_extension("json");
        std::fs::write(&side, &self.sidecar).map_err(|e| Error::io(&side, e))
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct Svg {
    out: String,
}

#[derive(Clone, Copy)]
enum Anchor {
    Start,
    Middle,
    End,
}

impl Anchor {
    fn as_str(self) -> &'static str {
        match self {
            Anchor::Start => "start",
            Anchor::Middle => "middle",
            Anchor::End => "end",
        }
    }
}

impl Svg {
    fn new(width: u32, height: u32) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="{FONT}">"#
        );
        let _ = writeln!(
            out,
            r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
        );
        Self { out }
    }

    #[allow(clippy::too_many_arguments)]
    fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str, stroke: Option<&str>) {
        let stroke = stroke.map_or(String::new(), |s| format!(r#" stroke="{s}" stroke-width="1""#));
        let _ = writeln!(
            self.out,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"{stroke}/>"#,
            num(x),
            num(y),
            num(w),
            num(h)
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(
            self.out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn text(&mut self, class: &str, x: f64, y: f64, size: f64, anchor: Anchor, fill: &str, body: &str) {
        let _ = writeln!(
            self.out,
            r#"<text class="{class}" x="{}" y="{}" font-size="{}" text-anchor="{}" fill="{fill}">{}</text>"#,
            num(x),
            num(y),
            num(size),
            anchor.as_str(),
            escape(body)
        );
    }

    fn rotated_text(&mut self, class: &str, x: f64, y: f64, size: f64, anchor: Anchor, body: &str) {
        let _ = writeln!(
            self.out,
            r##"<text class="{class}" x="{x}" y="{y}" font-size="{}" text-anchor="{}" fill="#000000" transform="rotate(-90 {x} {y})">{}</text>"##,
            num(size),
            anchor.as_str(),
            escape(body),
            x = num(x),
            y = num(y),
        );
    }

    fn path(&mut self, class: &str, points: &[(f64, f64)], stroke: &str, width: f64, dash: Option<&str>) {
        let mut d = String::new();
        for (k, (x, y)) in points.iter().enumerate() {
            let _ = write!(d, "{}{},{}", if k == 0 { "M" } else { " L" }, num(*x), num(*y));
        }
        let dash = dash.map_or(String::new(), |s| format!(r#" stroke-dasharray="{s}""#));
        let _ = writeln!(
            self.out,
            r#"<path class="{class}" d="{d}" fill="none" stroke="{stroke}" stroke-width="{}"{dash}/>"#,
            num(width)
        );
    }

    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn sidecar<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct ConfusionPayload<'a> {
    title: &'a str,
    counts: [[u64; 2]; 2],
}

/// Annotated 2×2 heatmap, rows are true classes and columns predictions.
pub fn render_confusion(cm: &ConfusionMatrix, spec: &FigureSpec) -> Result<Figure> {
    spec.expect(FigureKind::ConfusionHeatmap)?;
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let (left, right, top, bottom) = (90.0, 30.0, 50.0, 70.0);
    let cell_w = (w - left - right) / 2.0;
    let cell_h = (h - top - bottom) / 2.0;
    let max = cm.counts.iter().flatten().copied().max().unwrap_or(0);

    let mut svg = Svg::new(spec.width, spec.height);
    svg.text(
        "title",
        w / 2.0,
        top / 2.0 + 6.0,
        16.0,
        Anchor::Middle,
        "#000000",
        &spec.title,
    );
    for (t, row) in cm.counts.iter().enumerate() {
        for (p, &count) in row.iter().enumerate() {
            let level = if max == 0 { 0.0 } else { count as f64 / max as f64 };
            let x = left + p as f64 * cell_w;
            let y = top + t as f64 * cell_h;
            svg.rect("cell", x, y, cell_w, cell_h, &sequential_color(level), None);
            let ink = if level > 0.5 { "#ffffff" } else { "#000000" };
            svg.text(
                "annotation",
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 7.0,
                20.0,
                Anchor::Middle,
                ink,
                &count.to_string(),
            );
        }
    }
    for k in 0..2 {
        let label = k.to_string();
        svg.text(
            "tick",
            left + (k as f64 + 0.5) * cell_w,
            top + 2.0 * cell_h + 20.0,
            12.0,
            Anchor::Middle,
            "#000000",
            &label,
        );
        svg.text(
            "tick",
            left - 10.0,
            top + (k as f64 + 0.5) * cell_h + 4.0,
            12.0,
            Anchor::End,
            "#000000",
            &label,
        );
    }
    svg.text(
        "axis-label",
        left + cell_w,
        h - 20.0,
        14.0,
        Anchor::Middle,
        "#000000",
        "Predicted Labels",
    );
    svg.rotated_text("axis-label", 30.0, top + cell_h, 14.0, Anchor::Middle, "True Labels");
    Ok(Figure {
        svg: svg.finish(),
        sidecar: sidecar(&ConfusionPayload {
            title: &spec.title,
            counts: cm.counts,
        })?,
    })
}

#[derive(Serialize)]
struct RocPayload<'a> {
    title: &'a str,
    fpr: &'a [f64],
    tpr: &'a [f64],
    thresholds: &'a [f64],
    auc: f64,
}

/// Legend text for a ROC curve, AUC to two decimals.
pub fn roc_legend(auc: f64) -> String {
    format!("ROC curve (area = {auc:.2})")
}

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        self.left + v / self.x_max * self.width
    }

    fn y(&self, v: f64) -> f64 {
        self.top + self.height - v / self.y_max * self.height
    }
}

/// Curve over the unit square with the dashed chance diagonal.
pub fn render_roc(curve: &RocCurve, spec: &FigureSpec) -> Result<Figure> {
    spec.expect(FigureKind::RocPlot)?;
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let frame = Frame {
        left: 70.0,
        top: 50.0,
        width: w - 70.0 - 20.0,
        height: h - 50.0 - 60.0,
        x_max: 1.0,
        y_max: 1.05,
    };
    let mut svg = Svg::new(spec.width, spec.height);
    svg.text("title", w / 2.0, 30.0, 16.0, Anchor::Middle, "#000000", &spec.title);
    svg.rect(
        "plot-area",
        frame.left,
        frame.top,
        frame.width,
        frame.height,
        "none",
        Some("#000000"),
    );
    for k in 0..=5 {
        let v = f64::from(k) * 0.2;
        let label = format!("{v:.1}");
        let (x, y) = (frame.x(v), frame.y(v));
        svg.line(
            x,
            frame.top + frame.height,
            x,
            frame.top + frame.height + 5.0,
            "#000000",
        );
        svg.text(
            "tick",
            x,
            frame.top + frame.height + 18.0,
            11.0,
            Anchor::Middle,
            "#000000",
            &label,
        );
        svg.line(frame.left - 5.0, y, frame.left, y, "#000000");
        svg.text("tick", frame.left - 8.0, y + 4.0, 11.0, Anchor::End, "#000000", &label);
    }
    svg.path(
        "reference",
        &[(frame.x(0.0), frame.y(0.0)), (frame.x(1.0), frame.y(1.0))],
        "#808080",
        2.0,
        Some("6,4"),
    );
    let points: Vec<(f64, f64)> = curve
        .fpr
        .iter()
        .zip(&curve.tpr)
        .map(|(&f, &t)| (frame.x(f), frame.y(t)))
        .collect();
    svg.path("roc-curve", &points, "#0000ff", 2.0, None);

    let legend = roc_legend(curve.auc);
    let legend_w = text_width(&legend, 12.0) + 50.0;
    let lx = frame.left + frame.width - legend_w - 10.0;
    let ly = frame.top + frame.height - 40.0;
    svg.rect("legend", lx, ly, legend_w, 30.0, "#ffffff", Some("#cccccc"));
    svg.path(
        "legend-line",
        &[(lx + 8.0, ly + 15.0), (lx + 38.0, ly + 15.0)],
        "#0000ff",
        2.0,
        None,
    );
    svg.text(
        "legend-text",
        lx + 44.0,
        ly + 19.0,
        12.0,
        Anchor::Start,
        "#000000",
        &legend,
    );

    svg.text(
        "axis-label",
        frame.left + frame.width / 2.0,
        h - 15.0,
        14.0,
        Anchor::Middle,
        "#000000",
        "False Positive Rate",
    );
    svg.rotated_text(
        "axis-label",
        20.0,
        frame.top + frame.height / 2.0,
        14.0,
        Anchor::Middle,
        "True Positive Rate",
    );
    Ok(Figure {
        svg: svg.finish(),
        sidecar: sidecar(&RocPayload {
            title: &spec.title,
            fpr: &curve.fpr,
            tpr: &curve.tpr,
            thresholds: &curve.thresholds,
            auc: curve.auc,
        })?,
    })
}

/// Tick step from the 1-2-5 series giving about five intervals up to `max`.
fn nice_step(max: f64) -> f64 {
    if max.is_nan() || max <= 0.0 {
        return 1.0;
    }
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

#[derive(Serialize)]
struct ImportanceEntry<'a> {
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct ImportancePayload<'a> {
    title: &'a str,
    entries: Vec<ImportanceEntry<'a>>,
}

/// Horizontal bars, first entry at the top, lengths proportional to value.
pub fn render_importances(top: &[(String, f64)], spec: &FigureSpec) -> Result<Figure> {
    spec.expect(FigureKind::ImportanceBars)?;
    if top.is_empty() {
        return Err(Error::EmptyPlot);
    }
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let label_size = 11.0;
    let widest = top.iter().map(|(n, _)| text_width(n, label_size)).fold(0.0, f64::max);
    let left = (widest + 20.0).max(60.0).min(w / 2.0);
    let max = top.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let step = nice_step(max);
    let x_max = if max > 0.0 { (max / step).ceil() * step } else { 1.0 };
    let frame = Frame {
        left,
        top: 50.0,
        width: w - left - 30.0,
        height: h - 50.0 - 60.0,
        x_max,
        y_max: 1.0,
    };
    let slot = frame.height / top.len() as f64;

    let mut svg = Svg::new(spec.width, spec.height);
    svg.text("title", w / 2.0, 30.0, 16.0, Anchor::Middle, "#000000", &spec.title);
    svg.rect(
        "plot-area",
        frame.left,
        frame.top,
        frame.width,
        frame.height,
        "none",
        Some("#000000"),
    );
    let mut k = 0.0;
    while k * step <= x_max + step * 1e-9 {
        let v = k * step;
        let x = frame.x(v);
        svg.line(
            x,
            frame.top + frame.height,
            x,
            frame.top + frame.height + 5.0,
            "#000000",
        );
        svg.text(
            "tick",
            x,
            frame.top + frame.height + 18.0,
            11.0,
            Anchor::Middle,
            "#000000",
            &format_tick(v, step),
        );
        k += 1.0;
    }
    for (i, (name, value)) in top.iter().enumerate() {
        let y = frame.top + i as f64 * slot;
        let bar_h = slot * 0.8;
        svg.rect(
            "bar",
            frame.left,
            y + slot * 0.1,
            frame.x(*value) - frame.left,
            bar_h,
            "#1f77b4",
            None,
        );
        svg.text(
            "bar-label",
            frame.left - 6.0,
            y + slot / 2.0 + 4.0,
            label_size,
            Anchor::End,
            "#000000",
            name,
        );
    }
    svg.text(
        "axis-label",
        frame.left + frame.width / 2.0,
        h - 15.0,
        14.0,
        Anchor::Middle,
        "#000000",
        "Relative Importance",
    );
    Ok(Figure {
        svg: svg.finish(),
        sidecar: sidecar(&ImportancePayload {
            title: &spec.title,
            entries: top
                .iter()
                .map(|(name, value)| ImportanceEntry { name, value: *value })
                .collect(),
        })?,
    })
}

fn format_tick(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10()).ceil() as usize
    };
    format!("{v:.decimals$}")
}

#[derive(Serialize)]
struct CorrelationPayload<'a> {
    title: &'a str,
    names: &'a [String],
    values: &'a [Vec<Option<f64>>],
}

/// Unannotated heatmap on a fixed [−1, 1] diverging scale with a colour bar.
pub fn render_correlation(corr: &CorrelationMatrix, spec: &FigureSpec) -> Result<Figure> {
    spec.expect(FigureKind::CorrelationHeatmap)?;
    let n = corr.names.len();
    if n == 0 {
        return Err(Error::EmptyPlot);
    }
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let bar_space = 90.0;
    let (top, right) = (50.0, 10.0);
    // the label font depends on cell size, which depends on the label margin
    let mut font = 11.0;
    let mut margin = 0.0;
    let mut cell = 0.0;
    for _ in 0..3 {
        let widest = corr.names.iter().map(|s| text_width(s, font)).fold(0.0, f64::max);
        margin = (widest + 12.0).min(w.min(h) / 3.0);
        cell = ((w - margin - bar_space - right) / n as f64).min((h - margin - top) / n as f64);
        font = (cell * 0.8).clamp(3.0, 11.0);
    }
    let left = margin;
    let grid = cell * n as f64;

    let mut svg = Svg::new(spec.width, spec.height);
    svg.text("title", w / 2.0, 30.0, 16.0, Anchor::Middle, "#000000", &spec.title);
    for i in 0..n {
        for j in 0..n {
            let (fill, class) = match corr.values[i][j] {
                Some(r) => (diverging_color(r), "cell"),
                None => (UNDEFINED_FILL.to_string(), "cell undefined"),
            };
            svg.rect(
                class,
                left + j as f64 * cell,
                top + i as f64 * cell,
                cell,
                cell,
                &fill,
                None,
            );
        }
    }
    for (k, name) in corr.names.iter().enumerate() {
        let c = (k as f64 + 0.5) * cell;
        svg.text(
            "row-label",
            left - 4.0,
            top + c + font * 0.35,
            font,
            Anchor::End,
            "#000000",
            name,
        );
        svg.rotated_text(
            "col-label",
            left + c + font * 0.35,
            top + grid + 4.0,
            font,
            Anchor::End,
            name,
        );
    }

    let bx = left + grid + 25.0;
    let bar_h = grid.max(100.0).min(h - top - 20.0);
    svg.raw(r#"<defs><linearGradient id="diverging" x1="0" y1="1" x2="0" y2="0">"#);
    for (k, stop) in DIVERGING.iter().enumerate() {
        svg.raw(&format!(
            r##"<stop offset="{}" stop-color="#{:02x}{:02x}{:02x}"/>"##,
            num(k as f64 / 8.0),
            stop[0],
            stop[1],
            stop[2]
        ));
    }
    svg.raw("</linearGradient></defs>");
    svg.rect("colorbar", bx, top, 18.0, bar_h, "url(#diverging)", Some("#000000"));
    for k in 0..=4 {
        let v = -1.0 + f64::from(k) * 0.5;
        let y = top + bar_h - (v + 1.0) / 2.0 * bar_h;
        svg.line(bx + 18.0, y, bx + 23.0, y, "#000000");
        svg.text(
            "tick",
            bx + 26.0,
            y + 4.0,
            10.0,
            Anchor::Start,
            "#000000",
            &format!("{v:.1}"),
        );
    }
    Ok(Figure {
        svg: svg.finish(),
        sidecar: sidecar(&CorrelationPayload {
            title: &spec.title,
            names: &corr.names,
            values: &corr.values,
        })?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(1.256), "1.26");
        assert_eq!(num(-0.001), "0");
        assert_eq!(num(10.50), "10.5");
    }

    #[test]
    fn color_endpoints() {
        assert_eq!(diverging_color(1.0), "#b2182b");
        assert_eq!(diverging_color(-1.0), "#2166ac");
        assert_eq!(diverging_color(0.0), "#f7f7f7");
        assert_eq!(diverging_color(5.0), "#b2182b");
        assert_eq!(sequential_color(0.0), "#f7fbff");
        assert_eq!(sequential_color(1.0), "#08306b");
    }

    #[test]
    fn kind_mismatch() {
        let cm = ConfusionMatrix {
            counts: [[1, 0], [0, 1]],
        };
        let spec = FigureSpec::new(FigureKind::RocPlot, "x", "x.svg");
        assert!(matches!(render_confusion(&cm, &spec), Err(Error::FigureKind { .. })));
    }

    #[test]
    fn empty_importances() {
        let spec = FigureSpec::new(FigureKind::ImportanceBars, "x", "x.svg");
        assert!(matches!(render_importances(&[], &spec), Err(Error::EmptyPlot)));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }

    #[test]
    fn widths_from_table() {
        assert_eq!(text_width("0", 10.0), 5.56);
        assert!(text_width("W", 12.0) > text_width("i", 12.0));
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(0.6), 0.2);
        assert_eq!(nice_step(0.35), 0.1);
        assert_eq!(nice_step(1.0), 0.2);
    }
}
