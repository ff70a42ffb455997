//! Binary classification metrics and Pearson correlation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataframe::{DataFrame, LabelVector};
use crate::error::{Error, Result};
use crate::preprocess::{EncoderModel, FeatureMatrix, UnknownPolicy};

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Number of true samples per class.
    pub fn supports(&self) -> [u64; 2] {
        [
            self.counts[0][0] + self.counts[0][1],
            self.counts[1][0] + self.counts[1][1],
        ]
    }

    pub fn trace(&self) -> u64 {
        self.counts[0][0] + self.counts[1][1]
    }

    pub fn to_csv(&self) -> String {
        let c = &self.counts;
        format!(
            "true\\predicted,0,1\n0,{},{}\n1,{},{}\n",
            c[0][0], c[0][1], c[1][0], c[1][1]
        )
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a == 0 {
        return Err(Error::NotEnoughRows { needed: 1, got: 0 });
    }
    Ok(())
}

pub fn confusion(y_true: &LabelVector, y_pred: &LabelVector) -> Result<ConfusionMatrix> {
    check_lengths(y_true.len(), y_pred.len())?;
    let mut counts = [[0u64; 2]; 2];
    for (&t, &p) in y_true.as_slice().iter().zip(y_pred.as_slice()) {
        counts[t as usize][p as usize] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub classes: [ClassMetrics; 2],
    pub accuracy: f64,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
    pub total: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ClassReport {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Self {
        let c = &cm.counts;
        let supports = cm.supports();
        let total = cm.total();
        let classes = [0usize, 1].map(|k| {
            let tp = c[k][k];
            let predicted = c[0][k] + c[1][k];
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, supports[k]);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support: supports[k],
            }
        });
        let avg = |weights: [f64; 2]| Averages {
            precision: weights[0] * classes[0].precision + weights[1] * classes[1].precision,
            recall: weights[0] * classes[0].recall + weights[1] * classes[1].recall,
            f1: weights[0] * classes[0].f1 + weights[1] * classes[1].f1,
        };
        Self {
            classes,
            accuracy: ratio(cm.trace(), total),
            macro_avg: avg([0.5, 0.5]),
            weighted_avg: avg([ratio(supports[0], total), ratio(supports[1], total)]),
            total,
        }
    }
}

pub fn class_report(y_true: &LabelVector, y_pred: &LabelVector) -> Result<ClassReport> {
    Ok(ClassReport::from_confusion(&confusion(y_true, y_pred)?))
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>14} {:>10} {:>10} {:>10} {:>10}",
            "", "precision", "recall", "f1-score", "support"
        )?;
        writeln!(f)?;
        for (k, c) in self.classes.iter().enumerate() {
            writeln!(
                f,
                "{:>14} {:>10.4} {:>10.4} {:>10.4} {:>10}",
                k, c.precision, c.recall, c.f1, c.support
            )?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "{:>14} {:>10} {:>10} {:>10.4} {:>10}",
            "accuracy", "", "", self.accuracy, self.total
        )?;
        for (name, a) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            writeln!(
                f,
                "{:>14} {:>10.4} {:>10.4} {:>10.4} {:>10}",
                name, a.precision, a.recall, a.f1, self.total
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub fpr: Vec<f64>,
    pub tpr: Vec<f64>,
    /// Descending. The first entry is a sentinel above every score and
    /// pairs with the `(0, 0)` point.
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

/// ROC curve over the distinct scores (predict 1 iff `score >= θ`), with
/// the area computed by the trapezoidal rule.
pub fn roc(y_true: &LabelVector, scores: &[f64]) -> Result<RocCurve> {
    check_lengths(y_true.len(), scores.len())?;
    if !y_true.has_both_classes() {
        return Err(Error::SingleClass);
    }
    if let Some(row) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite { row, col: 0 });
    }
    let (neg, pos) = y_true.class_counts();
    let labels = y_true.as_slice();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let max = scores[order[0]];
    let sentinel = if max + 1.0 > max { max + 1.0 } else { max.next_up() };
    let mut thresholds = vec![sentinel];
    let mut tps = vec![0u64];
    let mut fps = vec![0u64];
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        thresholds.push(score);
        tps.push(tp);
        fps.push(fp);
    }

    // twice the area in units of one positive × one negative
    let mut area2: u128 = 0;
    for k in 1..tps.len() {
        area2 += u128::from(fps[k] - fps[k - 1]) * u128::from(tps[k] + tps[k - 1]);
    }
    let auc = area2 as f64 / (2.0 * pos as f64 * neg as f64);

    Ok(RocCurve {
        fpr: fps.iter().map(|&f| f as f64 / neg as f64).collect(),
        tpr: tps.iter().map(|&t| t as f64 / pos as f64).collect(),
        thresholds,
        auc,
    })
}

/// Symmetric correlation matrix. `None` marks pairs involving a
/// zero-variance column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&csv_field(""));
        for n in &self.names {
            out.push(',');
            out.push_str(&csv_field(n));
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.values) {
            out.push_str(&csv_field(name));
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Pearson correlation of every column pair.
pub fn pearson(m: &FeatureMatrix) -> Result<CorrelationMatrix> {
    if m.rows() < 2 {
        return Err(Error::NotEnoughRows {
            needed: 2,
            got: m.rows(),
        });
    }
    let d = m.cols();
    let n = m.rows() as f64;
    let columns: Vec<Vec<f64>> = (0..d).map(|j| m.column(j)).collect();
    let centered: Vec<Option<Vec<f64>>> = columns
        .iter()
        .map(|c| {
            let first = c[0];
            if c.iter().all(|&v| v == first) {
                return None;
            }
            let mean = c.iter().sum::<f64>() / n;
            Some(c.iter().map(|v| v - mean).collect())
        })
        .collect();
    let norms: Vec<Option<f64>> = centered
        .iter()
        .map(|c| c.as_ref().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()))
        .collect();

    let mut values = vec![vec![None; d]; d];
    for i in 0..d {
        let (Some(ci), Some(ni)) = (&centered[i], norms[i]) else {
            continue;
        };
        values[i][i] = Some(1.0);
        for j in i + 1..d {
            let (Some(cj), Some(nj)) = (&centered[j], norms[j]) else {
                continue;
            };
            let cov: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            let r = (cov / (ni * nj)).clamp(-1.0, 1.0);
            values[i][j] = Some(r);
            values[j][i] = Some(r);
        }
    }
    Ok(CorrelationMatrix {
        names: m.names().to_vec(),
        values,
    })
}

/// Selects the categorical columns plus the label, one-hot expands the
/// categorical ones and passes the label through as the last column.
pub fn dummify_for_correlation<S: AsRef<str>>(
    frame: &DataFrame,
    categorical: &[S],
    label: &str,
) -> Result<FeatureMatrix> {
    let mut names: Vec<&str> = categorical.iter().map(AsRef::as_ref).collect();
    names.push(label);
    let selected = frame.select(&names)?;
    let encoder = EncoderModel::fit(&selected)?;
    encoder.transform(&selected, UnknownPolicy::Strict)
}
