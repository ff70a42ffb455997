//! Seed-band comparison against frozen scikit-learn reference metrics.

use std::path::Path;
use std::time::Instant;

use serde::Deserialize;

use flowids::pipeline::{train, ModelKind, PipelineConfig};

pub const SEEDS: [u64; 5] = [42, 43, 44, 45, 46];

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct OracleMetrics {
    pub accuracy: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Oracle {
    pub rows: usize,
    pub logistic: OracleMetrics,
    pub forest: OracleMetrics,
}

impl Oracle {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Run {
    pub seed: u64,
    pub accuracy: f64,
    pub auc: f64,
    pub seconds: f64,
}

/// Trains and evaluates `kind` once per seed with otherwise default
/// settings.
pub fn seed_runs(data: &Path, kind: ModelKind) -> Result<Vec<Run>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    SEEDS
        .iter()
        .map(|&seed| {
            let config = PipelineConfig {
                data: data.to_path_buf(),
                seed,
                model: kind,
                out: dir.path().join(format!("{}-{seed}", kind.dir_name())),
                ..PipelineConfig::default()
            };
            let start = Instant::now();
            let outcome = train(&config).map_err(|e| e.to_string())?;
            Ok(Run {
                seed,
                accuracy: outcome.evaluation.report.accuracy,
                auc: outcome.evaluation.roc.auc,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Band {
    pub min: f64,
    pub max: f64,
}

impl Band {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        values.into_iter().fold(
            Band {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            },
            |b, v| Band {
                min: b.min.min(v),
                max: b.max.max(v),
            },
        )
    }

    /// Whether `value` lies in `[min − tol, max + tol]`.
    pub fn admits(&self, value: f64, tol: f64) -> bool {
        value >= self.min - tol && value <= self.max + tol
    }
}

/// One-line verdict for a seed band against a reference value.
pub fn verdict(what: &str, band: Band, oracle: f64, tol: f64) -> (bool, String) {
    let ok = band.admits(oracle, tol);
    (
        ok,
        format!(
            "{what}: oracle {oracle:.4}, artifact [{:.4}, {:.4}] ± {tol}",
            band.min, band.max
        ),
    )
}
