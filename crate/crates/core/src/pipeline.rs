//! End-to-end workflows behind the command line: train, evaluate, report
//! and run-all.
//!
//! Output files (all deterministic for a given config and input):
//!
//! * `model.json`: format version, pipeline config, encoder and model
//! * `manifest.json`: source rows of the test fold plus its metrics
//! * `metrics.json`: confusion matrix, class report and ROC curve
//! * `confusion.svg`, `roc.svg`, `importances.svg` (forest only),
//!   `correlation.svg`, each with a `.json` sidecar

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataframe::{load_csv, CsvSchema, DataFrame, LabelVector};
use crate::error::{Error, Result};
use crate::forest::{top_k_importances, ForestConfig, ForestModel};
use crate::linear::{LogisticConfig, LogisticModel};
use crate::metrics::{self, ClassReport, ConfusionMatrix, RocCurve};
use crate::preprocess::{EncoderModel, FeatureMatrix, UnknownPolicy};
use crate::report::{self, FigureKind, FigureSpec};

pub const FORMAT_VERSION: u32 = 1;
pub const TOP_IMPORTANCES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "logreg")]
    Logistic,
    #[serde(rename = "rf")]
    Forest,
}

impl ModelKind {
    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Logistic => "Logistic Regression",
            ModelKind::Forest => "Random Forest",
        }
    }

    pub fn dir_name(self) -> &'static str {
        match self {
            ModelKind::Logistic => "logreg",
            ModelKind::Forest => "rf",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logreg" => Ok(ModelKind::Logistic),
            "rf" => Ok(ModelKind::Forest),
            other => Err(Error::Config(format!(
                "unknown model `{other}` (expected logreg or rf)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub data: PathBuf,
    pub drop: Vec<String>,
    pub categorical: Vec<String>,
    pub label: String,
    pub test_fraction: f64,
    /// Drives both the split and the forest.
    pub seed: u64,
    pub model: ModelKind,
    pub logistic: LogisticConfig,
    /// `forest.seed` is overwritten by `seed` when training.
    pub forest: ForestConfig,
    pub out: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            data: PathBuf::new(),
            drop: vec!["id".into(), "attack_cat".into()],
            categorical: vec!["proto".into(), "service".into(), "state".into()],
            label: "label".into(),
            test_fraction: 0.2,
            seed: 42,
            model: ModelKind::Forest,
            logistic: LogisticConfig::default(),
            forest: ForestConfig::default(),
            out: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    /// Reads a TOML file (or JSON when the extension is `.json`); missing
    /// keys keep their defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            Ok(serde_json::from_str(&text)?)
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.as_os_str().is_empty() {
            return Err(Error::Config("no data path given".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::BadFraction(self.test_fraction));
        }
        for name in &self.drop {
            if self.categorical.contains(name) || *name == self.label {
                return Err(Error::Config(format!("`{name}` is both dropped and used")));
            }
        }
        if self.categorical.contains(&self.label) {
            return Err(Error::Config(format!(
                "`{}` is both categorical and the label",
                self.label
            )));
        }
        Ok(())
    }

    fn schema(&self) -> CsvSchema {
        CsvSchema::new(self.categorical.iter().cloned(), self.label.clone()).with_skip(self.drop.iter().cloned())
    }

    fn forest_config(&self) -> ForestConfig {
        ForestConfig {
            seed: self.seed,
            ..self.forest.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Split,
    Encode,
    Train,
    Evaluate,
    Report,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Split => "split",
            Stage::Encode => "encode",
            Stage::Train => "train",
            Stage::Evaluate => "evaluate",
            Stage::Report => "report",
            Stage::Write => "write",
        };
        f.write_str(s)
    }
}

/// An error tagged with the pipeline stage that produced it.
#[derive(Debug, thiserror::Error)]
#[error("[{stage}] {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

pub type PipelineResult<T> = std::result::Result<T, PipelineError>;

trait AtStage<T> {
    fn at(self, stage: Stage) -> PipelineResult<T>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> PipelineResult<T> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Logistic(LogisticModel),
    Forest(ForestModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Logistic(_) => ModelKind::Logistic,
            TrainedModel::Forest(_) => ModelKind::Forest,
        }
    }

    pub fn predict_proba(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        match self {
            TrainedModel::Logistic(m) => m.predict_proba(x),
            TrainedModel::Forest(m) => m.predict_proba(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub config: PipelineConfig,
    pub encoder: EncoderModel,
    pub model: TrainedModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub accuracy: f64,
    pub auc: f64,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub data: PathBuf,
    pub n_rows: usize,
    pub seed: u64,
    pub test_fraction: f64,
    pub test_indices: Vec<usize>,
    pub test_metrics: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub model: ModelKind,
    pub n_samples: usize,
    pub confusion: ConfusionMatrix,
    pub report: ClassReport,
    pub roc: RocCurve,
}

impl Evaluation {
    pub fn compute(model: ModelKind, y: &LabelVector, proba: &[f64]) -> Result<Self> {
        let pred = crate::linear::threshold_labels(proba, 0.5)?;
        let confusion = metrics::confusion(y, &pred)?;
        Ok(Self {
            model,
            n_samples: y.len(),
            report: ClassReport::from_confusion(&confusion),
            roc: metrics::roc(y, proba)?,
            confusion,
        })
    }

    pub fn summary(&self) -> MetricSummary {
        MetricSummary {
            accuracy: self.report.accuracy,
            auc: self.roc.auc,
            confusion: self.confusion,
        }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Classification Report for {}:", self.model.display_name())?;
        write!(f, "{}", self.report)?;
        writeln!(f)?;
        let c = &self.confusion.counts;
        writeln!(f, "confusion: [[{}, {}], [{}, {}]]", c[0][0], c[0][1], c[1][0], c[1][1])?;
        writeln!(f, "accuracy: {}", self.report.accuracy)?;
        writeln!(f, "auc: {}", self.roc.auc)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> PipelineResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(Error::from)
        .at(Stage::Write)?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Error::io(path, e))
        .at(Stage::Write)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, stage: Stage) -> PipelineResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path, e))
        .at(stage)?;
    serde_json::from_str(&text).map_err(Error::from).at(stage)
}

fn create_dir(path: &Path) -> PipelineResult<()> {
    std::fs::create_dir_all(path)
        .map_err(|e| Error::io(path, e))
        .at(Stage::Write)
}

/// Load, drop columns and separate the label. Dropped columns are skipped
/// while reading (so they may hold free text) after checking they exist.
fn load_features(config: &PipelineConfig, data: &Path) -> PipelineResult<(DataFrame, DataFrame, LabelVector)> {
    let frame = load_csv(data, &config.schema()).at(Stage::Load)?;
    let (x, y) = frame.split_xy().at(Stage::Split)?;
    Ok((frame, x, y))
}

pub fn load_model(path: &Path) -> PipelineResult<ModelFile> {
    let file: ModelFile = read_json(path, Stage::Load)?;
    if file.format_version != FORMAT_VERSION {
        return Err(PipelineError {
            stage: Stage::Load,
            source: Error::Config(format!("unsupported model format version {}", file.format_version)),
        });
    }
    Ok(file)
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model_path: PathBuf,
    pub manifest_path: PathBuf,
    pub model: ModelFile,
    pub manifest: Manifest,
    pub evaluation: Evaluation,
}

/// load → drop → split_xy → fit encoder → transform → shuffle split →
/// fit, then writes `model.json` and `manifest.json` into `config.out`.
pub fn train(config: &PipelineConfig) -> PipelineResult<TrainOutcome> {
    config.validate().at(Stage::Config)?;
    let (_, x_frame, y) = load_features(config, &config.data)?;
    let encoder = EncoderModel::fit(&x_frame).at(Stage::Encode)?;
    let x = encoder.transform(&x_frame, UnknownPolicy::Strict).at(Stage::Encode)?;
    let split = crate::preprocess::train_test_split(&x, &y, config.test_fraction, config.seed).at(Stage::Split)?;

    let model = match config.model {
        ModelKind::Logistic => TrainedModel::Logistic(
            LogisticModel::fit(&split.train_x, &split.train_y, &config.logistic).at(Stage::Train)?,
        ),
        ModelKind::Forest => TrainedModel::Forest(
            ForestModel::fit(&split.train_x, &split.train_y, &config.forest_config()).at(Stage::Train)?,
        ),
    };
    let proba = model.predict_proba(&split.test_x).at(Stage::Evaluate)?;
    let evaluation = Evaluation::compute(config.model, &split.test_y, &proba).at(Stage::Evaluate)?;

    let model_file = ModelFile {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        encoder,
        model,
    };
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        data: config.data.clone(),
        n_rows: x.rows(),
        seed: config.seed,
        test_fraction: config.test_fraction,
        test_indices: split.test_indices,
        test_metrics: evaluation.summary(),
    };
    create_dir(&config.out)?;
    let model_path = config.out.join("model.json");
    let manifest_path = config.out.join("manifest.json");
    write_json(&model_path, &model_file)?;
    write_json(&manifest_path, &manifest)?;
    Ok(TrainOutcome {
        model_path,
        manifest_path,
        model: model_file,
        manifest,
        evaluation,
    })
}

/// Rows to evaluate a saved model on.
#[derive(Debug, Clone)]
pub enum EvalSource {
    /// The test fold recorded at training time. `data` overrides the
    /// manifest's data path.
    Manifest { path: PathBuf, data: Option<PathBuf> },
    /// Every row of a CSV with the training schema.
    Data(PathBuf),
}

/// Evaluates a saved model and writes `metrics.json` to `out`.
pub fn evaluate(
    model_path: &Path,
    source: &EvalSource,
    policy: Option<UnknownPolicy>,
    out: &Path,
) -> PipelineResult<Evaluation> {
    let file = load_model(model_path)?;
    let config = &file.config;
    let (x, y) = match source {
        EvalSource::Manifest { path, data } => {
            let manifest: Manifest = read_json(path, Stage::Load)?;
            let data = data.as_ref().unwrap_or(&manifest.data);
            let (_, x_frame, y) = load_features(config, data)?;
            if x_frame.row_count() != manifest.n_rows {
                return Err(PipelineError {
                    stage: Stage::Evaluate,
                    source: Error::LengthMismatch {
                        left: x_frame.row_count(),
                        right: manifest.n_rows,
                    },
                });
            }
            if let Some(&bad) = manifest.test_indices.iter().find(|&&i| i >= manifest.n_rows) {
                return Err(PipelineError {
                    stage: Stage::Evaluate,
                    source: Error::Config(format!("manifest row {bad} is out of range")),
                });
            }
            let x = file
                .encoder
                .transform(&x_frame, policy.unwrap_or(UnknownPolicy::Strict))
                .at(Stage::Encode)?;
            (x.select_rows(&manifest.test_indices), y.select(&manifest.test_indices))
        }
        EvalSource::Data(path) => {
            let (_, x_frame, y) = load_features(config, path)?;
            let x = file
                .encoder
                .transform(&x_frame, policy.unwrap_or(UnknownPolicy::AllZeros))
                .at(Stage::Encode)?;
            (x, y)
        }
    };
    let proba = file.model.predict_proba(&x).at(Stage::Evaluate)?;
    let evaluation = Evaluation::compute(file.model.kind(), &y, &proba).at(Stage::Evaluate)?;
    create_dir(out)?;
    write_json(&out.join("metrics.json"), &evaluation)?;
    Ok(evaluation)
}

#[derive(Debug, Clone, Default)]
pub struct ReportOutcome {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Renders the figures for a saved model and its metrics into `out`.
/// The correlation heatmap is computed from `data`, or the training data
/// path recorded in the model file.
pub fn report(
    model_path: &Path,
    metrics_path: &Path,
    out: &Path,
    data: Option<&Path>,
) -> PipelineResult<ReportOutcome> {
    let file = load_model(model_path)?;
    let evaluation: Evaluation = read_json(metrics_path, Stage::Load)?;
    let config = &file.config;
    let name = file.model.kind().display_name();
    create_dir(out)?;
    let mut outcome = ReportOutcome::default();
    let save = |figure: report::Figure, spec: &FigureSpec, outcome: &mut ReportOutcome| -> PipelineResult<()> {
        figure.save(&spec.output).at(Stage::Write)?;
        outcome.written.push(spec.output.clone());
        outcome.written.push(spec.output.with_extension("json"));
        Ok(())
    };

    let spec = FigureSpec::new(
        FigureKind::ConfusionHeatmap,
        format!("Confusion Matrix for {name}"),
        out.join("confusion.svg"),
    );
    save(
        report::render_confusion(&evaluation.confusion, &spec).at(Stage::Report)?,
        &spec,
        &mut outcome,
    )?;

    let spec = FigureSpec::new(
        FigureKind::RocPlot,
        format!("Receiver Operating Characteristic (ROC) Curve for {name}"),
        out.join("roc.svg"),
    );
    save(
        report::render_roc(&evaluation.roc, &spec).at(Stage::Report)?,
        &spec,
        &mut outcome,
    )?;

    match &file.model {
        TrainedModel::Forest(forest) => {
            let fi = forest.feature_importances();
            let top = top_k_importances(&fi.values, &fi.names, TOP_IMPORTANCES);
            let spec = FigureSpec::new(
                FigureKind::ImportanceBars,
                format!("Feature Importances for {name}"),
                out.join("importances.svg"),
            );
            save(
                report::render_importances(&top, &spec).at(Stage::Report)?,
                &spec,
                &mut outcome,
            )?;
        }
        TrainedModel::Logistic(_) => outcome
            .warnings
            .push(format!("{name} has no feature importances; skipping importances.svg")),
    }

    let data = data.unwrap_or(&config.data);
    let (frame, _, _) = load_features(config, data)?;
    let dummies = metrics::dummify_for_correlation(&frame, &config.categorical, &config.label).at(Stage::Report)?;
    let corr = metrics::pearson(&dummies).at(Stage::Report)?;
    let spec = FigureSpec::new(
        FigureKind::CorrelationHeatmap,
        "Correlation Heatmap",
        out.join("correlation.svg"),
    );
    save(
        report::render_correlation(&corr, &spec).at(Stage::Report)?,
        &spec,
        &mut outcome,
    )?;
    Ok(outcome)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kind: ModelKind,
    pub dir: PathBuf,
    pub evaluation: Evaluation,
    pub report: ReportOutcome,
}

/// Trains, evaluates and reports both models into `<out>/logreg` and
/// `<out>/rf`. Stops at the first failing stage.
pub fn run_all(config: &PipelineConfig) -> PipelineResult<Vec<RunOutcome>> {
    config.validate().at(Stage::Config)?;
    let mut outcomes = Vec::new();
    for kind in [ModelKind::Logistic, ModelKind::Forest] {
        let dir = config.out.join(kind.dir_name());
        let cfg = PipelineConfig {
            model: kind,
            out: dir.clone(),
            ..config.clone()
        };
        let trained = train(&cfg)?;
        let evaluation = evaluate(
            &trained.model_path,
            &EvalSource::Manifest {
                path: trained.manifest_path.clone(),
                data: None,
            },
            None,
            &dir,
        )?;
        let report = report(&trained.model_path, &dir.join("metrics.json"), &dir, None)?;
        outcomes.push(RunOutcome {
            kind,
            dir,
            evaluation,
            report,
        });
    }
    Ok(outcomes)
}
