use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("header is missing declared column `{0}`")]
    MissingColumn(String),

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("row {row}, column `{column}`: `{token}` is not a finite number")]
    BadNumber { row: usize, column: String, token: String },

    #[error("row {row}, column `{column}`: empty categorical token")]
    EmptyCategory { row: usize, column: String },

    #[error("row {row}: label value `{value}` is not 0 or 1")]
    BadLabel { row: usize, value: String },

    #[error("frame has {0} label columns, expected exactly one")]
    LabelCount(usize),

    #[error("column `{column}` has {got} values, expected {expected}")]
    RaggedColumn {
        column: String,
        got: usize,
        expected: usize,
    },

    #[error("frame has no rows")]
    EmptyFrame,

    #[error("column `{column}`: category `{category}` was not seen during fitting")]
    UnknownCategory { column: String, category: String },

    #[error("column `{0}` has the wrong kind for this operation")]
    ColumnKind(String),

    #[error("test fraction {0} is outside (0, 1)")]
    BadFraction(f64),

    #[error("cannot split {rows} rows with test fraction {fraction}: a partition would be empty")]
    TooFewRows { rows: usize, fraction: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("feature width mismatch: model expects {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("labels contain a single class; both 0 and 1 are required")]
    SingleClass,

    #[error("matrix contains a non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("gini impurity of an empty node is undefined")]
    EmptyNode,

    #[error("need at least {needed} rows, got {got}")]
    NotEnoughRows { needed: usize, got: usize },

    #[error("figure kind mismatch: expected {expected}, got {got}")]
    FigureKind { expected: String, got: String },

    #[error("nothing to plot")]
    EmptyPlot,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
