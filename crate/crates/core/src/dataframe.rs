//! Column-major table of flow records.
//!
//! A [`DataFrame`] is built once (usually by [`load_csv`]) and never mutated;
//! every operation returns a new frame. Column roles are assigned by name
//! rather than inferred: the caller names the categorical columns and the
//! label column, and everything else is numeric.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnKind {
    Categorical,
    Numeric,
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Raw values of one column. Categorical columns hold text; numeric and
/// label columns hold 64-bit reals.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Text(Vec<String>),
    Real(Vec<f64>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Text(v) => v.len(),
            ColumnData::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    spec: ColumnSpec,
    data: ColumnData,
}

impl Column {
    pub fn categorical(name: impl Into<String>, values: Vec<String>) -> Self {
        Self {
            spec: ColumnSpec::new(name, ColumnKind::Categorical),
            data: ColumnData::Text(values),
        }
    }

    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            spec: ColumnSpec::new(name, ColumnKind::Numeric),
            data: ColumnData::Real(values),
        }
    }

    pub fn label(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            spec: ColumnSpec::new(name, ColumnKind::Label),
            data: ColumnData::Real(values),
        }
    }

    pub fn spec(&self) -> &ColumnSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn kind(&self) -> ColumnKind {
        self.spec.kind
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn as_text(&self) -> Option<&[String]> {
        match &self.data {
            ColumnData::Text(v) => Some(v),
            ColumnData::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.data {
            ColumnData::Real(v) => Some(v),
            ColumnData::Text(_) => None,
        }
    }
}

/// Binary class ids, one per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelVector(Vec<u8>);

impl LabelVector {
    /// Fails if any value is not exactly 0 or 1.
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if let Some((row, v)) = values.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(Error::BadLabel {
                row: row + 1,
                value: v.to_string(),
            });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.0.iter().filter(|&&v| v == 1).count();
        (self.0.len() - pos, pos)
    }

    pub fn has_both_classes(&self) -> bool {
        let (neg, pos) = self.class_counts();
        neg > 0 && pos > 0
    }

    pub fn select(&self, indices: &[usize]) -> LabelVector {
        LabelVector(indices.iter().map(|&i| self.0[i]).collect())
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

/// Whether [`DataFrame::drop_columns`] rejects names it does not know.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DropMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataFrame {
    columns: Vec<Column>,
    row_count: usize,
}

impl DataFrame {
    /// Validates column lengths, name uniqueness and value constraints.
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let row_count = columns.first().map_or(0, |c| c.data.len());
        let mut seen = HashSet::new();
        for col in &columns {
            if !seen.insert(col.name()) {
                return Err(Error::DuplicateColumn(col.name().to_string()));
            }
            if col.data.len() != row_count {
                return Err(Error::RaggedColumn {
                    column: col.name().to_string(),
                    got: col.data.len(),
                    expected: row_count,
                });
            }
            match (&col.spec.kind, &col.data) {
                (ColumnKind::Categorical, ColumnData::Text(values)) => {
                    if let Some(row) = values.iter().position(|v| v.is_empty()) {
                        return Err(Error::EmptyCategory {
                            row: row + 1,
                            column: col.name().to_string(),
                        });
                    }
                }
                (ColumnKind::Numeric | ColumnKind::Label, ColumnData::Real(values)) => {
                    if let Some(row) = values.iter().position(|v| !v.is_finite()) {
                        return Err(Error::BadNumber {
                            row: row + 1,
                            column: col.name().to_string(),
                            token: values[row].to_string(),
                        });
                    }
                }
                _ => return Err(Error::ColumnKind(col.name().to_string())),
            }
        }
        Ok(Self { columns, row_count })
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(Column::name)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name() == name)
    }

    pub fn schema(&self) -> Vec<ColumnSpec> {
        self.columns.iter().map(|c| c.spec.clone()).collect()
    }

    pub fn drop_columns<S: AsRef<str>>(&self, names: &[S], mode: DropMode) -> Result<DataFrame> {
        let drop: HashSet<&str> = names.iter().map(AsRef::as_ref).collect();
        if mode == DropMode::Strict {
            if let Some(missing) = drop.iter().find(|n| self.column(n).is_none()) {
                return Err(Error::MissingColumn(missing.to_string()));
            }
        }
        Ok(DataFrame {
            columns: self
                .columns
                .iter()
                .filter(|c| !drop.contains(c.name()))
                .cloned()
                .collect(),
            row_count: self.row_count,
        })
    }

    /// Keeps exactly the named columns, in the order given.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<DataFrame> {
        let columns = names
            .iter()
            .map(|n| {
                self.column(n.as_ref())
                    .cloned()
                    .ok_or_else(|| Error::MissingColumn(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        DataFrame::new(columns).map(|mut f| {
            f.row_count = self.row_count;
            f
        })
    }

    /// Separates the single label column from the features.
    pub fn split_xy(&self) -> Result<(DataFrame, LabelVector)> {
        let labels: Vec<&Column> = self.columns.iter().filter(|c| c.kind() == ColumnKind::Label).collect();
        if labels.len() != 1 {
            return Err(Error::LabelCount(labels.len()));
        }
        let label = labels[0];
        let values = label
            .as_real()
            .ok_or_else(|| Error::ColumnKind(label.name().to_string()))?;
        let y = values
            .iter()
            .enumerate()
            .map(|(row, &v)| parse_class(v, row + 1))
            .collect::<Result<Vec<u8>>>()?;
        let features = DataFrame {
            columns: self
                .columns
                .iter()
                .filter(|c| c.kind() != ColumnKind::Label)
                .cloned()
                .collect(),
            row_count: self.row_count,
        };
        Ok((features, LabelVector(y)))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(self.names())?;
        let mut record = Vec::with_capacity(self.columns.len());
        for row in 0..self.row_count {
            record.clear();
            for col in &self.columns {
                record.push(match &col.data {
                    ColumnData::Text(v) => v[row].clone(),
                    ColumnData::Real(v) => v[row].to_string(),
                });
            }
            out.write_record(&record)?;
        }
        out.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

fn parse_class(value: f64, row: usize) -> Result<u8> {
    if value == 0.0 {
        Ok(0)
    } else if value == 1.0 {
        Ok(1)
    } else {
        Err(Error::BadLabel {
            row,
            value: value.to_string(),
        })
    }
}

/// Which header names play which role when reading a CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub categorical: Vec<String>,
    pub label: String,
    /// Columns that must exist in the header but are neither parsed nor
    /// kept.
    #[serde(default)]
    pub skip: Vec<String>,
}

impl CsvSchema {
    pub fn new<S: Into<String>>(categorical: impl IntoIterator<Item = S>, label: impl Into<String>) -> Self {
        Self {
            categorical: categorical.into_iter().map(Into::into).collect(),
            label: label.into(),
            skip: Vec::new(),
        }
    }

    pub fn with_skip<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.skip = names.into_iter().map(Into::into).collect();
        self
    }

    fn kind_of(&self, name: &str) -> ColumnKind {
        if name == self.label {
            ColumnKind::Label
        } else if self.categorical.iter().any(|c| c == name) {
            ColumnKind::Categorical
        } else {
            ColumnKind::Numeric
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<DataFrame> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file), schema)
}

/// Parses comma-delimited, RFC-4180 quoted CSV with a mandatory header.
/// Error positions use 1-based file line numbers (the header is line 1).
pub fn read_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<DataFrame> {
    if schema.categorical.contains(&schema.label) {
        return Err(Error::Config(format!(
            "`{}` cannot be both categorical and the label",
            schema.label
        )));
    }
    if let Some(name) = schema
        .skip
        .iter()
        .find(|s| **s == schema.label || schema.categorical.contains(s))
    {
        return Err(Error::Config(format!("`{name}` is both skipped and used")));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    for required in schema
        .categorical
        .iter()
        .chain(&schema.skip)
        .chain(std::iter::once(&schema.label))
    {
        if !header.iter().any(|h| h == required) {
            return Err(Error::MissingColumn(required.clone()));
        }
    }
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| !schema.skip.contains(&header[i]))
        .collect();
    let header: Vec<String> = keep.iter().map(|&i| header[i].clone()).collect();
    let kinds: Vec<ColumnKind> = header.iter().map(|h| schema.kind_of(h)).collect();
    let mut data: Vec<ColumnData> = kinds
        .iter()
        .map(|k| match k {
            ColumnKind::Categorical => ColumnData::Text(Vec::new()),
            _ => ColumnData::Real(Vec::new()),
        })
        .collect();

    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line() as usize);
        for (idx, &source) in keep.iter().enumerate() {
            let token = record.get(source).unwrap_or_default();
            let name = &header[idx];
            match (&mut data[idx], kinds[idx]) {
                (ColumnData::Text(values), _) => {
                    if token.is_empty() {
                        return Err(Error::EmptyCategory {
                            row: line,
                            column: name.clone(),
                        });
                    }
                    values.push(token.to_string());
                }
                (ColumnData::Real(values), kind) => {
                    let parsed = token.trim().parse::<f64>().ok().filter(|v| v.is_finite());
                    match (parsed, kind) {
                        (Some(v), ColumnKind::Label) => values.push(f64::from(parse_class(v, line)?)),
                        (None, ColumnKind::Label) => {
                            return Err(Error::BadLabel {
                                row: line,
                                value: token.to_string(),
                            })
                        }
                        (Some(v), _) => values.push(v),
                        (None, _) => {
                            return Err(Error::BadNumber {
                                row: line,
                                column: name.clone(),
                                token: token.to_string(),
                            })
                        }
                    }
                }
            }
        }
    }

    let columns = header
        .into_iter()
        .zip(kinds)
        .zip(data)
        .map(|((name, kind), data)| Column {
            spec: ColumnSpec { name, kind },
            data,
        })
        .collect();
    DataFrame::new(columns)
}
