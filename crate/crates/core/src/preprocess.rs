//! One-hot encoding with numeric passthrough, and the seeded train/test split.
//!
//! Feature layout produced by an [`EncoderModel`]: one block per categorical
//! column (declaration order, categories sorted lexicographically), followed
//! by the remaining numeric columns in their original order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataframe::{Column, ColumnKind, DataFrame, LabelVector};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Dense row-major matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    names: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>, names: Vec<String>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::Config("feature matrix needs at least one column".into()));
        }
        if values.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: rows * cols,
            });
        }
        if names.len() != cols {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: cols,
            });
        }
        Ok(Self {
            rows,
            cols,
            values,
            names,
        })
    }

    /// Builds a matrix from row vectors with generated names `x0, x1, ...`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                left: bad.len(),
                right: cols,
            });
        }
        let names = (0..cols).map(|j| format!("x{j}")).collect();
        Self::new(rows.len(), cols, rows.concat(), names)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row_iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.row_iter().map(|r| r[j]).collect()
    }

    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            rows: indices.len(),
            cols: self.cols,
            values,
            names: self.names.clone(),
        }
    }

    /// First non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize)> {
        self.values
            .iter()
            .position(|v| !v.is_finite())
            .map(|p| (p / self.cols, p % self.cols))
    }
}

/// What [`EncoderModel::transform`] does with a category it was not fitted on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownPolicy {
    /// Fail with [`Error::UnknownCategory`].
    #[default]
    Strict,
    /// Encode the whole block as zeros.
    AllZeros,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub column: String,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderModel {
    pub vocabularies: Vec<Vocabulary>,
    pub passthrough: Vec<String>,
    pub width: usize,
}

impl EncoderModel {
    /// Learns sorted vocabularies for every categorical column of `frame`.
    /// Numeric (and label) columns become passthrough features.
    pub fn fit(frame: &DataFrame) -> Result<Self> {
        if frame.row_count() == 0 {
            return Err(Error::EmptyFrame);
        }
        let mut vocabularies = Vec::new();
        let mut passthrough = Vec::new();
        for col in frame.columns() {
            match col.kind() {
                ColumnKind::Categorical => {
                    let values = text_values(col)?;
                    let mut categories: Vec<String> = values.to_vec();
                    categories.sort_unstable();
                    categories.dedup();
                    vocabularies.push(Vocabulary {
                        column: col.name().to_string(),
                        categories,
                    });
                }
                ColumnKind::Numeric | ColumnKind::Label => passthrough.push(col.name().to_string()),
            }
        }
        let width = vocabularies.iter().map(|v| v.categories.len()).sum::<usize>() + passthrough.len();
        if width == 0 {
            return Err(Error::Config("frame has no feature columns".into()));
        }
        Ok(Self {
            vocabularies,
            passthrough,
            width,
        })
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.vocabularies
            .iter()
            .flat_map(|v| v.categories.iter().map(move |c| format!("{}={}", v.column, c)))
            .chain(self.passthrough.iter().cloned())
            .collect()
    }

    /// Column ranges of each one-hot block, in layout order.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.vocabularies
            .iter()
            .map(|v| {
                let r = start..start + v.categories.len();
                start = r.end;
                r
            })
            .collect()
    }

    pub fn transform(&self, frame: &DataFrame, policy: UnknownPolicy) -> Result<FeatureMatrix> {
        let n = frame.row_count();
        let blocks = self
            .vocabularies
            .iter()
            .map(|v| {
                let col = frame
                    .column(&v.column)
                    .ok_or_else(|| Error::MissingColumn(v.column.clone()))?;
                Ok((v, text_values(col)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let numeric = self
            .passthrough
            .iter()
            .map(|name| {
                let col = frame.column(name).ok_or_else(|| Error::MissingColumn(name.clone()))?;
                col.as_real().ok_or_else(|| Error::ColumnKind(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;

        let width = self.width;
        let mut values = vec![0.0; n * width];
        values
            .par_chunks_mut(width.max(1))
            .enumerate()
            .try_for_each(|(row, out)| -> Result<()> {
                let mut offset = 0;
                for (vocab, column) in &blocks {
                    let token = &column[row];
                    match vocab.categories.binary_search(token) {
                        Ok(k) => out[offset + k] = 1.0,
                        Err(_) if policy == UnknownPolicy::AllZeros => {}
                        Err(_) => {
                            return Err(Error::UnknownCategory {
                                column: vocab.column.clone(),
                                category: token.clone(),
                            })
                        }
                    }
                    offset += vocab.categories.len();
                }
                for (k, column) in numeric.iter().enumerate() {
                    out[offset + k] = column[row];
                }
                Ok(())
            })?;
        FeatureMatrix::new(n, width, values, self.feature_names())
    }
}

fn text_values(col: &Column) -> Result<&[String]> {
    col.as_text().ok_or_else(|| Error::ColumnKind(col.name().to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub train_x: FeatureMatrix,
    pub test_x: FeatureMatrix,
    pub train_y: LabelVector,
    pub test_y: LabelVector,
    /// Source row of each training row, in training order.
    pub train_indices: Vec<usize>,
    /// Source row of each test row, in test order.
    pub test_indices: Vec<usize>,
    pub seed: u64,
    pub test_fraction: f64,
}

/// Number of test rows for `n` rows: `ceil(fraction * n)`, ignoring
/// representation error in the product (`0.7 * 10` gives 7, not 8).
pub fn test_size(n: usize, fraction: f64) -> usize {
    let raw = fraction * n as f64;
    (raw - raw * 1e-12).ceil() as usize
}

/// Shuffles `0..n` with [`SplitMix64`] seeded by `seed` (Fisher–Yates) and
/// returns `(train, test)`, where `test` is the first [`test_size`] entries
/// of the shuffled order and `train` the rest.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::BadFraction(fraction));
    }
    let n_test = test_size(n, fraction);
    if n < 2 || n_test == 0 || n_test >= n {
        return Err(Error::TooFewRows { rows: n, fraction });
    }
    let mut order: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let train = order.split_off(n_test);
    Ok((train, order))
}

pub fn train_test_split(x: &FeatureMatrix, y: &LabelVector, test_fraction: f64, seed: u64) -> Result<SplitResult> {
    if x.rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.rows(),
            right: y.len(),
        });
    }
    let (train_indices, test_indices) = split_indices(x.rows(), test_fraction, seed)?;
    Ok(SplitResult {
        train_x: x.select_rows(&train_indices),
        test_x: x.select_rows(&test_indices),
        train_y: y.select(&train_indices),
        test_y: y.select(&test_indices),
        train_indices,
        test_indices,
        seed,
        test_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(protos: &[&str], xs: &[f64]) -> DataFrame {
        DataFrame::new(vec![
            Column::categorical("proto", protos.iter().map(|s| s.to_string()).collect()),
            Column::numeric("x", xs.to_vec()),
        ])
        .unwrap()
    }

    #[test]
    fn vocabulary_is_sorted_and_distinct() {
        let f = frame(&["tcp", "udp", "tcp", "arp"], &[1.0, 2.0, 3.0, 4.0]);
        let enc = EncoderModel::fit(&f).unwrap();
        assert_eq!(enc.vocabularies[0].categories, ["arp", "tcp", "udp"]);
        assert_eq!(enc.width, 4);
        assert_eq!(enc.feature_names(), ["proto=arp", "proto=tcp", "proto=udp", "x"]);
    }

    #[test]
    fn one_hot_rows() {
        let f = frame(&["tcp", "udp", "arp"], &[1.0, 2.5, -3.0]);
        let enc = EncoderModel::fit(&f).unwrap();
        let m = enc.transform(&f, UnknownPolicy::Strict).unwrap();
        assert_eq!(m.row(0), [0.0, 1.0, 0.0, 1.0]);
        assert_eq!(m.row(1), [0.0, 0.0, 1.0, 2.5]);
        assert_eq!(m.row(2), [1.0, 0.0, 0.0, -3.0]);
    }

    #[test]
    fn unknown_category_policies() {
        let enc = EncoderModel::fit(&frame(&["tcp", "udp", "arp"], &[0.0; 3])).unwrap();
        let new = frame(&["icmp"], &[7.0]);
        assert!(matches!(
            enc.transform(&new, UnknownPolicy::Strict),
            Err(Error::UnknownCategory { .. })
        ));
        let m = enc.transform(&new, UnknownPolicy::AllZeros).unwrap();
        assert_eq!(m.row(0), [0.0, 0.0, 0.0, 7.0]);
    }

    #[test]
    fn pure_passthrough() {
        let f = DataFrame::new(vec![Column::numeric("a", vec![1.0]), Column::numeric("b", vec![2.0])]).unwrap();
        let enc = EncoderModel::fit(&f).unwrap();
        assert!(enc.vocabularies.is_empty());
        assert_eq!(enc.width, 2);
    }

    #[test]
    fn missing_column_on_transform() {
        let enc = EncoderModel::fit(&frame(&["tcp"], &[0.0])).unwrap();
        let other = DataFrame::new(vec![Column::numeric("x", vec![1.0])]).unwrap();
        assert!(matches!(
            enc.transform(&other, UnknownPolicy::Strict),
            Err(Error::MissingColumn(c)) if c == "proto"
        ));
    }

    #[test]
    fn empty_frame_rejected() {
        let f = frame(&[], &[]);
        assert!(matches!(EncoderModel::fit(&f), Err(Error::EmptyFrame)));
    }

    #[test]
    fn split_sizes() {
        assert_eq!(test_size(1000, 0.2), 200);
        assert_eq!(test_size(10, 0.7), 7);
        assert_eq!(test_size(10, 0.25), 3);
        let (train, test) = split_indices(1000, 0.2, 42).unwrap();
        assert_eq!((train.len(), test.len()), (800, 200));
    }

    #[test]
    fn split_is_deterministic() {
        assert_eq!(split_indices(10, 0.5, 9).unwrap(), split_indices(10, 0.5, 9).unwrap());
    }

    #[test]
    fn split_seeds_differ_but_cover_all() {
        let a = split_indices(10, 0.2, 1).unwrap();
        let b = split_indices(10, 0.2, 2).unwrap();
        assert_ne!(a, b);
        for (train, test) in [a, b] {
            let mut all: Vec<usize> = train.into_iter().chain(test).collect();
            all.sort_unstable();
            assert_eq!(all, (0..10).collect::<Vec<_>>());
        }
    }

    #[test]
    fn split_errors() {
        assert!(matches!(split_indices(10, 0.0, 1), Err(Error::BadFraction(_))));
        assert!(matches!(split_indices(10, 1.0, 1), Err(Error::BadFraction(_))));
        assert!(matches!(split_indices(1, 0.5, 1), Err(Error::TooFewRows { .. })));
        assert!(matches!(split_indices(2, 0.99, 1), Err(Error::TooFewRows { .. })));
    }

    #[test]
    fn split_keeps_rows_paired_with_labels() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let x = FeatureMatrix::from_rows(&rows).unwrap();
        let y = LabelVector::new((0..20).map(|i| (i % 2) as u8).collect()).unwrap();
        let s = train_test_split(&x, &y, 0.3, 5).unwrap();
        for (k, &src) in s.test_indices.iter().enumerate() {
            assert_eq!(s.test_x.get(k, 0), src as f64);
            assert_eq!(s.test_y[k], (src % 2) as u8);
        }
        for (k, &src) in s.train_indices.iter().enumerate() {
            assert_eq!(s.train_x.get(k, 0), src as f64);
            assert_eq!(s.train_y[k], (src % 2) as u8);
        }
    }
}
