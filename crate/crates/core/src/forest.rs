//! CART decision trees and bagged random forests for binary labels.
//!
//! Trees split on Gini impurity at midpoints between consecutive distinct
//! feature values. Split quality is compared in exact integer arithmetic so
//! ties are real ties, and they are broken by lowest feature index, then
//! lowest threshold.
//!
//! Randomness: tree `t` of a forest with master seed `s` draws from
//! `SplitMix64::new(stream_seed(s, t))`. The bootstrap sample (when
//! enabled) is drawn first, `n` calls to `below(n)`, and the same stream
//! then drives feature sampling at each node in preorder. At a node,
//! features are visited in the order of a partial Fisher–Yates shuffle of
//! `0..d` until `max_features` features that are not constant within the
//! node have been examined (or all features are exhausted).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataframe::LabelVector;
use crate::error::{Error, Result};
use crate::preprocess::FeatureMatrix;
use crate::rng::{stream_seed, SplitMix64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `ceil(sqrt(d))`
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> Result<usize> {
        match self {
            MaxFeatures::Sqrt => Ok(((d as f64).sqrt().ceil() as usize).clamp(1, d.max(1))),
            MaxFeatures::All => Ok(d),
            MaxFeatures::Fixed(k) if (1..=d).contains(&k) => Ok(k),
            MaxFeatures::Fixed(k) => Err(Error::Config(format!("max_features {k} is outside 1..={d}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub seed: u64,
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            seed: 42,
            max_features: MaxFeatures::Sqrt,
            min_samples_split: 2,
            max_depth: None,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    fn validate(&self, d: usize) -> Result<usize> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be positive".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::Config("max_depth must be positive".into()));
        }
        self.max_features.resolve(d)
    }
}

/// Gini impurity `1 - p0² - p1²` of a node with the given class counts.
pub fn gini(counts: [u64; 2]) -> Result<f64> {
    let n = counts[0] + counts[1];
    if n == 0 {
        return Err(Error::EmptyNode);
    }
    let n = n as f64;
    let (p0, p1) = (counts[0] as f64 / n, counts[1] as f64 / n);
    Ok(1.0 - p0 * p0 - p1 * p1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    /// Rows with `x[feature] <= threshold` go to `left`, the rest to
    /// `right`. `samples` is the (bootstrap-weighted) number of training
    /// rows reaching the node, `decrease` its weighted Gini decrease.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        samples: u64,
        decrease: f64,
    },
    /// Class counts `[negatives, positives]`.
    Leaf([u64; 2]),
}

/// One decision tree, nodes stored in preorder with the root at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub seed: u64,
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_counts(&self, row: &[f64]) -> [u64; 2] {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf(c) => return *c,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => idx = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    /// Class-1 fraction of the leaf reached by `row`.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let [neg, pos] = self.leaf_counts(row);
        pos as f64 / (neg + pos) as f64
    }

    pub fn split_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Split { .. })).count()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Unnormalised impurity decrease per feature:
    /// `Σ (node samples / root samples) × decrease` over this tree's splits.
    pub fn raw_importances(&self, n_features: usize) -> Vec<f64> {
        let mut out = vec![0.0; n_features];
        let root = match &self.nodes[0] {
            Node::Split { samples, .. } => *samples as f64,
            Node::Leaf(_) => return out,
        };
        for node in &self.nodes {
            if let Node::Split {
                feature,
                samples,
                decrease,
                ..
            } = node
            {
                out[*feature] += *samples as f64 / root * decrease;
            }
        }
        out
    }
}

/// A chosen split. `decrease` is `gini(parent) − Σ (n_child/n)·gini(child)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub decrease: f64,
}

/// Split quality `(l0²+l1²)/nl + (r0²+r1²)/nr` as an exact fraction.
/// Larger is better; it orders splits the same way as the Gini decrease.
#[derive(Debug, Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn new(left: [u64; 2], right: [u64; 2]) -> Self {
        let sq = |c: [u64; 2]| u128::from(c[0]) * u128::from(c[0]) + u128::from(c[1]) * u128::from(c[1]);
        let nl = u128::from(left[0] + left[1]);
        let nr = u128::from(right[0] + right[1]);
        Self {
            num: sq(left) * nr + sq(right) * nl,
            den: nl * nr,
        }
    }

    fn beats(&self, other: &Score) -> bool {
        self.num * other.den > other.num * self.den
    }

    /// True when the split strictly lowers impurity below the parent's.
    fn improves(&self, parent: [u64; 2]) -> bool {
        let n = u128::from(parent[0] + parent[1]);
        let p = u128::from(parent[0]) * u128::from(parent[0]) + u128::from(parent[1]) * u128::from(parent[1]);
        self.num * n > p * self.den
    }
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: Score,
    left: [u64; 2],
}

/// Feature values stored column by column for fast per-feature gathers.
struct Columns<'a> {
    data: Vec<f64>,
    rows: usize,
    labels: &'a [u8],
}

impl<'a> Columns<'a> {
    fn new(x: &FeatureMatrix, labels: &'a [u8]) -> Self {
        let (rows, cols) = (x.rows(), x.cols());
        let mut data = vec![0.0; rows * cols];
        for (i, row) in x.row_iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                data[j * rows + i] = v;
            }
        }
        Self { data, rows, labels }
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }
}

fn midpoint(a: f64, b: f64) -> f64 {
    let mid = (a + b) / 2.0;
    let mid = if mid.is_finite() { mid } else { a / 2.0 + b / 2.0 };
    if mid >= b || mid < a {
        a
    } else {
        mid
    }
}

fn counts_of(labels: &[u8], samples: &[usize]) -> [u64; 2] {
    let pos = samples.iter().filter(|&&s| labels[s] == 1).count() as u64;
    [samples.len() as u64 - pos, pos]
}

/// Best threshold for one feature, or `None` if the feature is constant on
/// `samples`. The second value reports whether the feature was constant.
fn scan_feature(
    column: &[f64],
    labels: &[u8],
    samples: &[usize],
    parent: [u64; 2],
    feature: usize,
    buf: &mut Vec<(f64, u8)>,
) -> Option<Candidate> {
    buf.clear();
    buf.extend(samples.iter().map(|&s| (column[s], labels[s])));
    let first = buf.first()?.0;
    if buf.iter().all(|v| v.0 == first) {
        return None;
    }
    buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<Candidate> = None;
    let mut left = [0u64; 2];
    for i in 0..buf.len() - 1 {
        left[buf[i].1 as usize] += 1;
        if buf[i].0 < buf[i + 1].0 {
            let right = [parent[0] - left[0], parent[1] - left[1]];
            let score = Score::new(left, right);
            if best.as_ref().is_none_or(|b| score.beats(&b.score)) {
                best = Some(Candidate {
                    feature,
                    threshold: midpoint(buf[i].0, buf[i + 1].0),
                    score,
                    left,
                });
            }
        }
    }
    best
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.score.beats(&b.score) {
        return true;
    }
    if b.score.beats(&a.score) {
        return false;
    }
    (a.feature, a.threshold) < (b.feature, b.threshold)
}

fn weighted_decrease(parent: [u64; 2], left: [u64; 2]) -> f64 {
    let right = [parent[0] - left[0], parent[1] - left[1]];
    let n = (parent[0] + parent[1]) as f64;
    let nl = (left[0] + left[1]) as f64;
    let nr = (right[0] + right[1]) as f64;
    let g = |c| gini(c).unwrap_or(0.0);
    g(parent) - nl / n * g(left) - nr / n * g(right)
}

/// Searches the given candidate features exhaustively and returns the split
/// with the largest Gini decrease, or `None` if no split lowers impurity.
pub fn best_split(x: &FeatureMatrix, y: &LabelVector, candidates: &[usize]) -> Option<Split> {
    assert_eq!(x.rows(), y.len(), "rows/labels");
    let samples: Vec<usize> = (0..x.rows()).collect();
    let parent = counts_of(y.as_slice(), &samples);
    let mut buf = Vec::new();
    let mut best: Option<Candidate> = None;
    for &f in candidates {
        let column = x.column(f);
        if let Some(c) = scan_feature(&column, y.as_slice(), &samples, parent, f, &mut buf) {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
    }
    best.filter(|c| c.score.improves(parent)).map(|c| Split {
        feature: c.feature,
        threshold: c.threshold,
        decrease: weighted_decrease(parent, c.left),
    })
}

struct Grower<'a> {
    columns: &'a Columns<'a>,
    config: &'a ForestConfig,
    max_features: usize,
    n_features: usize,
}

struct Task {
    samples: Vec<usize>,
    depth: usize,
    parent: Option<usize>,
}

impl Grower<'_> {
    fn grow(&self, samples: Vec<usize>, rng: &mut SplitMix64) -> Vec<Node> {
        let labels = self.columns.labels;
        let mut nodes = Vec::new();
        let mut stack = vec![Task {
            samples,
            depth: 0,
            parent: None,
        }];
        let mut order: Vec<usize> = (0..self.n_features).collect();
        let mut buf = Vec::new();

        while let Some(task) = stack.pop() {
            let idx = nodes.len();
            if let Some(p) = task.parent {
                if let Node::Split { right, .. } = &mut nodes[p] {
                    // left children are always at p + 1; anything else popped
                    // with this parent is the right child
                    if idx != p + 1 {
                        *right = idx;
                    }
                }
            }
            let counts = counts_of(labels, &task.samples);
            let n = task.samples.len();
            let stop = counts[0] == 0
                || counts[1] == 0
                || n < self.config.min_samples_split
                || self.config.max_depth.is_some_and(|m| task.depth >= m);
            let split = if stop {
                None
            } else {
                self.find_split(&task.samples, counts, rng, &mut order, &mut buf)
            };
            let Some(c) = split else {
                nodes.push(Node::Leaf(counts));
                continue;
            };

            let column = self.columns.column(c.feature);
            let (left, right): (Vec<usize>, Vec<usize>) = task.samples.iter().partition(|&&s| column[s] <= c.threshold);
            nodes.push(Node::Split {
                feature: c.feature,
                threshold: c.threshold,
                left: idx + 1,
                right: usize::MAX,
                samples: n as u64,
                decrease: weighted_decrease(counts, c.left),
            });
            stack.push(Task {
                samples: right,
                depth: task.depth + 1,
                parent: Some(idx),
            });
            stack.push(Task {
                samples: left,
                depth: task.depth + 1,
                parent: Some(idx),
            });
        }
        nodes
    }

    fn find_split(
        &self,
        samples: &[usize],
        parent: [u64; 2],
        rng: &mut SplitMix64,
        order: &mut [usize],
        buf: &mut Vec<(f64, u8)>,
    ) -> Option<Candidate> {
        let d = self.n_features;
        let mut best: Option<Candidate> = None;
        let mut visited_informative = 0;
        let mut drawn = 0;
        while drawn < d && visited_informative < self.max_features {
            let j = drawn + rng.below((d - drawn) as u64) as usize;
            order.swap(drawn, j);
            let f = order[drawn];
            drawn += 1;
            let column = self.columns.column(f);
            if let Some(c) = scan_feature(column, self.columns.labels, samples, parent, f, buf) {
                visited_informative += 1;
                if best.as_ref().is_none_or(|b| better(&c, b)) {
                    best = Some(c);
                }
            }
        }
        // Zero-gain splits are kept: an impure node with a usable split is
        // never turned into a leaf (needed for XOR-like patterns).
        best
    }
}

fn check_training_set(x: &FeatureMatrix, y: &LabelVector) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.rows(),
            right: y.len(),
        });
    }
    if let Some((row, col)) = x.find_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    Ok(())
}

/// Grows one CART tree on all rows of `x` (no bootstrap), drawing candidate
/// features from `SplitMix64::new(tree_seed)`.
pub fn fit_tree(x: &FeatureMatrix, y: &LabelVector, config: &ForestConfig, tree_seed: u64) -> Result<Tree> {
    check_training_set(x, y)?;
    if x.rows() == 0 {
        return Err(Error::NotEnoughRows { needed: 1, got: 0 });
    }
    let max_features = config.validate(x.cols())?;
    let columns = Columns::new(x, y.as_slice());
    let grower = Grower {
        columns: &columns,
        config,
        max_features,
        n_features: x.cols(),
    };
    let mut rng = SplitMix64::new(tree_seed);
    Ok(Tree {
        seed: tree_seed,
        nodes: grower.grow((0..x.rows()).collect(), &mut rng),
    })
}

fn draw_bootstrap(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.below(n as u64) as usize).collect()
}

/// Feature importances with their names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Importances {
    pub values: Vec<f64>,
    pub names: Vec<String>,
    /// False when every tree is a single leaf; `values` is then all zero.
    pub has_splits: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub config: ForestConfig,
    pub n_features: usize,
    pub feature_names: Vec<String>,
    pub trees: Vec<Tree>,
    pub importances: Vec<f64>,
}

impl ForestModel {
    pub fn fit(x: &FeatureMatrix, y: &LabelVector, config: &ForestConfig) -> Result<Self> {
        check_training_set(x, y)?;
        if x.rows() < 2 {
            return Err(Error::NotEnoughRows {
                needed: 2,
                got: x.rows(),
            });
        }
        if !y.has_both_classes() {
            return Err(Error::SingleClass);
        }
        let max_features = config.validate(x.cols())?;
        let columns = Columns::new(x, y.as_slice());
        let grower = Grower {
            columns: &columns,
            config,
            max_features,
            n_features: x.cols(),
        };
        let n = x.rows();
        let trees: Vec<Tree> = (0..config.n_trees)
            .into_par_iter()
            .map(|t| {
                let seed = stream_seed(config.seed, t as u64);
                let mut rng = SplitMix64::new(seed);
                let samples = if config.bootstrap {
                    draw_bootstrap(&mut rng, n)
                } else {
                    (0..n).collect()
                };
                Tree {
                    seed,
                    nodes: grower.grow(samples, &mut rng),
                }
            })
            .collect();
        let importances = aggregate_importances(&trees, x.cols());
        Ok(Self {
            config: config.clone(),
            n_features: x.cols(),
            feature_names: x.names().to_vec(),
            trees,
            importances,
        })
    }

    /// Bootstrap rows drawn for tree `tree` of a forest seeded with
    /// `seed` over `n` training rows.
    pub fn bootstrap_indices(seed: u64, tree: usize, n: usize) -> Vec<usize> {
        draw_bootstrap(&mut SplitMix64::new(stream_seed(seed, tree as u64)), n)
    }

    pub fn predict_proba(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if x.cols() != self.n_features {
            return Err(Error::WidthMismatch {
                expected: self.n_features,
                got: x.cols(),
            });
        }
        let n_trees = self.trees.len() as f64;
        Ok(x.values()
            .par_chunks(x.cols())
            .map(|row| self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / n_trees)
            .collect())
    }

    /// Class 1 iff the mean class-1 probability is at least 0.5.
    pub fn predict(&self, x: &FeatureMatrix) -> Result<LabelVector> {
        let proba = self.predict_proba(x)?;
        crate::linear::threshold_labels(&proba, 0.5)
    }

    pub fn feature_importances(&self) -> Importances {
        let values = aggregate_importances(&self.trees, self.n_features);
        Importances {
            has_splits: self.trees.iter().any(|t| t.split_count() > 0),
            values,
            names: self.feature_names.clone(),
        }
    }
}

/// Mean decrease in impurity: per-tree vectors normalised to sum 1
/// (single-leaf trees skipped), averaged, then renormalised.
fn aggregate_importances(trees: &[Tree], n_features: usize) -> Vec<f64> {
    let mut total = vec![0.0; n_features];
    let mut contributing = 0usize;
    for tree in trees {
        let raw = tree.raw_importances(n_features);
        let sum: f64 = raw.iter().sum();
        if sum > 0.0 {
            contributing += 1;
            for (t, r) in total.iter_mut().zip(&raw) {
                *t += r / sum;
            }
        }
    }
    if contributing == 0 {
        return total;
    }
    for t in &mut total {
        *t /= contributing as f64;
    }
    let sum: f64 = total.iter().sum();
    for t in &mut total {
        *t /= sum;
    }
    total
}

/// The `k` largest importances in descending order; equal values keep
/// ascending feature order.
pub fn top_k_importances(values: &[f64], names: &[String], k: usize) -> Vec<(String, f64)> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.into_iter().take(k).map(|i| (names[i].clone(), values[i])).collect()
}
