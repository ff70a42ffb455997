//! Independent reference implementations and fixtures shared by the
//! integration tests.

#![allow(dead_code)]

pub mod golden;
pub mod parity;

use std::path::{Path, PathBuf};

use num_rational::Ratio;

use flowids::dataframe::LabelVector;
use flowids::forest::{Node, Tree};
use flowids::preprocess::FeatureMatrix;
use flowids::rng::SplitMix64;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn synthetic_csv() -> PathBuf {
    data_dir().join("flows_synthetic.csv")
}

pub fn labels(v: &[u8]) -> LabelVector {
    LabelVector::new(v.to_vec()).unwrap()
}

/// AUC as the fraction of (positive, negative) pairs ranked correctly,
/// ties counting one half. Quadratic time, exact in integers until the
/// final division.
pub fn auc_pair_count(y: &[u8], scores: &[f64]) -> f64 {
    let mut twice: u64 = 0;
    let (mut p, mut n) = (0u64, 0u64);
    for (i, &yi) in y.iter().enumerate() {
        if yi == 1 {
            p += 1;
        } else {
            n += 1;
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj == 0 {
                if scores[i] > scores[j] {
                    twice += 2;
                } else if scores[i] == scores[j] {
                    twice += 1;
                }
            }
        }
    }
    twice as f64 / (2 * p * n) as f64
}

/// Reference CART tree: exhaustive search over every feature and every
/// midpoint, exact rational Gini decrease, first maximum in (feature,
/// threshold) order wins.
#[derive(Debug, Clone, PartialEq)]
pub enum RefNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<RefNode>,
        right: Box<RefNode>,
    },
    Leaf([u64; 2]),
}

type Q = Ratio<i128>;

fn gini_q(c: [u64; 2]) -> Q {
    let n = (c[0] + c[1]) as i128;
    let one = Q::from_integer(1);
    one - Q::new((c[0] as i128).pow(2) + (c[1] as i128).pow(2), n * n)
}

fn counts(y: &[u8], rows: &[usize]) -> [u64; 2] {
    let pos = rows.iter().filter(|&&r| y[r] == 1).count() as u64;
    [rows.len() as u64 - pos, pos]
}

#[allow(clippy::needless_range_loop)]
pub fn reference_cart(x: &[Vec<f64>], y: &[u8], rows: &[usize]) -> RefNode {
    let c = counts(y, rows);
    if c[0] == 0 || c[1] == 0 || rows.len() < 2 {
        return RefNode::Leaf(c);
    }
    let n = rows.len() as i128;
    let parent = gini_q(c);
    let d = x[0].len();
    let mut best: Option<(Q, usize, f64)> = None;
    for f in 0..d {
        let mut values: Vec<f64> = rows.iter().map(|&r| x[r][f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= t);
            let dec = parent
                - Q::new(l.len() as i128, n) * gini_q(counts(y, &l))
                - Q::new(r.len() as i128, n) * gini_q(counts(y, &r));
            if best.as_ref().is_none_or(|b| dec > b.0) {
                best = Some((dec, f, t));
            }
        }
    }
    match best {
        None => RefNode::Leaf(c),
        Some((_, feature, threshold)) => {
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][feature] <= threshold);
            RefNode::Split {
                feature,
                threshold,
                left: Box::new(reference_cart(x, y, &l)),
                right: Box::new(reference_cart(x, y, &r)),
            }
        }
    }
}

/// Rebuilds a `RefNode` from a fitted tree's preorder arena.
pub fn tree_to_ref(tree: &Tree) -> RefNode {
    fn walk(nodes: &[Node], i: usize) -> RefNode {
        match &nodes[i] {
            Node::Leaf(c) => RefNode::Leaf(*c),
            Node::Split {
                feature,
                threshold,
                left,
                right,
                ..
            } => RefNode::Split {
                feature: *feature,
                threshold: *threshold,
                left: Box::new(walk(nodes, *left)),
                right: Box::new(walk(nodes, *right)),
            },
        }
    }
    walk(&tree.nodes, 0)
}

/// Small dataset on a coarse grid so duplicate values and exact ties are
/// common.
pub fn random_cart_dataset(rng: &mut SplitMix64) -> (Vec<Vec<f64>>, Vec<u8>) {
    let n = 1 + rng.below(30) as usize;
    let d = 1 + rng.below(4) as usize;
    let levels = 2 + rng.below(6);
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.below(levels) as f64 * 0.5 - 1.0).collect())
        .collect();
    let y: Vec<u8> = (0..n).map(|_| rng.below(2) as u8).collect();
    (x, y)
}

pub fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::from_rows(rows).unwrap()
}

/// Vector relative error `‖a − b‖ / max(‖a‖, ‖b‖, 1e-12)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / na.max(nb).max(1e-12)
}

/// Central finite-difference gradient of `f` at `p`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    (0..p.len())
        .map(|k| {
            q[k] = p[k] + h;
            let up = f(&q);
            q[k] = p[k] - h;
            let down = f(&q);
            q[k] = p[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Parses `<text class="CLASS" ...>CONTENT</text>` elements in document
/// order.
pub fn svg_texts(svg: &str, class: &str) -> Vec<String> {
    let open = format!("<text class=\"{class}\"");
    svg.lines()
        .filter(|l| l.starts_with(&open))
        .map(|l| {
            let start = l.find('>').unwrap() + 1;
            let end = l.rfind("</text>").unwrap();
            l[start..end].to_string()
        })
        .collect()
}

/// The coordinate pairs of the first `<path class="CLASS" d="M.. L..">`.
pub fn svg_path_points(svg: &str, class: &str) -> Vec<(f64, f64)> {
    let open = format!("<path class=\"{class}\" d=\"");
    let line = svg.lines().find(|l| l.starts_with(&open)).expect("path present");
    let d = &line[open.len()..];
    let d = &d[..d.find('"').unwrap()];
    d.split(' ')
        .map(|tok| {
            let tok = tok.trim_start_matches(['M', 'L']);
            let (x, y) = tok.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}
