//! Binary logistic regression.
//!
//! Training minimises the mean negative log-likelihood plus an optional
//! penalty on the weights (never on the intercept):
//!
//! * L2: `(λ/2)·‖w‖²`
//! * L1: `λ·‖w‖₁`, handled with a proximal (soft-threshold) step
//!
//! The optimiser is full-batch gradient descent from zero with a
//! backtracking line search. Each iteration starts from the previously
//! accepted step multiplied by `step_growth` and halves it until the
//! sufficient-decrease condition holds (Armijo for the smooth objective,
//! the usual quadratic upper bound for the proximal step). When a smooth
//! step changes the objective by no more than rounding noise it is accepted
//! only if it shrinks the gradient norm. Iteration stops
//! when the max-norm of the (minimum-norm sub)gradient drops to
//! `tolerance` or after `max_iterations` steps.
//!
//! Features are z-scored internally by default; the stored weights live in
//! the standardised space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataframe::LabelVector;
use crate::error::{Error, Result};
use crate::preprocess::FeatureMatrix;

const CHUNK_ROWS: usize = 2048;
const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e6;
// objective changes this small (relative) are rounding noise, so the line
// search requires a smaller gradient instead
const FLAT_RELATIVE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    None,
    L1,
    #[default]
    L2,
}

impl std::str::FromStr for Penalty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Penalty::None),
            "l1" => Ok(Penalty::L1),
            "l2" => Ok(Penalty::L2),
            other => Err(Error::Config(format!("unknown penalty `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub penalty: Penalty,
    /// Penalty strength. `None` means `1 / n_train`.
    pub lambda: Option<f64>,
    pub max_iterations: usize,
    /// Bound on the gradient max-norm that counts as converged.
    pub tolerance: f64,
    pub initial_step: f64,
    /// Factor applied to the last accepted step before each line search.
    /// `1.0` keeps the step fixed unless backtracking shrinks it.
    pub step_growth: f64,
    pub standardize: bool,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            penalty: Penalty::L2,
            lambda: None,
            max_iterations: 10_000,
            tolerance: 1e-6,
            initial_step: 1.0,
            step_growth: 2.0,
            standardize: true,
        }
    }
}

impl LogisticConfig {
    fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("lambda must be a nonnegative number, got {l}")));
            }
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::Config("initial_step must be positive".into()));
        }
        if !(self.step_growth >= 1.0 && self.step_growth.is_finite()) {
            return Err(Error::Config("step_growth must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective λ for a training set of `n` rows.
    pub fn resolved_lambda(&self, n: usize) -> f64 {
        match self.penalty {
            Penalty::None => 0.0,
            _ => self.lambda.unwrap_or(1.0 / n as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardization {
    /// Column means and population standard deviations. Constant columns
    /// get scale 1.
    pub fn fit(x: &FeatureMatrix) -> Self {
        let n = x.rows() as f64;
        let d = x.cols();
        let mut means = vec![0.0; d];
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for row in x.row_iter() {
            for j in 0..d {
                means[j] += row[j];
                lo[j] = lo[j].min(row[j]);
                hi[j] = hi[j].max(row[j]);
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut var = vec![0.0; d];
        for row in x.row_iter() {
            for j in 0..d {
                let c = row[j] - means[j];
                var[j] += c * c;
            }
        }
        let mut scales = vec![1.0; d];
        for j in 0..d {
            if lo[j] == hi[j] {
                means[j] = lo[j];
            } else {
                let s = (var[j] / n).sqrt();
                if s > 0.0 {
                    scales[j] = s;
                }
            }
        }
        Self { means, scales }
    }

    pub fn apply(&self, x: &FeatureMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.values().len());
        for row in x.row_iter() {
            for ((v, m), sd) in row.iter().zip(&self.means).zip(&self.scales) {
                out.push((v - m) / sd);
            }
        }
        out
    }
}

/// Penalised mean negative log-likelihood over a row-major design matrix.
#[derive(Debug, Clone, Copy)]
pub struct Objective<'a> {
    design: &'a [f64],
    cols: usize,
    labels: &'a [u8],
    penalty: Penalty,
    lambda: f64,
}

impl<'a> Objective<'a> {
    pub fn new(design: &'a [f64], cols: usize, labels: &'a [u8], penalty: Penalty, lambda: f64) -> Self {
        assert_eq!(design.len(), cols * labels.len(), "design shape");
        let lambda = if penalty == Penalty::None { 0.0 } else { lambda };
        Self {
            design,
            cols,
            labels,
            penalty,
            lambda,
        }
    }

    fn rows(&self) -> usize {
        self.labels.len()
    }

    /// Mean NLL, its gradient with respect to the weights, and its
    /// derivative with respect to the intercept.
    fn data_term(&self, weights: &[f64], intercept: f64) -> (f64, Vec<f64>, f64) {
        let d = self.cols;
        let partials: Vec<(f64, Vec<f64>, f64)> = self
            .design
            .par_chunks(CHUNK_ROWS * d)
            .zip(self.labels.par_chunks(CHUNK_ROWS))
            .map(|(xs, ys)| {
                let mut loss = 0.0;
                let mut grad = vec![0.0; d];
                let mut grad_b = 0.0;
                for (row, &y) in xs.chunks_exact(d).zip(ys) {
                    let z = dot(row, weights) + intercept;
                    // σ(z) − y, written so that positive rows never subtract from 1
                    let (l, r) = if y == 1 {
                        (softplus(-z), -sigmoid(-z))
                    } else {
                        (softplus(z), sigmoid(z))
                    };
                    loss += l;
                    grad_b += r;
                    for (g, &v) in grad.iter_mut().zip(row) {
                        *g += r * v;
                    }
                }
                (loss, grad, grad_b)
            })
            .collect();
        let n = self.rows() as f64;
        let mut loss = 0.0;
        let mut grad = vec![0.0; d];
        let mut grad_b = 0.0;
        for (l, g, gb) in partials {
            loss += l;
            grad_b += gb;
            for (a, b) in grad.iter_mut().zip(&g) {
                *a += b;
            }
        }
        for g in &mut grad {
            *g /= n;
        }
        (loss / n, grad, grad_b / n)
    }

    fn smooth_part(&self, weights: &[f64], intercept: f64) -> (f64, Vec<f64>, f64) {
        let (mut f, mut g, gb) = self.data_term(weights, intercept);
        if self.penalty == Penalty::L2 {
            f += 0.5 * self.lambda * dot(weights, weights);
            for (gj, wj) in g.iter_mut().zip(weights) {
                *gj += self.lambda * wj;
            }
        }
        (f, g, gb)
    }

    fn l1_term(&self, weights: &[f64]) -> f64 {
        if self.penalty == Penalty::L1 {
            self.lambda * weights.iter().map(|w| w.abs()).sum::<f64>()
        } else {
            0.0
        }
    }

    pub fn value(&self, weights: &[f64], intercept: f64) -> f64 {
        self.smooth_part(weights, intercept).0 + self.l1_term(weights)
    }

    /// Gradient of the full objective. For L1 this uses `λ·sign(w)`, which
    /// is the true gradient wherever no weight is zero.
    pub fn gradient(&self, weights: &[f64], intercept: f64) -> (Vec<f64>, f64) {
        let (_, mut g, gb) = self.smooth_part(weights, intercept);
        if self.penalty == Penalty::L1 {
            for (gj, wj) in g.iter_mut().zip(weights) {
                *gj += self.lambda * sign(*wj);
            }
        }
        (g, gb)
    }

    /// Max-norm of the minimum-norm subgradient, given the smooth gradient.
    fn optimality(&self, weights: &[f64], smooth_grad: &[f64], grad_b: f64) -> f64 {
        let mut worst = grad_b.abs();
        for (&w, &g) in weights.iter().zip(smooth_grad) {
            let v = if self.penalty != Penalty::L1 {
                g.abs()
            } else if w != 0.0 {
                (g + self.lambda * sign(w)).abs()
            } else {
                (g.abs() - self.lambda).max(0.0)
            };
            worst = worst.max(v);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub standardization: Option<Standardization>,
    pub config: LogisticConfig,
    pub lambda: f64,
    pub converged: bool,
    pub iterations_used: usize,
    pub objective: f64,
}

impl LogisticModel {
    pub fn fit(x: &FeatureMatrix, y: &LabelVector, config: &LogisticConfig) -> Result<Self> {
        Self::fit_observed(x, y, config, |_, _| {})
    }

    /// Like [`fit`](Self::fit) but calls `observer(iteration, objective)`
    /// once for the starting point and after every accepted step.
    pub fn fit_observed(
        x: &FeatureMatrix,
        y: &LabelVector,
        config: &LogisticConfig,
        mut observer: impl FnMut(usize, f64),
    ) -> Result<Self> {
        config.validate()?;
        if x.rows() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.rows(),
                right: y.len(),
            });
        }
        if x.rows() < 2 {
            return Err(Error::NotEnoughRows {
                needed: 2,
                got: x.rows(),
            });
        }
        if !y.has_both_classes() {
            return Err(Error::SingleClass);
        }
        if let Some((row, col)) = x.find_non_finite() {
            return Err(Error::NonFinite { row, col });
        }

        let standardization = config.standardize.then(|| Standardization::fit(x));
        let scaled;
        let design: &[f64] = match &standardization {
            Some(s) => {
                scaled = s.apply(x);
                &scaled
            }
            None => x.values(),
        };
        let lambda = config.resolved_lambda(x.rows());
        let objective = Objective::new(design, x.cols(), y.as_slice(), config.penalty, lambda);
        let state = descend(&objective, config, &mut observer);

        Ok(Self {
            weights: state.weights,
            intercept: state.intercept,
            standardization,
            config: config.clone(),
            lambda,
            converged: state.converged,
            iterations_used: state.iterations,
            objective: state.objective,
        })
    }

    pub fn width(&self) -> usize {
        self.weights.len()
    }

    /// Decision values `w·x̃ + b`.
    pub fn decision_function(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if x.cols() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                got: x.cols(),
            });
        }
        Ok(x.row_iter()
            .map(|row| {
                let z = match &self.standardization {
                    Some(s) => row
                        .iter()
                        .zip(&self.weights)
                        .zip(s.means.iter().zip(&s.scales))
                        .map(|((v, w), (m, sc))| w * ((v - m) / sc))
                        .sum::<f64>(),
                    None => dot(row, &self.weights),
                };
                z + self.intercept
            })
            .collect())
    }

    pub fn predict_proba(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        Ok(self.decision_function(x)?.into_iter().map(sigmoid).collect())
    }

    /// Class 1 iff probability ≥ `threshold`.
    pub fn predict(&self, x: &FeatureMatrix, threshold: f64) -> Result<LabelVector> {
        let proba = self.predict_proba(x)?;
        threshold_labels(&proba, threshold)
    }
}

/// Maps probabilities to classes: 1 iff `p >= threshold`, `threshold` in (0, 1).
pub fn threshold_labels(proba: &[f64], threshold: f64) -> Result<LabelVector> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Config(format!("threshold {threshold} is outside (0, 1)")));
    }
    LabelVector::new(proba.iter().map(|&p| u8::from(p >= threshold)).collect())
}

struct DescentState {
    weights: Vec<f64>,
    intercept: f64,
    objective: f64,
    iterations: usize,
    converged: bool,
}

fn descend(obj: &Objective<'_>, config: &LogisticConfig, observer: &mut impl FnMut(usize, f64)) -> DescentState {
    let d = obj.cols;
    let l1 = obj.penalty == Penalty::L1;
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let (mut f, mut g, mut gb) = obj.smooth_part(&w, b);
    let mut step = config.initial_step;
    let mut iterations = 0;
    observer(0, f + obj.l1_term(&w));

    let mut converged = obj.optimality(&w, &g, gb) <= config.tolerance;
    while !converged && iterations < config.max_iterations {
        step = (step * config.step_growth).min(MAX_STEP);
        let grad_sq = dot(&g, &g) + gb * gb;
        let accepted = loop {
            let mut w_new: Vec<f64> = w.iter().zip(&g).map(|(wj, gj)| wj - step * gj).collect();
            if l1 {
                let cut = step * obj.lambda;
                for v in &mut w_new {
                    *v = soft_threshold(*v, cut);
                }
            }
            let b_new = b - step * gb;
            let (f_new, g_new, gb_new) = obj.smooth_part(&w_new, b_new);
            let ok = if l1 {
                // F(w') <= F(w) + ∇F·Δ + ‖Δ‖²/(2·step)
                let mut lin = gb * (b_new - b);
                let mut quad = (b_new - b) * (b_new - b);
                for j in 0..d {
                    let delta = w_new[j] - w[j];
                    lin += g[j] * delta;
                    quad += delta * delta;
                }
                f_new <= f + lin + quad / (2.0 * step)
            } else {
                let flat = (f - f_new).abs() <= FLAT_RELATIVE * f.abs().max(1.0);
                if flat {
                    dot(&g_new, &g_new) + gb_new * gb_new < grad_sq
                } else {
                    f_new <= f - ARMIJO_C * step * grad_sq
                }
            };
            if ok {
                break Some((w_new, b_new, f_new, g_new, gb_new));
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some((w_new, b_new, f_new, g_new, gb_new)) = accepted else {
            break;
        };
        w = w_new;
        b = b_new;
        f = f_new;
        g = g_new;
        gb = gb_new;
        iterations += 1;
        observer(iterations, f + obj.l1_term(&w));
        converged = obj.optimality(&w, &g, gb) <= config.tolerance;
    }

    DescentState {
        objective: f + obj.l1_term(&w),
        weights: w,
        intercept: b,
        iterations,
        converged,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn soft_threshold(v: f64, cut: f64) -> f64 {
    if v > cut {
        v - cut
    } else if v < -cut {
        v + cut
    } else {
        0.0
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}
