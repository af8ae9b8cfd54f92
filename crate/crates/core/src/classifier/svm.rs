use serde::{Deserialize, Serialize};

use super::{ClassifierError, Result};

/// A sparse real-valued training row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl Sample {
    pub fn dense(x: &[f64]) -> Self {
        Self { indices: (0..x.len()).collect(), values: x.to_vec() }
    }

    /// Binary row with ones at `positions` (sorted, distinct).
    pub fn binary(positions: Vec<usize>) -> Self {
        let values = vec![1.0; positions.len()];
        Self { indices: positions, values }
    }

    pub fn dot_dense(&self, w: &[f64]) -> f64 {
        self.indices.iter().zip(&self.values).map(|(&i, v)| w[i] * v).sum()
    }

    pub fn dot(&self, other: &Sample) -> f64 {
        let (mut a, mut b, mut s) = (0, 0, 0.0);
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    s += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { c: 1.0, tol: 1e-3, max_iter: 200_000 }
    }
}

/// Linear decision function w·x + b over the selected features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub tol: f64,
}

impl SvmModel {
    pub fn margin(&self, x: &Sample) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }
}

#[derive(Debug, Clone)]
pub struct TrainedSvm {
    pub model: SvmModel,
    pub alphas: Vec<f64>,
    pub iterations: usize,
}

fn sign(label: bool) -> f64 {
    if label {
        1.0
    } else {
        -1.0
    }
}

/// Soft-margin linear SVM by sequential minimal optimization.
///
/// Each step takes the maximal violating pair: the lowest F_i = w·x_i − y_i
/// among indices that may move up and the highest among those that may
/// move down, first index winning ties. Training stops once the gap
/// between the two is at most 2·tol, which leaves every point within tol
/// of its KKT condition with the bias set to the gap midpoint.
pub fn train_svm(samples: &[Sample], labels: &[bool], dim: usize, params: SvmParams) -> Result<TrainedSvm> {
    if samples.len() != labels.len() {
        return Err(ClassifierError::Corpus("sample and label counts differ".into()));
    }
    if !labels.iter().any(|&l| l) || labels.iter().all(|&l| l) {
        return Err(ClassifierError::Degenerate("SVM training needs both labels".into()));
    }
    if !(params.c > 0.0 && params.c.is_finite()) || !(params.tol > 0.0) {
        return Err(ClassifierError::Config(format!("C = {} and tol = {} must be positive", params.c, params.tol)));
    }
    for s in samples {
        if s.values.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::Corpus("non-finite feature value".into()));
        }
        if s.indices.iter().any(|&i| i >= dim) {
            return Err(ClassifierError::Corpus(format!("feature index outside dimension {dim}")));
        }
    }

    let n = samples.len();
    let c = params.c;
    let y: Vec<f64> = labels.iter().map(|&l| sign(l)).collect();
    let diag: Vec<f64> = samples.iter().map(|s| s.dot(s)).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut f: Vec<f64> = y.iter().map(|yi| -yi).collect();

    let up = |a: f64, yi: f64| if yi > 0.0 { a < c } else { a > 0.0 };
    let low = |a: f64, yi: f64| if yi > 0.0 { a > 0.0 } else { a < c };

    let mut iterations = 0;
    let (b_up, b_low) = loop {
        let mut i_up = usize::MAX;
        let mut i_low = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) && (i_up == usize::MAX || f[t] < f[i_up]) {
                i_up = t;
            }
            if low(alpha[t], y[t]) && (i_low == usize::MAX || f[t] > f[i_low]) {
                i_low = t;
            }
        }
        let b_up = f[i_up];
        let b_low = f[i_low];
        if b_low - b_up <= 2.0 * params.tol {
            break (b_up, b_low);
        }
        if iterations >= params.max_iter {
            return Err(ClassifierError::NotConverged {
                what: "SMO",
                iterations,
                residual: b_low - b_up,
            });
        }
        iterations += 1;

        let (i, j) = (i_up, i_low);
        let k_ij = samples[i].dot(&samples[j]);
        let eta = (diag[i] + diag[j] - 2.0 * k_ij).max(1e-12);
        let (lo, hi) = if y[i] != y[j] {
            ((alpha[j] - alpha[i]).max(0.0), c.min(c + alpha[j] - alpha[i]))
        } else {
            ((alpha[i] + alpha[j] - c).max(0.0), c.min(alpha[i] + alpha[j]))
        };
        let aj = (alpha[j] + y[j] * (f[i] - f[j]) / eta).clamp(lo, hi);
        let ai = alpha[i] + y[i] * y[j] * (alpha[j] - aj);
        // rounding residue next to a bound would otherwise keep a point in
        // the working set with no representable step left
        let snap = |a: f64| if a < c * 1e-12 { 0.0 } else if a > c * (1.0 - 1e-12) { c } else { a };
        let (ai, aj) = (snap(ai), snap(aj));
        let (di, dj) = (ai - alpha[i], aj - alpha[j]);
        alpha[i] = ai;
        alpha[j] = aj;
        for (idx, v) in samples[i].indices.iter().zip(&samples[i].values) {
            w[*idx] += y[i] * di * v;
        }
        for (idx, v) in samples[j].indices.iter().zip(&samples[j].values) {
            w[*idx] += y[j] * dj * v;
        }
        for t in 0..n {
            f[t] = samples[t].dot_dense(&w) - y[t];
        }
    };

    Ok(TrainedSvm {
        model: SvmModel { weights: w, bias: -(b_up + b_low) / 2.0, c, tol: params.tol },
        alphas: alpha,
        iterations,
    })
}

/// Σα − ½‖Σ α_i y_i x_i‖², the dual objective being maximized.
pub fn dual_objective(samples: &[Sample], labels: &[bool], alphas: &[f64], dim: usize) -> f64 {
    let mut w = vec![0.0; dim];
    for ((s, &l), &a) in samples.iter().zip(labels).zip(alphas) {
        for (idx, v) in s.indices.iter().zip(&s.values) {
            w[*idx] += sign(l) * a * v;
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * w.iter().map(|x| x * x).sum::<f64>()
}

/// Largest deviation of any point from its KKT condition under `model`.
pub fn kkt_violation(model: &SvmModel, samples: &[Sample], labels: &[bool], alphas: &[f64]) -> f64 {
    let c = model.c;
    let scale = 1e-12 * c.max(1.0);
    samples
        .iter()
        .zip(labels)
        .zip(alphas)
        .map(|((s, &l), &a)| {
            let yf = sign(l) * model.margin(s);
            if a <= scale {
                (1.0 - yf).max(0.0)
            } else if a >= c - scale {
                (yf - 1.0).max(0.0)
            } else {
                (yf - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::qp::solve_dual_qp;
    use crate::rng::SimRng;

    fn points(xs: &[&[f64]]) -> Vec<Sample> {
        xs.iter().map(|x| Sample::dense(x)).collect()
    }

    #[test]
    fn symmetric_pair_gives_unit_weight() {
        let s = points(&[&[-1.0], &[1.0]]);
        let params = SvmParams { c: 1e6, tol: 1e-9, ..Default::default() };
        let t = train_svm(&s, &[false, true], 1, params).unwrap();
        assert!((t.model.weights[0] - 1.0).abs() < 1e-6);
        assert!(t.model.bias.abs() < 1e-6);
    }

    #[test]
    fn duplicated_points_give_the_same_hyperplane() {
        let s = points(&[&[-1.0, 0.5], &[1.0, 2.0], &[0.5, -1.0], &[2.0, 1.0]]);
        let labels = [false, true, false, true];
        let params = SvmParams { c: 1e4, tol: 1e-9, ..Default::default() };
        let once = train_svm(&s, &labels, 2, params).unwrap().model;
        let s2: Vec<Sample> = s.iter().chain(&s).cloned().collect();
        let l2: Vec<bool> = labels.iter().chain(&labels).copied().collect();
        let twice = train_svm(&s2, &l2, 2, params).unwrap().model;
        for (a, b) in once.weights.iter().zip(&twice.weights) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!((once.bias - twice.bias).abs() < 1e-6);
    }

    #[test]
    fn nonseparable_set_meets_kkt_and_matches_qp_oracle() {
        let mut rng = SimRng::new(5);
        let n = 24;
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let s: Vec<Sample> = labels
            .iter()
            .map(|&l| {
                let mu = if l { 0.7 } else { -0.7 };
                Sample::dense(&[mu + rng.normal(), mu + rng.normal()])
            })
            .collect();
        let params = SvmParams { c: 1.0, tol: 1e-4, ..Default::default() };
        let t = train_svm(&s, &labels, 2, params).unwrap();
        assert!(kkt_violation(&t.model, &s, &labels, &t.alphas) <= 1e-4 + 1e-9);
        let smo = dual_objective(&s, &labels, &t.alphas, 2);
        let oracle = solve_dual_qp(&s, &labels, 1.0);
        assert!((smo - oracle.objective).abs() <= 1e-6 * oracle.objective.abs().max(1.0) + 1e-5);
    }

    #[test]
    fn input_errors() {
        let s = points(&[&[1.0], &[2.0]]);
        assert!(matches!(
            train_svm(&s, &[true, true], 1, SvmParams::default()),
            Err(ClassifierError::Degenerate(_))
        ));
        let bad = points(&[&[f64::NAN], &[2.0]]);
        assert!(train_svm(&bad, &[true, false], 1, SvmParams::default()).is_err());
        let zero_c = SvmParams { c: 0.0, ..Default::default() };
        assert!(train_svm(&s, &[true, false], 1, zero_c).is_err());
    }
}
