use serde::{Deserialize, Serialize};

use super::{ClassifierError, Result};

/// p(positive | m) = 1 / (1 + exp(A·m + B)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigmoid {
    pub a: f64,
    pub b: f64,
}

impl Sigmoid {
    pub fn prob(&self, margin: f64) -> f64 {
        let z = self.a * margin + self.b;
        if z >= 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + z.exp())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlattParams {
    pub max_iter: usize,
    pub min_step: f64,
    /// Convergence threshold on the gradient, per example.
    pub gradient_tol: f64,
}

impl Default for PlattParams {
    fn default() -> Self {
        Self { max_iter: 100, min_step: 1e-10, gradient_tol: 1e-10 }
    }
}

/// Smoothed targets (N+ + 1)/(N+ + 2) for positives and 1/(N− + 2) for
/// negatives.
pub fn platt_targets(labels: &[bool]) -> Vec<f64> {
    let pos = labels.iter().filter(|&&l| l).count() as f64;
    let neg = labels.len() as f64 - pos;
    let hi = (pos + 1.0) / (pos + 2.0);
    let lo = 1.0 / (neg + 2.0);
    labels.iter().map(|&l| if l { hi } else { lo }).collect()
}

/// Cross-entropy of the sigmoid against `targets`, computed stably.
pub fn negative_log_likelihood(s: Sigmoid, margins: &[f64], targets: &[f64]) -> f64 {
    margins
        .iter()
        .zip(targets)
        .map(|(&m, &t)| {
            let z = s.a * m + s.b;
            if z >= 0.0 {
                t * z + (-z).exp().ln_1p()
            } else {
                (t - 1.0) * z + z.exp().ln_1p()
            }
        })
        .sum()
}

/// Maximum-likelihood sigmoid over SVM margins with smoothed targets,
/// by Newton's method with backtracking.
pub fn fit_sigmoid(margins: &[f64], labels: &[bool], params: PlattParams) -> Result<Sigmoid> {
    if margins.len() != labels.len() {
        return Err(ClassifierError::Corpus("margin and label counts differ".into()));
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(ClassifierError::Degenerate("calibration needs both labels".into()));
    }
    if margins.iter().any(|m| !m.is_finite()) {
        return Err(ClassifierError::Corpus("non-finite margin".into()));
    }
    let targets = platt_targets(labels);
    let mut s = Sigmoid { a: 0.0, b: ((neg as f64 + 1.0) / (pos as f64 + 1.0)).ln() };
    let mut fval = negative_log_likelihood(s, margins, &targets);
    let tol = params.gradient_tol * labels.len() as f64;
    let sigma = 1e-12;

    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iter {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (sigma, sigma, 0.0, 0.0, 0.0);
        for (&m, &t) in margins.iter().zip(&targets) {
            let z = s.a * m + s.b;
            let (p, q) = if z >= 0.0 {
                let e = (-z).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = z.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += m * m * d2;
            h22 += d2;
            h21 += m * d2;
            let d1 = t - p;
            g1 += m * d1;
            g2 += d1;
        }
        residual = g1.abs().max(g2.abs());
        if residual < tol {
            return finish(s);
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        loop {
            let trial = Sigmoid { a: s.a + step * da, b: s.b + step * db };
            let f = negative_log_likelihood(trial, margins, &targets);
            if f < fval + 1e-4 * step * gd {
                s = trial;
                fval = f;
                break;
            }
            step /= 2.0;
            if step < params.min_step {
                // no further decrease is representable; accept a point that
                // is stationary to working precision
                if residual < 1e-6 * labels.len() as f64 {
                    return finish(s);
                }
                return Err(ClassifierError::NotConverged { what: "Platt fit", iterations: 0, residual });
            }
        }
    }
    Err(ClassifierError::NotConverged { what: "Platt fit", iterations: params.max_iter, residual })
}

fn finish(s: Sigmoid) -> Result<Sigmoid> {
    if s.a < 0.0 {
        Ok(s)
    } else {
        Err(ClassifierError::Calibration(format!(
            "fitted slope A = {} is not negative, so probability would not increase with the margin",
            s.a
        )))
    }
}
