//! Reference solver for the linear SVM dual, independent of SMO: dense
//! accelerated projected gradient onto {0 ≤ α ≤ C, Σ y_i α_i = 0}.
//! Meant for small problems in tests.

use super::svm::Sample;

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub alphas: Vec<f64>,
    /// Σα − ½ αᵀQα at `alphas`.
    pub objective: f64,
    pub iterations: usize,
}

/// Euclidean projection of `v` onto the box ∩ hyperplane, by bisection on
/// the multiplier of Σ y_i α_i = 0.
pub fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> (Vec<f64>, f64) {
        let a: Vec<f64> = v.iter().zip(y).map(|(vi, yi)| (vi - lambda * yi).clamp(0.0, c)).collect();
        let s = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum();
        (a, s)
    };
    let bound = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi)).0
}

pub fn solve_dual_qp(samples: &[Sample], labels: &[bool], c: f64) -> QpSolution {
    let n = samples.len();
    let y: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * samples[i].dot(&samples[j])).collect())
        .collect();
    let qv = |a: &[f64]| -> Vec<f64> { q.iter().map(|row| row.iter().zip(a).map(|(x, y)| x * y).sum()).collect() };
    let objective = |a: &[f64]| -> f64 {
        let qa = qv(a);
        a.iter().sum::<f64>() - 0.5 * a.iter().zip(&qa).map(|(x, y)| x * y).sum::<f64>()
    };

    // Lipschitz constant from power iteration, padded
    let mut v = vec![1.0; n];
    let mut lip = 0.0;
    for _ in 0..200 {
        let w = qv(&v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        lip = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.iter().map(|x| x / norm).collect();
    }
    let step = 1.0 / (1.05 * lip.max(1e-12));

    let mut x = vec![0.0; n];
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut best = objective(&x);
    let mut iterations = 0;
    let mut restarted = false;
    for k in 0..200_000 {
        iterations = k + 1;
        let g = qv(&z);
        let ascent: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi + step * (1.0 - gi)).collect();
        let next = project(&ascent, &y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let value = objective(&next);
        if value < best {
            // a plain step right after a restart can only drop by rounding:
            // the iterate is as good as this precision allows
            if restarted {
                break;
            }
            // restart momentum when the objective drops
            restarted = true;
            z = x.clone();
            t = 1.0;
            continue;
        }
        restarted = false;
        best = value;
        z = next.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / t_next * (a - b)).collect();
        x = next;
        t = t_next;
    }
    QpSolution { objective: objective(&x), alphas: x, iterations }
}
