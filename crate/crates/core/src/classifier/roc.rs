use serde::{Deserialize, Serialize};

use super::{ClassifierError, Result};

/// A message is called positive (high criticality) when its score is at
/// least `threshold`. Both the miss/false-alarm pair and the TPR/FPR pair
/// are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fn_rate: f64,
    pub fp_rate: f64,
    pub tpr: f64,
    pub fpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Roc {
    /// Ordered by increasing threshold.
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Sweeps the threshold over 0, every distinct score, and a final value
/// above every score (1.0 for probabilities below 1).
pub fn roc_from_scores(scores: &[f64], positive: &[bool]) -> Result<Roc> {
    if scores.len() != positive.len() {
        return Err(ClassifierError::Corpus("score and label counts differ".into()));
    }
    if scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(ClassifierError::Corpus("scores must be finite and non-negative".into()));
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(ClassifierError::Degenerate("ROC needs both classes in the test set".into()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let max = scores[order[order.len() - 1]];
    let top = if max < 1.0 { 1.0 } else { max.next_up() };

    let mut thresholds = vec![0.0];
    for &i in &order {
        if *thresholds.last().unwrap() < scores[i] {
            thresholds.push(scores[i]);
        }
    }
    thresholds.push(top);

    // items scoring below the threshold are called negative
    let mut points = Vec::with_capacity(thresholds.len());
    let (mut missed, mut rejected_neg) = (0usize, 0usize);
    let mut cursor = 0;
    for th in thresholds {
        while cursor < order.len() && scores[order[cursor]] < th {
            if positive[order[cursor]] {
                missed += 1;
            } else {
                rejected_neg += 1;
            }
            cursor += 1;
        }
        let fn_rate = missed as f64 / n_pos as f64;
        let fp_rate = (n_neg - rejected_neg) as f64 / n_neg as f64;
        points.push(RocPoint { threshold: th, fn_rate, fp_rate, tpr: 1.0 - fn_rate, fpr: fp_rate });
    }
    Ok(Roc { points, auc: auc(scores, positive) })
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Equals the trapezoidal area under the TPR/FPR curve.
pub fn auc(scores: &[f64], positive: &[bool]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let n_pos = positive.iter().filter(|&&p| p).count() as f64;
    let n_neg = positive.len() as f64 - n_pos;
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            if positive[k] {
                rank_sum += mid_rank;
            }
        }
        i = j + 1;
    }
    (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg)
}

/// Area under the TPR/FPR polyline of `roc`.
pub fn trapezoid_auc(roc: &Roc) -> f64 {
    roc.points
        .windows(2)
        .map(|w| (w[0].fpr - w[1].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}
