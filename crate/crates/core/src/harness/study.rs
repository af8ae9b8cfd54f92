use super::{HarnessError, Result};
use crate::classifier::{classify, CalibratedModel, Extractor, LabeledMessage};
use crate::utility::expected_criticality;

/// Sample correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(HarnessError::Correlation("series lengths differ".into()));
    }
    if x.len() < 3 {
        return Err(HarnessError::Correlation("need at least 3 points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(HarnessError::Correlation("a series is constant".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Expected criticality of every message under the model.
pub fn expected_criticalities(
    model: &CalibratedModel,
    extractor: &Extractor,
    messages: &[LabeledMessage],
    loss_rates: &[f64],
) -> Result<Vec<f64>> {
    messages
        .iter()
        .map(|m| Ok(expected_criticality(&classify(model, extractor, &m.message)?, loss_rates)?))
        .collect()
}

/// Pearson correlation between model expected criticality and the
/// messages' assessed scores.
pub fn correlation_study(
    model: &CalibratedModel,
    extractor: &Extractor,
    scored: &[LabeledMessage],
    loss_rates: &[f64],
) -> Result<f64> {
    let scores = scored
        .iter()
        .map(|m| m.score.ok_or_else(|| HarnessError::Correlation("a message has no score".into())))
        .collect::<Result<Vec<_>>>()?;
    let ec = expected_criticalities(model, extractor, scored, loss_rates)?;
    pearson(&ec, &scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_inverse() {
        let x = [1.0, 2.0, 4.0, 7.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }
}
