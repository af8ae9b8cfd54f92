use super::features::{FeatureSpec, FeatureVector};
use super::{ClassifierError, Result};

/// Mutual information in nats between a binary feature and the label,
/// from joint counts. `present[c]` counts class-c documents containing the
/// feature; `totals[c]` counts class-c documents.
pub fn mutual_information(present: &[usize], totals: &[usize]) -> f64 {
    let n: usize = totals.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let on: f64 = present.iter().sum::<usize>() as f64;
    let mut mi = 0.0;
    for (&k, &t) in present.iter().zip(totals) {
        let pc = t as f64 / n;
        for (joint, marginal) in [(k as f64, on), ((t - k) as f64, n - on)] {
            if joint > 0.0 {
                let pj = joint / n;
                mi += pj * (pj / (pc * (marginal / n))).ln();
            }
        }
    }
    mi.max(0.0)
}

/// MI score of every vocabulary id over `docs` labeled by class index.
pub fn mutual_information_scores(
    vocabulary_len: usize,
    docs: &[(FeatureVector, usize)],
    classes: usize,
) -> Result<Vec<f64>> {
    let mut totals = vec![0usize; classes];
    for (_, y) in docs {
        if *y >= classes {
            return Err(ClassifierError::Corpus(format!("label index {y} out of range")));
        }
        totals[*y] += 1;
    }
    if totals.iter().filter(|&&t| t > 0).count() < 2 {
        return Err(ClassifierError::Degenerate("feature selection needs at least two classes".into()));
    }
    let mut present = vec![vec![0usize; classes]; vocabulary_len];
    for (v, y) in docs {
        for &id in &v.indices {
            present[id as usize][*y] += 1;
        }
    }
    Ok(present.iter().map(|p| mutual_information(p, &totals)).collect())
}

/// Keeps the `k` ids with highest MI, ties broken by lower id. `docs` must
/// be vectorized over the full vocabulary of `spec`.
pub fn mutual_information_select(
    spec: &FeatureSpec,
    docs: &[(FeatureVector, usize)],
    classes: usize,
    k: usize,
) -> Result<FeatureSpec> {
    let scores = mutual_information_scores(spec.vocabulary().len(), docs, classes)?;
    let mut order: Vec<u32> = (0..scores.len() as u32).collect();
    order.sort_by(|&a, &b| scores[b as usize].total_cmp(&scores[a as usize]).then(a.cmp(&b)));
    order.truncate(k);
    spec.with_selection(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::features::ExtractedFeatures;

    fn spec_with_words(n: usize) -> FeatureSpec {
        let docs = [ExtractedFeatures {
            detectors: Default::default(),
            words: (0..n).map(|i| format!("w{i}")).collect(),
        }];
        FeatureSpec::from_documents(&docs)
    }

    fn fv(ids: &[u32]) -> FeatureVector {
        FeatureVector { indices: ids.to_vec() }
    }

    #[test]
    fn perfect_predictor_has_label_entropy() {
        let mi = mutual_information(&[10, 0], &[10, 30]);
        let p: f64 = 0.25;
        let h = -(p * p.ln() + (1.0 - p) * (1.0 - p).ln());
        assert!((mi - h).abs() < 1e-12);
        assert!(mutual_information(&[5, 15], &[10, 30]).abs() < 1e-15);
    }

    #[test]
    fn ranking_and_ties() {
        let spec = spec_with_words(2);
        let a = 29u32;
        let b = 30u32;
        // a perfectly predicts class 0, b is independent, detector 3 is absent
        let docs = vec![
            (fv(&[a, b]), 0),
            (fv(&[a]), 0),
            (fv(&[b]), 1),
            (fv(&[]), 1),
        ];
        let chosen = mutual_information_select(&spec, &docs, 2, 1).unwrap();
        assert_eq!(chosen.selected(), &[a]);
        let scores = mutual_information_scores(spec.vocabulary().len(), &docs, 2).unwrap();
        assert_eq!(scores[b as usize], 0.0);
        // zero-score ids are ordered by id after the informative one
        let top3 = mutual_information_select(&spec, &docs, 2, 3).unwrap();
        assert_eq!(top3.selected(), &[0, 1, a]);
    }

    #[test]
    fn k_larger_than_vocabulary_keeps_everything() {
        let spec = spec_with_words(0);
        let docs = vec![(fv(&[1]), 0), (fv(&[2]), 1)];
        let all = mutual_information_select(&spec, &docs, 2, 10_000).unwrap();
        assert_eq!(all.selected().len(), spec.vocabulary().len());
    }

    #[test]
    fn single_class_is_degenerate() {
        let spec = spec_with_words(1);
        let docs = vec![(fv(&[1]), 0), (fv(&[2]), 0)];
        assert!(matches!(
            mutual_information_select(&spec, &docs, 2, 5),
            Err(ClassifierError::Degenerate(_))
        ));
    }
}
