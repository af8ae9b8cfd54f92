use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::{Extractor, FeatureSpec, FeatureVector};
use super::message::{LabeledMessage, MessageDoc};
use super::platt::{fit_sigmoid, PlattParams, Sigmoid};
use super::roc::{roc_from_scores, Roc};
use super::select::mutual_information_select;
use super::svm::{train_svm, Sample, SvmModel, SvmParams};
use super::{ClassifierError, Result};
use crate::utility::CriticalityDistribution;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub c: f64,
    pub tol: f64,
    /// Number of features kept by mutual-information selection.
    pub k: usize,
    pub max_iter: usize,
    /// Class names in probability order. With two classes the first is the
    /// positive class of a single machine; with more, one machine per class.
    pub classes: Vec<String>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let svm = SvmParams::default();
        Self {
            c: svm.c,
            tol: svm.tol,
            k: 500,
            max_iter: svm.max_iter,
            classes: vec!["high".into(), "low".into()],
        }
    }
}

/// One calibrated linear machine for `class` against the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Machine {
    pub class: String,
    pub svm: SvmModel,
    pub sigmoid: Sigmoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedModel {
    pub format_version: u32,
    /// Fingerprint of the extractor the features were computed with.
    pub extractor: String,
    pub features: FeatureSpec,
    pub classes: Vec<String>,
    pub machines: Vec<Machine>,
}

impl CalibratedModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        if model.format_version != FORMAT_VERSION {
            return Err(ClassifierError::Version(format!(
                "model format {} but this build reads {FORMAT_VERSION}",
                model.format_version
            )));
        }
        let dim = model.features.selected().len();
        if model.machines.iter().any(|m| m.svm.weights.len() != dim) {
            return Err(ClassifierError::Version("weight dimension differs from the selected features".into()));
        }
        Ok(model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }

    fn check(&self, extractor: &Extractor) -> Result<()> {
        let fp = extractor.fingerprint();
        if fp != self.extractor {
            return Err(ClassifierError::Version(format!(
                "model was trained with extractor {} but the active extractor is {fp}",
                self.extractor
            )));
        }
        Ok(())
    }

    pub fn sample(&self, v: &FeatureVector) -> Sample {
        Sample::binary(self.features.positions(v))
    }

    /// Margin of the first machine.
    pub fn margin(&self, extractor: &Extractor, msg: &MessageDoc) -> Result<f64> {
        self.check(extractor)?;
        let x = self.sample(&self.features.vectorize(&extractor.extract(msg)));
        Ok(self.machines[0].svm.margin(&x))
    }

    /// Class probabilities for an already vectorized message.
    pub fn probabilities(&self, v: &FeatureVector) -> CriticalityDistribution {
        let x = self.sample(v);
        let raw: Vec<f64> = self.machines.iter().map(|m| m.sigmoid.prob(m.svm.margin(&x))).collect();
        let probs = if self.classes.len() == 2 && raw.len() == 1 {
            vec![raw[0], 1.0 - raw[0]]
        } else {
            let z: f64 = raw.iter().sum();
            raw.iter().map(|p| p / z).collect()
        };
        CriticalityDistribution::new(probs).expect("sigmoid outputs lie in (0,1)")
    }
}

fn class_indices(corpus: &[LabeledMessage], classes: &[String]) -> Result<Vec<usize>> {
    corpus
        .iter()
        .map(|m| {
            classes
                .iter()
                .position(|c| *c == m.label)
                .ok_or_else(|| ClassifierError::Corpus(format!("label `{}` is not one of {classes:?}", m.label)))
        })
        .collect()
}

/// Feature extraction, selection, one SVM per machine, and Platt scaling
/// on the training margins.
pub fn train_model(corpus: &[LabeledMessage], extractor: &Extractor, config: &TrainConfig) -> Result<CalibratedModel> {
    if config.classes.len() < 2 {
        return Err(ClassifierError::Config("at least two classes are required".into()));
    }
    let ys = class_indices(corpus, &config.classes)?;
    let extracted: Vec<_> = corpus.iter().map(|m| extractor.extract(&m.message)).collect();
    let full = FeatureSpec::from_documents(&extracted);
    let docs: Vec<(FeatureVector, usize)> =
        extracted.iter().zip(&ys).map(|(x, &y)| (full.vectorize_all(x), y)).collect();
    let features = mutual_information_select(&full, &docs, config.classes.len(), config.k)?;
    let samples: Vec<Sample> = docs.iter().map(|(v, _)| Sample::binary(features.positions(v))).collect();
    let dim = features.selected().len();

    let positives: Vec<usize> = if config.classes.len() == 2 { vec![0] } else { (0..config.classes.len()).collect() };
    let params = SvmParams { c: config.c, tol: config.tol, max_iter: config.max_iter };
    let mut machines = Vec::new();
    for class in positives {
        let labels: Vec<bool> = ys.iter().map(|&y| y == class).collect();
        let svm = train_svm(&samples, &labels, dim, params)?.model;
        let margins: Vec<f64> = samples.iter().map(|s| svm.margin(s)).collect();
        let sigmoid = fit_sigmoid(&margins, &labels, PlattParams::default())?;
        machines.push(Machine { class: config.classes[class].clone(), svm, sigmoid });
    }
    Ok(CalibratedModel {
        format_version: FORMAT_VERSION,
        extractor: extractor.fingerprint(),
        features,
        classes: config.classes.clone(),
        machines,
    })
}

/// p(class | message) for every class of the model, in model order.
pub fn classify(model: &CalibratedModel, extractor: &Extractor, msg: &MessageDoc) -> Result<CriticalityDistribution> {
    model.check(extractor)?;
    Ok(model.probabilities(&model.features.vectorize(&extractor.extract(msg))))
}

/// Probability of the first class for each message, with whether the
/// message carries that label.
pub fn score_set(model: &CalibratedModel, extractor: &Extractor, set: &[LabeledMessage]) -> Result<(Vec<f64>, Vec<bool>)> {
    model.check(extractor)?;
    class_indices(set, &model.classes)?;
    let scores = set
        .iter()
        .map(|m| model.probabilities(&model.features.vectorize(&extractor.extract(&m.message))).probs()[0])
        .collect();
    let positive = set.iter().map(|m| m.label == model.classes[0]).collect();
    Ok((scores, positive))
}

/// Miss and false-alarm rates for the first class across thresholds.
pub fn roc_curve(model: &CalibratedModel, extractor: &Extractor, testset: &[LabeledMessage]) -> Result<Roc> {
    let (scores, positive) = score_set(model, extractor, testset)?;
    roc_from_scores(&scores, &positive)
}

/// Fraction of messages whose most probable class is their label.
pub fn accuracy(model: &CalibratedModel, extractor: &Extractor, testset: &[LabeledMessage]) -> Result<f64> {
    model.check(extractor)?;
    let ys = class_indices(testset, &model.classes)?;
    let hits = testset
        .iter()
        .zip(ys)
        .filter(|(m, y)| {
            let p = model.probabilities(&model.features.vectorize(&extractor.extract(&m.message)));
            let best = (0..p.probs().len()).max_by(|&a, &b| p.probs()[a].total_cmp(&p.probs()[b]).then(b.cmp(&a)));
            best == Some(*y)
        })
        .count();
    Ok(hits as f64 / testset.len().max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::patterns::PatternSet;
    use chrono::NaiveDate;

    fn msg(label: &str, body: &str) -> LabeledMessage {
        let t = NaiveDate::from_ymd_opt(2001, 3, 5).unwrap().and_hms_opt(10, 0, 0).unwrap();
        let mut m = MessageDoc::new(t);
        m.body = body.into();
        LabeledMessage { label: label.into(), score: None, message: m }
    }

    fn toy() -> Vec<LabeledMessage> {
        let mut v = Vec::new();
        for i in 0..12 {
            v.push(msg("high", &format!("server down fix it as soon as possible ticket{i}")));
            v.push(msg("low", &format!("newsletter recipes garden club notes{i}")));
        }
        v.push(msg("high", "garden club server"));
        v.push(msg("low", "newsletter fix"));
        v
    }

    #[test]
    fn trains_and_classifies_toy_corpus() {
        let e = Extractor::default();
        let model = train_model(&toy(), &e, &TrainConfig::default()).unwrap();
        assert!(model.machines[0].sigmoid.a < 0.0);
        let p = classify(&model, &e, &toy()[0].message).unwrap();
        assert!(p.probs()[0] > 0.5);
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.probs().iter().all(|x| *x > 0.0 && *x < 1.0));

        let json = model.to_json();
        let back = CalibratedModel::from_json(&json).unwrap();
        assert_eq!(classify(&back, &e, &toy()[1].message).unwrap(), classify(&model, &e, &toy()[1].message).unwrap());
    }

    #[test]
    fn adding_a_positive_feature_raises_probability() {
        let e = Extractor::default();
        let model = train_model(&toy(), &e, &TrainConfig::default()).unwrap();
        let words = model.features.vocabulary();
        let sel = model.features.selected();
        let (pos, _) = model.machines[0]
            .svm
            .weights
            .iter()
            .enumerate()
            .filter(|(p, _)| matches!(words[sel[*p] as usize], crate::classifier::Feature::Word(_)))
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let crate::classifier::Feature::Word(w) = &words[sel[pos] as usize] else { unreachable!() };
        let base = msg("low", "garden notes");
        let with = msg("low", &format!("garden notes {w}"));
        let pb = classify(&model, &e, &base.message).unwrap().probs()[0];
        let pw = classify(&model, &e, &with.message).unwrap().probs()[0];
        assert!(pw > pb);
    }

    #[test]
    fn extractor_mismatch_is_a_version_error() {
        let e = Extractor::default();
        let model = train_model(&toy(), &e, &TrainConfig::default()).unwrap();
        let other = Extractor::new(PatternSet::from_json(r#"{"importance": ["matters"]}"#).unwrap());
        assert!(matches!(classify(&model, &other, &toy()[0].message), Err(ClassifierError::Version(_))));
        let mut bumped: serde_json::Value = serde_json::from_str(&model.to_json()).unwrap();
        bumped["format_version"] = 99.into();
        assert!(matches!(CalibratedModel::from_json(&bumped.to_string()), Err(ClassifierError::Version(_))));
    }

    #[test]
    fn one_vs_rest_renormalizes() {
        let mut corpus = toy();
        for i in 0..10 {
            corpus.push(msg("medium", &format!("meeting notes agenda review{i}")));
        }
        let config = TrainConfig { classes: vec!["high".into(), "medium".into(), "low".into()], ..Default::default() };
        let e = Extractor::default();
        let model = train_model(&corpus, &e, &config).unwrap();
        assert_eq!(model.machines.len(), 3);
        let p = classify(&model, &e, &corpus.last().unwrap().message).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(p.probs().len(), 3);
    }

    #[test]
    fn unknown_label_and_single_class_rejected() {
        let e = Extractor::default();
        assert!(train_model(&[msg("urgent", "x")], &e, &TrainConfig::default()).is_err());
        let one = vec![msg("high", "a"), msg("high", "b")];
        assert!(matches!(train_model(&one, &e, &TrainConfig::default()), Err(ClassifierError::Degenerate(_))));
    }
}
