//! The model directory: file names, the shipped default documents, and
//! loading a directory into ready-to-use models.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::attention::authoring::{dbn_model, static_model, to_model_json};
use crate::attention::{AttentionError, AttentionModel};
use crate::classifier::{train_model, CalibratedModel, ClassifierError, Extractor, PatternSet, TrainConfig};
use crate::harness::{gen_corpus, holdout_split, CorpusSpec, HarnessError, ScenarioSpec};
use crate::utility::{CostModel, UtilityError};

pub const ATTENTION_FILE: &str = "attention.json";
pub const ATTENTION_DBN_FILE: &str = "attention_dbn.json";
pub const COSTS_FILE: &str = "costs.json";
pub const PATTERNS_FILE: &str = "patterns.json";
pub const CLASSIFIER_FILE: &str = "classifier.json";
pub const CORPUS_SPEC_FILE: &str = "corpus_spec.json";
pub const SCENARIO_FILE: &str = "scenario.json";

/// Messages of each class held out when training the shipped classifier.
pub const HOLDOUT_PER_CLASS: usize = 250;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Attention(#[from] AttentionError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

fn pretty<T: serde::Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Classifier trained on the default corpus minus the held-out split.
pub fn default_classifier() -> Result<CalibratedModel> {
    let spec = CorpusSpec::default();
    let corpus = gen_corpus(&spec)?;
    let (train, _) = holdout_split(&corpus, HOLDOUT_PER_CLASS, spec.seed)?;
    Ok(train_model(&train, &Extractor::default(), &TrainConfig::default())?)
}

/// Every shipped model file as (name, contents). The classifier is the
/// slow one and is optional.
pub fn default_files(with_classifier: bool) -> Result<Vec<(&'static str, String)>> {
    let mut files = vec![
        (ATTENTION_FILE, to_model_json(&static_model())),
        (ATTENTION_DBN_FILE, to_model_json(&dbn_model())),
        (COSTS_FILE, pretty(&CostModel::default_model())),
        (PATTERNS_FILE, pretty(&PatternSet::default())),
        (CORPUS_SPEC_FILE, pretty(&CorpusSpec::default())),
        (SCENARIO_FILE, pretty(&ScenarioSpec::default())),
    ];
    if with_classifier {
        let mut text = default_classifier()?.to_json();
        text.push('\n');
        files.push((CLASSIFIER_FILE, text));
    }
    Ok(files)
}

/// Models loaded from a directory. Missing files fall back to the
/// built-in defaults, except the classifier, which stays absent.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub attention: AttentionModel,
    pub costs: CostModel,
    pub extractor: Extractor,
    pub classifier: Option<CalibratedModel>,
    pub corpus_spec: CorpusSpec,
    pub scenario: ScenarioSpec,
}

impl ModelSet {
    pub fn defaults() -> Self {
        Self {
            attention: AttentionModel::from_file(&static_model()).expect("default attention model is valid"),
            costs: CostModel::default_model(),
            extractor: Extractor::default(),
            classifier: None,
            corpus_spec: CorpusSpec::default(),
            scenario: ScenarioSpec::default(),
        }
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut set = Self::defaults();
        if let Some(text) = read_optional(dir, ATTENTION_FILE)? {
            set.attention = AttentionModel::from_json(&text)?;
        }
        if let Some(text) = read_optional(dir, COSTS_FILE)? {
            set.costs = CostModel::from_json(&text)?;
        }
        if let Some(text) = read_optional(dir, PATTERNS_FILE)? {
            set.extractor = Extractor::new(PatternSet::from_json(&text)?);
        }
        if let Some(text) = read_optional(dir, CLASSIFIER_FILE)? {
            set.classifier = Some(CalibratedModel::from_json(&text)?);
        }
        if let Some(text) = read_optional(dir, CORPUS_SPEC_FILE)? {
            set.corpus_spec = parse(dir, CORPUS_SPEC_FILE, &text)?;
        }
        if let Some(text) = read_optional(dir, SCENARIO_FILE)? {
            set.scenario = parse(dir, SCENARIO_FILE, &text)?;
        }
        Ok(set)
    }

    /// Cost model named by a scenario, relative to `dir`; the loaded one
    /// when the name is the default file.
    pub fn scenario_costs(&self, dir: Option<&Path>, scenario: &ScenarioSpec) -> Result<CostModel> {
        match dir {
            Some(dir) if scenario.cost_model != COSTS_FILE => {
                let text = read_optional(dir, &scenario.cost_model)?.ok_or_else(|| ModelError::Invalid {
                    path: dir.join(&scenario.cost_model),
                    message: "cost model file not found".into(),
                })?;
                Ok(CostModel::from_json(&text)?)
            }
            _ => Ok(self.costs.clone()),
        }
    }
}

fn read_optional(dir: &Path, name: &str) -> Result<Option<String>> {
    let path = dir.join(name);
    match std::fs::read_to_string(&path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(source) => Err(ModelError::Read { path, source }),
    }
}

fn parse<T: serde::de::DeserializeOwned>(dir: &Path, name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ModelError::Invalid { path: dir.join(name), message: e.to_string() })
}
