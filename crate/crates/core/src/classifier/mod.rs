//! Message criticality: handcrafted and word features, mutual-information
//! selection, a linear SVM trained by SMO, Platt scaling, and ROC
//! evaluation.

mod features;
mod message;
mod model;
mod patterns;
mod platt;
pub mod qp;
mod roc;
mod select;
mod svm;

use thiserror::Error;

pub use features::{
    extract_features, tokenize, Detector, ExtractedFeatures, Extractor, Feature, FeatureSpec, FeatureSpecFile,
    FeatureVector,
};
pub use message::{parse_corpus, write_corpus, LabeledMessage, MessageDoc, Priority, Recipients, Sender};
pub use model::{
    accuracy, classify, roc_curve, score_set, train_model, CalibratedModel, Machine, TrainConfig, FORMAT_VERSION,
};
pub use patterns::{PatternSet, EXTRACTOR_VERSION, PHRASE_DETECTORS};
pub use platt::{fit_sigmoid, negative_log_likelihood, platt_targets, PlattParams, Sigmoid};
pub use roc::{auc, roc_from_scores, trapezoid_auc, Roc, RocPoint};
pub use select::{mutual_information, mutual_information_scores, mutual_information_select};
pub use svm::{dual_objective, kkt_violation, train_svm, Sample, SvmModel, SvmParams, TrainedSvm};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("degenerate corpus: {0}")]
    Degenerate(String),
    #[error("bad corpus: {0}")]
    Corpus(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { what: &'static str, iterations: usize, residual: f64 },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("model/extractor mismatch: {0}")]
    Version(String),
    #[error("bad patterns: {0}")]
    Patterns(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = ClassifierError> = std::result::Result<T, E>;
