//! Synthetic corpora, simulation of alerting policies, and evaluation
//! metrics.

mod corpus;
mod report;
mod sim;
mod study;

use thiserror::Error;

pub use corpus::{gen_corpus, gen_scored_corpus, holdout_split, injectable, ClassProfile, CorpusSpec, NoiseSpec};
pub use report::{costs_csv, decisions_csv, report, roc_csv, COSTS_HEADER, DECISIONS_HEADER, ROC_HEADER};
pub use sim::{
    inspection_buckets, simulate, MessageOutcome, PolicyKind, ScenarioClass, ScenarioSpec, SimEvent, SimModels,
    SimResult, Simulator,
};
pub use study::{correlation_study, expected_criticalities, pearson};

use crate::attention::AttentionError;
use crate::classifier::ClassifierError;
use crate::policy::PolicyError;
use crate::utility::UtilityError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("unknown policy `{0}` (expected never-alert, always-alert, neva or oracle-myopic)")]
    UnknownPolicy(String),
    #[error("correlation undefined: {0}")]
    Correlation(String),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Attention(#[from] AttentionError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
