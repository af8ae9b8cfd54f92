//! Request and response bodies of the HTTP service.
//!
//! Optional `model` fields let a caller score against a classifier it
//! holds instead of the one installed in the service. Optional `seed`
//! fields override the seed inside a supplied or default spec.

use serde::{Deserialize, Serialize};

use crate::attention::{AttentionDistribution, AttentionEvidence, AttentionState, InspectionDistribution};
use crate::classifier::{CalibratedModel, LabeledMessage, MessageDoc, Roc, TrainConfig};
use crate::harness::{CorpusSpec, PolicyKind, ScenarioSpec, SimResult};
use crate::policy::{AlertDecision, PendingMessage};
use crate::utility::CriticalityDistribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub classifier: bool,
    /// Fingerprint of the active feature extractor.
    pub extractor: String,
    pub queued: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InferAttentionRequest {
    #[serde(default)]
    pub evidence: AttentionEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferAttentionResponse {
    pub attention: AttentionDistribution,
    pub most_likely: AttentionState,
    pub inspection: InspectionDistribution,
    /// Mean inspection interval in minutes.
    pub expected_interval: f64,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRequest {
    pub corpus: Vec<LabeledMessage>,
    #[serde(default)]
    pub config: TrainConfig,
    /// Make the trained model the service's active classifier.
    #[serde(default = "yes")]
    pub install: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResponse {
    pub model: CalibratedModel,
    pub messages: usize,
    pub training_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub messages: Vec<MessageDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<CalibratedModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageScore {
    /// Class probabilities in the order of `ScoreResponse::classes`.
    pub probs: CriticalityDistribution,
    pub expected_criticality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub classes: Vec<String>,
    pub scores: Vec<MessageScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocRequest {
    pub testset: Vec<LabeledMessage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<CalibratedModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocResponse {
    pub roc: Roc,
    pub accuracy: f64,
    /// The curve as `roc.csv`.
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecideRequest {
    pub pending: Vec<PendingMessage>,
    #[serde(default)]
    pub evidence: AttentionEvidence,
    pub t: f64,
    pub t_last: f64,
}

/// A message to queue. Without `crit` the message body is classified by
/// the active classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnqueueRequest {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<MessageDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crit: Option<CriticalityDistribution>,
    pub t_o: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueResponse {
    pub pending: Vec<PendingMessage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueDecideRequest {
    #[serde(default)]
    pub evidence: AttentionEvidence,
    pub t: f64,
    pub t_last: f64,
    /// Remove the messages an alert carries from the queue.
    #[serde(default = "yes")]
    pub dequeue: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueDecideResponse {
    pub decision: AlertDecision,
    pub remaining: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredOptions {
    pub count: usize,
    /// Standard deviation of the noise added to assessed scores.
    #[serde(default = "default_score_noise")]
    pub noise: f64,
}

pub fn default_score_noise() -> f64 {
    5.0
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenCorpusRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<CorpusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Generate a scored set of this size instead of the labeled corpus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scored: Option<ScoredOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenCorpusResponse {
    pub messages: usize,
    /// The corpus as JSON lines.
    pub jsonl: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimulateRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSpec>,
    /// Seed of the first run; runs use consecutive seeds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    /// Policy names; all four when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<String>>,
    /// Drop per-message outcomes and event logs from the results.
    #[serde(default)]
    pub summary_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: PolicyKind,
    pub runs: usize,
    pub mean_total_cost: f64,
    pub mean_interruption_cost: f64,
    pub mean_delay_cost: f64,
    pub mean_alerts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResponse {
    pub summary: Vec<PolicySummary>,
    pub results: Vec<SimResult>,
    pub costs_csv: String,
    pub decisions_csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelateRequest {
    pub scored: Vec<LabeledMessage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<CalibratedModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelateResponse {
    pub pearson: f64,
    pub messages: usize,
}

/// Mean costs per policy, in order of first appearance.
pub fn summarize(results: &[SimResult]) -> Vec<PolicySummary> {
    let mut order: Vec<PolicyKind> = Vec::new();
    for r in results {
        if !order.contains(&r.policy) {
            order.push(r.policy);
        }
    }
    order
        .into_iter()
        .map(|policy| {
            let runs: Vec<&SimResult> = results.iter().filter(|r| r.policy == policy).collect();
            let n = runs.len() as f64;
            let mean = |f: fn(&SimResult) -> f64| runs.iter().map(|r| f(r)).sum::<f64>() / n;
            PolicySummary {
                policy,
                runs: runs.len(),
                mean_total_cost: mean(|r| r.total_cost),
                mean_interruption_cost: mean(|r| r.interruption_cost),
                mean_delay_cost: mean(|r| r.delay_cost),
                mean_alerts: mean(|r| r.alerts as f64),
            }
        })
        .collect()
}
