//! Alert decisions over a queue of pending messages: pick the modality and
//! chunk with the highest net value of alerting, and alert only when that
//! value is positive.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attention::{
    infer_attention, infer_inspection_interval, AttentionDistribution, AttentionError, AttentionEvidence,
    AttentionModel, InspectionDistribution,
};
use crate::classifier::MessageDoc;
use crate::utility::{
    eca, evta_with, expected_criticality, AlertAction, Clock, CostModel, CriticalityDistribution, Modality,
    UtilityError,
};

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error(transparent)]
    Attention(#[from] AttentionError),
    #[error("message id `{0}` appears more than once in the queue")]
    DuplicateId(String),
}

pub type Result<T, E = PolicyError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendingMessage {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<MessageDoc>,
    pub crit: CriticalityDistribution,
    pub t_o: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionKind {
    Alert,
    Defer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageValue {
    pub id: String,
    pub evta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlertDecision {
    pub kind: DecisionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modality: Option<Modality>,
    /// Messages carried by the alert, highest EVTA first.
    pub message_ids: Vec<String>,
    /// NEVA of the chosen alert, or of the best rejected one when
    /// deferring (0 for an empty queue).
    pub neva: f64,
    /// EVTA of every pending message, in id order.
    pub evta: Vec<MessageValue>,
}

impl AlertDecision {
    fn defer(neva: f64, evta: Vec<MessageValue>) -> Self {
        Self { kind: DecisionKind::Defer, modality: None, message_ids: Vec::new(), neva, evta }
    }

    pub fn is_alert(&self) -> bool {
        self.kind == DecisionKind::Alert
    }
}

/// Modalities usable given the location evidence: mobile only when the
/// user is known to be away, desktop only when not known to be away.
pub fn available_modalities(costs: &CostModel, away: bool) -> Vec<Modality> {
    costs
        .modalities()
        .filter(|m| match m {
            Modality::Mobile => away,
            m if m.is_desktop() => !away,
            _ => true,
        })
        .collect()
}

/// Everything a decision needs besides the queue.
#[derive(Debug, Clone)]
pub struct DecisionInputs<'a> {
    pub attention: &'a AttentionDistribution,
    pub inspect: &'a InspectionDistribution,
    pub modalities: &'a [Modality],
    pub t: f64,
    pub t_last: f64,
    pub costs: &'a CostModel,
}

fn canonical(pending: &[PendingMessage]) -> Result<Vec<&PendingMessage>> {
    let mut sorted: Vec<&PendingMessage> = pending.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    for w in sorted.windows(2) {
        if w[0].id == w[1].id {
            return Err(PolicyError::DuplicateId(w[0].id.clone()));
        }
    }
    Ok(sorted)
}

fn message_evtas(pending: &[&PendingMessage], inputs: &DecisionInputs) -> Result<Vec<f64>> {
    let rates = inputs.costs.loss_rates();
    pending
        .iter()
        .map(|m| {
            let clock = Clock { t_o: m.t_o, t: inputs.t, t_last: inputs.t_last };
            Ok(evta_with(&m.crit, &rates, inputs.inspect, &clock, inputs.costs.alert_free_timing())?)
        })
        .collect()
}

/// Best EVTA-sorted prefix for one modality. Returns indices into
/// `evtas` (highest first) and the prefix's NEVA; the shortest prefix wins
/// ties.
pub fn select_chunk(
    evtas: &[f64],
    modality: Modality,
    attention: &AttentionDistribution,
    costs: &CostModel,
) -> Result<(Vec<usize>, f64)> {
    if evtas.is_empty() {
        return Err(UtilityError::Domain("no pending messages".into()).into());
    }
    let mut order: Vec<usize> = (0..evtas.len()).collect();
    order.sort_by(|&a, &b| evtas[b].total_cmp(&evtas[a]).then(a.cmp(&b)));
    let mut best = (1, f64::NEG_INFINITY);
    let mut sum = 0.0;
    for (k, &i) in order.iter().enumerate() {
        sum += evtas[i];
        let n = k + 1;
        let value = sum - eca(AlertAction { modality, complexity: n }, attention, costs)?;
        if value > best.1 {
            best = (n, value);
        }
    }
    order.truncate(best.0);
    Ok((order, best.1))
}

/// Decision from explicit distributions.
pub fn decide_with(pending: &[PendingMessage], inputs: &DecisionInputs) -> Result<AlertDecision> {
    let sorted = canonical(pending)?;
    let evtas = message_evtas(&sorted, inputs)?;
    let breakdown: Vec<MessageValue> =
        sorted.iter().zip(&evtas).map(|(m, &evta)| MessageValue { id: m.id.clone(), evta }).collect();
    if sorted.is_empty() {
        return Ok(AlertDecision::defer(0.0, breakdown));
    }

    let mut best: Option<(Modality, Vec<usize>, f64)> = None;
    for &modality in inputs.modalities {
        let (chunk, value) = select_chunk(&evtas, modality, inputs.attention, inputs.costs)?;
        if best.as_ref().is_none_or(|b| value > b.2) {
            best = Some((modality, chunk, value));
        }
    }
    match best {
        Some((modality, chunk, value)) if value > 0.0 => Ok(AlertDecision {
            kind: DecisionKind::Alert,
            modality: Some(modality),
            message_ids: chunk.iter().map(|&i| sorted[i].id.clone()).collect(),
            neva: value,
            evta: breakdown,
        }),
        Some((_, _, value)) => Ok(AlertDecision::defer(value, breakdown)),
        None => Ok(AlertDecision::defer(0.0, breakdown)),
    }
}

/// Decision for the current attention evidence at time `t`, given the time
/// of the user's last inbox access.
pub fn decide(
    pending: &[PendingMessage],
    evidence: &AttentionEvidence,
    t: f64,
    t_last: f64,
    model: &AttentionModel,
    costs: &CostModel,
) -> Result<AlertDecision> {
    let attention = infer_attention(model, evidence)?;
    let inspect = infer_inspection_interval(model, evidence)?;
    let modalities = available_modalities(costs, evidence.is_away());
    decide_with(
        pending,
        &DecisionInputs { attention: &attention, inspect: &inspect, modalities: &modalities, t, t_last, costs },
    )
}

/// Best (modality, subset) by enumerating every non-empty subset. A test
/// oracle; exponential in the queue length.
pub fn decide_exhaustive(pending: &[PendingMessage], inputs: &DecisionInputs) -> Result<(Option<(Modality, BTreeSet<String>)>, f64)> {
    let sorted = canonical(pending)?;
    let evtas = message_evtas(&sorted, inputs)?;
    let n = sorted.len();
    let mut best: (Option<(Modality, BTreeSet<String>)>, f64) = (None, f64::NEG_INFINITY);
    for &modality in inputs.modalities {
        for mask in 1u64..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sum: f64 = members.iter().map(|&i| evtas[i]).sum();
            let action = AlertAction { modality, complexity: members.len() };
            let value = sum - eca(action, inputs.attention, inputs.costs)?;
            if value > best.1 {
                best = (Some((modality, members.iter().map(|&i| sorted[i].id.clone()).collect())), value);
            }
        }
    }
    if n == 0 {
        best.1 = 0.0;
    }
    Ok(best)
}

/// Pending messages by expected criticality, highest first; ties by
/// arrival time, then id.
pub fn rank_messages<'a>(pending: &'a [PendingMessage], loss_rates: &[f64]) -> Result<Vec<&'a PendingMessage>> {
    let mut scored = pending
        .iter()
        .map(|m| Ok((expected_criticality(&m.crit, loss_rates)?, m)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.t_o.total_cmp(&b.1.t_o))
            .then_with(|| a.1.id.cmp(&b.1.id))
    });
    Ok(scored.into_iter().map(|(_, m)| m).collect())
}

/// Same kind, modality and set of messages.
pub fn same_choice(a: &AlertDecision, b: &AlertDecision) -> bool {
    let ids = |d: &AlertDecision| d.message_ids.iter().cloned().collect::<BTreeSet<_>>();
    a.kind == b.kind && a.modality == b.modality && ids(a) == ids(b)
}
