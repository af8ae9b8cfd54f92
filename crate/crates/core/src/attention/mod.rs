//! The attention model: a Bayesian network over the user's attentional focus
//! and inbox inspection interval, bound to named evidence fields.

pub mod authoring;
mod temporal;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayesnet::{self, BayesNet, BayesNetError, Evidence, NetworkSpec};

pub use temporal::{SliceEvidence, TemporalAttentionModel, TemporalModelFile};

pub const FOCUS_VARIABLE: &str = "FOCUS_OF_ATTENTION";
pub const INSPECTION_VARIABLE: &str = "INSPECTION_INTERVAL";

const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AttentionError {
    #[error("attention network rejected: {0}")]
    Network(#[from] BayesNetError),
    #[error("attention model contract violated: {0}")]
    Contract(String),
    #[error("evidence field `{field}` has no state `{value}`")]
    Evidence { field: EvidenceField, value: String },
    #[error("invalid inspection distribution: {0}")]
    Inspection(String),
}

pub type Result<T, E = AttentionError> = std::result::Result<T, E>;

/// The twelve mutually exclusive attentional contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttentionState {
    #[serde(rename = "SITUATION AWARENESS-CATCHING UP")]
    SituationAwareness,
    #[serde(rename = "NON-SPECIFIC BACKGROUND TASKS")]
    BackgroundTasks,
    #[serde(rename = "FOCUSED CONTENT GENERATION OR REVIEW")]
    FocusedContent,
    #[serde(rename = "LIGHT CONTENT GENERATION OR REVIEW")]
    LightContent,
    #[serde(rename = "BROWSING DOCUMENTS")]
    BrowsingDocuments,
    #[serde(rename = "MEETING IN OFFICE")]
    MeetingInOffice,
    #[serde(rename = "MEETING OUT OF OFFICE")]
    MeetingOutOfOffice,
    #[serde(rename = "LISTENING TO PRESENTATION")]
    ListeningToPresentation,
    #[serde(rename = "PRIVATE TIME")]
    PrivateTime,
    #[serde(rename = "FAMILY-PERSONAL FOCUS")]
    FamilyPersonal,
    #[serde(rename = "CASUAL CONVERSATION")]
    CasualConversation,
    #[serde(rename = "TRAVEL")]
    Travel,
}

impl AttentionState {
    pub const COUNT: usize = 12;

    pub const ALL: [AttentionState; Self::COUNT] = [
        AttentionState::SituationAwareness,
        AttentionState::BackgroundTasks,
        AttentionState::FocusedContent,
        AttentionState::LightContent,
        AttentionState::BrowsingDocuments,
        AttentionState::MeetingInOffice,
        AttentionState::MeetingOutOfOffice,
        AttentionState::ListeningToPresentation,
        AttentionState::PrivateTime,
        AttentionState::FamilyPersonal,
        AttentionState::CasualConversation,
        AttentionState::Travel,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AttentionState::SituationAwareness => "SITUATION AWARENESS-CATCHING UP",
            AttentionState::BackgroundTasks => "NON-SPECIFIC BACKGROUND TASKS",
            AttentionState::FocusedContent => "FOCUSED CONTENT GENERATION OR REVIEW",
            AttentionState::LightContent => "LIGHT CONTENT GENERATION OR REVIEW",
            AttentionState::BrowsingDocuments => "BROWSING DOCUMENTS",
            AttentionState::MeetingInOffice => "MEETING IN OFFICE",
            AttentionState::MeetingOutOfOffice => "MEETING OUT OF OFFICE",
            AttentionState::ListeningToPresentation => "LISTENING TO PRESENTATION",
            AttentionState::PrivateTime => "PRIVATE TIME",
            AttentionState::FamilyPersonal => "FAMILY-PERSONAL FOCUS",
            AttentionState::CasualConversation => "CASUAL CONVERSATION",
            AttentionState::Travel => "TRAVEL",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.label() == label)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AttentionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Evidence slots the model can bind to network variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceField {
    ScheduledAppointment,
    TimeOfDay,
    DeadlineProximity,
    AmbientAcoustics,
    AppAtFocus,
    ActivityStream,
    UsagePattern,
    Location,
}

impl EvidenceField {
    pub const ALL: [EvidenceField; 8] = [
        EvidenceField::ScheduledAppointment,
        EvidenceField::TimeOfDay,
        EvidenceField::DeadlineProximity,
        EvidenceField::AmbientAcoustics,
        EvidenceField::AppAtFocus,
        EvidenceField::ActivityStream,
        EvidenceField::UsagePattern,
        EvidenceField::Location,
    ];
}

impl fmt::Display for EvidenceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

/// Observations about the user. Unset fields are marginalized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttentionEvidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheduled_appointment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_of_day: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline_proximity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_acoustics: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app_at_focus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity_stream: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage_pattern: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl AttentionEvidence {
    pub fn get(&self, field: EvidenceField) -> Option<&str> {
        let v = match field {
            EvidenceField::ScheduledAppointment => &self.scheduled_appointment,
            EvidenceField::TimeOfDay => &self.time_of_day,
            EvidenceField::DeadlineProximity => &self.deadline_proximity,
            EvidenceField::AmbientAcoustics => &self.ambient_acoustics,
            EvidenceField::AppAtFocus => &self.app_at_focus,
            EvidenceField::ActivityStream => &self.activity_stream,
            EvidenceField::UsagePattern => &self.usage_pattern,
            EvidenceField::Location => &self.location,
        };
        v.as_deref()
    }

    pub fn set(&mut self, field: EvidenceField, value: Option<String>) {
        let slot = match field {
            EvidenceField::ScheduledAppointment => &mut self.scheduled_appointment,
            EvidenceField::TimeOfDay => &mut self.time_of_day,
            EvidenceField::DeadlineProximity => &mut self.deadline_proximity,
            EvidenceField::AmbientAcoustics => &mut self.ambient_acoustics,
            EvidenceField::AppAtFocus => &mut self.app_at_focus,
            EvidenceField::ActivityStream => &mut self.activity_stream,
            EvidenceField::UsagePattern => &mut self.usage_pattern,
            EvidenceField::Location => &mut self.location,
        };
        *slot = value;
    }

    pub fn with(mut self, field: EvidenceField, value: &str) -> Self {
        self.set(field, Some(value.to_string()));
        self
    }

    pub fn is_away(&self) -> bool {
        self.location.as_deref() == Some(authoring::LOCATION_AWAY)
    }
}

/// Probability per attentional context, indexed by [`AttentionState::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<AttentionState, f64>", into = "BTreeMap<AttentionState, f64>")]
pub struct AttentionDistribution {
    probs: [f64; AttentionState::COUNT],
}

impl AttentionDistribution {
    pub fn new(probs: [f64; AttentionState::COUNT]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(AttentionError::Contract(format!(
                "attention probabilities must lie in [0,1] and sum to 1 (sum {sum})"
            )));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(state: AttentionState) -> Self {
        let mut probs = [0.0; AttentionState::COUNT];
        probs[state.index()] = 1.0;
        Self { probs }
    }

    pub fn uniform() -> Self {
        Self {
            probs: [1.0 / AttentionState::COUNT as f64; AttentionState::COUNT],
        }
    }

    pub fn prob(&self, state: AttentionState) -> f64 {
        self.probs[state.index()]
    }

    pub fn probs(&self) -> &[f64; AttentionState::COUNT] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (AttentionState, f64)> + '_ {
        AttentionState::ALL.into_iter().zip(self.probs.iter().copied())
    }
}

impl TryFrom<BTreeMap<AttentionState, f64>> for AttentionDistribution {
    type Error = AttentionError;

    fn try_from(map: BTreeMap<AttentionState, f64>) -> Result<Self> {
        let mut probs = [0.0; AttentionState::COUNT];
        for (s, p) in map {
            probs[s.index()] = p;
        }
        Self::new(probs)
    }
}

impl From<AttentionDistribution> for BTreeMap<AttentionState, f64> {
    fn from(d: AttentionDistribution) -> Self {
        d.iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InspectionBucket {
    pub minutes: f64,
    pub prob: f64,
}

/// Distribution of the time between unprompted inbox checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<InspectionBucket>", into = "Vec<InspectionBucket>")]
pub struct InspectionDistribution {
    buckets: Vec<InspectionBucket>,
}

impl InspectionDistribution {
    pub fn new(buckets: Vec<InspectionBucket>) -> Result<Self> {
        if buckets.is_empty() {
            return Err(AttentionError::Inspection("no buckets".into()));
        }
        if buckets.iter().any(|b| !(b.minutes > 0.0) || !b.minutes.is_finite()) {
            return Err(AttentionError::Inspection("durations must be positive".into()));
        }
        if buckets.windows(2).any(|w| w[1].minutes <= w[0].minutes) {
            return Err(AttentionError::Inspection("durations must be strictly increasing".into()));
        }
        let sum: f64 = buckets.iter().map(|b| b.prob).sum();
        if buckets.iter().any(|b| !(0.0..=1.0).contains(&b.prob)) || (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(AttentionError::Inspection(format!("probabilities sum to {sum}")));
        }
        Ok(Self { buckets })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(minutes, prob)| InspectionBucket { minutes, prob })
                .collect(),
        )
    }

    pub fn buckets(&self) -> &[InspectionBucket] {
        &self.buckets
    }
}

impl TryFrom<Vec<InspectionBucket>> for InspectionDistribution {
    type Error = AttentionError;

    fn try_from(buckets: Vec<InspectionBucket>) -> Result<Self> {
        Self::new(buckets)
    }
}

impl From<InspectionDistribution> for Vec<InspectionBucket> {
    fn from(d: InspectionDistribution) -> Self {
        d.buckets
    }
}

/// Mean inspection interval in minutes.
pub fn expected_interval(dist: &InspectionDistribution) -> f64 {
    dist.buckets.iter().map(|b| b.prob * b.minutes).sum()
}

/// The attention model document: a network plus its bindings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionModelFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(flatten)]
    pub network: NetworkSpec,
    pub bindings: BTreeMap<EvidenceField, String>,
    /// Duration in minutes of each `INSPECTION_INTERVAL` state, in order.
    pub inspection_buckets: Vec<f64>,
}

/// A loaded and validated attention model.
#[derive(Debug, Clone)]
pub struct AttentionModel {
    net: BayesNet,
    bindings: BTreeMap<EvidenceField, String>,
    buckets: Vec<f64>,
    /// network state index of each [`AttentionState`]
    focus_states: [usize; AttentionState::COUNT],
}

impl AttentionModel {
    pub fn from_file(file: &AttentionModelFile) -> Result<Self> {
        let net = BayesNet::from_spec(&file.network)?;
        let focus_states = check_contract(&net, &file.bindings, &file.inspection_buckets)?;
        Ok(Self {
            net,
            bindings: file.bindings.clone(),
            buckets: file.inspection_buckets.clone(),
            focus_states,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AttentionModelFile = serde_json::from_str(text).map_err(BayesNetError::from)?;
        Self::from_file(&file)
    }

    pub fn network(&self) -> &BayesNet {
        &self.net
    }

    pub fn bindings(&self) -> &BTreeMap<EvidenceField, String> {
        &self.bindings
    }

    pub fn bucket_minutes(&self) -> &[f64] {
        &self.buckets
    }

    /// Network evidence for the supplied fields; unset fields stay unobserved.
    pub fn network_evidence(&self, evidence: &AttentionEvidence) -> Result<Evidence> {
        to_network_evidence(&self.net, &self.bindings, evidence, |v| v.to_string())
    }

    pub fn focus_distribution(&self, posterior: &bayesnet::Posterior) -> AttentionDistribution {
        let mut probs = [0.0; AttentionState::COUNT];
        for (s, &i) in self.focus_states.iter().enumerate() {
            probs[s] = posterior.probs[i];
        }
        AttentionDistribution { probs }
    }

    pub fn inspection_distribution(&self, posterior: &bayesnet::Posterior) -> InspectionDistribution {
        InspectionDistribution {
            buckets: self
                .buckets
                .iter()
                .zip(&posterior.probs)
                .map(|(&minutes, &prob)| InspectionBucket { minutes, prob })
                .collect(),
        }
    }
}

/// Loads and validates an attention model file.
pub fn load_attention_model(path: impl AsRef<Path>) -> Result<AttentionModel> {
    let text = std::fs::read_to_string(path).map_err(BayesNetError::from)?;
    AttentionModel::from_json(&text)
}

/// Posterior over the twelve attentional contexts.
pub fn infer_attention(model: &AttentionModel, evidence: &AttentionEvidence) -> Result<AttentionDistribution> {
    let ev = model.network_evidence(evidence)?;
    let posterior = bayesnet::infer(&model.net, &ev, FOCUS_VARIABLE)?;
    Ok(model.focus_distribution(&posterior))
}

/// Posterior over inspection-interval buckets.
pub fn infer_inspection_interval(
    model: &AttentionModel,
    evidence: &AttentionEvidence,
) -> Result<InspectionDistribution> {
    let ev = model.network_evidence(evidence)?;
    let posterior = bayesnet::infer(&model.net, &ev, INSPECTION_VARIABLE)?;
    Ok(model.inspection_distribution(&posterior))
}

pub(crate) fn to_network_evidence(
    net: &BayesNet,
    bindings: &BTreeMap<EvidenceField, String>,
    evidence: &AttentionEvidence,
    name_of: impl Fn(&str) -> String,
) -> Result<Evidence> {
    let mut ev = Evidence::new();
    for field in EvidenceField::ALL {
        let Some(value) = evidence.get(field) else { continue };
        let Some(var) = bindings.get(&field) else {
            return Err(AttentionError::Contract(format!("evidence field `{field}` is not bound in this model")));
        };
        let name = name_of(var);
        let variable = net.variable(&name)?;
        if !variable.states.iter().any(|s| s == value) {
            return Err(AttentionError::Evidence {
                field,
                value: value.to_string(),
            });
        }
        ev.insert(name, value);
    }
    Ok(ev)
}

pub(crate) fn check_contract(
    net: &BayesNet,
    bindings: &BTreeMap<EvidenceField, String>,
    buckets: &[f64],
) -> Result<[usize; AttentionState::COUNT]> {
    let focus = net
        .variable(FOCUS_VARIABLE)
        .map_err(|_| AttentionError::Contract(format!("missing variable {FOCUS_VARIABLE}")))?;
    let inspection = net
        .variable(INSPECTION_VARIABLE)
        .map_err(|_| AttentionError::Contract(format!("missing variable {INSPECTION_VARIABLE}")))?;

    if focus.states.len() != AttentionState::COUNT {
        return Err(AttentionError::Contract(format!(
            "{FOCUS_VARIABLE} must have exactly {} states",
            AttentionState::COUNT
        )));
    }
    let mut focus_states = [usize::MAX; AttentionState::COUNT];
    for (i, label) in focus.states.iter().enumerate() {
        let s = AttentionState::from_label(label)
            .ok_or_else(|| AttentionError::Contract(format!("unknown attentional context `{label}`")))?;
        focus_states[s.index()] = i;
    }

    if buckets.len() != inspection.states.len() {
        return Err(AttentionError::Contract(format!(
            "{} inspection buckets declared for {} {INSPECTION_VARIABLE} states",
            buckets.len(),
            inspection.states.len()
        )));
    }
    if buckets.iter().any(|b| !(*b > 0.0)) || buckets.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AttentionError::Contract(
            "inspection buckets must be positive and strictly increasing".into(),
        ));
    }
    for (field, var) in bindings {
        if net.variable(var).is_err() {
            return Err(AttentionError::Contract(format!("field `{field}` bound to missing variable `{var}`")));
        }
    }
    Ok(focus_states)
}
