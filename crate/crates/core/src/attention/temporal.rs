use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bayesnet::{self, slice_name, BayesNet, BayesNetError, DbnSpec, Evidence};

use super::{
    to_network_evidence, AttentionDistribution, AttentionError, AttentionModel,
    AttentionModelFile, AttentionState, EvidenceField, InspectionDistribution, Result, FOCUS_VARIABLE,
    INSPECTION_VARIABLE,
};

/// Evidence keyed by slice index.
pub type SliceEvidence = BTreeMap<usize, super::AttentionEvidence>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalModelFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(flatten)]
    pub dbn: DbnSpec,
    pub bindings: BTreeMap<EvidenceField, String>,
    pub inspection_buckets: Vec<f64>,
}

/// Attention model unrolled over time on demand.
#[derive(Debug, Clone)]
pub struct TemporalAttentionModel {
    file: TemporalModelFile,
    slice: AttentionModel,
}

impl TemporalAttentionModel {
    pub fn from_file(file: &TemporalModelFile) -> Result<Self> {
        let slice = AttentionModel::from_file(&AttentionModelFile {
            notes: Vec::new(),
            network: file.dbn.slice.clone(),
            bindings: file.bindings.clone(),
            inspection_buckets: file.inspection_buckets.clone(),
        })?;
        bayesnet::unroll(&file.dbn, 1)?;
        Ok(Self { file: file.clone(), slice })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TemporalModelFile = serde_json::from_str(text).map_err(BayesNetError::from)?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(BayesNetError::from)?;
        Self::from_json(&text)
    }

    /// The single-slice view of this model.
    pub fn slice_model(&self) -> &AttentionModel {
        &self.slice
    }

    pub fn unrolled(&self, horizon: usize) -> Result<BayesNet> {
        Ok(bayesnet::unroll(&self.file.dbn, horizon)?)
    }

    /// Focus posterior at `slice` given per-slice evidence over `horizon`
    /// slices.
    pub fn infer_attention_at(
        &self,
        evidence: &SliceEvidence,
        horizon: usize,
        slice: usize,
    ) -> Result<AttentionDistribution> {
        let (net, ev) = self.prepare(evidence, horizon, slice)?;
        let posterior = bayesnet::infer(&net, &ev, &slice_name(FOCUS_VARIABLE, slice))?;
        let labels = &self.file.dbn.slice.variables.iter().find(|v| v.name == FOCUS_VARIABLE).expect("contract").states;
        let mut probs = [0.0; AttentionState::COUNT];
        for (label, p) in labels.iter().zip(&posterior.probs) {
            probs[AttentionState::from_label(label).expect("contract").index()] = *p;
        }
        AttentionDistribution::new(probs)
    }

    pub fn infer_inspection_at(
        &self,
        evidence: &SliceEvidence,
        horizon: usize,
        slice: usize,
    ) -> Result<InspectionDistribution> {
        let (net, ev) = self.prepare(evidence, horizon, slice)?;
        let posterior = bayesnet::infer(&net, &ev, &slice_name(INSPECTION_VARIABLE, slice))?;
        Ok(self.slice.inspection_distribution(&posterior))
    }

    fn prepare(&self, evidence: &SliceEvidence, horizon: usize, slice: usize) -> Result<(BayesNet, Evidence)> {
        if slice >= horizon {
            return Err(AttentionError::Contract(format!("slice {slice} outside horizon {horizon}")));
        }
        let net = bayesnet::unroll(&self.file.dbn, horizon)?;
        let mut ev = Evidence::new();
        for (&t, slice_ev) in evidence {
            if t >= horizon {
                return Err(AttentionError::Contract(format!("evidence for slice {t} outside horizon {horizon}")));
            }
            let part = to_network_evidence(&net, &self.file.bindings, slice_ev, |v| slice_name(v, t))?;
            for (k, v) in part.iter() {
                ev.insert(k, v);
            }
        }
        Ok((net, ev))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attention::{authoring, infer_attention, AttentionEvidence};

    fn model() -> TemporalAttentionModel {
        TemporalAttentionModel::from_file(&authoring::dbn_model()).unwrap()
    }

    #[test]
    fn first_slice_matches_static_model_without_later_evidence() {
        let m = model();
        let ev0 = AttentionEvidence::default().with(EvidenceField::AppAtFocus, "email");
        let evidence: SliceEvidence = [(0, ev0.clone())].into_iter().collect();
        let unrolled = m.infer_attention_at(&evidence, 3, 0).unwrap();
        let single = infer_attention(m.slice_model(), &ev0).unwrap();
        for (a, b) in unrolled.probs().iter().zip(single.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn earlier_meeting_evidence_persists() {
        let m = model();
        let meeting = AttentionEvidence::default()
            .with(EvidenceField::ScheduledAppointment, "meeting-now")
            .with(EvidenceField::AmbientAcoustics, "conversation");
        let evidence: SliceEvidence = [(0, meeting)].into_iter().collect();
        let with = m.infer_attention_at(&evidence, 2, 1).unwrap();
        let without = m.infer_attention_at(&SliceEvidence::new(), 2, 1).unwrap();
        assert!(with.prob(AttentionState::MeetingInOffice) > without.prob(AttentionState::MeetingInOffice));
    }

    #[test]
    fn out_of_horizon_rejected() {
        let m = model();
        assert!(m.infer_attention_at(&SliceEvidence::new(), 2, 2).is_err());
        let evidence: SliceEvidence = [(5, AttentionEvidence::default())].into_iter().collect();
        assert!(m.infer_attention_at(&evidence, 2, 0).is_err());
    }
}
