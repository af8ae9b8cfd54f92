//! The alerting calculus: expected cost of alerting, expected cost of
//! delayed review, the value of transmitting an alert and its net value,
//! for single messages and for compound alerts.
//!
//! Times are in minutes on one shared axis. Costs are in arbitrary units;
//! loss rates are units per minute.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attention::{AttentionDistribution, AttentionState, InspectionDistribution};

pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum UtilityError {
    #[error("cost model has no entry for modality `{0}`")]
    UnknownModality(Modality),
    #[error("invalid cost model: {0}")]
    Config(String),
    #[error("invalid criticality distribution: {0}")]
    Distribution(String),
    #[error("{probs} class probabilities for {rates} loss rates")]
    ClassCount { probs: usize, rates: usize },
    #[error("review time {t} precedes arrival {t_o}")]
    Clock { t_o: f64, t: f64 },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = UtilityError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    DesktopVisual,
    DesktopAudio,
    Mobile,
    Digest,
}

impl Modality {
    pub const ALL: [Modality; 4] = [Self::DesktopVisual, Self::DesktopAudio, Self::Mobile, Self::Digest];

    pub fn label(self) -> &'static str {
        match self {
            Self::DesktopVisual => "desktop-visual",
            Self::DesktopAudio => "desktop-audio",
            Self::Mobile => "mobile",
            Self::Digest => "digest",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.label() == label)
    }

    pub fn is_desktop(self) -> bool {
        matches!(self, Self::DesktopVisual | Self::DesktopAudio)
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An alert through `modality` carrying `complexity` messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlertAction {
    pub modality: Modality,
    pub complexity: usize,
}

impl AlertAction {
    pub fn single(modality: Modality) -> Self {
        Self { modality, complexity: 1 }
    }
}

/// Growth of an alert's cost with the number of messages it carries, as a
/// multiplier on the single-message cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexityCost {
    /// 1 + slope·(n − 1)
    Affine { slope: f64 },
    /// n^exponent
    Power { exponent: f64 },
}

impl Default for ComplexityCost {
    fn default() -> Self {
        Self::Affine { slope: 0.5 }
    }
}

impl ComplexityCost {
    pub fn multiplier(&self, n: usize) -> f64 {
        let n = n.max(1) as f64;
        match *self {
            Self::Affine { slope } => 1.0 + slope * (n - 1.0),
            Self::Power { exponent } => n.powf(exponent),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Affine { slope } => slope.is_finite() && slope >= 0.0,
            Self::Power { exponent } => exponent.is_finite() && exponent >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(UtilityError::Config(format!("complexity cost {self:?} must be non-decreasing")))
        }
    }
}

/// How the alert-free delay treats inspection buckets that end before the
/// alert time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlertFreeTiming {
    /// Every bucket contributes, with negative delays clamped to zero.
    #[default]
    Literal,
    /// Buckets are conditioned on the next inspection falling after the
    /// alert time; falls back to `Literal` when no bucket does.
    ConditionedOnPending,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalityClass {
    pub name: String,
    pub loss_rate: f64,
}

/// Interruption costs per modality and attentional context, class loss
/// rates, and the compound-alert cost function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CostModelFile", into = "CostModelFile")]
pub struct CostModel {
    file: CostModelFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModelFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub interruption: BTreeMap<Modality, BTreeMap<AttentionState, f64>>,
    pub classes: Vec<CriticalityClass>,
    #[serde(default)]
    pub complexity_cost: ComplexityCost,
    /// Modalities whose cost does not grow with the number of messages.
    #[serde(default = "default_flat")]
    pub flat_complexity: BTreeSet<Modality>,
    #[serde(default)]
    pub alert_free_timing: AlertFreeTiming,
}

fn default_flat() -> BTreeSet<Modality> {
    [Modality::Digest].into_iter().collect()
}

impl TryFrom<CostModelFile> for CostModel {
    type Error = UtilityError;

    fn try_from(file: CostModelFile) -> Result<Self> {
        CostModel::new(file)
    }
}

impl From<CostModel> for CostModelFile {
    fn from(m: CostModel) -> Self {
        m.file
    }
}

impl CostModel {
    pub fn new(file: CostModelFile) -> Result<Self> {
        for (modality, row) in &file.interruption {
            for s in AttentionState::ALL {
                match row.get(&s) {
                    None => return Err(UtilityError::Config(format!("{modality} has no cost for `{s}`"))),
                    Some(c) if !(c.is_finite() && *c >= 0.0) => {
                        return Err(UtilityError::Config(format!("{modality} cost for `{s}` is {c}")))
                    }
                    _ => {}
                }
            }
        }
        if file.classes.is_empty() {
            return Err(UtilityError::Config("no criticality classes".into()));
        }
        let mut names = BTreeSet::new();
        for c in &file.classes {
            if !names.insert(c.name.as_str()) {
                return Err(UtilityError::Config(format!("duplicate class `{}`", c.name)));
            }
            if !(c.loss_rate.is_finite() && c.loss_rate >= 0.0) {
                return Err(UtilityError::Config(format!("class `{}` has loss rate {}", c.name, c.loss_rate)));
            }
        }
        file.complexity_cost.validate()?;
        Ok(Self { file })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn file(&self) -> &CostModelFile {
        &self.file
    }

    pub fn classes(&self) -> &[CriticalityClass] {
        &self.file.classes
    }

    pub fn loss_rates(&self) -> Vec<f64> {
        self.file.classes.iter().map(|c| c.loss_rate).collect()
    }

    pub fn modalities(&self) -> impl Iterator<Item = Modality> + '_ {
        self.file.interruption.keys().copied()
    }

    pub fn alert_free_timing(&self) -> AlertFreeTiming {
        self.file.alert_free_timing
    }

    pub fn cost(&self, modality: Modality, state: AttentionState) -> Result<f64> {
        let row = self.file.interruption.get(&modality).ok_or(UtilityError::UnknownModality(modality))?;
        Ok(row[&state])
    }

    /// Cost multiplier for an alert carrying `n` messages via `modality`.
    pub fn complexity_multiplier(&self, modality: Modality, n: usize) -> f64 {
        if self.file.flat_complexity.contains(&modality) {
            1.0
        } else {
            self.file.complexity_cost.multiplier(n)
        }
    }

    /// Multiplies every interruption cost and loss rate by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        let mut file = self.file.clone();
        for row in file.interruption.values_mut() {
            for c in row.values_mut() {
                *c *= k;
            }
        }
        for c in &mut file.classes {
            c.loss_rate *= k;
        }
        Self::new(file)
    }

    /// The shipped default cost model. Values are illustrative.
    pub fn default_model() -> Self {
        // columns in AttentionState order
        let rows: [(Modality, [f64; 12]); 4] = [
            (Modality::DesktopVisual, [2.0, 3.0, 12.0, 5.0, 3.0, 15.0, 1.0, 20.0, 6.0, 8.0, 8.0, 1.0]),
            (Modality::DesktopAudio, [3.0, 5.0, 18.0, 8.0, 5.0, 30.0, 2.0, 40.0, 10.0, 12.0, 12.0, 2.0]),
            (Modality::Mobile, [4.0, 5.0, 10.0, 6.0, 5.0, 20.0, 12.0, 25.0, 10.0, 15.0, 8.0, 6.0]),
            (Modality::Digest, [5.0, 6.0, 16.0, 8.0, 6.0, 20.0, 2.0, 25.0, 9.0, 11.0, 11.0, 2.0]),
        ];
        let interruption = rows
            .into_iter()
            .map(|(m, costs)| (m, AttentionState::ALL.into_iter().zip(costs).collect()))
            .collect();
        Self::new(CostModelFile {
            notes: vec![
                "Illustrative costs in arbitrary units; loss rates are units per minute of review delay.".into(),
                "Compound alerts scale by 1 + slope*(n-1) except for flat modalities.".into(),
            ],
            interruption,
            classes: vec![
                CriticalityClass { name: "high".into(), loss_rate: 0.5 },
                CriticalityClass { name: "low".into(), loss_rate: 0.01 },
            ],
            complexity_cost: ComplexityCost::default(),
            flat_complexity: default_flat(),
            alert_free_timing: AlertFreeTiming::Literal,
        })
        .expect("default cost model is valid")
    }
}

/// p(H_i | E^d), aligned with the cost model's class list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CriticalityDistribution {
    probs: Vec<f64>,
}

impl CriticalityDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.is_empty() {
            return Err(UtilityError::Distribution("no classes".into()));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(UtilityError::Distribution(format!(
                "probabilities must lie in [0,1] and sum to 1 (sum {sum})"
            )));
        }
        Ok(Self { probs })
    }

    /// (p, 1 − p) for the binary high/low default.
    pub fn binary(p_high: f64) -> Result<Self> {
        Self::new(vec![p_high, 1.0 - p_high])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl TryFrom<Vec<f64>> for CriticalityDistribution {
    type Error = UtilityError;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<CriticalityDistribution> for Vec<f64> {
    fn from(d: CriticalityDistribution) -> Self {
        d.probs
    }
}

/// Arrival time, evaluation time and time of the last inbox access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clock {
    pub t_o: f64,
    pub t: f64,
    pub t_last: f64,
}

impl Clock {
    fn check(&self) -> Result<()> {
        check_times(self.t_o, self.t)
    }
}

fn check_times(t_o: f64, t: f64) -> Result<()> {
    if t >= t_o {
        Ok(())
    } else {
        Err(UtilityError::Clock { t_o, t })
    }
}

/// u(A, H, t): utility of taking action `action` in world state `world` at
/// time `t`.
pub trait TimeDependentUtility {
    fn evaluate(&self, action: usize, world: usize, t: f64) -> f64;
}

impl<F: Fn(usize, usize, f64) -> f64> TimeDependentUtility for F {
    fn evaluate(&self, action: usize, world: usize, t: f64) -> f64 {
        self(action, world, t)
    }
}

/// u(A, H, t) = −(t − t_o)·C^d(H) for every action.
#[derive(Debug, Clone)]
pub struct LinearLoss {
    pub loss_rates: Vec<f64>,
    pub t_o: f64,
}

impl TimeDependentUtility for LinearLoss {
    fn evaluate(&self, _action: usize, world: usize, t: f64) -> f64 {
        -(t - self.t_o) * self.loss_rates[world]
    }
}

/// Expected cost of alerting: Σ_j C^a(A, F_j)·p(F_j | E^a), scaled by the
/// complexity multiplier for the number of messages carried.
pub fn eca(action: AlertAction, attention: &AttentionDistribution, costs: &CostModel) -> Result<f64> {
    if action.complexity == 0 {
        return Err(UtilityError::Domain("an alert carries at least one message".into()));
    }
    let mut total = 0.0;
    for (state, p) in attention.iter() {
        total += costs.cost(action.modality, state)? * p;
    }
    Ok(total * costs.complexity_multiplier(action.modality, action.complexity))
}

/// Expected cost of delayed action under a general time-dependent utility.
pub fn ecda(
    u: &impl TimeDependentUtility,
    world: &CriticalityDistribution,
    actions: &[usize],
    t_o: f64,
    t: f64,
) -> Result<f64> {
    check_times(t_o, t)?;
    if actions.is_empty() {
        return Err(UtilityError::Domain("empty action set".into()));
    }
    let best = |time: f64| {
        actions
            .iter()
            .map(|&a| world.probs.iter().enumerate().map(|(h, p)| u.evaluate(a, h, time) * p).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(best(t_o) - best(t))
}

/// Expected criticality: Σ_i C^d(H_i)·p(H_i | E^d).
pub fn expected_criticality(crit: &CriticalityDistribution, loss_rates: &[f64]) -> Result<f64> {
    if crit.probs.len() != loss_rates.len() {
        return Err(UtilityError::ClassCount { probs: crit.probs.len(), rates: loss_rates.len() });
    }
    Ok(crit.probs.iter().zip(loss_rates).map(|(p, c)| p * c).sum())
}

/// Expected cost of reviewing at `t` a message that arrived at `t_o`.
pub fn ecdr(crit: &CriticalityDistribution, loss_rates: &[f64], t_o: f64, t: f64) -> Result<f64> {
    check_times(t_o, t)?;
    Ok((t - t_o) * expected_criticality(crit, loss_rates)?)
}

/// Expected delay cost if no alert is sent and the user reviews the
/// message at the next unprompted inspection.
pub fn ecdr_alert_free(
    crit: &CriticalityDistribution,
    loss_rates: &[f64],
    inspect: &InspectionDistribution,
    clock: &Clock,
) -> Result<f64> {
    ecdr_alert_free_with(crit, loss_rates, inspect, clock, AlertFreeTiming::Literal)
}

pub fn ecdr_alert_free_with(
    crit: &CriticalityDistribution,
    loss_rates: &[f64],
    inspect: &InspectionDistribution,
    clock: &Clock,
    timing: AlertFreeTiming,
) -> Result<f64> {
    let ec = expected_criticality(crit, loss_rates)?;
    Ok(alert_free_delay(inspect, clock, timing) * ec)
}

/// Expected review delay without an alert, in minutes.
pub fn alert_free_delay(inspect: &InspectionDistribution, clock: &Clock, timing: AlertFreeTiming) -> f64 {
    let delay = |b: &crate::attention::InspectionBucket| (clock.t_last + b.minutes - clock.t_o).max(0.0);
    let buckets = inspect.buckets();
    if timing == AlertFreeTiming::ConditionedOnPending {
        let pending: Vec<_> = buckets.iter().filter(|b| clock.t_last + b.minutes > clock.t).collect();
        let mass: f64 = pending.iter().map(|b| b.prob).sum();
        if mass > 0.0 {
            return pending.iter().map(|b| b.prob / mass * delay(b)).sum();
        }
    }
    buckets.iter().map(|b| b.prob * delay(b)).sum()
}

/// Expected value of transmitting an alert at `clock.t`.
pub fn evta(
    crit: &CriticalityDistribution,
    loss_rates: &[f64],
    inspect: &InspectionDistribution,
    clock: &Clock,
) -> Result<f64> {
    evta_with(crit, loss_rates, inspect, clock, AlertFreeTiming::Literal)
}

pub fn evta_with(
    crit: &CriticalityDistribution,
    loss_rates: &[f64],
    inspect: &InspectionDistribution,
    clock: &Clock,
    timing: AlertFreeTiming,
) -> Result<f64> {
    clock.check()?;
    let ec = expected_criticality(crit, loss_rates)?;
    Ok((alert_free_delay(inspect, clock, timing) - (clock.t - clock.t_o)) * ec)
}

/// Net expected value of alerting: EVTA − ECA. Loss rates and the timing
/// variant come from `costs`.
pub fn neva(
    crit: &CriticalityDistribution,
    inspect: &InspectionDistribution,
    clock: &Clock,
    action: AlertAction,
    attention: &AttentionDistribution,
    costs: &CostModel,
) -> Result<f64> {
    let value = evta_with(crit, &costs.loss_rates(), inspect, clock, costs.alert_free_timing())?;
    Ok(value - eca(action, attention, costs)?)
}

/// Net value of one alert via `modality` carrying every message in
/// `messages` (criticality, arrival time): Σ EVTA − ECA(n).
pub fn neva_chunked(
    messages: &[(CriticalityDistribution, f64)],
    inspect: &InspectionDistribution,
    t: f64,
    t_last: f64,
    modality: Modality,
    attention: &AttentionDistribution,
    costs: &CostModel,
) -> Result<f64> {
    if messages.is_empty() {
        return Err(UtilityError::Domain("a compound alert needs at least one message".into()));
    }
    let rates = costs.loss_rates();
    let mut total = 0.0;
    for (crit, t_o) in messages {
        let clock = Clock { t_o: *t_o, t, t_last };
        total += evta_with(crit, &rates, inspect, &clock, costs.alert_free_timing())?;
    }
    let action = AlertAction { modality, complexity: messages.len() };
    Ok(total - eca(action, attention, costs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attention::expected_interval;

    fn two_class(high: f64, low: f64) -> CostModel {
        let mut file = CostModel::default_model().file().clone();
        file.classes = vec![
            CriticalityClass { name: "high".into(), loss_rate: high },
            CriticalityClass { name: "low".into(), loss_rate: low },
        ];
        CostModel::new(file).unwrap()
    }

    fn flat_costs(values: [f64; 12]) -> CostModel {
        let mut file = CostModel::default_model().file().clone();
        let row: BTreeMap<_, _> = AttentionState::ALL.into_iter().zip(values).collect();
        for m in Modality::ALL {
            file.interruption.insert(m, row.clone());
        }
        CostModel::new(file).unwrap()
    }

    fn inspect(pairs: &[(f64, f64)]) -> InspectionDistribution {
        InspectionDistribution::from_pairs(pairs).unwrap()
    }

    fn crit(p: &[f64]) -> CriticalityDistribution {
        CriticalityDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn eca_examples() {
        let mut values = [0.0; 12];
        values[2] = 7.0;
        let costs = flat_costs(values);
        let point = AttentionDistribution::point_mass(AttentionState::ALL[2]);
        assert_eq!(eca(AlertAction::single(Modality::DesktopVisual), &point, &costs).unwrap(), 7.0);

        values[0] = 2.0;
        values[1] = 4.0;
        let costs = flat_costs(values);
        let mut probs = [0.0; 12];
        probs[0] = 0.5;
        probs[1] = 0.5;
        let half = AttentionDistribution::new(probs).unwrap();
        assert_eq!(eca(AlertAction::single(Modality::Mobile), &half, &costs).unwrap(), 3.0);

        let costs = CostModel::default_model();
        let row: Vec<f64> = AttentionState::ALL.iter().map(|s| costs.cost(Modality::DesktopAudio, *s).unwrap()).collect();
        let mean = row.iter().sum::<f64>() / 12.0;
        let got = eca(AlertAction::single(Modality::DesktopAudio), &AttentionDistribution::uniform(), &costs).unwrap();
        assert!((got - mean).abs() < 1e-12);
    }

    #[test]
    fn eca_missing_modality_is_config_error() {
        let mut file = CostModel::default_model().file().clone();
        file.interruption.remove(&Modality::Mobile);
        let costs = CostModel::new(file).unwrap();
        let err = eca(AlertAction::single(Modality::Mobile), &AttentionDistribution::uniform(), &costs);
        assert!(matches!(err, Err(UtilityError::UnknownModality(Modality::Mobile))));
    }

    #[test]
    fn cost_model_rejects_bad_files() {
        let mut file = CostModel::default_model().file().clone();
        file.interruption.get_mut(&Modality::Mobile).unwrap().remove(&AttentionState::Travel);
        assert!(CostModel::new(file).is_err());
        let mut file = CostModel::default_model().file().clone();
        file.classes[1].name = "high".into();
        assert!(CostModel::new(file).is_err());
        let mut file = CostModel::default_model().file().clone();
        file.complexity_cost = ComplexityCost::Affine { slope: -1.0 };
        assert!(CostModel::new(file).is_err());
    }

    #[test]
    fn complexity_multiplier_is_one_for_a_single_message() {
        let costs = CostModel::default_model();
        for m in Modality::ALL {
            assert_eq!(costs.complexity_multiplier(m, 1), 1.0);
        }
        assert_eq!(costs.complexity_multiplier(Modality::DesktopVisual, 3), 2.0);
        assert_eq!(costs.complexity_multiplier(Modality::Digest, 3), 1.0);
        assert_eq!(ComplexityCost::Power { exponent: 0.5 }.multiplier(4), 2.0);
    }

    #[test]
    fn expected_criticality_examples() {
        assert_eq!(expected_criticality(&crit(&[1.0, 0.0]), &[100.0, 1.0]).unwrap(), 100.0);
        assert_eq!(expected_criticality(&crit(&[0.5, 0.5]), &[100.0, 0.0]).unwrap(), 50.0);
        let ec = expected_criticality(&crit(&[0.2, 0.3, 0.5]), &[10.0, 5.0, 1.0]).unwrap();
        assert!((ec - 4.0).abs() < 1e-12);
        assert!(expected_criticality(&crit(&[1.0]), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ecdr_examples() {
        assert_eq!(ecdr(&crit(&[1.0, 0.0]), &[5.0, 0.0], 3.0, 3.0).unwrap(), 0.0);
        assert_eq!(ecdr(&crit(&[1.0, 0.0]), &[5.0, 0.0], 3.0, 5.0).unwrap(), 10.0);
        assert_eq!(ecdr(&crit(&[0.5, 0.5]), &[100.0, 0.0], 0.0, 1.0).unwrap(), 50.0);
        assert!(matches!(ecdr(&crit(&[1.0]), &[1.0], 5.0, 4.0), Err(UtilityError::Clock { .. })));
    }

    #[test]
    fn ecda_examples() {
        let world = crit(&[0.3, 0.7]);
        let constant = |_a: usize, h: usize, _t: f64| [4.0, -1.0][h];
        assert_eq!(ecda(&constant, &world, &[0], 2.0, 9.0).unwrap(), 0.0);

        let rates = vec![10.0, 1.0];
        let u = LinearLoss { loss_rates: rates.clone(), t_o: 2.0 };
        let a = ecda(&u, &world, &[0], 2.0, 9.0).unwrap();
        let b = ecdr(&world, &rates, 2.0, 9.0).unwrap();
        assert!((a - b).abs() < 1e-12);

        // action 0 is best early, action 1 is best late
        let switching = |a: usize, h: usize, t: f64| match a {
            0 => [10.0, 2.0][h] - 3.0 * t,
            _ => [4.0, 1.0][h] - 0.5 * t,
        };
        let value = |a: usize, t: f64| 0.3 * switching(a, 0, t) + 0.7 * switching(a, 1, t);
        let want = value(0, 0.0).max(value(1, 0.0)) - value(0, 4.0).max(value(1, 4.0));
        assert!(value(0, 0.0) > value(1, 0.0) && value(1, 4.0) > value(0, 4.0));
        assert_eq!(ecda(&switching, &world, &[0, 1], 0.0, 4.0).unwrap(), want);
        assert!(ecda(&switching, &world, &[], 0.0, 4.0).is_err());
    }

    #[test]
    fn alert_free_examples() {
        let c = crit(&[1.0, 0.0]);
        let rates = [2.0, 0.0];
        let clock = Clock { t_o: 4.0, t: 4.0, t_last: 0.0 };
        assert_eq!(ecdr_alert_free(&c, &rates, &inspect(&[(10.0, 1.0)]), &clock).unwrap(), 12.0);
        let at_arrival = Clock { t_o: 10.0, t: 10.0, t_last: 0.0 };
        assert_eq!(ecdr_alert_free(&c, &rates, &inspect(&[(10.0, 1.0)]), &at_arrival).unwrap(), 0.0);
        // the 2-minute bucket ends before arrival and contributes nothing
        let split = inspect(&[(2.0, 0.5), (10.0, 0.5)]);
        assert_eq!(ecdr_alert_free(&c, &rates, &split, &clock).unwrap(), 6.0);
    }

    #[test]
    fn conditioned_variant_drops_elapsed_buckets() {
        let c = crit(&[1.0, 0.0]);
        let split = inspect(&[(2.0, 0.5), (10.0, 0.5)]);
        let clock = Clock { t_o: 1.0, t: 3.0, t_last: 0.0 };
        let literal = ecdr_alert_free_with(&c, &[1.0, 0.0], &split, &clock, AlertFreeTiming::Literal).unwrap();
        let cond = ecdr_alert_free_with(&c, &[1.0, 0.0], &split, &clock, AlertFreeTiming::ConditionedOnPending).unwrap();
        assert_eq!(literal, 0.5 * 1.0 + 0.5 * 9.0);
        assert_eq!(cond, 9.0);
        let late = Clock { t_o: 1.0, t: 20.0, t_last: 0.0 };
        let fallback = ecdr_alert_free_with(&c, &[1.0, 0.0], &split, &late, AlertFreeTiming::ConditionedOnPending).unwrap();
        assert_eq!(fallback, literal);
    }

    #[test]
    fn evta_examples() {
        let c = crit(&[1.0, 0.0]);
        let clock = Clock { t_o: 4.0, t: 5.0, t_last: 0.0 };
        assert_eq!(evta(&c, &[2.0, 0.0], &inspect(&[(10.0, 1.0)]), &clock).unwrap(), 10.0);

        let dist = inspect(&[(5.0, 0.25), (15.0, 0.75)]);
        let zero = Clock { t_o: 1.0, t: 2.0 + expected_interval(&dist), t_last: 2.0 };
        assert!(evta(&c, &[3.0, 0.0], &dist, &zero).unwrap().abs() < 1e-12);

        for t in [0.0, 3.0, 50.0] {
            let clock = Clock { t_o: 0.0, t, t_last: 0.0 };
            assert_eq!(evta(&crit(&[0.0, 1.0]), &[5.0, 0.0], &dist, &clock).unwrap(), 0.0);
        }
    }

    #[test]
    fn neva_examples() {
        let costs = two_class(2.0, 0.0);
        let c = crit(&[1.0, 0.0]);
        let dist = inspect(&[(10.0, 1.0)]);
        let clock = Clock { t_o: 4.0, t: 5.0, t_last: 0.0 };
        let mut values = [0.0; 12];
        values[0] = 3.0;
        let mut with_costs = flat_costs(values).file().clone();
        with_costs.classes = costs.classes().to_vec();
        let costs = CostModel::new(with_costs).unwrap();
        let att = AttentionDistribution::point_mass(AttentionState::ALL[0]);
        let action = AlertAction::single(Modality::DesktopVisual);
        assert_eq!(neva(&c, &dist, &clock, action, &att, &costs).unwrap(), 7.0);

        let free = AttentionDistribution::point_mass(AttentionState::ALL[1]);
        assert_eq!(neva(&c, &dist, &clock, action, &free, &costs).unwrap(), 10.0);

        let mut values = [0.0; 12];
        values[5] = 1000.0;
        let mut file = flat_costs(values).file().clone();
        file.classes = costs.classes().to_vec();
        let costly = CostModel::new(file).unwrap();
        let meeting = AttentionDistribution::point_mass(AttentionState::ALL[5]);
        assert!(neva(&c, &dist, &clock, action, &meeting, &costly).unwrap() < 0.0);
    }

    #[test]
    fn chunked_examples() {
        let costs = two_class(1.0, 0.0);
        let dist = inspect(&[(10.0, 1.0)]);
        let att = AttentionDistribution::uniform();
        let m = |p: f64, t_o: f64| (crit(&[p, 1.0 - p]), t_o);

        let single = neva_chunked(&[m(0.7, 2.0)], &dist, 3.0, 0.0, Modality::DesktopVisual, &att, &costs).unwrap();
        let clock = Clock { t_o: 2.0, t: 3.0, t_last: 0.0 };
        let direct = neva(&crit(&[0.7, 0.3]), &dist, &clock, AlertAction::single(Modality::DesktopVisual), &att, &costs).unwrap();
        assert_eq!(single, direct);

        // EVTA 5 and 4 at t = 0 with t_last = 0 and one 10-minute bucket;
        // flat ECA 6 for two messages via digest
        let mut values = [0.0; 12];
        values[0] = 6.0;
        let mut file = flat_costs(values).file().clone();
        file.classes = costs.classes().to_vec();
        let costs6 = CostModel::new(file).unwrap();
        let first = AttentionDistribution::point_mass(AttentionState::ALL[0]);
        let v = neva_chunked(&[m(0.5, 0.0), m(0.4, 0.0)], &dist, 0.0, 0.0, Modality::Digest, &first, &costs6).unwrap();
        assert!((v - 3.0).abs() < 1e-12);

        assert!(neva_chunked(&[], &dist, 0.0, 0.0, Modality::Digest, &att, &costs).is_err());
    }
}
