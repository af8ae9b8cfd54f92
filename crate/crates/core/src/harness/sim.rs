//! Minute-by-minute simulation of a user, an incoming message stream and
//! several alerting policies run on the same random streams.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::attention::{
    infer_attention, infer_inspection_interval, AttentionDistribution, AttentionEvidence, AttentionModel,
    AttentionState, EvidenceField, InspectionBucket, InspectionDistribution, FOCUS_VARIABLE,
};
use crate::policy::{available_modalities, decide_exhaustive, decide_with, DecisionInputs, PendingMessage};
use crate::rng::SimRng;
use crate::utility::{eca, AlertAction, CostModel, CriticalityDistribution, Modality};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioClass {
    pub name: String,
    /// Messages per minute.
    pub arrival_rate: f64,
    /// True cost per minute of delayed review.
    pub loss_rate: f64,
}

fn default_separation() -> f64 {
    2.0
}

fn default_cost_model() -> String {
    "costs.json".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub seed: u64,
    /// Minutes simulated; arrivals stop at the horizon.
    pub horizon: usize,
    /// Distribution of the first attention state; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<f64>>,
    /// Per-minute Markov transition matrix over attention states.
    pub transition: Vec<Vec<f64>>,
    /// One entry per criticality class of the cost model, in the same order.
    pub classes: Vec<ScenarioClass>,
    /// Distribution of the time between unprompted inbox checks.
    pub inspection: InspectionDistribution,
    /// Distance between class means of the simulated classifier signal.
    #[serde(default = "default_separation")]
    pub classifier_separation: f64,
    /// Chance that each evidence value is replaced by a uniform draw.
    #[serde(default)]
    pub evidence_noise: f64,
    /// Give every policy the true attention state, class and inspection
    /// distribution instead of model posteriors.
    #[serde(default)]
    pub true_posteriors: bool,
    /// Cost model file, relative to the model directory.
    #[serde(default = "default_cost_model")]
    pub cost_model: String,
}

const STAY: f64 = 0.95;
/// Weights for where a context switch lands, in attention-state order.
const SWITCH_WEIGHTS: [f64; 12] = [8.0, 10.0, 14.0, 12.0, 10.0, 6.0, 6.0, 3.0, 5.0, 4.0, 6.0, 4.0];

impl Default for ScenarioSpec {
    fn default() -> Self {
        let transition = (0..AttentionState::COUNT)
            .map(|i| {
                let others: f64 = SWITCH_WEIGHTS.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, w)| w).sum();
                (0..AttentionState::COUNT)
                    .map(|j| if i == j { STAY } else { (1.0 - STAY) * SWITCH_WEIGHTS[j] / others })
                    .collect()
            })
            .collect();
        Self {
            seed: 7,
            horizon: 480,
            initial: None,
            transition,
            classes: vec![
                ScenarioClass { name: "high".into(), arrival_rate: 0.02, loss_rate: 0.5 },
                ScenarioClass { name: "low".into(), arrival_rate: 0.1, loss_rate: 0.01 },
            ],
            inspection: InspectionDistribution::from_pairs(&[(5.0, 0.1), (15.0, 0.2), (60.0, 0.4), (240.0, 0.3)])
                .expect("valid default"),
            classifier_separation: default_separation(),
            evidence_noise: 0.0,
            true_posteriors: false,
            cost_model: default_cost_model(),
        }
    }
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    let sum: f64 = p.iter().sum();
    if p.len() != AttentionState::COUNT || p.iter().any(|x| !(0.0..=1.0).contains(x)) || (sum - 1.0).abs() > 1e-9 {
        return Err(HarnessError::Spec(format!("{what} is not a distribution over the {} states", AttentionState::COUNT)));
    }
    Ok(())
}

impl ScenarioSpec {
    pub fn validate(&self, costs: &CostModel) -> Result<()> {
        if self.horizon == 0 {
            return Err(HarnessError::Spec("horizon must be positive".into()));
        }
        if let Some(p) = &self.initial {
            check_distribution(p, "initial")?;
        }
        if self.transition.len() != AttentionState::COUNT {
            return Err(HarnessError::Spec("transition matrix needs one row per state".into()));
        }
        for (i, row) in self.transition.iter().enumerate() {
            check_distribution(row, &format!("transition row {i}"))?;
        }
        let names: Vec<&str> = self.classes.iter().map(|c| c.name.as_str()).collect();
        let model: Vec<&str> = costs.classes().iter().map(|c| c.name.as_str()).collect();
        if names != model {
            return Err(HarnessError::Spec(format!("scenario classes {names:?} differ from cost model classes {model:?}")));
        }
        for c in &self.classes {
            if !(c.arrival_rate.is_finite() && c.arrival_rate >= 0.0 && c.loss_rate.is_finite() && c.loss_rate >= 0.0) {
                return Err(HarnessError::Spec(format!("rates of class `{}` must be non-negative", c.name)));
            }
        }
        if !(self.classifier_separation.is_finite() && self.classifier_separation >= 0.0) {
            return Err(HarnessError::Spec("classifier_separation must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.evidence_noise) {
            return Err(HarnessError::Spec("evidence_noise must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    NeverAlert,
    AlwaysAlert,
    Neva,
    /// Exhaustive modality × subset search on the true state and classes.
    OracleMyopic,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [Self::NeverAlert, Self::AlwaysAlert, Self::Neva, Self::OracleMyopic];

    pub fn name(self) -> &'static str {
        match self {
            Self::NeverAlert => "never-alert",
            Self::AlwaysAlert => "always-alert",
            Self::Neva => "neva",
            Self::OracleMyopic => "oracle-myopic",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| HarnessError::UnknownPolicy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SimEvent {
    Arrival { t: f64, id: String, class: String },
    Inspection { t: f64 },
    Alert { t: f64, modality: Modality, ids: Vec<String>, state: AttentionState, cost: f64 },
    Review { t: f64, id: String, delay: f64, cost: f64, prompted: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageOutcome {
    pub id: String,
    pub class: String,
    pub arrival: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alerted_at: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reviewed_at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub policy: PolicyKind,
    pub seed: u64,
    pub alerts: usize,
    pub interruption_cost: f64,
    pub delay_cost: f64,
    pub total_cost: f64,
    pub messages: Vec<MessageOutcome>,
    pub events: Vec<SimEvent>,
}

impl SimResult {
    /// |total − (alert costs + Σ delay × loss rate)| recomputed from the
    /// event log and the true loss rates.
    pub fn accounting_gap(&self, scenario: &ScenarioSpec) -> f64 {
        let rate: HashMap<&str, f64> = scenario.classes.iter().map(|c| (c.name.as_str(), c.loss_rate)).collect();
        let mut class_of = HashMap::new();
        let mut arrival = HashMap::new();
        let mut total = 0.0;
        for e in &self.events {
            match e {
                SimEvent::Arrival { t, id, class } => {
                    class_of.insert(id.as_str(), class.as_str());
                    arrival.insert(id.as_str(), *t);
                }
                SimEvent::Alert { cost, .. } => total += cost,
                SimEvent::Review { t, id, .. } => total += (t - arrival[id.as_str()]) * rate[class_of[id.as_str()]],
                SimEvent::Inspection { .. } => {}
            }
        }
        (self.total_cost - total).abs()
    }

    pub fn unreviewed(&self) -> usize {
        self.messages.iter().filter(|m| m.reviewed_at.is_none()).count()
    }
}

/// The attention model and cost model a simulation runs against.
#[derive(Debug, Clone, Copy)]
pub struct SimModels<'a> {
    pub attention: &'a AttentionModel,
    pub costs: &'a CostModel,
}

/// Draws full evidence assignments from the network given the focus state:
/// ancestors of the focus variable jointly by enumeration, everything else
/// forward in topological order.
struct EvidenceSampler {
    /// state labels of every variable, by variable index
    states: Vec<Vec<String>>,
    focus: usize,
    /// (variable index, field) for bound evidence
    fields: Vec<(usize, EvidenceField)>,
    upstream: Vec<usize>,
    /// per attention state: upstream assignments and their weights
    tables: Vec<(Vec<Vec<usize>>, Vec<f64>)>,
    /// (variable, parent indices, rows indexed by mixed-radix parent state)
    downstream: Vec<(usize, Vec<usize>, Vec<Vec<f64>>)>,
}

const MAX_UPSTREAM_ASSIGNMENTS: usize = 1 << 20;

impl EvidenceSampler {
    fn new(model: &AttentionModel) -> Result<Self> {
        let net = model.network();
        let vars = net.variables();
        let n = vars.len();
        let states: Vec<Vec<String>> = vars.iter().map(|v| v.states.clone()).collect();
        let index = |name: &str| net.index_of(name).map_err(|e| HarnessError::Attention(e.into()));
        let focus = index(FOCUS_VARIABLE)?;
        let parents: Vec<Vec<usize>> = vars
            .iter()
            .map(|v| {
                net.parents(&v.name)
                    .map_err(|e| HarnessError::Attention(e.into()))?
                    .into_iter()
                    .map(index)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let mut is_up = vec![false; n];
        let mut stack = parents[focus].clone();
        while let Some(v) = stack.pop() {
            if !is_up[v] {
                is_up[v] = true;
                stack.extend(parents[v].iter().copied());
            }
        }
        let mut topo = Vec::with_capacity(n);
        let mut done = vec![false; n];
        while topo.len() < n {
            for v in 0..n {
                if !done[v] && parents[v].iter().all(|&p| done[p]) {
                    done[v] = true;
                    topo.push(v);
                }
            }
        }
        let upstream: Vec<usize> = topo.iter().copied().filter(|&v| is_up[v]).collect();
        let cards: Vec<usize> = upstream.iter().map(|&v| states[v].len()).collect();
        let combos: usize = cards.iter().product();
        if combos > MAX_UPSTREAM_ASSIGNMENTS {
            return Err(HarnessError::Spec(format!("{combos} joint states above the focus variable; too many to sample")));
        }

        let row = |v: usize, assign: &[Option<usize>]| -> Result<Vec<f64>> {
            let given: Vec<&str> = parents[v].iter().map(|&p| states[p][assign[p].expect("parent set")].as_str()).collect();
            Ok(net.cpt_row(&vars[v].name, &given).map_err(|e| HarnessError::Attention(e.into()))?.to_vec())
        };

        let focus_state_index: Vec<usize> = AttentionState::ALL
            .iter()
            .map(|s| states[focus].iter().position(|l| l == s.label()).expect("model contract"))
            .collect();
        let mut tables = Vec::with_capacity(AttentionState::COUNT);
        for &fs in &focus_state_index {
            let mut assigns = Vec::with_capacity(combos);
            let mut weights = Vec::with_capacity(combos);
            let mut idx = vec![0usize; upstream.len()];
            for _ in 0..combos {
                let mut assign = vec![None; n];
                for (k, &v) in upstream.iter().enumerate() {
                    assign[v] = Some(idx[k]);
                }
                assign[focus] = Some(fs);
                let mut w = row(focus, &assign)?[fs];
                for &v in &upstream {
                    w *= row(v, &assign)?[assign[v].unwrap()];
                }
                assigns.push(idx.clone());
                weights.push(w);
                for k in (0..idx.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < cards[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            tables.push((assigns, weights));
        }

        let mut downstream = Vec::new();
        for &v in topo.iter().filter(|&&v| !is_up[v] && v != focus) {
            let pa = parents[v].clone();
            let pcards: Vec<usize> = pa.iter().map(|&p| states[p].len()).collect();
            let rows_n: usize = pcards.iter().product();
            let mut rows = Vec::with_capacity(rows_n);
            let mut idx = vec![0usize; pa.len()];
            for _ in 0..rows_n {
                let mut assign = vec![None; n];
                for (k, &p) in pa.iter().enumerate() {
                    assign[p] = Some(idx[k]);
                }
                rows.push(row(v, &assign)?);
                for k in (0..idx.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < pcards[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            downstream.push((v, pa, rows));
        }

        let mut fields = Vec::new();
        for (&field, name) in model.bindings() {
            fields.push((index(name)?, field));
        }
        Ok(Self { states, focus, fields, upstream, tables, downstream })
    }

    fn sample(&self, rng: &mut SimRng, state: AttentionState, noise: f64) -> AttentionEvidence {
        let n = self.states.len();
        let mut assign = vec![0usize; n];
        let (assigns, weights) = &self.tables[state.index()];
        let pick = &assigns[rng.categorical(weights)];
        for (k, &v) in self.upstream.iter().enumerate() {
            assign[v] = pick[k];
        }
        assign[self.focus] = self.states[self.focus]
            .iter()
            .position(|l| l == state.label())
            .expect("model contract");
        for (v, pa, rows) in &self.downstream {
            let mut r = 0;
            for &p in pa {
                r = r * self.states[p].len() + assign[p];
            }
            assign[*v] = rng.categorical(&rows[r]);
        }
        let mut ev = AttentionEvidence::default();
        for &(v, field) in &self.fields {
            let mut s = assign[v];
            if rng.bernoulli(noise) {
                s = rng.below(self.states[v].len());
            }
            ev.set(field, Some(self.states[v][s].clone()));
        }
        ev
    }
}

struct Arrival {
    id: String,
    class: usize,
    /// simulated classifier output
    crit: CriticalityDistribution,
}

/// Everything random about one run, shared by all policies.
struct World {
    states: Vec<AttentionState>,
    evidence: Vec<AttentionEvidence>,
    arrivals: Vec<Vec<Arrival>>,
    /// minutes of unprompted inbox checks after time 0, the last one at or
    /// after the horizon
    inspections: Vec<usize>,
}

fn classifier_posterior(rng: &mut SimRng, class: usize, priors: &[f64], separation: f64) -> CriticalityDistribution {
    // class-k signal ~ N(separation·[k = class], 1), so the posterior is
    // proportional to prior_k·exp(separation·signal_k)
    let logits: Vec<f64> = priors
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let signal = if k == class { separation } else { 0.0 } + rng.normal();
            p.ln() + separation * signal
        })
        .collect();
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    CriticalityDistribution::new(w.iter().map(|x| x / z).collect()).expect("normalized")
}

fn build_world(scenario: &ScenarioSpec, sampler: &EvidenceSampler) -> World {
    let root = SimRng::new(scenario.seed);
    let mut state_rng = root.fork(0);
    let mut evidence_rng = root.fork(1);
    let mut arrival_rng = root.fork(2);
    let mut inspect_rng = root.fork(3);

    let uniform = vec![1.0 / AttentionState::COUNT as f64; AttentionState::COUNT];
    let initial = scenario.initial.as_deref().unwrap_or(&uniform);
    let mut s = state_rng.categorical(initial);
    let mut states = Vec::with_capacity(scenario.horizon);
    for t in 0..scenario.horizon {
        if t > 0 {
            s = state_rng.categorical(&scenario.transition[s]);
        }
        states.push(AttentionState::ALL[s]);
    }
    let evidence = states.iter().map(|&st| sampler.sample(&mut evidence_rng, st, scenario.evidence_noise)).collect();

    let total_rate: f64 = scenario.classes.iter().map(|c| c.arrival_rate).sum();
    let priors: Vec<f64> = scenario
        .classes
        .iter()
        .map(|c| if total_rate > 0.0 { (c.arrival_rate / total_rate).max(1e-300) } else { 1.0 })
        .collect();
    let mut seq = 0;
    let mut arrivals = Vec::with_capacity(scenario.horizon);
    for _ in 0..scenario.horizon {
        let mut now = Vec::new();
        for (k, c) in scenario.classes.iter().enumerate() {
            for _ in 0..arrival_rng.poisson(c.arrival_rate) {
                let crit = classifier_posterior(&mut arrival_rng, k, &priors, scenario.classifier_separation);
                now.push(Arrival { id: format!("m{seq:05}"), class: k, crit });
                seq += 1;
            }
        }
        arrivals.push(now);
    }

    let weights: Vec<f64> = scenario.inspection.buckets().iter().map(|b| b.prob).collect();
    let mut inspections = Vec::new();
    let mut last = 0usize;
    while last < scenario.horizon {
        let minutes = scenario.inspection.buckets()[inspect_rng.categorical(&weights)].minutes;
        last += (minutes.ceil() as usize).max(1);
        inspections.push(last);
    }
    World { states, evidence, arrivals, inspections }
}

fn point_crit(class: usize, n: usize) -> CriticalityDistribution {
    CriticalityDistribution::new((0..n).map(|k| if k == class { 1.0 } else { 0.0 }).collect()).expect("one-hot")
}

struct Queued {
    msg: PendingMessage,
    truth: PendingMessage,
    class: usize,
}

/// Queue sizes up to which the oracle enumerates subsets; beyond it the
/// EVTA-prefix search, which is exact for these cost models, stands in.
const ORACLE_EXHAUSTIVE_LIMIT: usize = 12;

struct Beliefs<'a> {
    attention: &'a AttentionDistribution,
    inspect: &'a InspectionDistribution,
}

fn run_policy(
    policy: PolicyKind,
    scenario: &ScenarioSpec,
    world: &World,
    models: SimModels,
    posteriors: &[(AttentionDistribution, InspectionDistribution)],
) -> Result<SimResult> {
    let costs = models.costs;
    let n_classes = scenario.classes.len();
    let mut result = SimResult {
        policy,
        seed: scenario.seed,
        alerts: 0,
        interruption_cost: 0.0,
        delay_cost: 0.0,
        total_cost: 0.0,
        messages: Vec::new(),
        events: Vec::new(),
    };
    let mut outcome_index: HashMap<String, usize> = HashMap::new();
    let mut queue: Vec<Queued> = Vec::new();
    let mut t_last = 0usize;
    let mut next_inspection = 0usize;

    fn review(result: &mut SimResult, index: &HashMap<String, usize>, q: &Queued, t: usize, rate: f64, prompted: bool) {
        let delay = t as f64 - q.msg.t_o;
        let cost = delay * rate;
        result.delay_cost += cost;
        result.events.push(SimEvent::Review { t: t as f64, id: q.msg.id.clone(), delay, cost, prompted });
        result.messages[index[&q.msg.id]].reviewed_at = Some(t as f64);
    }

    let true_inspect = &scenario.inspection;
    for t in 0..scenario.horizon {
        for a in &world.arrivals[t] {
            let msg = PendingMessage { id: a.id.clone(), message: None, crit: a.crit.clone(), t_o: t as f64 };
            let truth = PendingMessage { crit: point_crit(a.class, n_classes), ..msg.clone() };
            let class = scenario.classes[a.class].name.clone();
            result.events.push(SimEvent::Arrival { t: t as f64, id: a.id.clone(), class: class.clone() });
            outcome_index.insert(a.id.clone(), result.messages.len());
            result.messages.push(MessageOutcome { id: a.id.clone(), class, arrival: t as f64, alerted_at: None, reviewed_at: None });
            queue.push(Queued { msg, truth, class: a.class });
        }
        if world.inspections[next_inspection] == t {
            result.events.push(SimEvent::Inspection { t: t as f64 });
            for q in queue.drain(..) {
                review(&mut result, &outcome_index, &q, t, scenario.classes[q.class].loss_rate, false);
            }
            t_last = t;
            next_inspection += 1;
        }
        if queue.is_empty() || policy == PolicyKind::NeverAlert {
            continue;
        }

        let state = world.states[t];
        let truth_attention = AttentionDistribution::point_mass(state);
        let modalities = available_modalities(costs, world.evidence[t].is_away());
        let use_truth = policy == PolicyKind::OracleMyopic || scenario.true_posteriors;
        let beliefs = if use_truth {
            Beliefs { attention: &truth_attention, inspect: true_inspect }
        } else {
            Beliefs { attention: &posteriors[t].0, inspect: &posteriors[t].1 }
        };
        let pending: Vec<PendingMessage> =
            queue.iter().map(|q| if use_truth { q.truth.clone() } else { q.msg.clone() }).collect();
        let inputs = DecisionInputs {
            attention: beliefs.attention,
            inspect: beliefs.inspect,
            modalities: &modalities,
            t: t as f64,
            t_last: t_last as f64,
            costs,
        };

        let choice: Option<(Modality, BTreeSet<String>)> = match policy {
            PolicyKind::NeverAlert => None,
            PolicyKind::AlwaysAlert => {
                let n = pending.len();
                let mut best: Option<(Modality, f64)> = None;
                for &m in &modalities {
                    let c = eca(AlertAction { modality: m, complexity: n }, beliefs.attention, costs)?;
                    if best.is_none_or(|b| c < b.1) {
                        best = Some((m, c));
                    }
                }
                best.map(|(m, _)| (m, pending.iter().map(|p| p.id.clone()).collect()))
            }
            PolicyKind::Neva => {
                let d = decide_with(&pending, &inputs)?;
                d.modality.map(|m| (m, d.message_ids.into_iter().collect()))
            }
            PolicyKind::OracleMyopic => {
                if pending.len() <= ORACLE_EXHAUSTIVE_LIMIT {
                    match decide_exhaustive(&pending, &inputs)? {
                        (Some(choice), value) if value > 0.0 => Some(choice),
                        _ => None,
                    }
                } else {
                    let d = decide_with(&pending, &inputs)?;
                    d.modality.map(|m| (m, d.message_ids.into_iter().collect()))
                }
            }
        };

        if let Some((modality, ids)) = choice {
            let cost = costs.cost(modality, state)? * costs.complexity_multiplier(modality, ids.len());
            result.alerts += 1;
            result.interruption_cost += cost;
            result.events.push(SimEvent::Alert {
                t: t as f64,
                modality,
                ids: ids.iter().cloned().collect(),
                state,
                cost,
            });
            let (carried, kept): (Vec<Queued>, Vec<Queued>) = queue.drain(..).partition(|q| ids.contains(&q.msg.id));
            queue = kept;
            for q in carried {
                result.messages[outcome_index[&q.msg.id]].alerted_at = Some(t as f64);
                review(&mut result, &outcome_index, &q, t, scenario.classes[q.class].loss_rate, true);
            }
        }
    }

    // whatever is left is read at the first unprompted check from the horizon on
    if !queue.is_empty() {
        let t = world.inspections[next_inspection..]
            .iter()
            .copied()
            .find(|&i| i >= scenario.horizon)
            .expect("inspection schedule reaches the horizon");
        result.events.push(SimEvent::Inspection { t: t as f64 });
        for q in queue.drain(..) {
            review(&mut result, &outcome_index, &q, t, scenario.classes[q.class].loss_rate, false);
        }
    }
    result.total_cost = result.interruption_cost + result.delay_cost;
    Ok(result)
}

/// A simulator bound to one pair of models; reusable across scenarios.
pub struct Simulator<'a> {
    models: SimModels<'a>,
    sampler: EvidenceSampler,
    cache: HashMap<AttentionEvidence, (AttentionDistribution, InspectionDistribution)>,
}

impl<'a> Simulator<'a> {
    pub fn new(models: SimModels<'a>) -> Result<Self> {
        Ok(Self { models, sampler: EvidenceSampler::new(models.attention)?, cache: HashMap::new() })
    }

    fn posterior(&mut self, ev: &AttentionEvidence) -> Result<(AttentionDistribution, InspectionDistribution)> {
        if let Some(hit) = self.cache.get(ev) {
            return Ok(hit.clone());
        }
        let value = (
            infer_attention(self.models.attention, ev)?,
            infer_inspection_interval(self.models.attention, ev)?,
        );
        self.cache.insert(ev.clone(), value.clone());
        Ok(value)
    }

    /// Runs every policy on the same simulated world, in the order given.
    pub fn run(&mut self, scenario: &ScenarioSpec, policies: &[PolicyKind]) -> Result<Vec<SimResult>> {
        scenario.validate(self.models.costs)?;
        let world = build_world(scenario, &self.sampler);
        let needs_posteriors = !scenario.true_posteriors
            && policies.iter().any(|p| matches!(p, PolicyKind::Neva | PolicyKind::AlwaysAlert));
        let posteriors = if needs_posteriors {
            world.evidence.iter().map(|ev| self.posterior(ev)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        policies.iter().map(|&p| run_policy(p, scenario, &world, self.models, &posteriors)).collect()
    }
}

pub fn simulate(scenario: &ScenarioSpec, policies: &[PolicyKind], models: SimModels) -> Result<Vec<SimResult>> {
    Simulator::new(models)?.run(scenario, policies)
}

/// True inspection distribution given as (minutes, probability) pairs.
pub fn inspection_buckets(pairs: &[(f64, f64)]) -> Result<InspectionDistribution> {
    Ok(InspectionDistribution::new(pairs.iter().map(|&(minutes, prob)| InspectionBucket { minutes, prob }).collect())?)
}
