//! Discrete Bayesian networks: a JSON-backed description format, structural
//! validation, exact inference by variable elimination, a brute-force joint
//! enumeration used as a cross-check, and two-slice temporal unrolling.

mod dbn;
mod enumerate;
mod factor;
mod infer;
mod random;
mod spec;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dbn::{slice_name, unroll, DbnSpec, TemporalLink, PREV_SUFFIX};
pub use enumerate::{joint_enumeration, joint_enumeration_with_cap, DEFAULT_ENUMERATION_CAP};
pub use infer::infer;
pub use random::{random_binary_network, random_evidence};
pub use spec::{validate_network, CptRow, CptSpec, NetworkSpec, ValidationReport, Violation, Variable};

/// Tolerance applied to CPT row sums.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BayesNetError {
    #[error("invalid network: {0}")]
    Invalid(ValidationReport),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{variable}` has no state `{state}`")]
    UnknownState { variable: String, state: String },
    #[error("evidence has zero probability under the model")]
    InconsistentEvidence,
    #[error("joint state space of {size} assignments exceeds the enumeration cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },
    #[error("`{child}` has {expected} parents but {found} parent states were given")]
    ParentArity {
        child: String,
        expected: usize,
        found: usize,
    },
    #[error("unroll horizon must be at least 1")]
    ZeroHorizon,
    #[error("invalid temporal specification: {0}")]
    Temporal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed network document: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = BayesNetError> = std::result::Result<T, E>;

/// Conditional table of one variable, resolved to variable indices.
///
/// `table` is laid out row-major: one row per joint parent assignment (first
/// parent varies slowest), each row holding one probability per child state.
#[derive(Debug, Clone)]
pub(crate) struct Cpt {
    pub(crate) parents: Vec<usize>,
    pub(crate) table: Vec<f64>,
}

/// A validated, immutable discrete Bayesian network.
#[derive(Debug, Clone)]
pub struct BayesNet {
    variables: Vec<Variable>,
    index: HashMap<String, usize>,
    cpts: Vec<Cpt>,
}

impl BayesNet {
    /// Validates `spec` and builds the indexed network. Rows that fail the
    /// normalization tolerance are rejected, never renormalized.
    pub fn from_spec(spec: &NetworkSpec) -> Result<Self> {
        let report = validate_network(spec);
        if !report.is_ok() {
            return Err(BayesNetError::Invalid(report));
        }
        Ok(spec::build(spec))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: NetworkSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| BayesNetError::UnknownVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        Ok(&self.variables[self.index_of(name)?])
    }

    pub fn parents(&self, name: &str) -> Result<Vec<&str>> {
        let i = self.index_of(name)?;
        Ok(self.cpts[i]
            .parents
            .iter()
            .map(|&p| self.variables[p].name.as_str())
            .collect())
    }

    /// The CPT row of `child` for the given parent states (in declared
    /// parent order).
    pub fn cpt_row(&self, child: &str, parent_states: &[&str]) -> Result<&[f64]> {
        let i = self.index_of(child)?;
        let cpt = &self.cpts[i];
        if parent_states.len() != cpt.parents.len() {
            return Err(BayesNetError::ParentArity {
                child: child.to_string(),
                expected: cpt.parents.len(),
                found: parent_states.len(),
            });
        }
        let mut row = 0;
        for (&p, state) in cpt.parents.iter().zip(parent_states) {
            let s = self.state_index(p, state)?;
            row = row * self.card(p) + s;
        }
        let k = self.card(i);
        Ok(&cpt.table[row * k..(row + 1) * k])
    }

    pub fn to_spec(&self) -> NetworkSpec {
        spec::unbuild(self)
    }

    pub(crate) fn card(&self, var: usize) -> usize {
        self.variables[var].states.len()
    }

    pub(crate) fn cpt(&self, var: usize) -> &Cpt {
        &self.cpts[var]
    }

    pub(crate) fn state_index(&self, var: usize, state: &str) -> Result<usize> {
        let v = &self.variables[var];
        v.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| BayesNetError::UnknownState {
                variable: v.name.clone(),
                state: state.to_string(),
            })
    }

    /// Probability of `var` taking `state` given a full assignment of its
    /// parents (indexed by variable).
    pub(crate) fn local_prob(&self, var: usize, assignment: &[usize]) -> f64 {
        let cpt = &self.cpts[var];
        let mut row = 0;
        for &p in &cpt.parents {
            row = row * self.card(p) + assignment[p];
        }
        cpt.table[row * self.card(var) + assignment[var]]
    }

    /// Resolves evidence to `(variable index, state index)` pairs.
    pub(crate) fn resolve(&self, evidence: &Evidence) -> Result<Vec<Option<usize>>> {
        let mut fixed = vec![None; self.len()];
        for (name, state) in evidence.iter() {
            let v = self.index_of(name)?;
            fixed[v] = Some(self.state_index(v, state)?);
        }
        Ok(fixed)
    }
}

/// Hard evidence: observed state per variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Evidence(BTreeMap<String, String>);

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, variable: impl Into<String>, state: impl Into<String>) -> Self {
        self.insert(variable, state);
        self
    }

    pub fn insert(&mut self, variable: impl Into<String>, state: impl Into<String>) {
        self.0.insert(variable.into(), state.into());
    }

    pub fn get(&self, variable: &str) -> Option<&str> {
        self.0.get(variable).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Evidence {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Posterior marginal of a single variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    pub variable: String,
    pub states: Vec<String>,
    pub probs: Vec<f64>,
}

impl Posterior {
    pub fn prob(&self, state: &str) -> Option<f64> {
        self.states
            .iter()
            .position(|s| s == state)
            .map(|i| self.probs[i])
    }

    pub fn max_abs_diff(&self, other: &Posterior) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Posterior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.variable)?;
        for (s, p) in self.states.iter().zip(&self.probs) {
            write!(f, " {s}={p:.6}")?;
        }
        Ok(())
    }
}
