use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{BayesNet, BayesNetError, CptSpec, NetworkSpec, Result, Variable};

/// Suffix marking a previous-slice parent inside a transition CPT.
pub const PREV_SUFFIX: &str = "@prev";

/// Name of a slice variable in the unrolled network.
pub fn slice_name(name: &str, slice: usize) -> String {
    format!("{name}@{slice}")
}

/// A Markov dependency from `from` in slice t-1 to `to` in slice t.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalLink {
    pub from: String,
    pub to: String,
}

/// A slice template plus the cross-slice structure.
///
/// Every link target must have exactly one entry in `transition_cpts`, whose
/// parents list the target's in-slice parents by plain name and its
/// previous-slice parents as `NAME@prev`. Variables that are not link
/// targets reuse their slice CPT in every slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbnSpec {
    #[serde(flatten)]
    pub slice: NetworkSpec,
    pub temporal_links: Vec<TemporalLink>,
    #[serde(default)]
    pub transition_cpts: Vec<CptSpec>,
}

impl DbnSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Unrolls `spec` into a network of `horizon` slices. Slice 0 uses the
/// template CPTs; later slices use the transition CPTs for link targets.
pub fn unroll(spec: &DbnSpec, horizon: usize) -> Result<BayesNet> {
    if horizon == 0 {
        return Err(BayesNetError::ZeroHorizon);
    }
    BayesNet::from_spec(&spec.slice)?;
    let transitions = check_links(spec)?;
    if horizon == 1 {
        // transitions are still checked against a two-slice expansion
        BayesNet::from_spec(&expand(spec, &transitions, 2))?;
    }
    BayesNet::from_spec(&expand(spec, &transitions, horizon))
}

fn check_links(spec: &DbnSpec) -> Result<BTreeMap<String, &CptSpec>> {
    let names: BTreeSet<&str> = spec.slice.variables.iter().map(|v| v.name.as_str()).collect();
    let mut sources: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for link in &spec.temporal_links {
        for end in [&link.from, &link.to] {
            if !names.contains(end.as_str()) {
                return Err(BayesNetError::Temporal(format!(
                    "link {} -> {} references unknown variable `{end}`",
                    link.from, link.to
                )));
            }
        }
        sources.entry(link.to.as_str()).or_default().insert(link.from.as_str());
    }

    let mut transitions = BTreeMap::new();
    for cpt in &spec.transition_cpts {
        let Some(expected) = sources.get(cpt.child.as_str()) else {
            return Err(BayesNetError::Temporal(format!(
                "transition CPT for `{}` which is not a link target",
                cpt.child
            )));
        };
        let mut prev = BTreeSet::new();
        for p in &cpt.parents {
            let base = p.strip_suffix(PREV_SUFFIX).unwrap_or(p);
            if !names.contains(base) {
                return Err(BayesNetError::Temporal(format!(
                    "transition CPT for `{}` references unknown parent `{p}`",
                    cpt.child
                )));
            }
            if p.ends_with(PREV_SUFFIX) {
                prev.insert(base);
            }
        }
        if &prev != expected {
            return Err(BayesNetError::Temporal(format!(
                "transition CPT for `{}` has previous-slice parents {:?}, links declare {:?}",
                cpt.child, prev, expected
            )));
        }
        if transitions.insert(cpt.child.clone(), cpt).is_some() {
            return Err(BayesNetError::Temporal(format!(
                "more than one transition CPT for `{}`",
                cpt.child
            )));
        }
    }
    for target in sources.keys() {
        if !transitions.contains_key(*target) {
            return Err(BayesNetError::Temporal(format!("no transition CPT for link target `{target}`")));
        }
    }
    Ok(transitions)
}

fn expand(spec: &DbnSpec, transitions: &BTreeMap<String, &CptSpec>, horizon: usize) -> NetworkSpec {
    let mut variables = Vec::new();
    let mut cpts = Vec::new();
    for t in 0..horizon {
        for v in &spec.slice.variables {
            variables.push(Variable {
                name: slice_name(&v.name, t),
                states: v.states.clone(),
            });
        }
        for cpt in &spec.slice.cpts {
            let source = match transitions.get(&cpt.child) {
                Some(tr) if t > 0 => *tr,
                _ => cpt,
            };
            let parents = source
                .parents
                .iter()
                .map(|p| match p.strip_suffix(PREV_SUFFIX) {
                    Some(base) => slice_name(base, t - 1),
                    None => slice_name(p, t),
                })
                .collect();
            cpts.push(CptSpec {
                child: slice_name(&cpt.child, t),
                parents,
                rows: source.rows.clone(),
            });
        }
    }
    NetworkSpec { variables, cpts }
}
