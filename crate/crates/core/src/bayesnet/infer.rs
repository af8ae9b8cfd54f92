use std::collections::BTreeSet;

use super::factor::Factor;
use super::{BayesNet, BayesNetError, Evidence, Posterior, Result};

/// Exact posterior `P(query | evidence)` by variable elimination.
///
/// Only ancestors of the query and evidence variables take part; the rest
/// are barren and sum to one. Elimination order is greedy min-degree with
/// ties broken by variable name.
pub fn infer(net: &BayesNet, evidence: &Evidence, query: &str) -> Result<Posterior> {
    let q = net.index_of(query)?;
    let fixed = net.resolve(evidence)?;

    let relevant = ancestors(net, fixed.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(v, _)| v).chain([q]));

    let mut factors: Vec<Factor> = relevant.iter().map(|&v| Factor::from_cpt(net, v, &fixed)).collect();
    let mut pending: BTreeSet<usize> = relevant
        .iter()
        .copied()
        .filter(|&v| v != q && fixed[v].is_none())
        .collect();

    while !pending.is_empty() {
        let var = next_to_eliminate(net, &factors, &pending);
        pending.remove(&var);
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.contains(var));
        factors = rest;
        let merged = touching
            .iter()
            .fold(Factor::scalar(1.0), |acc, f| acc.product(f));
        factors.push(merged.sum_out(var));
    }

    let joint = factors.iter().fold(Factor::scalar(1.0), |acc, f| acc.product(f));
    let states = net.variables()[q].states.clone();

    if let Some(observed) = fixed[q] {
        let z: f64 = joint.values.iter().sum();
        if !(z > 0.0) {
            return Err(BayesNetError::InconsistentEvidence);
        }
        let mut probs = vec![0.0; states.len()];
        probs[observed] = 1.0;
        return Ok(Posterior { variable: query.to_string(), states, probs });
    }

    debug_assert_eq!(joint.vars, vec![q]);
    let z: f64 = joint.values.iter().sum();
    if !(z > 0.0) {
        return Err(BayesNetError::InconsistentEvidence);
    }
    let probs = joint.values.iter().map(|v| v / z).collect();
    Ok(Posterior { variable: query.to_string(), states, probs })
}

fn ancestors(net: &BayesNet, seeds: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut seen = vec![false; net.len()];
    let mut stack: Vec<usize> = seeds.collect();
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        stack.extend(net.cpt(v).parents.iter().copied().filter(|&p| !seen[p]));
    }
    (0..net.len()).filter(|&v| seen[v]).collect()
}

/// Variable whose elimination yields the smallest new scope.
fn next_to_eliminate(net: &BayesNet, factors: &[Factor], pending: &BTreeSet<usize>) -> usize {
    let mut best: Option<(usize, &str, usize)> = None;
    for &v in pending {
        let mut scope = BTreeSet::new();
        for f in factors.iter().filter(|f| f.contains(v)) {
            scope.extend(f.vars.iter().copied());
        }
        let degree = scope.len().saturating_sub(1);
        let name = net.variables()[v].name.as_str();
        let better = match best {
            None => true,
            Some((d, n, _)) => degree < d || (degree == d && name < n),
        };
        if better {
            best = Some((degree, name, v));
        }
    }
    best.expect("pending is non-empty").2
}
