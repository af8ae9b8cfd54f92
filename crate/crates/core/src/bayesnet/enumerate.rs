use super::{BayesNet, BayesNetError, Evidence, Posterior, Result};

/// Largest joint state space [`joint_enumeration`] will walk.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// Brute-force posterior by summing the full joint. Intended as a reference
/// for small networks.
pub fn joint_enumeration(net: &BayesNet, evidence: &Evidence, query: &str) -> Result<Posterior> {
    joint_enumeration_with_cap(net, evidence, query, DEFAULT_ENUMERATION_CAP)
}

pub fn joint_enumeration_with_cap(
    net: &BayesNet,
    evidence: &Evidence,
    query: &str,
    cap: u128,
) -> Result<Posterior> {
    let q = net.index_of(query)?;
    let fixed = net.resolve(evidence)?;
    let size = (0..net.len()).fold(1u128, |acc, v| acc.saturating_mul(net.card(v) as u128));
    if size > cap {
        return Err(BayesNetError::StateSpaceTooLarge { size, cap });
    }

    let free: Vec<usize> = (0..net.len()).filter(|&v| fixed[v].is_none()).collect();
    let mut assignment: Vec<usize> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
    let mut marginal = vec![0.0; net.card(q)];
    loop {
        let p: f64 = (0..net.len()).map(|v| net.local_prob(v, &assignment)).product();
        marginal[assignment[q]] += p;

        let mut i = free.len();
        let mut wrapped = true;
        while i > 0 {
            i -= 1;
            let v = free[i];
            assignment[v] += 1;
            if assignment[v] < net.card(v) {
                wrapped = false;
                break;
            }
            assignment[v] = 0;
        }
        if wrapped {
            break;
        }
    }

    let z: f64 = marginal.iter().sum();
    if !(z > 0.0) {
        return Err(BayesNetError::InconsistentEvidence);
    }
    Ok(Posterior {
        variable: query.to_string(),
        states: net.variables()[q].states.clone(),
        probs: marginal.iter().map(|m| m / z).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::testnets::chain;
    use crate::bayesnet::{infer, NetworkSpec};

    #[test]
    fn agrees_with_elimination_on_chain() {
        let net = BayesNet::from_spec(&chain()).unwrap();
        let ev = Evidence::new().with("B", "t");
        let a = joint_enumeration(&net, &ev, "A").unwrap();
        let b = infer(&net, &ev, "A").unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn single_variable_returns_prior() {
        let spec: NetworkSpec = serde_json::from_value(serde_json::json!({
            "variables": [{"name": "X", "states": ["a", "b", "c"]}],
            "cpts": [{"child": "X", "rows": [{"given": [], "probs": [0.2, 0.5, 0.3]}]}]
        }))
        .unwrap();
        let net = BayesNet::from_spec(&spec).unwrap();
        let p = joint_enumeration(&net, &Evidence::new(), "X").unwrap();
        for (got, want) in p.probs.iter().zip([0.2, 0.5, 0.3]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn refuses_oversized_state_space() {
        let net = BayesNet::from_spec(&chain()).unwrap();
        let err = joint_enumeration_with_cap(&net, &Evidence::new(), "A", 3).unwrap_err();
        assert!(matches!(err, BayesNetError::StateSpaceTooLarge { size: 4, cap: 3 }));
    }
}
