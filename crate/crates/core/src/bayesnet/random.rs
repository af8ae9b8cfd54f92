use crate::rng::SimRng;

use super::{CptRow, CptSpec, Evidence, NetworkSpec, Variable};

/// A random network of `n` binary variables `X00, X01, ...`. Each variable
/// takes up to `max_parents` parents drawn from the variables before it, so
/// the result is acyclic by construction. CPT entries are drawn uniformly
/// with the complement filling the second state.
pub fn random_binary_network(rng: &mut SimRng, n: usize, max_parents: usize) -> NetworkSpec {
    let names: Vec<String> = (0..n).map(|i| format!("X{i:02}")).collect();
    let variables = names.iter().map(|name| Variable::new(name, &["f", "t"])).collect();
    let mut cpts = Vec::with_capacity(n);
    for i in 0..n {
        let mut pool: Vec<usize> = (0..i).collect();
        rng.shuffle(&mut pool);
        let k = rng.below(max_parents.min(i) + 1);
        let mut parents: Vec<usize> = pool.into_iter().take(k).collect();
        parents.sort_unstable();
        let rows = (0..1usize << k)
            .map(|code| {
                let given = (0..k)
                    .map(|j| if code >> (k - 1 - j) & 1 == 1 { "t" } else { "f" }.to_string())
                    .collect();
                let p = rng.uniform();
                CptRow { given, probs: vec![p, 1.0 - p] }
            })
            .collect();
        cpts.push(CptSpec {
            child: names[i].clone(),
            parents: parents.iter().map(|&p| names[p].clone()).collect(),
            rows,
        });
    }
    NetworkSpec { variables, cpts }
}

/// Observes each variable other than `exclude` with probability `rate`, at
/// a uniformly chosen state.
pub fn random_evidence(rng: &mut SimRng, spec: &NetworkSpec, exclude: &str, rate: f64) -> Evidence {
    let mut ev = Evidence::new();
    for v in &spec.variables {
        if v.name != exclude && rng.bernoulli(rate) {
            ev.insert(&v.name, rng.choose(&v.states));
        }
    }
    ev
}
