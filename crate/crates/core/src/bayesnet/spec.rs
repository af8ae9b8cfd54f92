use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BayesNet, Cpt, NORMALIZATION_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, states: &[&str]) -> Self {
        Self {
            name: name.into(),
            states: states.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// One row of a CPT, keyed by the parent states in declared parent order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CptRow {
    pub given: Vec<String>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CptSpec {
    pub child: String,
    #[serde(default)]
    pub parents: Vec<String>,
    pub rows: Vec<CptRow>,
}

/// The on-disk network document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub variables: Vec<Variable>,
    pub cpts: Vec<CptSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateVariable { variable: String },
    NoStates { variable: String },
    DuplicateState { variable: String, state: String },
    MissingCpt { variable: String },
    DuplicateCpt { variable: String },
    UnknownChild { child: String },
    DanglingParent { child: String, parent: String },
    Cycle { variables: Vec<String> },
    RowCount { child: String, expected: usize, found: usize },
    RowKey { child: String, row: usize, detail: String },
    DuplicateRow { child: String, row: usize },
    RowWidth { child: String, row: usize, expected: usize, found: usize },
    EntryOutOfRange { child: String, row: usize, value: f64 },
    NotNormalized { child: String, row: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVariable { variable } => write!(f, "variable `{variable}` declared twice"),
            Violation::NoStates { variable } => write!(f, "variable `{variable}` has no states"),
            Violation::DuplicateState { variable, state } => {
                write!(f, "variable `{variable}` repeats state `{state}`")
            }
            Violation::MissingCpt { variable } => write!(f, "no CPT for `{variable}`"),
            Violation::DuplicateCpt { variable } => write!(f, "more than one CPT for `{variable}`"),
            Violation::UnknownChild { child } => write!(f, "CPT for undeclared variable `{child}`"),
            Violation::DanglingParent { child, parent } => {
                write!(f, "CPT of `{child}` references undeclared parent `{parent}`")
            }
            Violation::Cycle { variables } => write!(f, "cycle through {}", variables.join(", ")),
            Violation::RowCount { child, expected, found } => {
                write!(f, "CPT of `{child}` has {found} rows, expected {expected}")
            }
            Violation::RowKey { child, row, detail } => write!(f, "CPT of `{child}` row {row}: {detail}"),
            Violation::DuplicateRow { child, row } => {
                write!(f, "CPT of `{child}` row {row} repeats a parent assignment")
            }
            Violation::RowWidth { child, row, expected, found } => write!(
                f,
                "CPT of `{child}` row {row} has {found} entries, expected {expected}"
            ),
            Violation::EntryOutOfRange { child, row, value } => {
                write!(f, "CPT of `{child}` row {row} has entry {value} outside [0, 1]")
            }
            Violation::NotNormalized { child, row, sum } => {
                write!(f, "CPT of `{child}` row {row} sums to {sum}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural and numeric invariant of a network document and
/// reports all violations found.
pub fn validate_network(spec: &NetworkSpec) -> ValidationReport {
    let mut violations = Vec::new();

    let mut declared: HashMap<&str, &Variable> = HashMap::new();
    for v in &spec.variables {
        if declared.insert(v.name.as_str(), v).is_some() {
            violations.push(Violation::DuplicateVariable { variable: v.name.clone() });
        }
        if v.states.is_empty() {
            violations.push(Violation::NoStates { variable: v.name.clone() });
        }
        let mut seen = HashSet::new();
        for s in &v.states {
            if !seen.insert(s.as_str()) {
                violations.push(Violation::DuplicateState {
                    variable: v.name.clone(),
                    state: s.clone(),
                });
            }
        }
    }

    let mut cpt_of: HashMap<&str, &CptSpec> = HashMap::new();
    for cpt in &spec.cpts {
        if !declared.contains_key(cpt.child.as_str()) {
            violations.push(Violation::UnknownChild { child: cpt.child.clone() });
            continue;
        }
        if cpt_of.insert(cpt.child.as_str(), cpt).is_some() {
            violations.push(Violation::DuplicateCpt { variable: cpt.child.clone() });
        }
    }
    for v in &spec.variables {
        if !cpt_of.contains_key(v.name.as_str()) {
            violations.push(Violation::MissingCpt { variable: v.name.clone() });
        }
    }

    let mut structurally_sound = true;
    for cpt in &spec.cpts {
        let Some(child) = declared.get(cpt.child.as_str()) else { continue };
        let mut parents = Vec::with_capacity(cpt.parents.len());
        for p in &cpt.parents {
            match declared.get(p.as_str()) {
                Some(pv) => parents.push(*pv),
                None => {
                    structurally_sound = false;
                    violations.push(Violation::DanglingParent {
                        child: cpt.child.clone(),
                        parent: p.clone(),
                    });
                }
            }
        }
        if parents.len() == cpt.parents.len() {
            check_rows(cpt, child, &parents, &mut violations);
        }
    }

    if structurally_sound {
        if let Some(cycle) = find_cycle(spec) {
            violations.push(Violation::Cycle { variables: cycle });
        }
    }

    ValidationReport { violations }
}

fn check_rows(cpt: &CptSpec, child: &Variable, parents: &[&Variable], out: &mut Vec<Violation>) {
    let expected: usize = parents.iter().map(|p| p.states.len()).product();
    if cpt.rows.len() != expected {
        out.push(Violation::RowCount {
            child: cpt.child.clone(),
            expected,
            found: cpt.rows.len(),
        });
    }
    let mut seen = HashSet::new();
    for (r, row) in cpt.rows.iter().enumerate() {
        match row_offset(&row.given, parents) {
            Ok(offset) => {
                if !seen.insert(offset) {
                    out.push(Violation::DuplicateRow { child: cpt.child.clone(), row: r });
                }
            }
            Err(detail) => out.push(Violation::RowKey { child: cpt.child.clone(), row: r, detail }),
        }
        if row.probs.len() != child.states.len() {
            out.push(Violation::RowWidth {
                child: cpt.child.clone(),
                row: r,
                expected: child.states.len(),
                found: row.probs.len(),
            });
            continue;
        }
        let mut in_range = true;
        for &p in &row.probs {
            if !(0.0..=1.0).contains(&p) {
                in_range = false;
                out.push(Violation::EntryOutOfRange { child: cpt.child.clone(), row: r, value: p });
            }
        }
        let sum: f64 = row.probs.iter().sum();
        if in_range && (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            out.push(Violation::NotNormalized { child: cpt.child.clone(), row: r, sum });
        }
    }
}

fn row_offset(given: &[String], parents: &[&Variable]) -> Result<usize, String> {
    if given.len() != parents.len() {
        return Err(format!("keyed by {} parent states, expected {}", given.len(), parents.len()));
    }
    let mut offset = 0;
    for (state, parent) in given.iter().zip(parents) {
        let s = parent
            .states
            .iter()
            .position(|x| x == state)
            .ok_or_else(|| format!("parent `{}` has no state `{state}`", parent.name))?;
        offset = offset * parent.states.len() + s;
    }
    Ok(offset)
}

/// Kahn's algorithm; returns the variables left on a cycle (sorted) if any.
fn find_cycle(spec: &NetworkSpec) -> Option<Vec<String>> {
    let names: Vec<&str> = spec.variables.iter().map(|v| v.name.as_str()).collect();
    let pos: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut indegree = vec![0usize; names.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for cpt in &spec.cpts {
        let Some(&c) = pos.get(cpt.child.as_str()) else { continue };
        for p in &cpt.parents {
            if let Some(&pi) = pos.get(p.as_str()) {
                indegree[c] += 1;
                children[pi].push(c);
            }
        }
    }
    let mut stack: Vec<usize> = (0..names.len()).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                stack.push(c);
            }
        }
    }
    if removed == names.len() {
        return None;
    }
    let left: BTreeSet<String> = (0..names.len())
        .filter(|&i| indegree[i] > 0)
        .map(|i| names[i].to_string())
        .collect();
    Some(left.into_iter().collect())
}

/// Builds the indexed network from an already-validated document.
pub(super) fn build(spec: &NetworkSpec) -> BayesNet {
    let variables = spec.variables.clone();
    let index: HashMap<String, usize> = variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.clone(), i))
        .collect();
    let mut cpts = vec![
        Cpt {
            parents: Vec::new(),
            table: Vec::new(),
        };
        variables.len()
    ];
    for cpt in &spec.cpts {
        let child = index[&cpt.child];
        let parent_vars: Vec<&Variable> = cpt.parents.iter().map(|p| &variables[index[p]]).collect();
        let k = variables[child].states.len();
        let rows: usize = parent_vars.iter().map(|p| p.states.len()).product();
        let mut table = vec![0.0; rows * k];
        for row in &cpt.rows {
            let offset = row_offset(&row.given, &parent_vars).expect("validated row key");
            table[offset * k..(offset + 1) * k].copy_from_slice(&row.probs);
        }
        cpts[child] = Cpt {
            parents: cpt.parents.iter().map(|p| index[p]).collect(),
            table,
        };
    }
    BayesNet { variables, index, cpts }
}

pub(super) fn unbuild(net: &BayesNet) -> NetworkSpec {
    let mut cpts = Vec::with_capacity(net.len());
    for (i, v) in net.variables.iter().enumerate() {
        let cpt = &net.cpts[i];
        let k = v.states.len();
        let cards: Vec<usize> = cpt.parents.iter().map(|&p| net.card(p)).collect();
        let rows: usize = cards.iter().product();
        let mut out_rows = Vec::with_capacity(rows);
        for r in 0..rows {
            let mut rem = r;
            let mut given = vec![String::new(); cards.len()];
            for j in (0..cards.len()).rev() {
                given[j] = net.variables[cpt.parents[j]].states[rem % cards[j]].clone();
                rem /= cards[j];
            }
            out_rows.push(CptRow {
                given,
                probs: cpt.table[r * k..(r + 1) * k].to_vec(),
            });
        }
        cpts.push(CptSpec {
            child: v.name.clone(),
            parents: cpt.parents.iter().map(|&p| net.variables[p].name.clone()).collect(),
            rows: out_rows,
        });
    }
    NetworkSpec {
        variables: net.variables.clone(),
        cpts,
    }
}
