//! CSV outputs.
//!
//! - `roc.csv`: threshold, fn_rate, fp_rate, tpr, fpr; increasing threshold.
//! - `costs.csv`: policy, seed, messages, alerts, interruption_cost,
//!   delay_cost, total_cost; one row per result, in input order.
//! - `decisions.csv`: policy, seed, t, modality, state, message_ids (joined
//!   with `;`), cost; one row per alert, in time order within each result.

use std::path::Path;

use super::sim::{SimEvent, SimResult};
use super::Result;
use crate::classifier::Roc;

pub const ROC_HEADER: [&str; 5] = ["threshold", "fn_rate", "fp_rate", "tpr", "fpr"];
pub const COSTS_HEADER: [&str; 7] =
    ["policy", "seed", "messages", "alerts", "interruption_cost", "delay_cost", "total_cost"];
pub const DECISIONS_HEADER: [&str; 7] = ["policy", "seed", "t", "modality", "state", "message_ids", "cost"];

fn to_string(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

pub fn roc_csv(roc: Option<&Roc>) -> Result<String> {
    let points = roc.map(|r| r.points.as_slice()).unwrap_or(&[]);
    to_string(
        &ROC_HEADER,
        points.iter().map(|p| {
            [p.threshold, p.fn_rate, p.fp_rate, p.tpr, p.fpr].iter().map(f64::to_string).collect()
        }),
    )
}

pub fn costs_csv(results: &[SimResult]) -> Result<String> {
    to_string(
        &COSTS_HEADER,
        results.iter().map(|r| {
            vec![
                r.policy.to_string(),
                r.seed.to_string(),
                r.messages.len().to_string(),
                r.alerts.to_string(),
                r.interruption_cost.to_string(),
                r.delay_cost.to_string(),
                r.total_cost.to_string(),
            ]
        }),
    )
}

pub fn decisions_csv(results: &[SimResult]) -> Result<String> {
    to_string(
        &DECISIONS_HEADER,
        results.iter().flat_map(|r| {
            r.events.iter().filter_map(move |e| match e {
                SimEvent::Alert { t, modality, ids, state, cost } => Some(vec![
                    r.policy.to_string(),
                    r.seed.to_string(),
                    t.to_string(),
                    modality.label().to_string(),
                    state.label().to_string(),
                    ids.join(";"),
                    cost.to_string(),
                ]),
                _ => None,
            })
        }),
    )
}

/// Writes the three CSV files into `dir`, creating it if needed.
pub fn report(dir: &Path, roc: Option<&Roc>, results: &[SimResult]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("roc.csv"), roc_csv(roc)?)?;
    std::fs::write(dir.join("costs.csv"), costs_csv(results)?)?;
    std::fs::write(dir.join("decisions.csv"), decisions_csv(results)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_results_give_header_only_files() {
        let dir = tempfile::tempdir().unwrap();
        report(dir.path(), None, &[]).unwrap();
        let roc = std::fs::read_to_string(dir.path().join("roc.csv")).unwrap();
        assert_eq!(roc, "threshold,fn_rate,fp_rate,tpr,fpr\n");
        let costs = std::fs::read_to_string(dir.path().join("costs.csv")).unwrap();
        assert_eq!(costs.lines().count(), 1);
        let decisions = std::fs::read_to_string(dir.path().join("decisions.csv")).unwrap();
        assert_eq!(decisions, "policy,seed,t,modality,state,message_ids,cost\n");
    }

    #[test]
    fn unwritable_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        std::fs::write(&file, "x").unwrap();
        assert!(report(&file.join("sub"), None, &[]).is_err());
    }
}
