//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Library-level criteria call mediator-core
//! directly; the classifier, correlation, policy-benchmark and
//! determinism criteria go through the `mediator` CLI against in-process
//! servers loaded from the shipped `models/` directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use mediator_core::api::PolicySummary;
use mediator_core::attention::{AttentionDistribution, AttentionState, InspectionDistribution, expected_interval};
use mediator_core::bayesnet::{infer, joint_enumeration, random_binary_network, random_evidence, BayesNet};
use mediator_core::classifier::qp::solve_dual_qp;
use mediator_core::classifier::{dual_objective, fit_sigmoid, train_svm, PlattParams, Sample, SvmParams};
use mediator_core::harness::{simulate, PolicyKind, ScenarioSpec, SimEvent, SimModels};
use mediator_core::models::ModelSet;
use mediator_core::policy::{available_modalities, decide_with, same_choice, DecisionInputs, PendingMessage};
use mediator_core::rng::SimRng;
use mediator_core::utility::{
    ecda, ecdr, evta, neva, neva_chunked, AlertAction, Clock, ComplexityCost, CostModel, CriticalityDistribution,
    LinearLoss, Modality,
};
use mediator_server::AppState;

const INFERENCE_NETS: usize = 200;
const INFERENCE_TOL: f64 = 1e-9;
const INFERENCE_BUDGET: Duration = Duration::from_secs(60);

const UTILITY_INSTANCES: usize = 1000;
const ECDA_TOL: f64 = 1e-12;
const ZERO_CROSSING_TOL: f64 = 1e-9;
const SCALING_QUEUES: usize = 100;
const UTILITY_BUDGET: Duration = Duration::from_secs(30);

const SVM_PAIR_TOL: f64 = 1e-6;
const SVM_INSTANCES: usize = 50;
const SVM_REL_TOL: f64 = 1e-6;
/// KKT tolerance for the oracle comparison, tighter than the training default.
const SVM_SMO_TOL: f64 = 1e-7;
const SVM_BUDGET: Duration = Duration::from_secs(120);

const PLATT_B_TOL: f64 = 1e-6;
const PLATT_CORPORA: usize = 40;

const HOLDOUT_PER_CLASS: usize = 250;
const MIN_AUC: f64 = 0.95;
const E2E_BUDGET: Duration = Duration::from_secs(120);

const SCORED_MESSAGES: usize = 200;
const MIN_PEARSON: f64 = 0.8;
const CORRELATION_BUDGET: Duration = Duration::from_secs(30);

const TINY_SCENARIOS: usize = 50;
const TINY_HORIZON: usize = 10;
const TINY_MAX_MESSAGES: usize = 3;
const TINY_COST_TOL: f64 = 1e-9;
const BENCHMARK_SEEDS: usize = 100;
const POLICY_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Suite {
    failed: Vec<&'static str>,
}

impl Suite {
    fn run(&mut self, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let mut o = result.unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if let Some(b) = budget {
            if elapsed > b {
                o.pass = false;
                o.detail.push_str(&format!("; over the {} s budget", b.as_secs()));
            }
        }
        println!("{} {name}: {} ({:.1} s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, elapsed.as_secs_f64());
        if !o.pass {
            self.failed.push(name);
        }
    }
}

fn random_attention(rng: &mut SimRng) -> AttentionDistribution {
    let raw: Vec<f64> = (0..AttentionState::COUNT).map(|_| rng.uniform() + 0.01).collect();
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    AttentionDistribution::new(p.try_into().unwrap()).unwrap()
}

fn random_inspection(rng: &mut SimRng) -> InspectionDistribution {
    let w: Vec<f64> = (0..5).map(|_| rng.uniform() + 0.01).collect();
    let total: f64 = w.iter().sum();
    let pairs: Vec<(f64, f64)> = [1.0, 5.0, 15.0, 60.0, 240.0].into_iter().zip(w.iter().map(|x| x / total)).collect();
    InspectionDistribution::from_pairs(&pairs).unwrap()
}

fn random_crit(rng: &mut SimRng, classes: usize) -> CriticalityDistribution {
    let raw: Vec<f64> = (0..classes).map(|_| rng.uniform() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    CriticalityDistribution::new(raw.iter().map(|x| x / total).collect()).unwrap()
}

fn random_costs(rng: &mut SimRng) -> CostModel {
    let mut file = CostModel::default_model().file().clone();
    file.complexity_cost = if rng.bernoulli(0.5) {
        ComplexityCost::Affine { slope: rng.uniform() }
    } else {
        ComplexityCost::Power { exponent: rng.uniform() }
    };
    for row in file.interruption.values_mut() {
        for v in row.values_mut() {
            *v *= rng.range(0.1, 2.0);
        }
    }
    file.classes[0].loss_rate = rng.range(0.0, 2.0);
    CostModel::new(file).unwrap()
}

fn inference_oracle() -> Outcome {
    let root = SimRng::new(20_240_601);
    let mut worst = 0.0f64;
    for i in 0..INFERENCE_NETS {
        let mut rng = root.fork(i as u64);
        let n = 1 + rng.below(12);
        let spec = random_binary_network(&mut rng, n, 3);
        let query = spec.variables[rng.below(n)].name.clone();
        let ev = random_evidence(&mut rng, &spec, &query, 0.3);
        let net = BayesNet::from_spec(&spec).unwrap();
        let ve = infer(&net, &ev, &query).unwrap();
        let oracle = joint_enumeration(&net, &ev, &query).unwrap();
        worst = worst.max(ve.max_abs_diff(&oracle));
    }
    outcome(worst <= INFERENCE_TOL, format!("max |Δ| = {worst:.2e} over {INFERENCE_NETS} nets (tol {INFERENCE_TOL:.0e})"))
}

fn utility_identities() -> Outcome {
    let root = SimRng::new(77);
    let mut notes = Vec::new();
    let mut pass = true;

    // (a) general delayed-action cost under linear loss equals ECDR
    let mut rng = root.fork(0);
    let mut worst = 0.0f64;
    for _ in 0..UTILITY_INSTANCES {
        let classes = 2 + rng.below(4);
        let crit = random_crit(&mut rng, classes);
        let rates: Vec<f64> = (0..classes).map(|_| rng.range(0.0, 5.0)).collect();
        let t_o = rng.range(0.0, 100.0);
        let t = t_o + rng.range(0.0, 100.0);
        let u = LinearLoss { loss_rates: rates.clone(), t_o };
        let actions: Vec<usize> = (0..1 + rng.below(3)).collect();
        let a = ecda(&u, &crit, &actions, t_o, t).unwrap();
        let b = ecdr(&crit, &rates, t_o, t).unwrap();
        worst = worst.max((a - b).abs());
    }
    pass &= worst <= ECDA_TOL;
    notes.push(format!("(a) max |ecda-ecdr| = {worst:.1e}"));

    // (b) EVTA crosses zero at t_last + E[I] when no bucket is clamped
    let mut rng = root.fork(1);
    let mut worst = 0.0f64;
    for _ in 0..UTILITY_INSTANCES {
        let crit = random_crit(&mut rng, 2);
        let rates = [rng.range(0.1, 5.0), rng.range(0.1, 5.0)];
        let inspect = random_inspection(&mut rng);
        let t_last = rng.range(0.0, 50.0);
        let t_o = t_last + rng.range(0.0, 1.0); // within the shortest bucket
        let at = |t: f64| evta(&crit, &rates, &inspect, &Clock { t_o, t, t_last }).unwrap();
        // EVTA is linear in t; locate the root from two evaluations
        let (t1, t2) = (t_o, t_o + 300.0);
        let (v1, v2) = (at(t1), at(t2));
        let root_t = t1 - v1 * (t2 - t1) / (v2 - v1);
        let expected = t_last + expected_interval(&inspect);
        worst = worst.max((root_t - expected).abs()).max(at(expected).abs());
    }
    pass &= worst <= ZERO_CROSSING_TOL;
    notes.push(format!("(b) max zero-crossing error = {worst:.1e}"));

    // (c) a one-message chunk is the single-message value, bit for bit
    let mut rng = root.fork(2);
    let mut mismatches = 0;
    for _ in 0..UTILITY_INSTANCES {
        let costs = random_costs(&mut rng);
        let crit = random_crit(&mut rng, 2);
        let inspect = random_inspection(&mut rng);
        let att = random_attention(&mut rng);
        let t_last = rng.range(0.0, 20.0);
        let t_o = rng.range(0.0, 40.0);
        let t = t_o + rng.range(0.0, 30.0);
        let modality = Modality::ALL[rng.below(4)];
        let single = neva(&crit, &inspect, &Clock { t_o, t, t_last }, AlertAction { modality, complexity: 1 }, &att, &costs)
            .unwrap();
        let chunk = neva_chunked(&[(crit, t_o)], &inspect, t, t_last, modality, &att, &costs).unwrap();
        if single.to_bits() != chunk.to_bits() {
            mismatches += 1;
        }
    }
    pass &= mismatches == 0;
    notes.push(format!("(c) {mismatches} inexact n=1 chunks"));

    // (d) scaling every cost keeps the decision
    let mut rng = root.fork(3);
    let mut changed = 0;
    for q in 0..SCALING_QUEUES {
        let t = 50.0;
        let queue: Vec<PendingMessage> = (0..1 + rng.below(10))
            .map(|i| PendingMessage {
                id: format!("q{q}m{i}"),
                message: None,
                crit: CriticalityDistribution::binary(rng.uniform()).unwrap(),
                t_o: t - rng.range(0.0, 30.0),
            })
            .collect();
        let att = random_attention(&mut rng);
        let inspect = random_inspection(&mut rng);
        let costs = random_costs(&mut rng);
        let k = rng.range(0.05, 50.0);
        let scaled = costs.scaled(k).unwrap();
        let mods = available_modalities(&costs, rng.bernoulli(0.3));
        let base =
            DecisionInputs { attention: &att, inspect: &inspect, modalities: &mods, t, t_last: t - rng.range(0.0, 20.0), costs: &costs };
        let a = decide_with(&queue, &base).unwrap();
        let b = decide_with(&queue, &DecisionInputs { costs: &scaled, ..base.clone() }).unwrap();
        if !same_choice(&a, &b) || (a.neva > 0.0) != (b.neva > 0.0) {
            changed += 1;
        }
    }
    pass &= changed == 0;
    notes.push(format!("(d) {changed}/{SCALING_QUEUES} decisions changed under scaling"));
    outcome(pass, notes.join("; "))
}

fn svm_correctness() -> Outcome {
    let pair = [Sample::dense(&[-1.0]), Sample::dense(&[1.0])];
    let hard = SvmParams { c: 1e6, tol: 1e-9, ..Default::default() };
    let m = train_svm(&pair, &[false, true], 1, hard).unwrap().model;
    let pair_err = (m.weights[0] - 1.0).abs().max(m.bias.abs());

    let root = SimRng::new(31);
    let mut worst = 0.0f64;
    for i in 0..SVM_INSTANCES {
        let mut rng = root.fork(i as u64);
        let n = 10 + rng.below(31);
        let dim = 2 + rng.below(4);
        let sep = rng.range(0.2, 1.0);
        let labels: Vec<bool> = (0..n).map(|j| j % 2 == 0).collect();
        let samples: Vec<Sample> = labels
            .iter()
            .map(|&l| {
                let mu = if l { sep } else { -sep };
                Sample::dense(&(0..dim).map(|_| mu + rng.normal()).collect::<Vec<_>>())
            })
            .collect();
        let c = rng.range(0.1, 5.0);
        let params = SvmParams { c, tol: SVM_SMO_TOL, max_iter: 10_000_000 };
        let t = train_svm(&samples, &labels, dim, params).unwrap();
        let smo = dual_objective(&samples, &labels, &t.alphas, dim);
        let oracle = solve_dual_qp(&samples, &labels, c).objective;
        worst = worst.max((smo - oracle).abs() / oracle.abs());
    }
    outcome(
        pair_err <= SVM_PAIR_TOL && worst <= SVM_REL_TOL,
        format!(
            "two-point |Δ(w,b)| = {pair_err:.1e}; max relative dual gap vs QP oracle = {worst:.1e} over {SVM_INSTANCES} sets"
        ),
    )
}

fn strictly_monotone(margins: &[f64], prob: impl Fn(f64) -> f64) -> bool {
    let mut m = margins.to_vec();
    m.sort_by(f64::total_cmp);
    m.dedup();
    m.windows(2).all(|w| prob(w[0]) < prob(w[1]))
}

fn platt_calibration() -> Outcome {
    let root = SimRng::new(41);
    let mut worst_b = 0.0f64;
    let mut non_monotone = 0;
    for i in 0..PLATT_CORPORA {
        let mut rng = root.fork(i as u64);
        let half = 5 + rng.below(40);
        let scale = rng.range(0.5, 3.0);
        let mut margins = Vec::new();
        let mut labels = Vec::new();
        let symmetric = i % 2 == 0;
        for _ in 0..half {
            let m = rng.normal() * scale;
            let l = rng.bernoulli(1.0 / (1.0 + (-1.5 * m).exp()));
            margins.push(m);
            labels.push(l);
            if symmetric {
                margins.push(-m);
                labels.push(!l);
            } else {
                let m2 = rng.normal() * scale + 0.5;
                margins.push(m2);
                labels.push(rng.bernoulli(1.0 / (1.0 + (-m2).exp())));
            }
        }
        if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
            labels[0] = !labels[0];
        }
        let s = fit_sigmoid(&margins, &labels, PlattParams::default()).unwrap();
        if symmetric {
            worst_b = worst_b.max(s.b.abs());
        }
        if !strictly_monotone(&margins, |m| s.prob(m)) {
            non_monotone += 1;
        }
    }
    outcome(
        worst_b <= PLATT_B_TOL && non_monotone == 0,
        format!(
            "max |B| on {} symmetric corpora = {worst_b:.1e}; {non_monotone}/{PLATT_CORPORA} corpora not strictly monotone",
            PLATT_CORPORA / 2
        ),
    )
}

/// In-process servers over the shipped model directory.
struct Servers {
    rt: tokio::runtime::Runtime,
    urls: Vec<String>,
}

impl Servers {
    fn start(count: usize, model_dir: &Path) -> Self {
        let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();
        let urls = (0..count)
            .map(|_| {
                let state = AppState::load(model_dir).unwrap();
                rt.block_on(async {
                    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
                    let url = format!("http://{}", listener.local_addr().unwrap());
                    tokio::spawn(mediator_server::serve(listener, state, std::future::pending()));
                    url
                })
            })
            .collect();
        Self { rt, urls }
    }
}

fn mediator(server: &str, args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_mediator"))
        .arg("--server")
        .arg(server)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!("mediator {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()))
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn end_to_end(server: &str, work: &Path) -> Result<Outcome, String> {
    let corpus = work.join("corpus.jsonl");
    let test = work.join("heldout.jsonl");
    let model = work.join("classifier.json");
    let roc = work.join("roc.csv");
    let empty = work.join("no-models");
    mediator(server, &["gen-corpus", "--out", p(&corpus)])?;
    let messages = std::fs::read_to_string(&corpus).map_err(|e| e.to_string())?.lines().count();
    let holdout = HOLDOUT_PER_CLASS.to_string();
    mediator(
        server,
        &["train", "--corpus", p(&corpus), "--holdout", &holdout, "--holdout-out", p(&test), "--out", p(&model), "--model-dir", p(&empty)],
    )?;
    let summary = mediator(server, &["roc", "--testset", p(&test), "--model", p(&model), "--out", p(&roc)])?;
    let summary: serde_json::Value = serde_json::from_str(&summary).map_err(|e| e.to_string())?;
    let auc = summary["auc"].as_f64().ok_or("roc summary has no auc")?;
    let accuracy = summary["accuracy"].as_f64().unwrap_or(f64::NAN);

    let text = std::fs::read_to_string(&roc).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    // columns: threshold, fn_rate, fp_rate, tpr, fpr; thresholds increase
    let monotone = rows.windows(2).all(|w| {
        w[1][0] > w[0][0] && w[1][1] >= w[0][1] && w[1][2] <= w[0][2] && w[1][3] <= w[0][3] && w[1][4] <= w[0][4]
    });
    Ok(outcome(
        auc >= MIN_AUC && monotone && messages == 1500,
        format!(
            "{messages} messages, {HOLDOUT_PER_CLASS}/{HOLDOUT_PER_CLASS} held out: AUC = {auc:.4} (min {MIN_AUC}), accuracy = {accuracy:.3}, ROC columns monotone: {monotone}"
        ),
    ))
}

fn correlation(server: &str, work: &Path) -> Result<Outcome, String> {
    let scored = work.join("scored.jsonl");
    let model = work.join("classifier.json");
    let count = SCORED_MESSAGES.to_string();
    mediator(server, &["gen-corpus", "--scored", &count, "--out", p(&scored)])?;
    let res = mediator(server, &["correlate", "--scored", p(&scored), "--model", p(&model)])?;
    let res: serde_json::Value = serde_json::from_str(&res).map_err(|e| e.to_string())?;
    let r = res["pearson"].as_f64().ok_or("no pearson in response")?;
    let n = res["messages"].as_u64().unwrap_or(0) as usize;
    Ok(outcome(r >= MIN_PEARSON && n == SCORED_MESSAGES, format!("Pearson(EC, score) = {r:.4} on {n} messages (min {MIN_PEARSON})")))
}

fn alerts(events: &[SimEvent]) -> Vec<(f64, Modality, BTreeSet<String>)> {
    events
        .iter()
        .filter_map(|e| match e {
            SimEvent::Alert { t, modality, ids, .. } => Some((*t, *modality, ids.iter().cloned().collect())),
            _ => None,
        })
        .collect()
}

/// Tiny scenarios: the default dynamics cut to a short horizon with busier
/// arrivals, every policy fed the true posteriors; seeds with no message
/// or more than the cap are skipped.
fn tiny_scenarios(models: &ModelSet) -> (usize, usize, f64, usize) {
    let mut scenario = ScenarioSpec { horizon: TINY_HORIZON, true_posteriors: true, ..models.scenario.clone() };
    scenario.classes[0].arrival_rate = 0.08;
    scenario.classes[1].arrival_rate = 0.12;
    let sim = SimModels { attention: &models.attention, costs: &models.costs };
    let (mut kept, mut differing, mut worst, mut seed) = (0, 0, 0.0f64, 0u64);
    let mut alerting = 0;
    while kept < TINY_SCENARIOS {
        seed += 1;
        scenario.seed = seed;
        let r = simulate(&scenario, &[PolicyKind::Neva, PolicyKind::OracleMyopic], sim).unwrap();
        let n = r[0].messages.len();
        if n == 0 || n > TINY_MAX_MESSAGES {
            continue;
        }
        kept += 1;
        let gap = (r[0].total_cost - r[1].total_cost).abs();
        worst = worst.max(gap);
        let (a, b) = (alerts(&r[0].events), alerts(&r[1].events));
        if !a.is_empty() {
            alerting += 1;
        }
        if a != b || gap > TINY_COST_TOL {
            differing += 1;
        }
    }
    (kept, differing, worst, alerting)
}

fn policy(server: &str, work: &Path, models: &ModelSet) -> Result<Outcome, String> {
    let (kept, differing, worst, alerting) = tiny_scenarios(models);
    let dir = work.join("benchmark");
    let runs = BENCHMARK_SEEDS.to_string();
    mediator(server, &["simulate", "--runs", &runs, "--out", p(&dir)])?;
    let text = std::fs::read_to_string(dir.join("summary.json")).map_err(|e| e.to_string())?;
    let summary: Vec<PolicySummary> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mean = |k: PolicyKind| summary.iter().find(|s| s.policy == k).map(|s| s.mean_total_cost).unwrap_or(f64::NAN);
    let (never, always, neva, oracle) =
        (mean(PolicyKind::NeverAlert), mean(PolicyKind::AlwaysAlert), mean(PolicyKind::Neva), mean(PolicyKind::OracleMyopic));
    let beats = neva <= never && neva <= always;
    Ok(outcome(
        differing == 0 && beats,
        format!(
            "tiny: {differing}/{kept} scenarios differ from the oracle ({alerting} with alerts, max cost gap {worst:.1e}); \
             {BENCHMARK_SEEDS} seeds mean cost: neva {neva:.2}, never-alert {never:.2}, always-alert {always:.2}, oracle-myopic {oracle:.2}"
        ),
    ))
}

fn determinism(servers: &[String], work: &Path) -> Result<Outcome, String> {
    let mut diffs = Vec::new();
    let corpora: Vec<PathBuf> = (0..3).map(|i| work.join(format!("det-corpus-{i}.jsonl"))).collect();
    // two runs on one server, one on a freshly started one
    for (i, path) in corpora.iter().enumerate() {
        let server = &servers[i / 2];
        mediator(server, &["gen-corpus", "--seed", "4242", "--out", p(path)])?;
    }
    let read = |p: &Path| std::fs::read(p).map_err(|e| e.to_string());
    let first = read(&corpora[0])?;
    for c in &corpora[1..] {
        if read(c)? != first {
            diffs.push(c.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let sims: Vec<PathBuf> = (0..3).map(|i| work.join(format!("det-sim-{i}"))).collect();
    for (i, dir) in sims.iter().enumerate() {
        let server = &servers[i / 2];
        mediator(server, &["simulate", "--seed", "99", "--runs", "3", "--out", p(dir)])?;
    }
    for file in ["costs.csv", "decisions.csv", "summary.json"] {
        let first = read(&sims[0].join(file))?;
        for dir in &sims[1..] {
            if read(&dir.join(file))? != first {
                diffs.push(format!("{}/{file}", dir.file_name().unwrap().to_string_lossy()));
            }
        }
    }
    Ok(outcome(
        diffs.is_empty() && !first.is_empty(),
        if diffs.is_empty() {
            format!("gen-corpus ({} bytes) and simulate outputs byte-identical across 3 runs on 2 servers", first.len())
        } else {
            format!("differing outputs: {}", diffs.join(", "))
        },
    ))
}

fn lift(r: Result<Outcome, String>) -> Outcome {
    r.unwrap_or_else(|e| outcome(false, e))
}

fn main() {
    let model_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let models = ModelSet::load(&model_dir).expect("shipped models load");
    let work = tempfile::tempdir().unwrap();
    let servers = Servers::start(2, &model_dir);
    let main_server = servers.urls[0].clone();

    let mut suite = Suite { failed: Vec::new() };
    suite.run("inference-oracle-equivalence", Some(INFERENCE_BUDGET), inference_oracle);
    suite.run("utility-identities", Some(UTILITY_BUDGET), utility_identities);
    suite.run("svm-correctness", Some(SVM_BUDGET), svm_correctness);
    suite.run("platt-calibration", None, platt_calibration);
    suite.run("end-to-end-classifier", Some(E2E_BUDGET), || lift(end_to_end(&main_server, work.path())));
    suite.run("correlation", Some(CORRELATION_BUDGET), || lift(correlation(&main_server, work.path())));
    suite.run("policy-optimality", Some(POLICY_BUDGET), || lift(policy(&main_server, work.path(), &models)));
    suite.run("determinism", None, || lift(determinism(&servers.urls, work.path())));

    drop(servers.rt);
    if suite.failed.is_empty() {
        println!("acceptance: all 8 criteria passed");
    } else {
        println!("acceptance: {} failed: {}", suite.failed.len(), suite.failed.join(", "));
        std::process::exit(1);
    }
}
