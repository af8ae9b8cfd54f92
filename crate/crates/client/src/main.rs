//! `mediator`: command-line client of the mediation service.
//!
//! Primary output goes to `--out` when given, else to stdout. Failures
//! print one JSON line `{"error":{"kind":...,"message":...}}` on stderr
//! and exit with status 1 (2 for usage errors).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use mediator_client::{Client, ClientError, DEFAULT_SERVER};
use mediator_core::api::*;
use mediator_core::attention::AttentionEvidence;
use mediator_core::classifier::{parse_corpus, CalibratedModel, LabeledMessage, MessageDoc, TrainConfig};
use mediator_core::harness::{holdout_split, CorpusSpec, ScenarioSpec};
use mediator_core::models::CLASSIFIER_FILE;
use mediator_core::policy::PendingMessage;

#[derive(Parser)]
#[command(name = "mediator", version, about = "Alert mediation client")]
struct Cli {
    /// Service base URL.
    #[arg(long, global = true, env = "MEDIATOR_SERVER", default_value = DEFAULT_SERVER)]
    server: String,
    /// Where `train` writes classifier.json and where the scoring commands
    /// look for one to send along.
    #[arg(long, global = true, default_value = "models")]
    model_dir: PathBuf,
    /// Overrides the seed of the corpus spec, scenario or holdout split.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (directory for `simulate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a calibrated classifier on a JSON-lines corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        /// Hold out this many messages of each class before training.
        #[arg(long)]
        holdout: Option<usize>,
        /// Where to write the held-out messages.
        #[arg(long, requires = "holdout")]
        holdout_out: Option<PathBuf>,
        /// Training settings as JSON (C, tol, k, max_iter, classes).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Keep the service's current classifier.
        #[arg(long)]
        no_install: bool,
    },
    /// ROC curve of a test set as CSV.
    Roc {
        #[arg(long)]
        testset: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Class probabilities and expected criticality per message.
    Score {
        #[arg(long)]
        messages: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Posterior over attentional contexts and inspection intervals.
    InferAttention {
        /// Evidence as a JSON object.
        #[arg(long)]
        evidence: Option<PathBuf>,
        /// Evidence field, e.g. `location=away`; repeatable.
        #[arg(long = "set", value_name = "FIELD=VALUE")]
        set: Vec<String>,
    },
    /// Alert decision for a queue of pending messages.
    Decide {
        /// JSON array of pending messages.
        #[arg(long)]
        queue: PathBuf,
        #[arg(long)]
        evidence: Option<PathBuf>,
        #[arg(long = "set", value_name = "FIELD=VALUE")]
        set: Vec<String>,
        /// Current time in minutes.
        #[arg(long)]
        t: f64,
        /// Time of the last inbox access in minutes.
        #[arg(long)]
        t_last: f64,
    },
    /// Generate a synthetic labeled corpus as JSON lines.
    GenCorpus {
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Generate this many messages with assessed scores instead.
        #[arg(long)]
        scored: Option<usize>,
        #[arg(long, default_value_t = default_score_noise())]
        score_noise: f64,
    },
    /// Run policies on simulated scenarios.
    Simulate {
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Number of runs with consecutive seeds.
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Comma-separated policy names.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<String>>,
    },
    /// Pearson correlation between expected criticality and assessed scores.
    Correlate {
        #[arg(long)]
        scored: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    kind: String,
    message: String,
}

impl Failure {
    fn new(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into() }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        Self::new(e.kind(), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::new("invalid_input", format!("{}: {e}", path.display())))
}

fn read_corpus(path: &Path) -> Result<Vec<LabeledMessage>, Failure> {
    parse_corpus(&read(path)?).map_err(|e| Failure::new("invalid_input", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::new("io", format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("responses serialize");
    s.push('\n');
    s
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("responses serialize");
    s.push('\n');
    s
}

/// Writes `text` to `--out` when set, else to stdout.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::new("io", e.to_string()))
        }
    }
}

/// An explicit model file, else `classifier.json` in the model directory
/// if present, else none (the service's installed model is used).
fn local_model(model_dir: &Path, explicit: Option<&Path>) -> Result<Option<CalibratedModel>, Failure> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let p = model_dir.join(CLASSIFIER_FILE);
            if !p.exists() {
                return Ok(None);
            }
            p
        }
    };
    CalibratedModel::from_json(&read(&path)?)
        .map(Some)
        .map_err(|e| Failure::new("invalid_input", format!("{}: {e}", path.display())))
}

fn evidence(file: Option<&Path>, set: &[String]) -> Result<AttentionEvidence, Failure> {
    let mut obj = match file {
        Some(p) => read_json::<serde_json::Map<String, serde_json::Value>>(p)?,
        None => serde_json::Map::new(),
    };
    for kv in set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::new("usage", format!("`{kv}` is not FIELD=VALUE")))?;
        obj.insert(k.trim().replace('-', "_"), serde_json::Value::String(v.trim().to_string()));
    }
    serde_json::from_value(serde_json::Value::Object(obj)).map_err(|e| Failure::new("invalid_input", e.to_string()))
}

async fn run(cli: Cli) -> Outcome {
    let client = Client::new(&cli.server);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Train { corpus, holdout, holdout_out, config, no_install } => {
            let mut corpus = read_corpus(&corpus)?;
            if let Some(per_class) = holdout {
                let (train, test) = holdout_split(&corpus, per_class, cli.seed.unwrap_or(0))
                    .map_err(|e| Failure::new("invalid_input", e.to_string()))?;
                if let Some(p) = holdout_out {
                    write_file(&p, &mediator_core::classifier::write_corpus(&test))?;
                }
                corpus = train;
            }
            let config: TrainConfig = match config {
                Some(p) => read_json(&p)?,
                None => TrainConfig::default(),
            };
            let res = client.train(&TrainRequest { corpus, config, install: !no_install }).await?;
            let path = out.map(Path::to_path_buf).unwrap_or_else(|| cli.model_dir.join(CLASSIFIER_FILE));
            let mut text = res.model.to_json();
            text.push('\n');
            write_file(&path, &text)?;
            let summary = serde_json::json!({
                "model": path.display().to_string(),
                "messages": res.messages,
                "training_accuracy": res.training_accuracy,
                "features": res.model.features.selected().len(),
            });
            emit(None, &json_line(&summary))
        }
        Command::Roc { testset, model } => {
            let req = RocRequest { testset: read_corpus(&testset)?, model: local_model(&cli.model_dir, model.as_deref())? };
            let res = client.roc(&req).await?;
            emit(out, &res.csv)?;
            if out.is_some() {
                let summary = serde_json::json!({"auc": res.roc.auc, "accuracy": res.accuracy, "points": res.roc.points.len()});
                emit(None, &json_line(&summary))?;
            }
            Ok(())
        }
        Command::Score { messages, model } => {
            let docs: Vec<MessageDoc> = read(&messages)?
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(serde_json::from_str)
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::new("invalid_input", format!("{}: {e}", messages.display())))?;
            let req = ScoreRequest { messages: docs, model: local_model(&cli.model_dir, model.as_deref())? };
            let res = client.score(&req).await?;
            let text: String = res
                .scores
                .iter()
                .map(|s| {
                    let probs: serde_json::Map<String, serde_json::Value> =
                        res.classes.iter().cloned().zip(s.probs.probs().iter().map(|&p| p.into())).collect();
                    json_line(&serde_json::json!({"probs": probs, "expected_criticality": s.expected_criticality}))
                })
                .collect();
            emit(out, &text)
        }
        Command::InferAttention { evidence: file, set } => {
            let req = InferAttentionRequest { evidence: evidence(file.as_deref(), &set)? };
            emit(out, &pretty(&client.infer_attention(&req).await?))
        }
        Command::Decide { queue, evidence: file, set, t, t_last } => {
            let pending: Vec<PendingMessage> = read_json(&queue)?;
            let req = DecideRequest { pending, evidence: evidence(file.as_deref(), &set)?, t, t_last };
            emit(out, &pretty(&client.decide(&req).await?))
        }
        Command::GenCorpus { spec, scored, score_noise } => {
            let spec: Option<CorpusSpec> = spec.as_deref().map(read_json).transpose()?;
            let scored = scored.map(|count| ScoredOptions { count, noise: score_noise });
            let res = client.gen_corpus(&GenCorpusRequest { spec, seed: cli.seed, scored }).await?;
            emit(out, &res.jsonl)
        }
        Command::Simulate { scenario, runs, policies } => {
            let scenario: Option<ScenarioSpec> = scenario.as_deref().map(read_json).transpose()?;
            let req = SimulateRequest { scenario, seed: cli.seed, runs: Some(runs), policies, summary_only: true };
            let res = client.simulate(&req).await?;
            match out {
                Some(dir) => {
                    write_file(&dir.join("costs.csv"), &res.costs_csv)?;
                    write_file(&dir.join("decisions.csv"), &res.decisions_csv)?;
                    write_file(&dir.join("summary.json"), &pretty(&res.summary))?;
                    emit(None, &pretty(&res.summary))
                }
                None => emit(None, &res.costs_csv),
            }
        }
        Command::Correlate { scored, model } => {
            let req = CorrelateRequest { scored: read_corpus(&scored)?, model: local_model(&cli.model_dir, model.as_deref())? };
            emit(out, &json_line(&client.correlate(&req).await?))
        }
    }
}

fn fail(f: &Failure, code: i32) -> ! {
    let line = ErrorBody { error: ErrorDetail { kind: f.kind.clone(), message: f.message.clone() } };
    eprintln!("{}", serde_json::to_string(&line).expect("errors serialize"));
    std::process::exit(code)
}

#[tokio::main]
async fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => fail(&Failure::new("usage", e.to_string().trim()), 2),
    };
    if let Err(f) = run(cli).await {
        fail(&f, if f.kind == "usage" { 2 } else { 1 });
    }
}
