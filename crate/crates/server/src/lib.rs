//! HTTP/JSON front end for the mediation engine.
//!
//! Every operation except the message queue is a pure function of its
//! request and the loaded models. The queue is the one piece of session
//! state; it lives here and is mutated only through `/queue` routes.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{DefaultBodyLimit, FromRequest, Path, Request, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;

use mediator_core::api::*;
use mediator_core::attention::{
    expected_interval, infer_attention, infer_inspection_interval, AttentionError, AttentionState,
};
use mediator_core::classifier::{
    accuracy, classify, roc_curve, write_corpus, CalibratedModel, ClassifierError, train_model,
};
use mediator_core::harness::{
    correlation_study, costs_csv, decisions_csv, gen_corpus, gen_scored_corpus, roc_csv, HarnessError, PolicyKind,
    SimModels, Simulator,
};
use mediator_core::models::{ModelError, ModelSet};
use mediator_core::policy::{decide, PendingMessage, PolicyError};
use mediator_core::utility::{expected_criticality, UtilityError};

/// Largest accepted request body.
pub const BODY_LIMIT: usize = 256 << 20;
/// Most simulation runs accepted in one request.
pub const MAX_RUNS: usize = 10_000;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        Self { status, kind, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_request", message)
    }

    fn no_classifier() -> Self {
        Self::new(StatusCode::CONFLICT, "no_classifier", "no classifier is installed; train one or send a model")
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status.is_server_error() {
            tracing::error!(kind = self.kind, "{}", self.message);
        } else {
            tracing::debug!(kind = self.kind, "{}", self.message);
        }
        let body = ErrorBody { error: ErrorDetail { kind: self.kind.to_string(), message: self.message } };
        (self.status, Json(body)).into_response()
    }
}

const UNPROCESSABLE: StatusCode = StatusCode::UNPROCESSABLE_ENTITY;

impl From<AttentionError> for ApiError {
    fn from(e: AttentionError) -> Self {
        Self::new(UNPROCESSABLE, "attention", e.to_string())
    }
}

impl From<ClassifierError> for ApiError {
    fn from(e: ClassifierError) -> Self {
        Self::new(UNPROCESSABLE, "classifier", e.to_string())
    }
}

impl From<UtilityError> for ApiError {
    fn from(e: UtilityError) -> Self {
        Self::new(UNPROCESSABLE, "utility", e.to_string())
    }
}

impl From<PolicyError> for ApiError {
    fn from(e: PolicyError) -> Self {
        match e {
            PolicyError::DuplicateId(_) => Self::new(StatusCode::CONFLICT, "duplicate_id", e.to_string()),
            PolicyError::Attention(e) => e.into(),
            PolicyError::Utility(e) => e.into(),
        }
    }
}

impl From<HarnessError> for ApiError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::UnknownPolicy(_) => Self::new(StatusCode::BAD_REQUEST, "unknown_policy", e.to_string()),
            HarnessError::Spec(_) => Self::new(UNPROCESSABLE, "invalid_spec", e.to_string()),
            HarnessError::Correlation(_) => Self::new(UNPROCESSABLE, "correlation", e.to_string()),
            HarnessError::Classifier(e) => e.into(),
            HarnessError::Attention(e) => e.into(),
            HarnessError::Utility(e) => e.into(),
            HarnessError::Policy(e) => e.into(),
            HarnessError::Io(_) | HarnessError::Csv(_) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
            }
        }
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        Self::new(UNPROCESSABLE, "model", e.to_string())
    }
}

/// JSON body whose rejections use the service's error format.
pub struct Body<T>(pub T);

impl<T: DeserializeOwned, S: Send + Sync> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(e) => Err(ApiError::invalid(e.body_text())),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

struct Inner {
    models: RwLock<Arc<ModelSet>>,
    model_dir: Option<PathBuf>,
    queue: Mutex<Vec<PendingMessage>>,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    pub fn new(models: ModelSet, model_dir: Option<PathBuf>) -> Self {
        Self {
            inner: Arc::new(Inner {
                models: RwLock::new(Arc::new(models)),
                model_dir,
                queue: Mutex::new(Vec::new()),
            }),
        }
    }

    /// Loads every model file found in `dir`.
    pub fn load(dir: impl Into<PathBuf>) -> Result<Self, ModelError> {
        let dir = dir.into();
        Ok(Self::new(ModelSet::load(&dir)?, Some(dir)))
    }

    fn models(&self) -> Arc<ModelSet> {
        self.inner.models.read().expect("model lock").clone()
    }

    fn install(&self, model: CalibratedModel) {
        let mut guard = self.inner.models.write().expect("model lock");
        let mut next = (**guard).clone();
        next.classifier = Some(model);
        *guard = Arc::new(next);
    }

    fn queue(&self) -> std::sync::MutexGuard<'_, Vec<PendingMessage>> {
        self.inner.queue.lock().expect("queue lock")
    }
}

/// Runs CPU-bound work off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> ApiResult<T> {
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map(Json),
        Err(e) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())),
    }
}

fn pick_model(models: &ModelSet, supplied: Option<CalibratedModel>) -> Result<CalibratedModel, ApiError> {
    supplied.or_else(|| models.classifier.clone()).ok_or_else(ApiError::no_classifier)
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/attention/infer", post(attention_infer))
        .route("/classifier/train", post(classifier_train))
        .route("/classifier/score", post(classifier_score))
        .route("/classifier/roc", post(classifier_roc))
        .route("/decide", post(decide_once))
        .route("/queue", get(queue_list).delete(queue_clear))
        .route("/queue/messages", post(queue_add))
        .route("/queue/messages/{id}", delete(queue_remove))
        .route("/queue/decide", post(queue_decide))
        .route("/corpus/generate", post(corpus_generate))
        .route("/simulate", post(simulate))
        .route("/correlate", post(correlate))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route") })
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

/// Serves until the listener fails or `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}

async fn health(State(state): State<AppState>) -> Json<Health> {
    let models = state.models();
    Json(Health {
        status: "ok".into(),
        classifier: models.classifier.is_some(),
        extractor: models.extractor.fingerprint(),
        queued: state.queue().len(),
    })
}

async fn attention_infer(
    State(state): State<AppState>,
    Body(req): Body<InferAttentionRequest>,
) -> ApiResult<InferAttentionResponse> {
    let models = state.models();
    blocking(move || {
        let attention = infer_attention(&models.attention, &req.evidence)?;
        let inspection = infer_inspection_interval(&models.attention, &req.evidence)?;
        let most_likely = attention
            .iter()
            .fold(None::<(AttentionState, f64)>, |best, (s, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((s, p)),
            })
            .map(|(s, _)| s)
            .expect("twelve states");
        Ok(InferAttentionResponse { expected_interval: expected_interval(&inspection), attention, most_likely, inspection })
    })
    .await
}

async fn classifier_train(State(state): State<AppState>, Body(req): Body<TrainRequest>) -> ApiResult<TrainResponse> {
    let models = state.models();
    let install = req.install;
    let out = blocking(move || {
        let model = train_model(&req.corpus, &models.extractor, &req.config)?;
        let training_accuracy = accuracy(&model, &models.extractor, &req.corpus)?;
        Ok(TrainResponse { model, messages: req.corpus.len(), training_accuracy })
    })
    .await?;
    if install {
        state.install(out.model.clone());
        tracing::info!(messages = out.messages, "installed a newly trained classifier");
    }
    Ok(out)
}

async fn classifier_score(State(state): State<AppState>, Body(req): Body<ScoreRequest>) -> ApiResult<ScoreResponse> {
    let models = state.models();
    blocking(move || {
        let model = pick_model(&models, req.model)?;
        let loss_rates = models.costs.loss_rates();
        let scores = req
            .messages
            .iter()
            .map(|m| {
                let probs = classify(&model, &models.extractor, m)?;
                let expected_criticality = expected_criticality(&probs, &loss_rates)?;
                Ok(MessageScore { probs, expected_criticality })
            })
            .collect::<Result<Vec<_>, ApiError>>()?;
        Ok(ScoreResponse { classes: model.classes.clone(), scores })
    })
    .await
}

async fn classifier_roc(State(state): State<AppState>, Body(req): Body<RocRequest>) -> ApiResult<RocResponse> {
    let models = state.models();
    blocking(move || {
        let model = pick_model(&models, req.model)?;
        let roc = roc_curve(&model, &models.extractor, &req.testset)?;
        let accuracy = accuracy(&model, &models.extractor, &req.testset)?;
        let csv = roc_csv(Some(&roc))?;
        Ok(RocResponse { roc, accuracy, csv })
    })
    .await
}

async fn decide_once(
    State(state): State<AppState>,
    Body(req): Body<DecideRequest>,
) -> ApiResult<mediator_core::policy::AlertDecision> {
    let models = state.models();
    blocking(move || Ok(decide(&req.pending, &req.evidence, req.t, req.t_last, &models.attention, &models.costs)?))
        .await
}

async fn queue_list(State(state): State<AppState>) -> Json<QueueResponse> {
    Json(QueueResponse { pending: state.queue().clone() })
}

async fn queue_clear(State(state): State<AppState>) -> Json<QueueResponse> {
    Json(QueueResponse { pending: std::mem::take(&mut *state.queue()) })
}

async fn queue_add(State(state): State<AppState>, Body(req): Body<EnqueueRequest>) -> ApiResult<PendingMessage> {
    let models = state.models();
    let classes = models.costs.classes().len();
    let crit = match (req.crit, &req.message) {
        (Some(c), _) => c,
        (None, Some(m)) => {
            let model = pick_model(&models, None)?;
            classify(&model, &models.extractor, m)?
        }
        (None, None) => return Err(ApiError::invalid("a queued message needs `crit` or `message`")),
    };
    if crit.probs().len() != classes {
        return Err(ApiError::new(
            UNPROCESSABLE,
            "utility",
            format!("criticality has {} classes but the cost model has {classes}", crit.probs().len()),
        ));
    }
    if !req.t_o.is_finite() {
        return Err(ApiError::invalid("t_o must be finite"));
    }
    let entry = PendingMessage { id: req.id, message: req.message, crit, t_o: req.t_o };
    let mut queue = state.queue();
    if queue.iter().any(|p| p.id == entry.id) {
        return Err(PolicyError::DuplicateId(entry.id).into());
    }
    queue.push(entry.clone());
    Ok(Json(entry))
}

async fn queue_remove(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<PendingMessage> {
    let mut queue = state.queue();
    match queue.iter().position(|p| p.id == id) {
        Some(i) => Ok(Json(queue.remove(i))),
        None => Err(ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no queued message `{id}`"))),
    }
}

async fn queue_decide(
    State(state): State<AppState>,
    Body(req): Body<QueueDecideRequest>,
) -> ApiResult<QueueDecideResponse> {
    let models = state.models();
    let pending = state.queue().clone();
    let Json(decision) = blocking(move || {
        Ok(decide(&pending, &req.evidence, req.t, req.t_last, &models.attention, &models.costs)?)
    })
    .await?;
    let mut queue = state.queue();
    if req.dequeue && decision.is_alert() {
        queue.retain(|p| !decision.message_ids.contains(&p.id));
    }
    Ok(Json(QueueDecideResponse { remaining: queue.len(), decision }))
}

async fn corpus_generate(
    State(state): State<AppState>,
    Body(req): Body<GenCorpusRequest>,
) -> ApiResult<GenCorpusResponse> {
    let models = state.models();
    blocking(move || {
        let mut spec = req.spec.unwrap_or_else(|| models.corpus_spec.clone());
        if let Some(seed) = req.seed {
            spec.seed = seed;
        }
        let messages = match req.scored {
            Some(s) => gen_scored_corpus(&spec, s.count, s.noise)?,
            None => gen_corpus(&spec)?,
        };
        Ok(GenCorpusResponse { messages: messages.len(), jsonl: write_corpus(&messages) })
    })
    .await
}

async fn simulate(State(state): State<AppState>, Body(req): Body<SimulateRequest>) -> ApiResult<SimulateResponse> {
    let models = state.models();
    let model_dir = state.inner.model_dir.clone();
    blocking(move || {
        let mut scenario = req.scenario.unwrap_or_else(|| models.scenario.clone());
        let policies = match req.policies {
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<PolicyKind>, _>>()?,
            None => PolicyKind::ALL.to_vec(),
        };
        let runs = req.runs.unwrap_or(1);
        if runs == 0 || runs > MAX_RUNS {
            return Err(ApiError::invalid(format!("runs must be between 1 and {MAX_RUNS}")));
        }
        let first = req.seed.unwrap_or(scenario.seed);
        let costs = models.scenario_costs(model_dir.as_deref(), &scenario)?;
        let mut sim = Simulator::new(SimModels { attention: &models.attention, costs: &costs })?;
        let mut results = Vec::new();
        for i in 0..runs as u64 {
            scenario.seed = first.wrapping_add(i);
            results.extend(sim.run(&scenario, &policies)?);
        }
        let costs_csv = costs_csv(&results)?;
        let decisions_csv = decisions_csv(&results)?;
        let summary = summarize(&results);
        if req.summary_only {
            for r in &mut results {
                r.messages.clear();
                r.events.clear();
            }
        }
        Ok(SimulateResponse { summary, results, costs_csv, decisions_csv })
    })
    .await
}

async fn correlate(State(state): State<AppState>, Body(req): Body<CorrelateRequest>) -> ApiResult<CorrelateResponse> {
    let models = state.models();
    blocking(move || {
        let model = pick_model(&models, req.model)?;
        let pearson = correlation_study(&model, &models.extractor, &req.scored, &models.costs.loss_rates())?;
        Ok(CorrelateResponse { pearson, messages: req.scored.len() })
    })
    .await
}
