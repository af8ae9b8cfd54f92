//! Typed HTTP client for the mediation service.

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use mediator_core::api::*;
use mediator_core::policy::{AlertDecision, PendingMessage};

pub const DEFAULT_SERVER: &str = "http://127.0.0.1:7878";

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("cannot reach {url}: {source}")]
    Transport { url: String, source: reqwest::Error },
    /// The service answered with its error body.
    #[error("{message}")]
    Api { status: u16, kind: String, message: String },
    #[error("unexpected response from {url} (status {status}): {message}")]
    Decode { url: String, status: u16, message: String },
}

impl ClientError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &str {
        match self {
            Self::Transport { .. } => "transport",
            Self::Api { kind, .. } => kind,
            Self::Decode { .. } => "decode",
        }
    }
}

pub type Result<T, E = ClientError> = std::result::Result<T, E>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base: impl Into<String>) -> Self {
        Self { base: base.into().trim_end_matches('/').to_string(), http: reqwest::Client::new() }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    async fn send<T: DeserializeOwned>(&self, req: reqwest::RequestBuilder, url: String) -> Result<T> {
        let res = req.send().await.map_err(|source| ClientError::Transport { url: url.clone(), source })?;
        let status = res.status();
        let bytes = res.bytes().await.map_err(|source| ClientError::Transport { url: url.clone(), source })?;
        if status.is_success() {
            return serde_json::from_slice(&bytes).map_err(|e| ClientError::Decode {
                url,
                status: status.as_u16(),
                message: e.to_string(),
            });
        }
        match serde_json::from_slice::<ErrorBody>(&bytes) {
            Ok(b) => Err(ClientError::Api { status: status.as_u16(), kind: b.error.kind, message: b.error.message }),
            Err(_) => Err(ClientError::Decode {
                url,
                status: status.as_u16(),
                message: String::from_utf8_lossy(&bytes).into_owned(),
            }),
        }
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        let url = format!("{}{path}", self.base);
        self.send(self.http.get(&url), url).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        let url = format!("{}{path}", self.base);
        self.send(self.http.post(&url).json(body), url).await
    }

    async fn delete<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        let url = format!("{}{path}", self.base);
        self.send(self.http.delete(&url), url).await
    }

    pub async fn health(&self) -> Result<Health> {
        self.get("/health").await
    }

    pub async fn infer_attention(&self, req: &InferAttentionRequest) -> Result<InferAttentionResponse> {
        self.post("/attention/infer", req).await
    }

    pub async fn train(&self, req: &TrainRequest) -> Result<TrainResponse> {
        self.post("/classifier/train", req).await
    }

    pub async fn score(&self, req: &ScoreRequest) -> Result<ScoreResponse> {
        self.post("/classifier/score", req).await
    }

    pub async fn roc(&self, req: &RocRequest) -> Result<RocResponse> {
        self.post("/classifier/roc", req).await
    }

    pub async fn decide(&self, req: &DecideRequest) -> Result<AlertDecision> {
        self.post("/decide", req).await
    }

    pub async fn enqueue(&self, req: &EnqueueRequest) -> Result<PendingMessage> {
        self.post("/queue/messages", req).await
    }

    pub async fn dequeue(&self, id: &str) -> Result<PendingMessage> {
        self.delete(&format!("/queue/messages/{id}")).await
    }

    pub async fn queue(&self) -> Result<QueueResponse> {
        self.get("/queue").await
    }

    pub async fn clear_queue(&self) -> Result<QueueResponse> {
        self.delete("/queue").await
    }

    pub async fn decide_queue(&self, req: &QueueDecideRequest) -> Result<QueueDecideResponse> {
        self.post("/queue/decide", req).await
    }

    pub async fn gen_corpus(&self, req: &GenCorpusRequest) -> Result<GenCorpusResponse> {
        self.post("/corpus/generate", req).await
    }

    pub async fn simulate(&self, req: &SimulateRequest) -> Result<SimulateResponse> {
        self.post("/simulate", req).await
    }

    pub async fn correlate(&self, req: &CorrelateRequest) -> Result<CorrelateResponse> {
        self.post("/correlate", req).await
    }
}
