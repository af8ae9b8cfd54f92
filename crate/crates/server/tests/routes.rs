use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use mediator_core::models::ModelSet;
use mediator_server::{router, AppState};

fn app() -> Router {
    router(AppState::new(ModelSet::defaults(), None))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(v) => req.body(Body::from(v.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn error_kind(v: &Value) -> &str {
    v["error"]["kind"].as_str().unwrap_or("<missing>")
}

#[tokio::test]
async fn health_reports_no_classifier() {
    let (status, body) = call(&app(), Method::GET, "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["classifier"], false);
}

#[tokio::test]
async fn errors_are_json() {
    let app = app();
    let (status, body) = call(&app, Method::GET, "/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(error_kind(&body), "not_found");

    let (status, body) = call(&app, Method::POST, "/decide", Some(json!({"pending": 3}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error_kind(&body), "invalid_request");

    let (status, body) =
        call(&app, Method::POST, "/classifier/score", Some(json!({"messages": []}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(error_kind(&body), "no_classifier");
}

#[tokio::test]
async fn attention_inference_sums_to_one() {
    let body = json!({"evidence": {"location": "away"}});
    let (status, res) = call(&app(), Method::POST, "/attention/infer", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{res}");
    let total: f64 = res["attention"].as_object().unwrap().values().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(res["expected_interval"].as_f64().unwrap() > 0.0);

    let bad = json!({"evidence": {"location": "mars"}});
    let (status, res) = call(&app(), Method::POST, "/attention/infer", Some(bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_kind(&res), "attention");
}

#[tokio::test]
async fn queue_lifecycle() {
    let app = app();
    let msg = |id: &str, p: f64| json!({"id": id, "crit": [p, 1.0 - p], "t_o": 0.0});
    let (status, _) = call(&app, Method::POST, "/queue/messages", Some(msg("a", 0.99))).await;
    assert_eq!(status, StatusCode::OK);
    let (status, body) = call(&app, Method::POST, "/queue/messages", Some(msg("a", 0.5))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(error_kind(&body), "duplicate_id");
    call(&app, Method::POST, "/queue/messages", Some(msg("b", 0.01))).await;

    let (_, list) = call(&app, Method::GET, "/queue", None).await;
    assert_eq!(list["pending"].as_array().unwrap().len(), 2);

    // the user just checked the inbox, so the next unprompted check is far off
    let req = json!({"evidence": {"location": "at-desktop"}, "t": 1.0, "t_last": 1.0});
    let (status, res) = call(&app, Method::POST, "/queue/decide", Some(req)).await;
    assert_eq!(status, StatusCode::OK, "{res}");
    assert_eq!(res["decision"]["kind"], "alert");
    let carried = res["decision"]["message_ids"].as_array().unwrap().len();
    assert_eq!(res["remaining"].as_u64().unwrap() as usize, 2 - carried);

    let (status, _) = call(&app, Method::DELETE, "/queue/messages/zzz", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (_, cleared) = call(&app, Method::DELETE, "/queue", None).await;
    assert_eq!(cleared["pending"].as_array().unwrap().len(), 2 - carried);
    let (_, health) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(health["queued"], 0);
}

#[tokio::test]
async fn enqueue_checks_class_count() {
    let body = json!({"id": "x", "crit": [0.2, 0.3, 0.5], "t_o": 0.0});
    let (status, res) = call(&app(), Method::POST, "/queue/messages", Some(body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_kind(&res), "utility");
}

#[tokio::test]
async fn simulate_rejects_unknown_policy() {
    let body = json!({"policies": ["neva", "coin-flip"]});
    let (status, res) = call(&app(), Method::POST, "/simulate", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error_kind(&res), "unknown_policy");
}

#[tokio::test]
async fn simulate_is_repeatable() {
    let app = app();
    let body = json!({"seed": 3, "runs": 2, "policies": ["never-alert", "neva"], "summary_only": true});
    let (status, a) = call(&app, Method::POST, "/simulate", Some(body.clone())).await;
    assert_eq!(status, StatusCode::OK, "{a}");
    let (_, b) = call(&app, Method::POST, "/simulate", Some(body)).await;
    assert_eq!(a, b);
    assert_eq!(a["results"].as_array().unwrap().len(), 4);
    assert_eq!(a["results"][2]["seed"], 4);
    assert!(a["results"][0]["events"].as_array().unwrap().is_empty());
    assert!(a["costs_csv"].as_str().unwrap().starts_with("policy,seed,"));
}

#[tokio::test]
async fn generated_corpus_follows_seed() {
    let app = app();
    let mut spec = serde_json::to_value(mediator_core::harness::CorpusSpec::default()).unwrap();
    for class in spec["classes"].as_array_mut().unwrap() {
        class["count"] = json!(5);
    }
    let gen = |seed: u64| json!({"spec": spec.clone(), "seed": seed});
    let (status, a) = call(&app, Method::POST, "/corpus/generate", Some(gen(1))).await;
    assert_eq!(status, StatusCode::OK, "{a}");
    assert_eq!(a["messages"], 10);
    let (_, b) = call(&app, Method::POST, "/corpus/generate", Some(gen(1))).await;
    let (_, c) = call(&app, Method::POST, "/corpus/generate", Some(gen(2))).await;
    assert_eq!(a, b);
    assert_ne!(a["jsonl"], c["jsonl"]);
}

#[tokio::test]
async fn train_installs_and_scores() {
    let app = app();
    let mut spec = mediator_core::harness::CorpusSpec::default();
    for class in &mut spec.classes {
        class.count = 60;
    }
    let corpus = mediator_core::harness::gen_corpus(&spec).unwrap();
    let (status, res) =
        call(&app, Method::POST, "/classifier/train", Some(json!({"corpus": corpus, "config": {"k": 50}}))).await;
    assert_eq!(status, StatusCode::OK, "{res}");
    assert!(res["training_accuracy"].as_f64().unwrap() > 0.8);
    let (_, health) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(health["classifier"], true);

    let docs: Vec<_> = corpus.iter().take(3).map(|m| &m.message).collect();
    let (status, scored) = call(&app, Method::POST, "/classifier/score", Some(json!({"messages": docs}))).await;
    assert_eq!(status, StatusCode::OK, "{scored}");
    assert_eq!(scored["scores"].as_array().unwrap().len(), 3);
    assert_eq!(scored["classes"], json!(["high", "low"]));

    let (status, roc) = call(&app, Method::POST, "/classifier/roc", Some(json!({"testset": corpus}))).await;
    assert_eq!(status, StatusCode::OK);
    assert!(roc["csv"].as_str().unwrap().starts_with("threshold,fn_rate,fp_rate,tpr,fpr\n"));
}
