#![allow(dead_code)]

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use swift_core::fixtures::{fixture_corpus, FIXTURE_CATALOG};
use swift_core::{load_catalog, Catalog, SignStore};
use swift_server::{router, AppState, ServerConfig};
use tower::ServiceExt;

pub struct Reply {
    pub status: StatusCode,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("not json ({e}): {}", self.text()))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<&Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(serde_json::to_vec(v).unwrap())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let content_type = res
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_string());
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply {
        status,
        content_type,
        body,
    }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None).await
}

pub async fn post(app: &Router, uri: &str, body: &Value) -> Reply {
    call(app, Method::POST, uri, Some(body)).await
}

pub fn fixture_catalog() -> Catalog {
    load_catalog(FIXTURE_CATALOG).unwrap()
}

pub fn config() -> ServerConfig {
    ServerConfig::new("unused", "unused")
}

/// App over `catalog` with an in-memory store holding `corpus`.
pub fn app_with(catalog: Catalog, corpus: &[swift_core::Sign]) -> (Router, AppState) {
    let mut store = SignStore::in_memory();
    for sign in corpus {
        store.save(sign, &catalog).unwrap();
    }
    let state = AppState::from_parts(catalog, store, &config());
    (router(state.clone()), state)
}

pub fn fixture_app() -> (Router, AppState) {
    let catalog = fixture_catalog();
    let corpus = fixture_corpus(&catalog);
    app_with(catalog, &corpus)
}

pub async fn new_session(app: &Router) -> String {
    let r = call(app, Method::POST, "/api/sessions", None).await;
    assert_eq!(r.status, StatusCode::CREATED);
    r.json()["session_id"].as_str().unwrap().to_string()
}

pub async fn op(app: &Router, session: &str, body: Value) -> Reply {
    post(app, &format!("/api/sessions/{session}/ops"), &body).await
}
