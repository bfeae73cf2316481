#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use codetutor_api::{router, AppState, ProfileName};
use codetutor_core::bank::{load_bank, Bank};
use codetutor_core::gateway::{Gateway, MockProvider, MockScript, RetryPolicy};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_bank() -> Bank {
    load_bank(fixture("bank.json")).expect("fixture bank loads")
}

pub fn mock_gateway(script: MockScript) -> (Arc<MockProvider>, Gateway) {
    let provider = Arc::new(MockProvider::new(script));
    let gateway = Gateway::new(provider.clone(), "gpt-4").with_retry(RetryPolicy::no_delay());
    (provider, gateway)
}

pub fn app(bank: Bank, script: MockScript) -> (Arc<MockProvider>, Router) {
    let (provider, gateway) = mock_gateway(script);
    let state = AppState::new(gateway, ProfileName::Improved)
        .with_rate_limit(0)
        .with_bank(bank);
    (provider, router(Arc::new(state), None))
}

pub async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Value) {
    let res = app.clone().oneshot(req).await.expect("router is infallible");
    let status = res.status();
    let bytes = res.into_body().collect().await.expect("body").to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

pub async fn get(app: &Router, path: &str) -> (StatusCode, Value) {
    send(app, Request::get(path).body(Body::empty()).unwrap()).await
}

pub async fn post(app: &Router, path: &str, body: Value) -> (StatusCode, Value) {
    let req = Request::post(path)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    send(app, req).await
}

/// Every object key anywhere in `value`.
pub fn keys(value: &Value) -> Vec<String> {
    match value {
        Value::Object(map) => map
            .iter()
            .flat_map(|(k, v)| std::iter::once(k.clone()).chain(keys(v)))
            .collect(),
        Value::Array(items) => items.iter().flat_map(keys).collect(),
        _ => Vec::new(),
    }
}

/// Every string anywhere in `value`.
pub fn strings(value: &Value) -> Vec<String> {
    match value {
        Value::String(s) => vec![s.clone()],
        Value::Object(map) => map.values().flat_map(strings).collect(),
        Value::Array(items) => items.iter().flat_map(strings).collect(),
        _ => Vec::new(),
    }
}
