//! Stateless JSON endpoints over the same document operations as the CLI.
//!
//! | method | path                       | body            | response         |
//! |--------|----------------------------|-----------------|------------------|
//! | POST   | `/evaluate`                | config document | `Evaluation`     |
//! | POST   | `/sweep`                   | config + sweep  | `SweepOutput`    |
//! | POST   | `/contour`                 | config + contour| `ContourOutput`  |
//! | POST   | `/crossover`               | config document | `Crossover`      |
//! | GET    | `/scenarios`               |                 | catalog          |
//! | GET    | `/scenarios/{id}`          |                 | scenario         |
//! | GET    | `/scenarios/{id}/run`      |                 | `ScenarioReport` |
//!
//! Scenario ids contain a slash (`table6/add16`). `run` accepts a
//! `tolerance_mode` query parameter. Errors are `{"errors": [{field, message}]}`
//! with status 400, or 404 for an unknown scenario.

use std::collections::HashMap;

use axum::extract::{Path, Query};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use bitlet::interface::{contour_document, crossover_document, evaluate_document, parse_config, sweep_document};
use bitlet::interface::{ConfigDocument, ConfigError};
use bitlet::quantities::FieldError;
use bitlet::scenarios::{self, ScenarioError, ToleranceMode};
use serde::Serialize;
use serde_json::json;

pub fn router() -> Router {
    Router::new()
        .route("/evaluate", post(evaluate))
        .route("/sweep", post(sweep))
        .route("/contour", post(contour))
        .route("/crossover", post(crossover))
        .route("/scenarios", get(catalog))
        .route("/scenarios/{*path}", get(scenario))
}

fn errors(status: StatusCode, list: Vec<FieldError>) -> Response {
    (status, Json(json!({ "errors": list }))).into_response()
}

fn invalid(e: ConfigError) -> Response {
    errors(StatusCode::BAD_REQUEST, e.errors())
}

fn reply<T: Serialize>(r: Result<T, ConfigError>) -> Response {
    match r {
        Ok(v) => Json(v).into_response(),
        Err(e) => invalid(e),
    }
}

fn document(body: &str) -> Result<ConfigDocument, ConfigError> {
    parse_config(body)
}

async fn evaluate(body: String) -> Response {
    reply(document(&body).and_then(|d| evaluate_document(&d)))
}

async fn sweep(body: String) -> Response {
    reply(document(&body).and_then(|d| sweep_document(&d, None)))
}

async fn contour(body: String) -> Response {
    reply(document(&body).and_then(|d| contour_document(&d)))
}

async fn crossover(body: String) -> Response {
    reply(document(&body).and_then(|d| crossover_document(&d, None)))
}

async fn catalog() -> Response {
    Json(scenarios::list_scenarios()).into_response()
}

fn unknown(id: &str) -> Response {
    errors(StatusCode::NOT_FOUND, vec![FieldError::new("id", format!("unknown scenario `{id}`"))])
}

async fn scenario(Path(path): Path<String>, Query(query): Query<HashMap<String, String>>) -> Response {
    let Some(id) = path.strip_suffix("/run") else {
        return match scenarios::find(&path) {
            Some(s) => Json(s).into_response(),
            None => unknown(&path),
        };
    };
    let mode = match query.get("tolerance_mode").map(|m| m.parse::<ToleranceMode>()) {
        None => ToleranceMode::Paper,
        Some(Ok(m)) => m,
        Some(Err(e)) => return errors(StatusCode::BAD_REQUEST, vec![FieldError::new("tolerance_mode", e)]),
    };
    match scenarios::run_scenario(id, mode) {
        Ok(report) => Json(report).into_response(),
        Err(ScenarioError::Unknown(id)) => unknown(&id),
        Err(ScenarioError::Invalid { errors: list, .. }) => errors(StatusCode::BAD_REQUEST, list),
    }
}
