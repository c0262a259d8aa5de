//! Route table and handlers. Handlers only translate between HTTP and the
//! core operations; no editing, search or ranking logic lives here.

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use swift_core::store::format_time;
use swift_core::{export_svg, serialize_text, FacetQuery, GlyphId, Sign, SignRecord};

use crate::error::ApiError;
use crate::session::{Op, SessionState};
use crate::{AppState, DEFAULT_PAGE, MAX_PAGE};

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/catalog/categories", get(categories))
        .route("/api/catalog/{category}/schema", get(schema))
        .route("/api/catalog/{category}/glyphs", get(glyphs))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session).delete(delete_session))
        .route("/api/sessions/{id}/ops", post(apply_op))
        .route("/api/sessions/{id}/hints", get(session_hints))
        .route("/api/sessions/{id}/save", post(save_session))
        .route("/api/sessions/{id}/export", get(export_session))
        .route("/api/signs", get(list_signs))
        .route("/api/signs/{id}", get(get_sign))
        .route("/api/signs/{id}/export", get(export_sign))
        .with_state(state)
}

async fn health(State(app): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "version": env!("CARGO_PKG_VERSION"),
        "catalog": app.catalog().name(),
        "catalog_version": app.catalog().version(),
        "sign_total": app.table().sign_total(),
    }))
}

async fn categories(State(app): State<AppState>) -> Json<Value> {
    Json(json!({ "categories": app.catalog().categories() }))
}

async fn schema(
    State(app): State<AppState>,
    Path(category): Path<String>,
) -> Result<Json<Value>, ApiError> {
    Ok(Json(json!(app.catalog().facet_schema(&category)?)))
}

fn page(offset: Option<&str>, limit: Option<&str>) -> Result<(usize, usize), ApiError> {
    let offset = match offset {
        None => 0,
        Some(s) => s
            .parse()
            .map_err(|_| ApiError::BadRequest(format!("offset `{s}` is not a non-negative integer")))?,
    };
    let limit = match limit {
        None => DEFAULT_PAGE,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if (1..=MAX_PAGE).contains(&n) => n,
            _ => {
                return Err(ApiError::BadRequest(format!(
                    "limit `{s}` must be an integer in 1..={MAX_PAGE}"
                )))
            }
        },
    };
    Ok((offset, limit))
}

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params
        .iter()
        .rev()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

/// Every parameter other than `offset` and `limit` selects a facet value,
/// applied in the order given.
async fn glyphs(
    State(app): State<AppState>,
    Path(category): Path<String>,
    Query(params): Query<Vec<(String, String)>>,
) -> Result<Json<Value>, ApiError> {
    let catalog = app.catalog();
    let (offset, limit) = page(param(&params, "offset"), param(&params, "limit"))?;
    let mut query = FacetQuery::new(catalog, &category)?;
    for (facet, value) in params.iter().filter(|(k, _)| k != "offset" && k != "limit") {
        query = query.set_facet(catalog, facet, value)?;
    }
    let results = query.execute(catalog)?;
    let total = results.len();
    let page: Vec<_> = results.into_iter().skip(offset).take(limit).collect();
    Ok(Json(json!({
        "category": query.category(),
        "selections": query.selections(),
        "total": total,
        "offset": offset,
        "limit": limit,
        "glyphs": page,
        "remaining_counts": query.remaining_counts(catalog)?,
    })))
}

async fn create_session(State(app): State<AppState>) -> impl IntoResponse {
    (StatusCode::CREATED, Json(app.sessions().create()))
}

async fn get_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionState>, ApiError> {
    let session = app.sessions().get(&id)?;
    let state = session.lock().unwrap().clone();
    Ok(Json(state))
}

async fn delete_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    app.sessions().remove(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn apply_op(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionState>, ApiError> {
    let session = app.sessions().get(&id)?;
    let op: Op = serde_json::from_slice(&body)
        .map_err(|e| ApiError::InvalidOp(format!("malformed op: {e}")))?;
    let mut state = session.lock().unwrap();
    state.apply(op, app.catalog())?;
    Ok(Json(state.clone()))
}

async fn session_hints(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Value>, ApiError> {
    let session = app.sessions().get(&id)?;
    let (area, placed): (Option<String>, Vec<GlyphId>) = {
        let state = session.lock().unwrap();
        (state.last_area.clone(), state.sign.glyph_ids())
    };
    let table = app.table();
    let (hints, total) = match &area {
        None => (json!([]), 0),
        Some(area) => {
            let result = table.hints(app.catalog(), area, &placed, app.tau(), app.hint_limit())?;
            (json!(result.hints), result.total)
        }
    };
    Ok(Json(json!({
        "area": area,
        "tau": app.tau(),
        "limit": app.hint_limit(),
        "hints": hints,
        "total": total,
        "hint_count": total,
    })))
}

#[derive(Serialize)]
struct RecordView<'a> {
    id: &'a str,
    saved_at: String,
    label: Option<&'a str>,
    glyph_list: &'a [GlyphId],
    swt: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<&'a Sign>,
}

fn record_view(record: &SignRecord, with_sign: bool) -> RecordView<'_> {
    RecordView {
        id: &record.id,
        saved_at: format_time(&record.saved_at),
        label: record.sign.label.as_deref(),
        glyph_list: &record.glyph_list,
        swt: serialize_text(&record.sign),
        sign: with_sign.then_some(&record.sign),
    }
}

async fn save_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let session = app.sessions().get(&id)?;
    // Hold the session lock across the save so no edit slips in between.
    let state = session.lock().unwrap();
    let record = app.with_store(|store| store.save(&state.sign, app.catalog()))?;
    drop(state);
    Ok((StatusCode::CREATED, Json(json!(record_view(&record, false)))).into_response())
}

#[derive(Deserialize)]
struct ExportParams {
    fmt: Option<String>,
    #[serde(default)]
    crop: bool,
}

fn export(app: &AppState, sign: &Sign, params: &ExportParams) -> Result<Response, ApiError> {
    match params.fmt.as_deref() {
        Some("swt") => Ok((
            [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
            serialize_text(sign),
        )
            .into_response()),
        Some("svg") => Ok((
            [(header::CONTENT_TYPE, "image/svg+xml")],
            export_svg(sign, app.catalog(), params.crop)?,
        )
            .into_response()),
        Some(other) => Err(ApiError::BadRequest(format!(
            "unknown export format `{other}` (expected swt or svg)"
        ))),
        None => Err(ApiError::BadRequest("missing `fmt` (swt or svg)".into())),
    }
}

async fn export_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<ExportParams>,
) -> Result<Response, ApiError> {
    let session = app.sessions().get(&id)?;
    let sign = session.lock().unwrap().sign.clone();
    export(&app, &sign, &params)
}

async fn list_signs(
    State(app): State<AppState>,
    Query(params): Query<Vec<(String, String)>>,
) -> Result<Json<Value>, ApiError> {
    let (offset, limit) = page(param(&params, "offset"), param(&params, "limit"))?;
    let (signs, total) = app.with_store(|s| (s.list_signs(offset, limit), s.len()));
    Ok(Json(json!({
        "signs": signs,
        "total": total,
        "offset": offset,
        "limit": limit,
    })))
}

async fn get_sign(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Value>, ApiError> {
    let record = app.with_store(|s| s.load(&id))?;
    Ok(Json(json!(record_view(&record, true))))
}

async fn export_sign(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<ExportParams>,
) -> Result<Response, ApiError> {
    let record = app.with_store(|s| s.load(&id))?;
    export(&app, &record.sign, &params)
}
