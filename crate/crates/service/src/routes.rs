use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use argseg_core::io::{decode_image, encode_label_map_png, encode_partition_png, encode_rgb_png, image_dimensions};
use argseg_core::oversegment::MAX_SMOOTHING_RADIUS;
use argseg_core::pipeline::{apply_stamp_partitioned, make_stamp_partitioned, segment_partitioned};
use argseg_core::{
    render_labels, Error as CoreError, LabelId, MatchParams, ModelPack, RasterImage, Rgb, SegmentationResult,
    StrokeSet, WatershedParams,
};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::ApiError;
use crate::session::Session;
use crate::AppState;

/// A JSON object body whose fields are extracted one by one, so that every
/// error names the field it came from.
struct Body(Map<String, Value>);

impl Body {
    fn parse(bytes: &[u8]) -> Result<Body, ApiError> {
        match serde_json::from_slice(bytes) {
            Ok(Value::Object(map)) => Ok(Body(map)),
            Ok(_) => Err(ApiError::bad_field("body", "expected a JSON object")),
            Err(e) => Err(ApiError::bad_field("body", e)),
        }
    }

    fn optional<T: DeserializeOwned>(&self, field: &'static str) -> Result<Option<T>, ApiError> {
        match self.0.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => T::deserialize(v).map(Some).map_err(|e| ApiError::bad_field(field, e)),
        }
    }

    fn required<T: DeserializeOwned>(&self, field: &'static str) -> Result<T, ApiError> {
        self.optional(field)?.ok_or_else(|| ApiError::bad_field(field, "missing"))
    }

    fn unit(&self, field: &'static str, default: f64) -> Result<f64, ApiError> {
        let v = self.optional::<f64>(field)?.unwrap_or(default);
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(ApiError::bad_field(field, format!("must be in [0, 1], got {v}")))
        }
    }

    fn params(&self, defaults: MatchParams) -> Result<MatchParams, ApiError> {
        let alpha = self.unit("alpha", defaults.alpha())?;
        let gamma = self.unit("gamma", defaults.gamma_e())?;
        MatchParams::new(alpha, gamma).map_err(|e| ApiError::pipeline("alpha", e))
    }

    fn watershed(&self) -> Result<WatershedParams, ApiError> {
        let radius = self.optional::<u32>("smoothing")?.unwrap_or(WatershedParams::default().smoothing_radius());
        WatershedParams::new(radius)
            .map_err(|_| ApiError::bad_field("smoothing", format!("must be an integer in [0, {MAX_SMOOTHING_RADIUS}]")))
    }

    fn strokes(&self) -> Result<StrokeSet, ApiError> {
        let strokes: StrokeSet = self.required("strokes")?;
        strokes.validate().map_err(|e| ApiError::pipeline("strokes", e))?;
        Ok(strokes)
    }
}

fn session(state: &AppState, id: &str) -> Result<Arc<tokio::sync::Mutex<Session>>, ApiError> {
    state.store.get(id).ok_or_else(|| ApiError::not_found(id))
}

/// Runs CPU-bound pipeline work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(ApiError::internal)?
}

#[derive(Serialize)]
struct Created {
    session_id: String,
    width: u32,
    height: u32,
    region_count: u32,
}

pub async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let req = Body::parse(&body)?;
    let encoded: String = req.required("image")?;
    let bytes = B64.decode(encoded.trim()).map_err(|e| ApiError::bad_field("image", format!("invalid base64: {e}")))?;
    let (w, h) = image_dimensions(&bytes).map_err(|e| ApiError::bad_field("image", e))?;
    if w > state.config.max_dim || h > state.config.max_dim {
        return Err(ApiError::too_large(w, h, state.config.max_dim));
    }
    let ws = req.watershed()?;
    let (image, region_count, session) = blocking(move || {
        let image = decode_image(&bytes).map_err(|e| ApiError::bad_field("image", e))?;
        let mut session = Session::new(image);
        let count = session.partition(ws).region_count();
        Ok((session.image.clone(), count, session))
    })
    .await?;
    let (session_id, _) = state.store.insert(session);
    Ok((
        StatusCode::CREATED,
        Json(Created { session_id, width: image.width(), height: image.height(), region_count }),
    ))
}

#[derive(Serialize)]
struct RegionOut {
    region: u32,
    label: LabelId,
    model_vertex: u32,
    cost: f64,
}

#[derive(Serialize)]
struct RectOut {
    x: i64,
    y: i64,
    width: u32,
    height: u32,
}

/// Response of `/segment` and `/apply`.
#[derive(Serialize)]
pub struct SegmentOut {
    width: u32,
    height: u32,
    label_map: String,
    overlay: String,
    regions: Vec<RegionOut>,
    rect: RectOut,
    warnings: Vec<String>,
    timing_ms: f64,
}

fn segment_response(
    result: &SegmentationResult,
    table: &BTreeMap<LabelId, Rgb>,
    image: &RasterImage,
    opacity: f64,
    start: Instant,
) -> Result<SegmentOut, ApiError> {
    let overlay = render_labels(result, table, image, opacity).map_err(ApiError::internal)?;
    Ok(SegmentOut {
        width: result.width,
        height: result.height,
        label_map: B64.encode(encode_label_map_png(result).map_err(ApiError::internal)?),
        overlay: B64.encode(encode_rgb_png(&overlay).map_err(ApiError::internal)?),
        regions: result
            .regions
            .iter()
            .map(|(&region, r)| RegionOut { region, label: r.label, model_vertex: r.model_vertex.0, cost: r.cost })
            .collect(),
        rect: RectOut { x: result.rect.x, y: result.rect.y, width: result.rect.width, height: result.rect.height },
        warnings: result.warnings.iter().map(ToString::to_string).collect(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub async fn segment(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SegmentOut>, ApiError> {
    let start = Instant::now();
    let session = session(&state, &id)?;
    let req = Body::parse(&body)?;
    let strokes = req.strokes()?;
    let params = req.params(MatchParams::default())?;
    let ws = req.watershed()?;
    let opacity = req.unit("opacity", 0.5)?;
    let mut guard = session.lock_owned().await;
    let out = blocking(move || {
        let partition = guard.partition(ws);
        let result = segment_partitioned(&guard.image, &partition, &strokes, params)
            .map_err(|e| ApiError::pipeline("strokes", e))?;
        let out = segment_response(&result, &strokes.label_table(), &guard.image, opacity, start)?;
        guard.latest_strokes = Some(strokes);
        guard.latest_result = Some(result);
        Ok(out)
    })
    .await?;
    Ok(Json(out))
}

pub async fn stamp(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Value>, ApiError> {
    let session = session(&state, &id)?;
    let req = Body::parse(&body)?;
    let strokes = req.strokes()?;
    let params = req.params(MatchParams::default())?;
    let ws = req.watershed()?;
    let mut guard = session.lock_owned().await;
    let pack = blocking(move || {
        let partition = guard.partition(ws);
        let pack = make_stamp_partitioned(&guard.image, &partition, &strokes, params)
            .map_err(|e| ApiError::pipeline("strokes", e))?;
        guard.latest_strokes = Some(strokes);
        pack.to_value().map_err(ApiError::internal)
    })
    .await?;
    Ok(Json(serde_json::json!({ "model_pack": pack })))
}

#[derive(Deserialize)]
struct At {
    x: i64,
    y: i64,
}

pub async fn apply(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SegmentOut>, ApiError> {
    let start = Instant::now();
    let session = session(&state, &id)?;
    let req = Body::parse(&body)?;
    let pack_value: Value = req.required("model_pack")?;
    let pack = ModelPack::from_value(pack_value).map_err(|e| ApiError::pipeline("model_pack", e))?;
    let at: At = req.required("at")?;
    let params = req.params(pack.params_default)?;
    let ws = req.watershed()?;
    let opacity = req.unit("opacity", 0.5)?;
    let mut guard = session.lock_owned().await;
    let out = blocking(move || {
        let placed = pack.rect.translated(at.x, at.y);
        if placed.clip(guard.image.width(), guard.image.height()).is_none() {
            return Err(ApiError::bad_field(
                "at",
                format!(
                    "invalid placement: stamp of {}x{} at ({}, {}) does not overlap the {}x{} image",
                    placed.width,
                    placed.height,
                    at.x,
                    at.y,
                    guard.image.width(),
                    guard.image.height()
                ),
            ));
        }
        let partition = guard.partition(ws);
        let result = apply_stamp_partitioned(&pack, &guard.image, &partition, (at.x, at.y), params).map_err(|e| {
            let field = if matches!(e, CoreError::InvalidPlacement(_)) { "at" } else { "model_pack" };
            ApiError::pipeline(field, e)
        })?;
        let out = segment_response(&result, &pack.label_table, &guard.image, opacity, start)?;
        guard.latest_result = Some(result);
        Ok(out)
    })
    .await?;
    Ok(Json(out))
}

#[derive(Deserialize)]
pub struct PartitionQuery {
    smoothing: Option<u32>,
}

pub async fn partition(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<PartitionQuery>,
) -> Result<impl IntoResponse, ApiError> {
    let session = session(&state, &id)?;
    let ws = match query.smoothing {
        None => WatershedParams::default(),
        Some(r) => WatershedParams::new(r)
            .map_err(|_| ApiError::bad_field("smoothing", format!("must be an integer in [0, {MAX_SMOOTHING_RADIUS}]")))?,
    };
    let mut guard = session.lock_owned().await;
    let (png, count) = blocking(move || {
        let partition = guard.partition(ws);
        let png = encode_partition_png(&partition).map_err(|e| ApiError::pipeline("image", e))?;
        Ok((png, partition.region_count()))
    })
    .await?;
    Ok(([(header::CONTENT_TYPE, "image/png".to_string()), (header::HeaderName::from_static("x-region-count"), count.to_string())], png))
}

pub async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if state.store.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(&id))
    }
}
