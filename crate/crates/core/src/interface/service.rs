//! Stateless JSON-over-HTTP service for the editor UI.
//!
//! | method | path | body | response |
//! |--------|------|------|----------|
//! | GET | `/api/model` | | model document |
//! | POST | `/api/validate` | `{config, mode?}` | `{diagnostics}` |
//! | POST | `/api/propagate` | `{config}` | `{configuration, forced, conflict?}` |
//! | POST | `/api/enumerate` | `{config?, limit?, list?}` | `{count, truncated, configurations?}` |
//! | POST | `/api/generate` | `{config, options?}` | `{document, manifest, config_digest}` |
//! | GET | `/healthz` | | `ok` |
//!
//! Malformed bodies get 400 `{error}`. Well-formed requests the core rejects
//! get 422: `{diagnostics}` for an invalid configuration, `{error}` otherwise.

use std::future::Future;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tower_http::cors::{AllowOrigin, CorsLayer};

use super::{
    enumerate_report, load_model, read_file, EnumerateReport, ErrorReport, GenerateReport, LoadError, PropagateReport,
    ValidateReport,
};
use crate::configurator::{propagate, validate, ConfigDocument, ConfigError, Configuration, Diagnostic, Mode};
use crate::generator::{GenerateError, GenerationOptions, Generator, GeneratorSettings, DEFAULT_AFRAME_RUNTIME_URL};
use crate::model::{serialize_model, FeatureModel};

pub const ENV_LISTEN_ADDRESS: &str = "WEBXR_SPL_LISTEN_ADDRESS";
pub const ENV_MODEL_PATH: &str = "WEBXR_SPL_MODEL_PATH";

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("invalid service config: {0}")]
    Config(String),
    #[error("cannot listen on {address}: {source}")]
    Bind {
        address: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    /// `host:port`.
    pub listen_address: String,
    /// Model document path, or `builtin`.
    #[serde(default = "builtin")]
    pub model_path: String,
    #[serde(default = "default_runtime_url")]
    pub aframe_runtime_url: String,
    #[serde(default = "any_origin")]
    pub cors_allowed_origin: String,
}

fn builtin() -> String {
    super::BUILTIN_MODEL.to_string()
}

fn default_runtime_url() -> String {
    DEFAULT_AFRAME_RUNTIME_URL.to_string()
}

fn any_origin() -> String {
    "*".to_string()
}

impl ServiceConfig {
    pub fn new(listen_address: impl Into<String>) -> Self {
        ServiceConfig {
            listen_address: listen_address.into(),
            model_path: builtin(),
            aframe_runtime_url: default_runtime_url(),
            cors_allowed_origin: any_origin(),
        }
    }

    pub fn from_document(text: &str) -> Result<Self, ServiceError> {
        serde_json::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ServiceError> {
        Self::from_document(&read_file(path)?)
    }

    /// Applies [`ENV_LISTEN_ADDRESS`] and [`ENV_MODEL_PATH`] from `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) {
        if let Some(v) = lookup(ENV_LISTEN_ADDRESS) {
            self.listen_address = v;
        }
        if let Some(v) = lookup(ENV_MODEL_PATH) {
            self.model_path = v;
        }
    }

    pub fn generator_settings(&self) -> GeneratorSettings {
        GeneratorSettings {
            aframe_runtime_url: self.aframe_runtime_url.clone(),
            ..GeneratorSettings::default()
        }
    }
}

struct AppState {
    model: FeatureModel,
    model_document: String,
    generator: Generator,
}

fn cors(origin: &str) -> Result<CorsLayer, ServiceError> {
    let allow = if origin == "*" {
        AllowOrigin::any()
    } else {
        let value = HeaderValue::from_str(origin)
            .map_err(|_| ServiceError::Config(format!("invalid cors_allowed_origin `{origin}`")))?;
        AllowOrigin::exact(value)
    };
    Ok(CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]))
}

/// The service routes over `model`.
pub fn router(model: FeatureModel, generator: Generator, cors_allowed_origin: &str) -> Result<Router, ServiceError> {
    let state = Arc::new(AppState {
        model_document: serialize_model(&model),
        model,
        generator,
    });
    Ok(Router::new()
        .route("/api/model", get(get_model))
        .route("/api/validate", post(post_validate))
        .route("/api/propagate", post(post_propagate))
        .route("/api/enumerate", post(post_enumerate))
        .route("/api/generate", post(post_generate))
        .route("/healthz", get(|| async { "ok" }))
        .layer(cors(cors_allowed_origin)?)
        .with_state(state))
}

/// Loads the configured model and builds the routes.
pub fn app(config: &ServiceConfig) -> Result<Router, ServiceError> {
    let model = load_model(&config.model_path)?;
    router(model, Generator::new(config.generator_settings()), &config.cors_allowed_origin)
}

/// Serves until `shutdown` resolves.
pub async fn serve(config: ServiceConfig, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServiceError> {
    let app = app(&config)?;
    let listener = tokio::net::TcpListener::bind(&config.listen_address)
        .await
        .map_err(|source| ServiceError::Bind {
            address: config.listen_address.clone(),
            source,
        })?;
    tracing::info!(address = %listener.local_addr()?, model = %config.model_path, "listening");
    axum::serve(listener, app).with_graceful_shutdown(shutdown).await?;
    tracing::info!("stopped");
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateRequest {
    pub config: ConfigDocument,
    #[serde(default = "complete")]
    pub mode: Mode,
}

fn complete() -> Mode {
    Mode::Complete
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateRequest {
    pub config: ConfigDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateRequest {
    #[serde(default)]
    pub config: Option<ConfigDocument>,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub list: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateRequest {
    pub config: ConfigDocument,
    #[serde(default)]
    pub options: GenerationOptions,
}

/// A rejected request: `{error}` or, for invalid configurations,
/// `{diagnostics}`.
enum ApiError {
    Message(StatusCode, String),
    Invalid(Vec<Diagnostic>),
}

impl ApiError {
    fn bad_request(e: impl ToString) -> Self {
        ApiError::Message(StatusCode::BAD_REQUEST, e.to_string())
    }

    fn unprocessable(e: impl ToString) -> Self {
        ApiError::Message(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
    }
}

impl From<ConfigError> for ApiError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Syntax { .. } | ConfigError::Document(_) => ApiError::bad_request(e),
            ConfigError::ModelMismatch { .. } | ConfigError::ModelTooLarge { .. } => ApiError::unprocessable(e),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::Message(status, error) => (status, Json(ErrorReport { error })).into_response(),
            ApiError::Invalid(diagnostics) => {
                (StatusCode::UNPROCESSABLE_ENTITY, Json(ValidateReport { diagnostics })).into_response()
            }
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(ApiError::bad_request)
}

async fn get_model(State(state): State<Arc<AppState>>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.model_document.clone()).into_response()
}

async fn post_validate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<ValidateReport> {
    let req: ValidateRequest = parse_body(&body)?;
    let config = req.config.into_configuration()?;
    let diagnostics = validate(&state.model, &config, req.mode)?;
    Ok(Json(ValidateReport { diagnostics }))
}

async fn post_propagate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<PropagateReport> {
    let req: PropagateRequest = parse_body(&body)?;
    let config = req.config.into_configuration()?;
    let result = propagate(&state.model, &config)?;
    Ok(Json(PropagateReport::new(&result, &state.model)))
}

async fn post_enumerate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<EnumerateReport> {
    // An unbounded count of a large model takes a while; keep it off the
    // async workers.
    tokio::task::spawn_blocking(move || {
        let req: EnumerateRequest = parse_body(&body)?;
        let config = match req.config {
            Some(doc) => doc.into_configuration()?,
            None => Configuration::new(&state.model),
        };
        Ok(Json(enumerate_report(&state.model, &config, req.limit, req.list)?))
    })
    .await
    .map_err(|e| ApiError::Message(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

async fn post_generate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<GenerateReport> {
    let req: GenerateRequest = parse_body(&body)?;
    let config = req.config.into_configuration()?;
    match state.generator.generate(&state.model, &config, &req.options) {
        Ok(artifact) => Ok(Json(GenerateReport::from(artifact))),
        Err(GenerateError::InvalidConfiguration(diagnostics)) => Err(ApiError::Invalid(diagnostics)),
        Err(GenerateError::Config(e)) => Err(e.into()),
        Err(e) => Err(ApiError::unprocessable(e)),
    }
}
