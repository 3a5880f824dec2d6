//! Machine-facing surface: the `webxr-spl` command line and the HTTP service.
//!
//! Both front ends build their outputs from the report types here, so a
//! command and its endpoint produce the same JSON for the same input.

use std::fs;
use std::ops::ControlFlow;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configurator::{
    for_each_completion, ConfigDocument, ConfigError, Configuration, Diagnostic, Forced, PropagationResult, UNBOUNDED,
};
use crate::generator::{GeneratedArtifact, ManifestEntry};
use crate::model::{builtin_webxr_model, parse_model, FeatureModel, ModelError};

pub mod cli;
pub mod service;

/// Model path token selecting the built-in Web XR model.
pub const BUILTIN_MODEL: &str = "builtin";

/// Completions listed when `list` is requested without a limit.
pub const DEFAULT_LIST_LIMIT: usize = 1000;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },
}

pub fn read_file(path: impl Into<PathBuf>) -> Result<String, LoadError> {
    let path = path.into();
    fs::read_to_string(&path).map_err(|source| LoadError::Io { path, source })
}

/// Loads a model document, or the built-in model for [`BUILTIN_MODEL`].
pub fn load_model(path: &str) -> Result<FeatureModel, LoadError> {
    if path == BUILTIN_MODEL {
        return Ok(builtin_webxr_model());
    }
    let text = read_file(path)?;
    parse_model(&text).map_err(|source| LoadError::Model {
        path: path.into(),
        source,
    })
}

pub fn load_config(path: impl Into<PathBuf>) -> Result<Configuration, LoadError> {
    let path = path.into();
    let text = read_file(&path)?;
    crate::configurator::parse_config(&text).map_err(|source| LoadError::Config { path, source })
}

/// Pretty JSON with a trailing newline, the format of every document.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports always serialize");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagateReport {
    pub configuration: ConfigDocument,
    pub forced: Vec<Forced>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Diagnostic>,
}

impl PropagateReport {
    pub fn new(result: &PropagationResult, model: &FeatureModel) -> Self {
        PropagateReport {
            configuration: ConfigDocument::from_configuration(&result.configuration, model),
            forced: result.forced.clone(),
            conflict: result.conflict.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub count: u64,
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configurations: Option<Vec<ConfigDocument>>,
}

/// Counts completions of `config` up to `limit`; with `list`, also returns
/// them (at most [`DEFAULT_LIST_LIMIT`] unless a limit is given).
pub fn enumerate_report(
    model: &FeatureModel,
    config: &Configuration,
    limit: Option<usize>,
    list: bool,
) -> Result<EnumerateReport, ConfigError> {
    let limit = limit.unwrap_or(if list { DEFAULT_LIST_LIMIT } else { UNBOUNDED });
    let mut count = 0u64;
    let mut truncated = false;
    let mut listed = list.then(Vec::new);
    for_each_completion(model, config, |product| {
        if count as usize == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        count += 1;
        if let Some(listed) = listed.as_mut() {
            listed.push(ConfigDocument::from_configuration(&product, model));
        }
        ControlFlow::Continue(())
    })?;
    Ok(EnumerateReport {
        count,
        truncated,
        configurations: listed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateReport {
    pub document: String,
    pub manifest: Vec<ManifestEntry>,
    pub config_digest: String,
}

impl From<GeneratedArtifact> for GenerateReport {
    fn from(a: GeneratedArtifact) -> Self {
        GenerateReport {
            document: a.document,
            manifest: a.manifest,
            config_digest: a.config_digest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
}
