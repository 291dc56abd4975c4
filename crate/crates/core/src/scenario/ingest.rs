use std::fs;
use std::path::Path;

use serde_json::error::Category;

use crate::market::io::ModelFile;
use crate::market::MarketModel;

use super::{GenerationCertificate, ScenarioError};

fn io_error(path: &Path, err: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

fn json_error(err: serde_json::Error) -> ScenarioError {
    match err.classify() {
        Category::Data => ScenarioError::SchemaError {
            location: format!("line {}, column {}", err.line(), err.column()),
            message: err.to_string(),
        },
        Category::Io => ScenarioError::Io {
            path: "<input>".into(),
            message: err.to_string(),
        },
        Category::Syntax | Category::Eof => ScenarioError::ParseError {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        },
    }
}

/// Parses and validates a model file.
pub fn ingest(path: impl AsRef<Path>) -> Result<MarketModel, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    ingest_str(&text)
}

pub fn ingest_str(text: &str) -> Result<MarketModel, ScenarioError> {
    let file: ModelFile = serde_json::from_str(text).map_err(json_error)?;
    Ok(file.into_model()?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), ScenarioError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn write_model(path: impl AsRef<Path>, model: &MarketModel) -> Result<(), ScenarioError> {
    write_json(path.as_ref(), &ModelFile::from_model(model))
}

pub fn write_certificate(
    path: impl AsRef<Path>,
    certificate: &GenerationCertificate,
) -> Result<(), ScenarioError> {
    write_json(path.as_ref(), certificate)
}

pub fn read_certificate(path: impl AsRef<Path>) -> Result<GenerationCertificate, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(json_error)
}
