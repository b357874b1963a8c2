//! Canonical JSON-lines instance files.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use thiserror::Error;

use crate::domain::{validate_query, Query, QueryInstance};

use super::query_text::render_query;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {} bad line(s); first: {}", errors.len(), errors[0])]
    Rejected { path: PathBuf, errors: Vec<LineError> },
}

fn instance_from_value(mut value: Value) -> Result<QueryInstance, String> {
    let obj = value.as_object_mut().ok_or("expected a JSON object")?;
    // Hand-written files may leave out the derived fields.
    let query: Query = serde_json::from_value(obj.get("query").cloned().ok_or("missing field `query`")?)
        .map_err(|e| format!("query: {e}"))?;
    if !obj.contains_key("domain") {
        obj.insert("domain".into(), Value::String(query.domain().name().into()));
    }
    if !obj.contains_key("subset") {
        obj.insert("subset".into(), Value::String(query.subset_label()));
    }
    if !obj.contains_key("prompt_text") {
        obj.insert("prompt_text".into(), Value::String(render_query(&query)));
    }
    let instance: QueryInstance = serde_json::from_value(value).map_err(|e| e.to_string())?;
    let problems = validate_query(&instance);
    if !problems.is_empty() {
        return Err(problems.join("; "));
    }
    Ok(instance)
}

/// Every line must hold a valid instance with a unique id; blank lines are
/// skipped. Errors carry 1-based line numbers.
pub fn parse_instances(text: &str) -> Result<Vec<QueryInstance>, Vec<LineError>> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(line)
            .map_err(|e| e.to_string())
            .and_then(instance_from_value);
        match parsed {
            Ok(inst) if !ids.insert(inst.id.clone()) => errors.push(LineError {
                line: i + 1,
                message: format!("duplicate id {:?}", inst.id),
            }),
            Ok(inst) => out.push(inst),
            Err(message) => errors.push(LineError { line: i + 1, message }),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

pub fn load_instances(path: &Path) -> Result<Vec<QueryInstance>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_instances(&text).map_err(|errors| DatasetError::Rejected {
        path: path.to_path_buf(),
        errors,
    })
}

pub fn instances_to_jsonl(instances: &[QueryInstance]) -> String {
    let mut out = String::new();
    for inst in instances {
        out.push_str(&serde_json::to_string(inst).expect("instance serializes"));
        out.push('\n');
    }
    out
}

pub fn write_instances(path: &Path, instances: &[QueryInstance]) -> Result<(), DatasetError> {
    let io = |e: std::io::Error| DatasetError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(instances_to_jsonl(instances).as_bytes()).map_err(io)
}
