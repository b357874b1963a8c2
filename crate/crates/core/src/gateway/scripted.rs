use std::collections::{BTreeMap, VecDeque};
use std::path::Path;
use std::sync::Mutex;

use serde_json::Value;

use super::{GatewayError, GenerationRequest, Generator};

/// Returns canned responses in order. Meant for one loop at a time: a call
/// that finds the queue already in use fails instead of interleaving.
#[derive(Debug)]
pub struct ScriptedGenerator {
    queue: Mutex<VecDeque<String>>,
    len: usize,
}

impl ScriptedGenerator {
    pub fn new(responses: Vec<String>) -> Self {
        ScriptedGenerator {
            len: responses.len(),
            queue: Mutex::new(responses.into()),
        }
    }

    pub fn remaining(&self) -> usize {
        self.queue.lock().map(|q| q.len()).unwrap_or(0)
    }
}

impl Generator for ScriptedGenerator {
    fn complete(&self, _req: &GenerationRequest) -> Result<String, GatewayError> {
        let mut queue = self
            .queue
            .try_lock()
            .map_err(|_| GatewayError::ConcurrentScriptUse)?;
        queue.pop_front().ok_or(GatewayError::ScriptExhausted(self.len))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptFile {
    /// One queue for whatever asks.
    Shared(Vec<String>),
    /// A queue per instance id.
    PerInstance(BTreeMap<String, Vec<String>>),
}

impl ScriptFile {
    pub fn responses_for(&self, instance_id: &str) -> Vec<String> {
        match self {
            ScriptFile::Shared(r) => r.clone(),
            ScriptFile::PerInstance(map) => map.get(instance_id).cloned().unwrap_or_default(),
        }
    }
}

fn strings(value: Value) -> Result<Vec<String>, String> {
    match value {
        Value::Array(items) => items
            .into_iter()
            .map(|v| match v {
                Value::String(s) => Ok(s),
                other => Err(format!("expected a string response, found {other}")),
            })
            .collect(),
        Value::String(s) => Ok(vec![s]),
        other => Err(format!("expected a list of responses, found {other}")),
    }
}

/// A JSON array of strings, an object of id → array, or one JSON string per line.
pub fn parse_script(text: &str) -> Result<ScriptFile, GatewayError> {
    let bad = |e: String| GatewayError::BadConfig(format!("script: {e}"));
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => {
            let mut out = BTreeMap::new();
            for (id, v) in map {
                out.insert(id, strings(v).map_err(bad)?);
            }
            Ok(ScriptFile::PerInstance(out))
        }
        Ok(Value::Array(items)) => strings(Value::Array(items)).map(ScriptFile::Shared).map_err(bad),
        _ => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, line)| {
                serde_json::from_str::<String>(line).map_err(|e| bad(format!("line {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ScriptFile::Shared),
    }
}

pub fn load_script(path: &Path) -> Result<ScriptFile, GatewayError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GatewayError::BadConfig(format!("{}: {e}", path.display())))?;
    parse_script(&text)
}
