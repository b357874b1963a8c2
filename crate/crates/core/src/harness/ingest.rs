//! Adapters from upstream benchmark files to canonical instances.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde_json::Value;
use thiserror::Error;

use crate::domain::{
    validate_query, Domain, HouseRule, Money, Query, QueryInstance, RoomTypeRequirement, TransportBan,
    TravelConstraint, TravelQuery, TravelSandbox, TravelTask,
};

use super::query_text::{instance_from_text, render_travel_query, QueryTextError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("bad input: {0}")]
    Format(String),
    #[error("record {id}: {message}")]
    Record { id: String, message: String },
}

fn record_err(id: &str, message: impl Into<String>) -> IngestError {
    IngestError::Record {
        id: id.to_string(),
        message: message.into(),
    }
}

/// Where the query text starts inside an upstream prompt.
fn query_opening(domain: Domain) -> &'static str {
    match domain {
        Domain::Calendar => "You need to schedule",
        Domain::Trip => "You plan to visit",
        Domain::Meeting => "You are visiting",
        Domain::Travel => "",
    }
}

/// The last task in a few-shot prompt: from its opening sentence up to the
/// `SOLUTION:` cue, if any.
pub fn extract_query_text(domain: Domain, prompt: &str) -> Option<String> {
    let start = prompt.rfind(query_opening(domain))?;
    let rest = &prompt[start..];
    let end = rest.find("\nSOLUTION:").unwrap_or(rest.len());
    Some(rest[..end].trim_end_matches('\n').to_string())
}

/// A Natural Plan file: an object keyed by example id whose values carry a
/// `prompt_0shot` (or `prompt_5shot`) string and an optional `golden_plan`.
pub fn ingest_natural_plan(domain: Domain, json: &str) -> Result<Vec<QueryInstance>, IngestError> {
    if domain == Domain::Travel {
        return Err(IngestError::Format("travel records come from the TravelPlanner CSV adapter".into()));
    }
    let root: Value = serde_json::from_str(json).map_err(|e| IngestError::Format(e.to_string()))?;
    let map = root
        .as_object()
        .ok_or_else(|| IngestError::Format("expected an object keyed by example id".into()))?;
    let mut out = Vec::new();
    for (id, rec) in map {
        let prompt = ["prompt_0shot", "prompt_5shot"]
            .iter()
            .find_map(|k| rec.get(*k).and_then(Value::as_str))
            .ok_or_else(|| record_err(id, "no prompt_0shot or prompt_5shot"))?;
        let text = extract_query_text(domain, prompt)
            .ok_or_else(|| record_err(id, format!("no {:?} sentence", query_opening(domain))))?;
        let mut inst = instance_from_text(id.clone(), domain, &text)
            .map_err(|e: QueryTextError| record_err(id, e.to_string()))?;
        inst.golden = rec.get("golden_plan").and_then(Value::as_str).map(str::to_string);
        let problems = validate_query(&inst);
        if !problems.is_empty() {
            return Err(record_err(id, problems.join("; ")));
        }
        out.push(inst);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

fn local_constraint_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"['"]([a-z ]+)['"]\s*:\s*(None|null|'[^']*'|"[^"]*"|\[[^\]]*\])"#).unwrap()
    })
}

fn unquote(s: &str) -> &str {
    s.trim().trim_matches(|c| c == '\'' || c == '"')
}

/// The `local_constraint` column, a Python dict literal such as
/// `{'house rule': 'parties', 'cuisine': ['Chinese'], 'room type': None, 'transportation': 'no flight'}`.
pub fn parse_local_constraint(text: &str) -> Result<Vec<TravelConstraint>, String> {
    let mut out = Vec::new();
    for caps in local_constraint_re().captures_iter(text) {
        let value = &caps[2];
        if value == "None" || value == "null" {
            continue;
        }
        let values: Vec<&str> = if value.starts_with('[') {
            value[1..value.len() - 1]
                .split(',')
                .map(unquote)
                .filter(|v| !v.is_empty())
                .collect()
        } else {
            vec![unquote(value)]
        };
        for v in values {
            let c = match &caps[1] {
                "house rule" => HouseRule::from_label(v).map(TravelConstraint::RoomRule),
                "room type" => RoomTypeRequirement::from_label(v).map(TravelConstraint::RoomType),
                "transportation" => TransportBan::from_label(v).map(TravelConstraint::TransportMode),
                "cuisine" => Some(TravelConstraint::Cuisine(v.to_string())),
                other => return Err(format!("unknown constraint key {other:?}")),
            };
            out.push(c.ok_or_else(|| format!("unknown {} value {v:?}", &caps[1]))?);
        }
    }
    Ok(out)
}

/// TravelPlanner-style CSV with columns `org`, `dest`, `days`,
/// `people_number`, `budget`, `local_constraint` and `sandbox`. `dest` lists
/// the destination cities separated by `;`; `sandbox` holds the reference
/// tables as JSON. An optional `id` column names the records.
pub fn ingest_travelplanner_csv(text: &str) -> Result<Vec<QueryInstance>, IngestError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Format(e.to_string()))?
        .clone();
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| IngestError::Format(e.to_string()))?;
        let row: BTreeMap<&str, &str> = headers.iter().zip(rec.iter()).collect();
        let id = row
            .get("id")
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("travelplanner-{:04}", i + 1));
        let field = |name: &str| {
            row.get(name)
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| record_err(&id, format!("missing column {name}")))
        };
        let number = |name: &str| -> Result<u64, IngestError> {
            let raw = field(name)?;
            raw.parse::<f64>()
                .ok()
                .filter(|v| *v >= 0.0 && v.fract() == 0.0)
                .map(|v| v as u64)
                .ok_or_else(|| record_err(&id, format!("{name} is not a whole number: {raw}")))
        };
        let constraints = match row.get("local_constraint").map(|s| s.trim()) {
            None | Some("") => Vec::new(),
            Some(text) => parse_local_constraint(text).map_err(|e| record_err(&id, e))?,
        };
        let sandbox: TravelSandbox =
            serde_json::from_str(field("sandbox")?).map_err(|e| record_err(&id, format!("sandbox: {e}")))?;
        let task = TravelTask {
            query: TravelQuery {
                origin: field("org")?.to_string(),
                destinations: field("dest")?
                    .split(';')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                days: number("days")? as u32,
                people: number("people_number")? as u32,
                budget: Money::from_dollars(number("budget")?),
                constraints,
            },
            sandbox,
            cost_model: Default::default(),
        };
        let prompt_text = render_travel_query(&task);
        let query = Query::Travel(task);
        let inst = QueryInstance {
            id: id.clone(),
            domain: Domain::Travel,
            subset: query.subset_label(),
            query,
            prompt_text,
            golden: None,
        };
        let problems = validate_query(&inst);
        if !problems.is_empty() {
            return Err(record_err(&id, problems.join("; ")));
        }
        out.push(inst);
    }
    Ok(out)
}
