use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use crate::domain::Domain;

use super::LoopError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateKind {
    Initial,
    Fix,
}

impl TemplateKind {
    pub fn name(self) -> &'static str {
        match self {
            TemplateKind::Initial => "initial",
            TemplateKind::Fix => "fix",
        }
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The cost-function extraction prompt shipped alongside the plan templates.
pub const CRITIC_EXTRACTION_PROMPT: &str = include_str!("../../assets/prompts/critic_extraction.txt");

const BUILTIN: [(Domain, TemplateKind, &str); 8] = [
    (Domain::Travel, TemplateKind::Initial, include_str!("../../assets/prompts/travel_initial.txt")),
    (Domain::Travel, TemplateKind::Fix, include_str!("../../assets/prompts/travel_fix.txt")),
    (Domain::Trip, TemplateKind::Initial, include_str!("../../assets/prompts/trip_initial.txt")),
    (Domain::Trip, TemplateKind::Fix, include_str!("../../assets/prompts/trip_fix.txt")),
    (Domain::Meeting, TemplateKind::Initial, include_str!("../../assets/prompts/meeting_initial.txt")),
    (Domain::Meeting, TemplateKind::Fix, include_str!("../../assets/prompts/meeting_fix.txt")),
    (Domain::Calendar, TemplateKind::Initial, include_str!("../../assets/prompts/calendar_initial.txt")),
    (Domain::Calendar, TemplateKind::Fix, include_str!("../../assets/prompts/calendar_fix.txt")),
];

/// Prompt templates keyed by domain and kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    map: BTreeMap<(Domain, TemplateKind), String>,
}

impl Templates {
    /// The templates compiled into the crate.
    pub fn builtin() -> Self {
        Templates {
            map: BUILTIN
                .iter()
                .map(|(d, k, t)| ((*d, *k), t.to_string()))
                .collect(),
        }
    }

    /// Reads `{domain}_{kind}.txt` files. Absent files are reported when the
    /// template is first needed.
    pub fn from_dir(dir: &Path) -> Result<Self, LoopError> {
        let mut map = BTreeMap::new();
        for d in Domain::ALL {
            for k in [TemplateKind::Initial, TemplateKind::Fix] {
                let path = dir.join(format!("{}_{}.txt", d.name(), k.name()));
                match std::fs::read_to_string(&path) {
                    Ok(text) => {
                        map.insert((d, k), text);
                    }
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                    Err(e) => return Err(LoopError::Io(format!("{}: {e}", path.display()))),
                }
            }
        }
        Ok(Templates { map })
    }

    pub fn get(&self, domain: Domain, kind: TemplateKind) -> Result<&str, LoopError> {
        self.map
            .get(&(domain, kind))
            .map(String::as_str)
            .ok_or(LoopError::MissingTemplate { domain, kind })
    }

    pub fn set(&mut self, domain: Domain, kind: TemplateKind, text: impl Into<String>) {
        self.map.insert((domain, kind), text.into());
    }
}

impl Default for Templates {
    fn default() -> Self {
        Templates::builtin()
    }
}

/// Values for the named placeholders. Unset names render empty.
#[derive(Debug, Clone, Default)]
pub struct Fill<'a> {
    pub query: &'a str,
    pub previous_plan: &'a str,
    pub critiques: &'a str,
    pub history: &'a str,
}

fn placeholder() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{(query|previous_plan|critiques|history)\}").unwrap())
}

/// Substitutes placeholders in one pass; inserted text is never rescanned and
/// other braces (the JSON examples) are left alone.
pub fn fill(template: &str, values: &Fill<'_>) -> String {
    placeholder()
        .replace_all(template, |caps: &regex::Captures<'_>| match &caps[1] {
            "query" => values.query.to_string(),
            "previous_plan" => values.previous_plan.to_string(),
            "critiques" => values.critiques.to_string(),
            _ => values.history.to_string(),
        })
        .into_owned()
}
