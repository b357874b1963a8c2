//! Sound constraint critics for each domain.
//!
//! A report passes only when every critic in it passes. Critics run in a fixed
//! declaration order and report violations in plan order, so identical inputs
//! always produce identical message lists.

mod calendar;
mod meeting;
mod travel;
mod trip;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Query, QueryInstance};
use crate::parse::{parse_plan, FormatCritique, PlanDocument};

pub use calendar::{critique_calendar, critique_calendar_with, earliest_free_slot, CalendarCriticOptions};
pub use meeting::{critique_meeting, INVALID_STEP_PREFIX};
pub use travel::{
    accommodations_flagged_in, critique_travel, flag_unfit_accommodations, get_total_cost, get_total_cost_with, parse_leg,
    CostError, Leg,
};
pub use trip::critique_trip;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Critique {
    pub critic_id: String,
    pub passed: bool,
    pub messages: Vec<String>,
}

impl Critique {
    pub fn from_messages(critic_id: impl Into<String>, messages: Vec<String>) -> Self {
        Critique {
            critic_id: critic_id.into(),
            passed: messages.is_empty(),
            messages,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CritiqueReport {
    pub critiques: Vec<Critique>,
    pub all_passed: bool,
}

impl CritiqueReport {
    pub fn new(critiques: Vec<Critique>) -> Self {
        let all_passed = critiques.iter().all(|c| c.passed);
        CritiqueReport {
            critiques,
            all_passed,
        }
    }

    /// Every violation message, critic by critic.
    pub fn messages(&self) -> Vec<String> {
        self.critiques
            .iter()
            .flat_map(|c| c.messages.iter().cloned())
            .collect()
    }

    pub fn critique(&self, critic_id: &str) -> Option<&Critique> {
        self.critiques.iter().find(|c| c.critic_id == critic_id)
    }
}

/// Both layers of checking for one raw response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub format: FormatCritique,
    pub report: Option<CritiqueReport>,
}

impl PipelineResult {
    pub fn all_passed(&self) -> bool {
        self.format.passed && self.report.as_ref().is_some_and(|r| r.all_passed)
    }

    /// The messages a backprompt should carry: format problems when the
    /// response did not parse, constraint violations otherwise.
    pub fn feedback_messages(&self) -> Vec<String> {
        match (&self.format.passed, &self.report) {
            (false, _) => self.format.messages.clone(),
            (true, Some(r)) => r.messages(),
            (true, None) => Vec::new(),
        }
    }
}

/// Runs the constraint critics for an already parsed plan.
pub fn critique_plan(query: &Query, plan: &PlanDocument) -> CritiqueReport {
    match (query, plan) {
        (Query::Calendar(q), PlanDocument::Calendar(p)) => critique_calendar(q, p),
        (Query::Trip(q), PlanDocument::Trip(p)) => critique_trip(q, p),
        (Query::Meeting(q), PlanDocument::Meeting(p)) => critique_meeting(q, p),
        (Query::Travel(t), PlanDocument::Travel(days)) => critique_travel(t, days),
        (q, p) => CritiqueReport::new(vec![Critique::from_messages(
            "domain",
            vec![format!(
                "A {} plan cannot answer a {} query",
                p.domain(),
                q.domain()
            )],
        )]),
    }
}

/// Format critic first; constraint critics only when the format passes.
pub fn run_critic_pipeline(instance: &QueryInstance, raw_text: &str) -> PipelineResult {
    let format = parse_plan(instance.domain, raw_text);
    let report = format
        .parsed
        .as_ref()
        .map(|plan| critique_plan(&instance.query, plan));
    PipelineResult { format, report }
}

/// Plain-text critique block in the style each domain's fix prompt uses.
pub fn render_feedback(domain: Domain, messages: &[String]) -> String {
    match domain {
        Domain::Travel | Domain::Calendar => messages
            .iter()
            .enumerate()
            .map(|(i, m)| format!("{}. {m}", i + 1))
            .collect::<Vec<_>>()
            .join("\n"),
        Domain::Trip => messages.join("\n"),
        Domain::Meeting => messages
            .iter()
            .map(|m| format!("Had error: {m}"))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}
