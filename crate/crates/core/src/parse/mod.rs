//! Format critics: raw model text in, structured plans out.
//!
//! Parsers never fail with an error value; every input yields a
//! [`FormatCritique`] whose messages explain what could not be read.

mod calendar;
mod meeting;
mod travel;
mod trip;

use serde::{Deserialize, Serialize};

use crate::domain::{CalendarProposal, Domain, MeetingPlan, TravelPlanDay, TripPlan};

pub use calendar::{parse_calendar_plan, render_calendar};
pub use meeting::{parse_meeting_plan, render_meeting};
pub use travel::{parse_travel_plan, render_travel};
pub use trip::{parse_trip_plan, render_trip};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "domain", content = "plan", rename_all = "lowercase")]
pub enum PlanDocument {
    Travel(Vec<TravelPlanDay>),
    Trip(TripPlan),
    Meeting(MeetingPlan),
    Calendar(CalendarProposal),
}

impl PlanDocument {
    pub fn domain(&self) -> Domain {
        match self {
            PlanDocument::Travel(_) => Domain::Travel,
            PlanDocument::Trip(_) => Domain::Trip,
            PlanDocument::Meeting(_) => Domain::Meeting,
            PlanDocument::Calendar(_) => Domain::Calendar,
        }
    }
}

/// Outcome of the format critic. `passed` holds exactly when a plan was
/// parsed; messages on a passing critique are warnings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatCritique {
    pub passed: bool,
    pub messages: Vec<String>,
    pub parsed: Option<PlanDocument>,
}

impl FormatCritique {
    pub fn ok(plan: PlanDocument, warnings: Vec<String>) -> Self {
        FormatCritique {
            passed: true,
            messages: warnings,
            parsed: Some(plan),
        }
    }

    pub fn failed(messages: Vec<String>) -> Self {
        debug_assert!(!messages.is_empty());
        FormatCritique {
            passed: false,
            messages,
            parsed: None,
        }
    }

    pub fn fail(message: impl Into<String>) -> Self {
        Self::failed(vec![message.into()])
    }
}

pub fn parse_plan(domain: Domain, text: &str) -> FormatCritique {
    match domain {
        Domain::Travel => parse_travel_plan(text),
        Domain::Trip => parse_trip_plan(text),
        Domain::Meeting => parse_meeting_plan(text),
        Domain::Calendar => parse_calendar_plan(text),
    }
}

/// Canonical text in the surface format the matching parser accepts.
pub fn render_plan(plan: &PlanDocument) -> String {
    match plan {
        PlanDocument::Travel(days) => render_travel(days),
        PlanDocument::Trip(p) => render_trip(p),
        PlanDocument::Meeting(p) => render_meeting(p),
        PlanDocument::Calendar(p) => render_calendar(p),
    }
}

/// Text following the first `SOLUTION:` marker, if any.
pub(crate) fn after_solution_marker(text: &str) -> Option<&str> {
    text.find("SOLUTION:").map(|i| &text[i + "SOLUTION:".len()..])
}
