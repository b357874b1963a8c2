//! Scoring a plan against its instance.

use serde::{Deserialize, Serialize};

use crate::critics::critique_plan;
use crate::domain::{Query, QueryInstance};
use crate::oracle::{enumerate_calendar_slots, max_meetings, DEFAULT_STEP};
use crate::parse::PlanDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanScore {
    pub valid: bool,
    /// Meeting: all reachable friends met. Calendar: the earliest free slot,
    /// only asked when the query prefers it.
    pub optimal: Option<bool>,
}

/// Calendar plans count when every participant is free; no golden answer is
/// consulted.
pub fn evaluate_plan(instance: &QueryInstance, plan: &PlanDocument) -> PlanScore {
    let valid = critique_plan(&instance.query, plan).all_passed;
    let optimal = match (&instance.query, plan) {
        (Query::Meeting(q), PlanDocument::Meeting(p)) => max_meetings(q)
            .ok()
            .and_then(|v| v.optimum)
            .map(|best| valid && p.friends_met() as u32 == best),
        (Query::Calendar(q), PlanDocument::Calendar(p)) if q.prefer_earliest => enumerate_calendar_slots(q, DEFAULT_STEP)
            .ok()
            .map(|slots| valid && slots.first() == Some(p)),
        _ => None,
    };
    PlanScore { valid, optimal }
}
