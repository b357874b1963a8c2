//! Exhaustive reference solvers and independent validity predicates.
//!
//! Nothing here calls into the critics: the predicates are separate
//! implementations so the two can be checked against each other.

mod calendar;
mod meeting;
mod travel;
mod trip;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::Query;
use crate::parse::PlanDocument;

pub use calendar::{calendar_slot_is_free, enumerate_calendar_slots, DEFAULT_STEP};
pub use meeting::{max_meetings, meeting_plan_is_feasible, MAX_FRIENDS};
pub use travel::{
    brute_force_cost, solve_travel_small, solve_travel_small_with, travel_plan_is_valid,
    MAX_DESTINATIONS, MAX_ROWS_PER_TABLE, MAX_TRAVEL_DAYS,
};
pub use trip::{solve_trip, solve_trip_with, trip_plan_is_valid, MAX_CITIES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large: {what} is {size}, limit {limit}")]
    InstanceTooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("step {0} does not divide 30")]
    InvalidStep(u32),
    #[error("search cancelled")]
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub valid: bool,
    pub witness: Option<PlanDocument>,
    /// Max friends met for meetings, earliest start minute for calendars.
    pub optimum: Option<u32>,
}

impl OracleVerdict {
    pub fn invalid() -> Self {
        OracleVerdict {
            valid: false,
            witness: None,
            optimum: None,
        }
    }

    pub fn witnessed(witness: PlanDocument, optimum: Option<u32>) -> Self {
        OracleVerdict {
            valid: true,
            witness: Some(witness),
            optimum,
        }
    }
}

/// Cooperative cancellation shared between a search and whoever started it.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    fn check(&self) -> Result<(), OracleError> {
        if self.is_cancelled() {
            Err(OracleError::Cancelled)
        } else {
            Ok(())
        }
    }
}

fn ensure_size(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::InstanceTooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// Solves any query with the matching oracle.
pub fn solve(query: &Query, cancel: &CancelToken) -> Result<OracleVerdict, OracleError> {
    match query {
        Query::Calendar(q) => {
            let slots = enumerate_calendar_slots(q, DEFAULT_STEP)?;
            Ok(match slots.first() {
                Some(first) => OracleVerdict::witnessed(
                    PlanDocument::Calendar(*first),
                    Some(first.slot.start().minutes()),
                ),
                None => OracleVerdict::invalid(),
            })
        }
        Query::Trip(q) => solve_trip_with(q, cancel),
        Query::Meeting(q) => max_meetings(q),
        Query::Travel(t) => solve_travel_small_with(t, cancel),
    }
}

/// Independent check that a parsed plan answers the query.
///
/// Meeting plans count when they are feasible; whether they are optimal is a
/// separate question settled by [`max_meetings`].
pub fn plan_is_valid(query: &Query, plan: &PlanDocument) -> bool {
    match (query, plan) {
        (Query::Calendar(q), PlanDocument::Calendar(p)) => calendar_slot_is_free(q, p),
        (Query::Trip(q), PlanDocument::Trip(p)) => trip_plan_is_valid(q, p),
        (Query::Meeting(q), PlanDocument::Meeting(p)) => meeting_plan_is_feasible(q, p),
        (Query::Travel(t), PlanDocument::Travel(days)) => travel_plan_is_valid(t, days),
        _ => false,
    }
}
