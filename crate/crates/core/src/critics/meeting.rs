use std::collections::BTreeSet;

use super::{Critique, CritiqueReport};
use crate::domain::{MeetingPlan, MeetingQuery, MeetingStep};
use crate::time::TimeOfDay;

pub const INVALID_STEP_PREFIX: &str = "Invalid meeting time or location with step";

/// Replays the schedule step by step. Each invalid step is reported; replay
/// continues from the state the step claims so one slip does not cascade.
pub fn critique_meeting(q: &MeetingQuery, p: &MeetingPlan) -> CritiqueReport {
    let mut messages = Vec::new();
    let mut location = q.start_location.clone();
    let mut now = q.arrival;
    let mut met: BTreeSet<&str> = BTreeSet::new();

    for (i, step) in p.steps.iter().enumerate() {
        let ok = match step {
            MeetingStep::Start { location: at, time } => {
                let ok = i == 0 && *at == q.start_location && *time == q.arrival;
                location = at.clone();
                now = *time;
                ok
            }
            MeetingStep::Travel { to, minutes, arrive } => {
                let expected = q.travel_minutes(&location, to);
                let ok = i > 0
                    && expected == Some(*minutes)
                    && now.checked_add(*minutes) == Some(*arrive);
                location = to.clone();
                now = *arrive;
                ok
            }
            MeetingStep::Wait { until } => {
                let ok = i > 0 && *until >= now;
                now = *until;
                ok
            }
            MeetingStep::Meet { friend, start, end } => {
                let ok = i > 0
                    && match q.friend(friend) {
                        Some(f) => {
                            f.location == location
                                && *start == now
                                && f.window.start() <= *start
                                && *end <= f.window.end()
                                && *end >= *start
                                && minutes_between(*start, *end) >= f.min_duration
                                && !met.contains(f.name.as_str())
                        }
                        None => false,
                    };
                if let Some(f) = q.friend(friend) {
                    met.insert(f.name.as_str());
                }
                now = *end;
                ok
            }
        };
        if !ok {
            messages.push(format!("{INVALID_STEP_PREFIX}: '{}'", step.sentence()));
        }
    }
    CritiqueReport::new(vec![Critique::from_messages("feasibility", messages)])
}

fn minutes_between(a: TimeOfDay, b: TimeOfDay) -> u32 {
    b.minutes().saturating_sub(a.minutes())
}
