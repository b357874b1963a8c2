use super::OracleError;
use crate::domain::{CalendarProposal, CalendarQuery};
use crate::time::{TimeInterval, Weekday};

pub const DEFAULT_STEP: u32 = 30;

const MINUTES: usize = 24 * 60;

/// One flag per minute of the day: true when somebody is busy or it is
/// outside the work window.
fn blocked_minutes(q: &CalendarQuery, day: Weekday) -> [bool; MINUTES] {
    let mut blocked = [true; MINUTES];
    for m in q.work_window.start().minutes()..q.work_window.end().minutes() {
        blocked[m as usize] = false;
    }
    for person in &q.participants {
        for block in person.busy_on(day) {
            for m in block.start().minutes()..block.end().minutes() {
                blocked[m as usize] = true;
            }
        }
    }
    blocked
}

pub fn calendar_slot_is_free(q: &CalendarQuery, p: &CalendarProposal) -> bool {
    if !q.candidate_days.contains(&p.day) || p.slot.duration() != q.duration {
        return false;
    }
    let blocked = blocked_minutes(q, p.day);
    (p.slot.start().minutes()..p.slot.end().minutes()).all(|m| !blocked[m as usize])
}

/// Every valid proposal with a start on the step grid, by day order then start.
pub fn enumerate_calendar_slots(
    q: &CalendarQuery,
    step: u32,
) -> Result<Vec<CalendarProposal>, OracleError> {
    if step == 0 || 30 % step != 0 {
        return Err(OracleError::InvalidStep(step));
    }
    let mut out = Vec::new();
    if q.duration == 0 {
        return Ok(out);
    }
    for &day in &q.candidate_days {
        let blocked = blocked_minutes(q, day);
        let mut start = 0u32;
        while start + q.duration <= MINUTES as u32 {
            let free = (start..start + q.duration).all(|m| !blocked[m as usize]);
            if free {
                if let Ok(slot) = TimeInterval::from_minutes(start, start + q.duration) {
                    out.push(CalendarProposal { day, slot });
                }
            }
            start += step;
        }
    }
    Ok(out)
}
