use std::sync::OnceLock;

use regex::Regex;

use super::{FormatCritique, PlanDocument};
use crate::domain::CalendarProposal;
use crate::time::{parse_time_of_day, TimeInterval, Weekday};

fn proposal_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?i)\b(monday|tuesday|wednesday|thursday|friday|saturday|sunday)\s*,\s*(\d{1,2}:\d{2})(\s*[ap]m)?\s*-\s*(\d{1,2}:\d{2})(\s*[ap]m)?",
        )
        .expect("proposal regex")
    })
}

/// Reads `Weekday, H:MM - H:MM` (24-hour) from a proposal such as
/// `Here is the proposed time: Monday, 11:00 - 11:30`.
pub fn parse_calendar_plan(text: &str) -> FormatCritique {
    let mut matches = proposal_regex().captures_iter(text);
    let Some(caps) = matches.next() else {
        return FormatCritique::fail(
            "No proposed meeting time found; expected 'Here is the proposed time: DAY, H:MM - H:MM'",
        );
    };
    if caps.get(3).is_some() || caps.get(5).is_some() {
        return FormatCritique::fail(format!(
            "The proposed time '{}' must use 24-hour times without AM/PM",
            caps[0].trim()
        ));
    }
    let Ok(day) = caps[1].parse::<Weekday>() else {
        return FormatCritique::fail(format!("Unknown weekday '{}'", &caps[1]));
    };
    let start = match parse_time_of_day(&caps[2]) {
        Ok(t) => t,
        Err(e) => return FormatCritique::fail(format!("Invalid start time: {e}")),
    };
    let end = match parse_time_of_day(&caps[4]) {
        Ok(t) => t,
        Err(e) => return FormatCritique::fail(format!("Invalid end time: {e}")),
    };
    let Ok(slot) = TimeInterval::new(start, end) else {
        return FormatCritique::fail(format!(
            "The proposed end time {end} is not after the start time {start}"
        ));
    };

    let warnings = matches
        .map(|extra| format!("Ignored additional proposal '{}'", extra[0].trim()))
        .collect();
    FormatCritique::ok(PlanDocument::Calendar(CalendarProposal { day, slot }), warnings)
}

pub fn render_calendar(p: &CalendarProposal) -> String {
    format!(
        "Here is the proposed time: {}, {} - {}",
        p.day,
        p.slot.start().to_24h(),
        p.slot.end().to_24h()
    )
}
