use std::sync::OnceLock;

use regex::Regex;

use super::{after_solution_marker, FormatCritique, PlanDocument};
use crate::domain::{MeetingPlan, MeetingStep};
use crate::time::{parse_time_of_day, TimeOfDay};

struct StepPatterns {
    start: Regex,
    travel: Regex,
    wait: Regex,
    meet: Regex,
    sentence_end: Regex,
}

const CLOCK: &str = r"(\d{1,2}:\d{2}\s?[AaPp][Mm])";

fn patterns() -> &'static StepPatterns {
    static RE: OnceLock<StepPatterns> = OnceLock::new();
    RE.get_or_init(|| StepPatterns {
        start: Regex::new(&format!(r"^You start at (.+?) at {CLOCK}$")).expect("start"),
        travel: Regex::new(&format!(
            r"^You travel to (.+?) in (\d{{1,4}}) minutes and arrive at {CLOCK}$"
        ))
        .expect("travel"),
        wait: Regex::new(&format!(r"^You wait until {CLOCK}$")).expect("wait"),
        meet: Regex::new(&format!(
            r"^You meet (.+?) for (\d{{1,4}}) minutes from {CLOCK} to {CLOCK}$"
        ))
        .expect("meet"),
        sentence_end: Regex::new(r"\.(?:\s+|$)").expect("sentence end"),
    })
}

fn clock(text: &str, sentence: &str, errors: &mut Vec<String>) -> Option<TimeOfDay> {
    match parse_time_of_day(text) {
        Ok(t) => Some(t),
        Err(e) => {
            errors.push(format!("Invalid time in step '{sentence}': {e}"));
            None
        }
    }
}

fn parse_step(sentence: &str, errors: &mut Vec<String>) -> Option<MeetingStep> {
    let p = patterns();
    if let Some(c) = p.start.captures(sentence) {
        let time = clock(&c[2], sentence, errors)?;
        return Some(MeetingStep::Start {
            location: c[1].to_string(),
            time,
        });
    }
    if let Some(c) = p.travel.captures(sentence) {
        let arrive = clock(&c[3], sentence, errors)?;
        let minutes = c[2].parse().ok()?;
        return Some(MeetingStep::Travel {
            to: c[1].to_string(),
            minutes,
            arrive,
        });
    }
    if let Some(c) = p.wait.captures(sentence) {
        let until = clock(&c[1], sentence, errors)?;
        return Some(MeetingStep::Wait { until });
    }
    if let Some(c) = p.meet.captures(sentence) {
        let start = clock(&c[3], sentence, errors)?;
        let end = clock(&c[4], sentence, errors)?;
        let stated: u32 = c[2].parse().ok()?;
        if end <= start {
            errors.push(format!("Step '{sentence}' ends before it starts"));
            return None;
        }
        if end.minutes() - start.minutes() != stated {
            errors.push(format!(
                "Step '{sentence}' states {stated} minutes but spans {} minutes",
                end.minutes() - start.minutes()
            ));
            return None;
        }
        return Some(MeetingStep::Meet {
            friend: c[1].to_string(),
            start,
            end,
        });
    }
    errors.push(format!("Unrecognized step: '{sentence}'"));
    None
}

/// Splits the text after `SOLUTION:` into sentences and reads each as one of
/// the start, travel, wait or meet templates.
pub fn parse_meeting_plan(text: &str) -> FormatCritique {
    let Some(body) = after_solution_marker(text) else {
        return FormatCritique::fail("The response must start with 'SOLUTION:'");
    };
    let normalized = body.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut errors = Vec::new();
    let mut steps = Vec::new();
    for sentence in patterns().sentence_end.split(&normalized) {
        let sentence = sentence.trim();
        if sentence.is_empty() {
            continue;
        }
        if let Some(step) = parse_step(sentence, &mut errors) {
            steps.push(step);
        }
    }
    if !errors.is_empty() {
        return FormatCritique::failed(errors);
    }

    match steps.first() {
        None => return FormatCritique::fail("The schedule contains no steps"),
        Some(MeetingStep::Start { .. }) => {}
        Some(first) => {
            return FormatCritique::fail(format!(
                "The schedule must begin with 'You start at ...', found '{}'",
                first.sentence()
            ))
        }
    }
    let mut cursor = TimeOfDay::MIDNIGHT;
    for (i, step) in steps.iter().enumerate() {
        if i > 0 && matches!(step, MeetingStep::Start { .. }) {
            errors.push(format!("Repeated start step '{}'", step.sentence()));
        }
        let (first, last) = match step {
            MeetingStep::Start { time, .. } => (*time, *time),
            MeetingStep::Travel { arrive, .. } => (*arrive, *arrive),
            MeetingStep::Wait { until } => (*until, *until),
            MeetingStep::Meet { start, end, .. } => (*start, *end),
        };
        if first < cursor {
            errors.push(format!("Step '{}' goes back in time", step.sentence()));
        }
        cursor = cursor.max(last);
    }
    if !errors.is_empty() {
        return FormatCritique::failed(errors);
    }
    FormatCritique::ok(PlanDocument::Meeting(MeetingPlan { steps }), Vec::new())
}

pub fn render_meeting(plan: &MeetingPlan) -> String {
    let sentences: Vec<String> = plan.steps.iter().map(|s| format!("{}.", s.sentence())).collect();
    format!("SOLUTION: {}", sentences.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_only() {
        let c = parse_meeting_plan("SOLUTION: You start at X at 9:00AM.");
        assert!(c.passed, "{:?}", c.messages);
        let Some(PlanDocument::Meeting(p)) = c.parsed else { panic!() };
        assert_eq!(p.steps.len(), 1);
    }

    #[test]
    fn unknown_step() {
        let c = parse_meeting_plan("SOLUTION: You teleport to Y.");
        assert!(!c.passed);
        assert_eq!(c.messages, vec!["Unrecognized step: 'You teleport to Y'"]);
    }

    #[test]
    fn accepts_missing_space_after_marker_and_wrapped_lines() {
        let c = parse_meeting_plan(
            "SOLUTION:You start at North Beach at 9:00AM. You travel to Golden Gate Park in 22 minutes\nand arrive at 9:22AM.",
        );
        assert!(c.passed, "{:?}", c.messages);
    }

    #[test]
    fn stated_duration_must_match() {
        let c = parse_meeting_plan(
            "SOLUTION: You start at A at 9:00AM. You meet B for 30 minutes from 9:00AM to 10:00AM.",
        );
        assert!(!c.passed);
    }

    #[test]
    fn must_begin_with_start() {
        assert!(!parse_meeting_plan("SOLUTION: You wait until 9:00AM.").passed);
        assert!(!parse_meeting_plan("no marker").passed);
    }

    #[test]
    fn backwards_time_rejected() {
        let c = parse_meeting_plan("SOLUTION: You start at A at 9:00AM. You wait until 8:00AM.");
        assert!(!c.passed);
    }
}
