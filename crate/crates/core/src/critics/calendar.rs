use super::{Critique, CritiqueReport};
use crate::domain::{CalendarProposal, CalendarQuery};
use crate::time::{free_intervals, TimeInterval};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CalendarCriticOptions {
    /// Adds the soft "earliest availability" critic when the query asks for it.
    pub check_earliest: bool,
}

pub fn critique_calendar(q: &CalendarQuery, p: &CalendarProposal) -> CritiqueReport {
    critique_calendar_with(q, p, CalendarCriticOptions::default())
}

pub fn critique_calendar_with(
    q: &CalendarQuery,
    p: &CalendarProposal,
    opts: CalendarCriticOptions,
) -> CritiqueReport {
    let mut critiques = vec![work_hours(q, p), duration(q, p), availability(q, p)];
    if opts.check_earliest && q.prefer_earliest {
        critiques.push(earliest(q, p));
    }
    CritiqueReport::new(critiques)
}

fn fmt_slot(p: &CalendarProposal) -> String {
    format!("{}, {} - {}", p.day, p.slot.start(), p.slot.end())
}

fn work_hours(q: &CalendarQuery, p: &CalendarProposal) -> Critique {
    let mut messages = Vec::new();
    if !q.candidate_days.contains(&p.day) {
        messages.push(format!("{} is not one of the days the meeting can be held", p.day));
    }
    if !q.work_window.contains(&p.slot) {
        messages.push(format!(
            "The meeting time {} is outside the work hours of {} to {}",
            fmt_slot(p),
            q.work_window.start(),
            q.work_window.end()
        ));
    }
    Critique::from_messages("work_hours", messages)
}

fn duration(q: &CalendarQuery, p: &CalendarProposal) -> Critique {
    let mut messages = Vec::new();
    if p.slot.duration() != q.duration {
        messages.push(format!(
            "The meeting lasts {} minutes but should last {} minutes",
            p.slot.duration(),
            q.duration
        ));
    }
    Critique::from_messages("duration", messages)
}

fn availability(q: &CalendarQuery, p: &CalendarProposal) -> Critique {
    let messages = q
        .participants
        .iter()
        .flat_map(|person| {
            person
                .busy_on(p.day)
                .iter()
                .filter(|block| block.overlaps(&p.slot))
                .map(move |block| {
                    format!(
                        "{} is busy on {} between {} and {}",
                        person.name,
                        p.day,
                        block.start(),
                        block.end()
                    )
                })
        })
        .collect();
    Critique::from_messages("availability", messages)
}

/// Earliest clash-free slot of the query's duration, by day order then start.
pub fn earliest_free_slot(q: &CalendarQuery) -> Option<CalendarProposal> {
    q.candidate_days.iter().find_map(|&day| {
        let busy: Vec<TimeInterval> = q
            .participants
            .iter()
            .flat_map(|p| p.busy_on(day).iter().copied())
            .collect();
        free_intervals(&busy, q.work_window)
            .into_iter()
            .find(|f| f.duration() >= q.duration)
            .and_then(|f| {
                let end = f.start().checked_add(q.duration)?;
                Some(CalendarProposal {
                    day,
                    slot: TimeInterval::new(f.start(), end).ok()?,
                })
            })
    })
}

fn earliest(q: &CalendarQuery, p: &CalendarProposal) -> Critique {
    let mut messages = Vec::new();
    if let Some(best) = earliest_free_slot(q) {
        if best != *p {
            messages.push(format!(
                "The meeting should be at the earliest availability, which is {}",
                fmt_slot(&best)
            ));
        }
    }
    Critique::from_messages("earliest", messages)
}
