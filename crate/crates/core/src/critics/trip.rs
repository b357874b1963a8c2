use std::collections::BTreeMap;

use super::{Critique, CritiqueReport};
use crate::domain::{TripPlan, TripQuery};

/// Stay lengths, flight availability, event windows, then overall coverage.
pub fn critique_trip(q: &TripQuery, p: &TripPlan) -> CritiqueReport {
    CritiqueReport::new(vec![
        stay_duration(q, p),
        flights(q, p),
        events(q, p),
        total_duration(q, p),
    ])
}

fn stay_duration(q: &TripQuery, p: &TripPlan) -> Critique {
    let mut messages = Vec::new();
    for seg in &p.segments {
        match q.required_days(&seg.city) {
            None => messages.push(format!("{} is not one of the cities to visit", seg.city)),
            Some(req) if req != seg.length() => messages.push(format!(
                "The stay in {} lasts {} days, expected {} days",
                seg.city,
                seg.length(),
                req
            )),
            Some(_) => {}
        }
    }
    Critique::from_messages("stay_duration", messages)
}

fn flights(q: &TripQuery, p: &TripPlan) -> Critique {
    let messages = p
        .segments
        .windows(2)
        .filter(|pair| !q.has_flight(&pair[0].city, &pair[1].city))
        .map(|pair| format!("There is no direct flight from {} to {}", pair[0].city, pair[1].city))
        .collect();
    Critique::from_messages("flights", messages)
}

fn events(q: &TripQuery, p: &TripPlan) -> Critique {
    let messages = q
        .events
        .iter()
        .filter(|e| {
            !p.segments.iter().any(|s| {
                s.city == e.city && s.start_day.get() <= e.start_day && e.end_day <= s.end_day.get()
            })
        })
        .map(|e| format!("You must be in {} between day {} and day {}", e.city, e.start_day, e.end_day))
        .collect();
    Critique::from_messages("events", messages)
}

fn total_duration(q: &TripQuery, p: &TripPlan) -> Critique {
    let mut messages = Vec::new();
    let total: u32 = p.segments.iter().map(|s| s.length()).sum();
    let expected = q.total_days + (p.segments.len() as u32).saturating_sub(1);
    if total != expected {
        messages.push(format!("Total duration of plan is {total}, expected {expected}"));
    }

    let mut visits: BTreeMap<&str, usize> = BTreeMap::new();
    for seg in &p.segments {
        *visits.entry(seg.city.as_str()).or_default() += 1;
    }
    let mut reported = Vec::new();
    for seg in &p.segments {
        if visits[seg.city.as_str()] > 1 && !reported.contains(&seg.city.as_str()) {
            messages.push(format!("{} is visited more than once", seg.city));
            reported.push(seg.city.as_str());
        }
    }
    for stay in &q.stays {
        if !visits.contains_key(stay.city.as_str()) {
            messages.push(format!("{} is not visited", stay.city));
        }
    }

    if let Some(first) = p.segments.first() {
        if first.start_day.get() != 1 {
            messages.push(format!("The plan must start on day 1, found day {}", first.start_day));
        }
    }
    for pair in p.segments.windows(2) {
        if pair[1].start_day != pair[0].end_day {
            messages.push(format!(
                "The stay in {} starts on day {} but the stay in {} ends on day {}",
                pair[1].city, pair[1].start_day, pair[0].city, pair[0].end_day
            ));
        }
    }
    if let Some(last) = p.segments.last() {
        if last.end_day.get() != q.total_days {
            messages.push(format!(
                "The plan ends on day {}, expected day {}",
                last.end_day, q.total_days
            ));
        }
    }
    Critique::from_messages("total_duration", messages)
}
