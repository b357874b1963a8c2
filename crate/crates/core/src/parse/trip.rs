use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

use super::{after_solution_marker, FormatCritique, PlanDocument};
use crate::domain::{TripPlan, TripSegment};

struct TripPatterns {
    day_line: Regex,
    visit: Regex,
}

fn patterns() -> &'static TripPatterns {
    static RE: OnceLock<TripPatterns> = OnceLock::new();
    RE.get_or_init(|| TripPatterns {
        day_line: Regex::new(r"^\s*(?:\*\*)?\s*Day\s+(\d{1,4})\s*(?:-\s*(\d{1,4}))?\s*:\s*(?:\*\*)?\s*(.*?)\s*$")
            .expect("day line regex"),
        visit: Regex::new(
            r"^(?:Arriving in (.+?) and visit (.+?)|[Vv]isit (.+?)) for (\d{1,4}) days?\.?$",
        )
        .expect("visit regex"),
    })
}

/// Extracts stay segments from the `**Day A-B:** ...` lines after `SOLUTION:`.
///
/// Only visit/arrive lines create segments; flight lines and lines that merely
/// restate an event are ignored.
pub fn parse_trip_plan(text: &str) -> FormatCritique {
    let Some(body) = after_solution_marker(text) else {
        return FormatCritique::fail("The response must start with 'SOLUTION:'");
    };
    let p = patterns();
    let mut segments = Vec::new();
    let mut errors = Vec::new();

    for line in body.lines() {
        let Some(caps) = p.day_line.captures(line) else {
            continue;
        };
        let Some(end_match) = caps.get(2) else {
            continue;
        };
        let Some(visit) = p.visit.captures(&caps[3]) else {
            continue;
        };
        let city = visit
            .get(2)
            .or_else(|| visit.get(3))
            .map(|m| m.as_str().trim().to_string())
            .unwrap_or_default();
        let (Ok(start), Ok(end)) = (caps[1].parse::<u32>(), end_match.as_str().parse::<u32>()) else {
            errors.push(format!("Unreadable day range in '{}'", line.trim()));
            continue;
        };
        if start == 0 {
            errors.push(format!("Segment for {city} starts on day 0"));
            continue;
        }
        match TripSegment::new(city.clone(), start, end) {
            Some(segment) => segments.push(segment),
            None => errors.push(format!(
                "Segment for {city} has an inverted day range {start}-{end}"
            )),
        }
    }

    if !errors.is_empty() {
        return FormatCritique::failed(errors);
    }
    if segments.is_empty() {
        return FormatCritique::fail(
            "No trip segments found; expected lines such as '**Day 1-5:** Arriving in CITY and visit CITY for 5 days.'",
        );
    }
    FormatCritique::ok(PlanDocument::Trip(TripPlan { segments }), Vec::new())
}

pub fn render_trip(plan: &TripPlan) -> String {
    let cities: BTreeSet<&str> = plan.segments.iter().map(|s| s.city.as_str()).collect();
    let last_day = plan.segments.last().map(|s| s.end_day.get()).unwrap_or(0);
    let noun = if cities.len() == 1 { "city" } else { "cities" };
    let mut out = format!(
        "SOLUTION: Here is the trip plan for visiting the {} European {noun} for {last_day} days:\n\n",
        cities.len()
    );
    let plural = |n: u32| if n == 1 { "day" } else { "days" };
    for (i, seg) in plan.segments.iter().enumerate() {
        let (a, b, len) = (seg.start_day, seg.end_day, seg.length());
        if i == 0 {
            out.push_str(&format!(
                "**Day {a}-{b}:** Arriving in {c} and visit {c} for {len} {}.\n",
                plural(len),
                c = seg.city
            ));
        } else {
            let prev = &plan.segments[i - 1];
            out.push_str(&format!("**Day {a}:** Fly from {} to {}.\n", prev.city, seg.city));
            out.push_str(&format!(
                "**Day {a}-{b}:** Visit {} for {len} {}.\n",
                seg.city,
                plural(len)
            ));
        }
    }
    out
}
