//! Random candidate plans near an instance's witness, valid or not.

use modulo_core::domain::{
    CalendarProposal, CalendarQuery, CurrentCity, MeetingPlan, MeetingQuery, MeetingStep, PlaceRef, TravelPlanDay,
    TravelTask, TripPlan, TripQuery, TripSegment,
};
use modulo_core::time::{TimeInterval, TimeOfDay, Weekday};
use modulo_core::{PlanDocument, Query};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub fn candidate<R: Rng>(query: &Query, witness: Option<&PlanDocument>, rng: &mut R) -> PlanDocument {
    match (query, witness) {
        (Query::Calendar(q), w) => PlanDocument::Calendar(calendar(q, w, rng)),
        (Query::Trip(q), Some(PlanDocument::Trip(w))) => PlanDocument::Trip(trip(q, w, rng)),
        (Query::Meeting(q), w) => PlanDocument::Meeting(meeting(q, w, rng)),
        (Query::Travel(t), Some(PlanDocument::Travel(w))) => PlanDocument::Travel(travel(t, w, rng)),
        _ => panic!("no witness to perturb"),
    }
}

fn slot(start: u32, len: u32) -> Option<TimeInterval> {
    TimeInterval::from_minutes(start, start + len).ok()
}

fn calendar<R: Rng>(q: &CalendarQuery, w: Option<&PlanDocument>, rng: &mut R) -> CalendarProposal {
    let witness = match w {
        Some(PlanDocument::Calendar(p)) => Some(*p),
        _ => None,
    };
    let pick = rng.random_range(0..10);
    if let (Some(p), 0..=1) = (witness, pick) {
        return p;
    }
    if let (Some(p), 2..=4) = (witness, pick) {
        let shift = rng.random_range(-24i32..=24) * 5;
        let start = (p.slot.start().minutes() as i32 + shift).max(0) as u32;
        if let Some(s) = slot(start, p.slot.duration()) {
            return CalendarProposal { day: p.day, slot: s };
        }
        return p;
    }
    let day = if rng.random_bool(0.1) {
        *Weekday::ALL.choose(rng).unwrap()
    } else {
        *q.candidate_days.choose(rng).unwrap()
    };
    let len = if rng.random_bool(0.8) {
        q.duration
    } else {
        rng.random_range(1..=8) * 15
    };
    let lo = q.work_window.start().minutes().saturating_sub(60);
    let hi = q.work_window.end().minutes();
    let start = lo + rng.random_range(0..=(hi - lo) / 5) * 5;
    let slot = slot(start, len).unwrap_or(q.work_window);
    CalendarProposal { day, slot }
}

/// Consecutive segments sharing flight days.
fn chain_segments(stays: &[(String, u32)]) -> TripPlan {
    let mut start = 1;
    let mut segments = Vec::new();
    for (city, len) in stays {
        let end = start + len.saturating_sub(1);
        segments.push(TripSegment::new(city.clone(), start, end).unwrap());
        start = end;
    }
    TripPlan { segments }
}

fn trip<R: Rng>(q: &TripQuery, w: &TripPlan, rng: &mut R) -> TripPlan {
    let mut stays: Vec<(String, u32)> = w.segments.iter().map(|s| (s.city.clone(), s.length())).collect();
    match rng.random_range(0..8) {
        0 => return w.clone(),
        1 if stays.len() > 1 => {
            let i = rng.random_range(0..stays.len() - 1);
            stays.swap(i, i + 1);
        }
        2 => stays.shuffle(rng),
        3 if stays.len() > 1 => {
            // Move one day across a boundary.
            let i = rng.random_range(0..stays.len() - 1);
            if rng.random_bool(0.5) && stays[i].1 > 1 {
                stays[i].1 -= 1;
                stays[i + 1].1 += 1;
            } else if stays[i + 1].1 > 1 {
                stays[i].1 += 1;
                stays[i + 1].1 -= 1;
            }
        }
        4 => {
            let i = rng.random_range(0..stays.len());
            stays[i].0 = q.stays.choose(rng).unwrap().city.clone();
        }
        5 if stays.len() > 1 => {
            stays.pop();
        }
        6 => {
            let i = rng.random_range(0..stays.len());
            stays[i].1 = (stays[i].1 as i32 + rng.random_range(-2..=2)).max(1) as u32;
        }
        _ => {
            let mut plan = w.clone();
            let i = rng.random_range(0..plan.segments.len());
            let seg = &mut plan.segments[i];
            let end = seg.end_day.get() + 1;
            *seg = TripSegment::new(seg.city.clone(), seg.start_day.get(), end).unwrap();
            return plan;
        }
    }
    chain_segments(&stays)
}

fn at(minutes: u32) -> Option<TimeOfDay> {
    TimeOfDay::from_minutes(minutes).ok()
}

/// A schedule built greedily in random friend order, sometimes overrunning
/// windows or miscounting travel.
fn greedy_meeting<R: Rng>(q: &MeetingQuery, rng: &mut R) -> MeetingPlan {
    let mut steps = vec![MeetingStep::Start {
        location: q.start_location.clone(),
        time: q.arrival,
    }];
    let mut loc = q.start_location.clone();
    let mut t = q.arrival.minutes();
    let mut order: Vec<_> = q.friends.iter().collect();
    order.shuffle(rng);
    let sloppy = rng.random_bool(0.3);
    for f in order {
        if rng.random_bool(0.2) {
            continue;
        }
        let mark = (steps.len(), loc.clone(), t);
        let mut travel = if loc == f.location {
            None
        } else {
            q.travel_minutes(&loc, &f.location)
        };
        if sloppy && rng.random_bool(0.2) {
            travel = travel.map(|m| m.saturating_sub(rng.random_range(1..=10)));
        }
        if let Some(m) = travel {
            let Some(arrive) = at(t + m) else { break };
            steps.push(MeetingStep::Travel {
                to: f.location.clone(),
                minutes: m,
                arrive,
            });
            t += m;
        }
        let start = t.max(f.window.start().minutes());
        if start > t {
            let Some(until) = at(start) else { break };
            if !(sloppy && rng.random_bool(0.2)) {
                steps.push(MeetingStep::Wait { until });
            }
        }
        let mut dur = f.min_duration + [0, 0, 15, 30].choose(rng).unwrap();
        if sloppy && rng.random_bool(0.2) {
            dur = dur.saturating_sub(rng.random_range(5..=30)).max(5);
        }
        let (Some(s), Some(e)) = (at(start), at(start + dur)) else { break };
        if start + dur > f.window.end().minutes() && !(sloppy && rng.random_bool(0.5)) {
            steps.truncate(mark.0);
            loc = mark.1;
            t = mark.2;
            continue;
        }
        steps.push(MeetingStep::Meet {
            friend: f.name.clone(),
            start: s,
            end: e,
        });
        loc = f.location.clone();
        t = start + dur;
    }
    MeetingPlan { steps }
}

fn first_minute(step: &MeetingStep) -> u32 {
    match step {
        MeetingStep::Start { time, .. } => time.minutes(),
        MeetingStep::Travel { arrive, .. } => arrive.minutes(),
        MeetingStep::Wait { until } => until.minutes(),
        MeetingStep::Meet { start, .. } => start.minutes(),
    }
}

fn meeting<R: Rng>(q: &MeetingQuery, w: Option<&PlanDocument>, rng: &mut R) -> MeetingPlan {
    let witness = match w {
        Some(PlanDocument::Meeting(p)) => Some(p),
        _ => None,
    };
    match (witness, rng.random_range(0..6)) {
        (Some(p), 0) => p.clone(),
        (Some(p), 1) if p.steps.len() > 1 => {
            let mut p = p.clone();
            let i = rng.random_range(1..p.steps.len());
            p.steps.remove(i);
            p
        }
        (Some(p), 2) => {
            // Stretch or shrink the first meeting, staying in time order.
            let mut p = p.clone();
            let delta = rng.random_range(-20i32..=20);
            if let Some(i) = p.steps.iter().position(|s| matches!(s, MeetingStep::Meet { .. })) {
                let next = p.steps.get(i + 1).map(first_minute).unwrap_or(u32::MAX);
                if let MeetingStep::Meet { start, end, .. } = &mut p.steps[i] {
                    let shifted = (end.minutes() as i32 + delta).max(0) as u32;
                    if let Some(e) = at(shifted.clamp(start.minutes() + 1, next.max(start.minutes() + 1))) {
                        *end = e;
                    }
                }
            }
            p
        }
        _ => greedy_meeting(q, rng),
    }
}

fn any_restaurant<R: Rng>(t: &TravelTask, rng: &mut R) -> Option<PlaceRef> {
    t.sandbox.restaurants.choose(rng).map(|r| PlaceRef::new(&r.name, &r.city))
}

fn travel<R: Rng>(t: &TravelTask, w: &[TravelPlanDay], rng: &mut R) -> Vec<TravelPlanDay> {
    let mut plan = w.to_vec();
    let sb = &t.sandbox;
    for _ in 0..rng.random_range(0..=3) {
        let d = rng.random_range(0..plan.len());
        let day = &mut plan[d];
        match rng.random_range(0..9) {
            0 => day.breakfast = any_restaurant(t, rng),
            1 => day.lunch = any_restaurant(t, rng),
            2 => day.dinner = if rng.random_bool(0.8) { any_restaurant(t, rng) } else { None },
            3 => {
                day.accommodation = sb
                    .accommodations
                    .choose(rng)
                    .map(|a| PlaceRef::new(&a.name, &a.city))
            }
            4 => day.people_number = (day.people_number as i32 + [-1, 1].choose(rng).unwrap()).max(1) as u32,
            5 => {
                let n = rng.random_range(0..=2);
                day.attraction = sb
                    .attractions
                    .choose_multiple(rng, n)
                    .map(|a| PlaceRef::new(&a.name, &a.city))
                    .collect()
            }
            6 => {
                day.transportation = match rng.random_range(0..4) {
                    0 => None,
                    1 => sb.flights.choose(rng).map(|f| {
                        format!(
                            "Flight Number: {}, from {} to {}, Departure Time: {}, Arrival Time: {}",
                            f.flight_number,
                            f.origin,
                            f.dest,
                            f.dep.to_24h(),
                            f.arr.to_24h()
                        )
                    }),
                    2 => sb
                        .ground_transport
                        .choose(rng)
                        .map(|g| format!("{}, from {} to {}, cost: {}", g.mode.label(), g.origin, g.dest, g.cost)),
                    _ => Some("Walk, from here to there".to_string()),
                }
            }
            7 => {
                let cities: Vec<&String> = t.query.destinations.iter().chain([&t.query.origin]).collect();
                day.current_city = CurrentCity::City((*cities.choose(rng).unwrap()).clone());
            }
            _ => {
                // Reuse a restaurant from another meal.
                if let Some(r) = day.lunch.clone().or(day.breakfast.clone()) {
                    day.dinner = Some(r);
                }
            }
        }
    }
    plan
}
