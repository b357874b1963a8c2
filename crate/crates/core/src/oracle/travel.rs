use std::collections::BTreeSet;

use super::{ensure_size, CancelToken, OracleError, OracleVerdict};
use crate::domain::{
    Accommodation, CurrentCity, GroundCostMode, GroundMode, Money, PlaceRef, TransportBan,
    TravelConstraint, TravelPlanDay, TravelSandbox, TravelTask,
};
use crate::parse::PlanDocument;
use crate::time::DayIndex;

pub const MAX_ROWS_PER_TABLE: usize = 8;
pub const MAX_DESTINATIONS: usize = 3;
pub const MAX_TRAVEL_DAYS: u32 = 7;

/// A transportation field read token by token.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ride {
    Air(String),
    Road(GroundMode, String, String),
}

fn read_ride(text: &str) -> Option<Ride> {
    let text = text.trim();
    let lower = text.to_ascii_lowercase();
    if lower.starts_with("flight number:") {
        let number: String = text["flight number:".len()..]
            .trim_start()
            .chars()
            .take_while(char::is_ascii_alphanumeric)
            .collect();
        return (!number.is_empty()).then_some(Ride::Air(number));
    }
    let (mode, rest) = if lower.starts_with("self-driving") {
        (GroundMode::SelfDriving, &text["self-driving".len()..])
    } else if lower.starts_with("taxi") {
        (GroundMode::Taxi, &text["taxi".len()..])
    } else {
        return None;
    };
    let rest = rest.trim_start().strip_prefix(',')?.trim_start().strip_prefix("from ")?;
    let (from, tail) = rest.split_once(" to ")?;
    let to = tail.split(',').next()?.trim();
    (!from.trim().is_empty() && !to.is_empty()).then(|| Ride::Road(mode, from.trim().to_string(), to.to_string()))
}

/// Route and fare of a ride, or None when the sandbox lacks it.
fn ride_facts(sb: &TravelSandbox, ride: &Ride) -> Option<(String, String, Money, bool)> {
    match ride {
        Ride::Air(n) => sb
            .flights
            .iter()
            .find(|f| f.flight_number == *n)
            .map(|f| (f.origin.clone(), f.dest.clone(), f.price, true)),
        Ride::Road(m, a, b) => sb
            .ground_transport
            .iter()
            .find(|g| g.mode == *m && g.origin == *a && g.dest == *b)
            .map(|g| (g.origin.clone(), g.dest.clone(), g.cost, false)),
    }
}

fn listing<'a>(sb: &'a TravelSandbox, p: &PlaceRef) -> Option<&'a Accommodation> {
    sb.accommodations.iter().find(|a| a.name == p.name && a.city == p.city)
}

/// Line-item total of a plan: every priced entity times its head count.
pub fn brute_force_cost(task: &TravelTask, plan: &[TravelPlanDay]) -> Option<Money> {
    let sb = &task.sandbox;
    let mut items: Vec<Money> = Vec::new();
    for d in plan {
        let heads = u64::from(d.people_number);
        if let Some(text) = &d.transportation {
            let (_, _, fare, air) = ride_facts(sb, &read_ride(text)?)?;
            let per_group = !air && task.cost_model.ground == GroundCostMode::Group;
            items.push(if per_group { fare } else { fare.times(heads) });
        }
        for meal in [&d.breakfast, &d.lunch, &d.dinner].into_iter().flatten() {
            let r = sb.restaurants.iter().find(|r| r.name == meal.name && r.city == meal.city)?;
            items.extend(std::iter::repeat_n(r.average_cost, heads as usize));
        }
        if let Some(p) = &d.accommodation {
            let a = listing(sb, p)?;
            let cap = u64::from(a.maximum_occupancy.max(1));
            let rooms = heads.div_ceil(cap);
            items.extend(std::iter::repeat_n(a.price_per_night, rooms as usize));
        }
    }
    Some(items.into_iter().sum())
}

fn room_ok(task: &TravelTask, a: &Accommodation) -> bool {
    task.query.constraints.iter().all(|c| match c {
        TravelConstraint::RoomRule(rule) => !a.house_rules.contains(rule),
        TravelConstraint::RoomType(req) => req.accepts(a.room_type),
        _ => true,
    })
}

fn ride_allowed(task: &TravelTask, ride: &Ride) -> bool {
    task.query.constraints.iter().all(|c| {
        !matches!(
            (c, ride),
            (TravelConstraint::TransportMode(TransportBan::NoFlight), Ride::Air(_))
                | (TravelConstraint::TransportMode(TransportBan::NoSelfDriving), Ride::Road(GroundMode::SelfDriving, ..))
        )
    })
}

/// Independent restatement of every travel rule; true iff the plan is acceptable.
pub fn travel_plan_is_valid(task: &TravelTask, plan: &[TravelPlanDay]) -> bool {
    let q = &task.query;
    let sb = &task.sandbox;
    let n = plan.len();
    if n == 0 || n as u32 != q.days {
        return false;
    }
    let on_route = |c: &str| c == q.origin || q.destinations.iter().any(|d| d == c);
    let mut used_restaurants: BTreeSet<&PlaceRef> = BTreeSet::new();
    let mut cuisines_seen: BTreeSet<String> = BTreeSet::new();
    let mut stops: Vec<&str> = Vec::new();
    let mut nights_in_row: Vec<(&PlaceRef, u32)> = Vec::new();

    for (i, d) in plan.iter().enumerate() {
        let last_day = i + 1 == n;
        if d.day.get() as usize != i + 1 || d.people_number != q.people {
            return false;
        }
        let (from, to) = match &d.current_city {
            CurrentCity::City(c) => (c.as_str(), c.as_str()),
            CurrentCity::Transition { from, to } => (from.as_str(), to.as_str()),
        };
        let moving = matches!(d.current_city, CurrentCity::Transition { .. });
        if !on_route(from) || !on_route(to) {
            return false;
        }
        if i == 0 && !(moving && from == q.origin) {
            return false;
        }
        if last_day && !(moving && to == q.origin) {
            return false;
        }
        if i > 0 && plan[i - 1].current_city.arrival() != from {
            return false;
        }
        match (&d.transportation, moving) {
            (None, true) | (Some(_), false) => return false,
            (None, false) => {}
            (Some(text), true) => {
                let Some(ride) = read_ride(text) else { return false };
                let Some((a, b, _, _)) = ride_facts(sb, &ride) else { return false };
                if a != from || b != to || !ride_allowed(task, &ride) {
                    return false;
                }
            }
        }
        let here = |city: &str| city == from || city == to;
        for meal in [&d.breakfast, &d.lunch, &d.dinner].into_iter().flatten() {
            let Some(r) = sb.restaurants.iter().find(|r| r.name == meal.name && r.city == meal.city) else {
                return false;
            };
            if !here(&r.city) || !used_restaurants.insert(meal) {
                return false;
            }
            cuisines_seen.extend(r.cuisines.iter().map(|c| c.to_ascii_lowercase()));
        }
        for spot in &d.attraction {
            let known = sb.attractions.iter().any(|a| a.name == spot.name && a.city == spot.city);
            if !known || !here(&spot.city) {
                return false;
            }
        }
        match (&d.accommodation, last_day) {
            (Some(_), true) | (None, false) => return false,
            (None, true) => {}
            (Some(p), false) => {
                let Some(a) = listing(sb, p) else { return false };
                if a.city != to || !room_ok(task, a) {
                    return false;
                }
                match nights_in_row.last_mut() {
                    Some((prev, k)) if *prev == p => *k += 1,
                    _ => nights_in_row.push((p, 1)),
                }
            }
        }
        if !last_day {
            if to == q.origin {
                return false;
            }
            if stops.last() != Some(&to) {
                if stops.contains(&to) {
                    return false;
                }
                stops.push(to);
            }
        }
    }
    if !q.destinations.iter().all(|d| stops.contains(&d.as_str())) {
        return false;
    }
    let nights_ok = nights_in_row
        .iter()
        .all(|(p, k)| listing(sb, p).is_some_and(|a| *k >= a.minimum_nights));
    let cuisine_ok = q.constraints.iter().all(|c| match c {
        TravelConstraint::Cuisine(want) => cuisines_seen.contains(&want.to_ascii_lowercase()),
        _ => true,
    });
    nights_ok && cuisine_ok && brute_force_cost(task, plan).is_some_and(|c| c <= q.budget)
}

pub fn solve_travel_small(task: &TravelTask) -> Result<OracleVerdict, OracleError> {
    solve_travel_small_with(task, &CancelToken::new())
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Ways to split `total` nights into `parts` stays of at least one night.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts as u32 - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Candidate {
    cost: Money,
    days: Vec<TravelPlanDay>,
}

/// Exhaustive over city orders and stay splits. Within one split the cheapest
/// ride per leg, the cheapest eligible listing per stay and the cheapest set of
/// restaurants covering the cuisine requirements are optimal, since none of
/// those choices interact with any other rule.
pub fn solve_travel_small_with(task: &TravelTask, cancel: &CancelToken) -> Result<OracleVerdict, OracleError> {
    let q = &task.query;
    let sb = &task.sandbox;
    ensure_size("destinations", q.destinations.len(), MAX_DESTINATIONS)?;
    ensure_size("days", q.days as usize, MAX_TRAVEL_DAYS as usize)?;
    for (what, rows) in [
        ("accommodation rows", sb.accommodations.len()),
        ("restaurant rows", sb.restaurants.len()),
        ("attraction rows", sb.attractions.len()),
        ("flight rows", sb.flights.len()),
        ("ground transport rows", sb.ground_transport.len()),
    ] {
        ensure_size(what, rows, MAX_ROWS_PER_TABLE)?;
    }

    let mut best: Option<Candidate> = None;
    let nights = q.days.saturating_sub(1);
    for order in permutations(&q.destinations) {
        for split in compositions(nights, order.len()) {
            cancel.check()?;
            if let Some(c) = build_candidate(task, &order, &split) {
                if c.cost <= q.budget && best.as_ref().is_none_or(|b| c.cost < b.cost) {
                    best = Some(c);
                }
            }
        }
    }
    Ok(match best {
        Some(c) => OracleVerdict::witnessed(PlanDocument::Travel(c.days), None),
        None => OracleVerdict::invalid(),
    })
}

fn cheapest_ride(task: &TravelTask, from: &str, to: &str) -> Option<(String, Money)> {
    let people = u64::from(task.query.people);
    let flights = task
        .sandbox
        .flights
        .iter()
        .filter(|f| f.origin == from && f.dest == to)
        .map(|f| (Ride::Air(f.flight_number.clone()), f.price.times(people)));
    let roads = task
        .sandbox
        .ground_transport
        .iter()
        .filter(|g| g.origin == from && g.dest == to)
        .map(|g| {
            let fare = match task.cost_model.ground {
                GroundCostMode::Group => g.cost,
                GroundCostMode::PerPerson => g.cost.times(people),
            };
            (Ride::Road(g.mode, g.origin.clone(), g.dest.clone()), fare)
        });
    flights
        .chain(roads)
        .filter(|(r, _)| ride_allowed(task, r))
        .min_by_key(|(_, fare)| *fare)
        .map(|(r, fare)| {
            let text = match r {
                Ride::Air(n) => format!("Flight Number: {n}, from {from} to {to}"),
                Ride::Road(m, a, b) => format!("{}, from {a} to {b}", m.label()),
            };
            (text, fare)
        })
}

fn cheapest_stay<'a>(task: &'a TravelTask, city: &str, nights: u32) -> Option<(&'a Accommodation, Money)> {
    let people = u64::from(task.query.people);
    task.sandbox
        .accommodations
        .iter()
        .filter(|a| a.city == city && a.minimum_nights <= nights && room_ok(task, a))
        .map(|a| {
            let rooms = people.div_ceil(u64::from(a.maximum_occupancy.max(1)));
            (a, a.price_per_night.times(rooms * u64::from(nights)))
        })
        .min_by_key(|(_, cost)| *cost)
}

fn build_candidate(task: &TravelTask, order: &[String], split: &[u32]) -> Option<Candidate> {
    let q = &task.query;
    let n = q.days as usize;
    // City slept in after each day, for days 1..n-1.
    let mut lodging: Vec<&str> = Vec::with_capacity(n);
    for (city, &k) in order.iter().zip(split) {
        lodging.extend(std::iter::repeat_n(city.as_str(), k as usize));
    }
    if lodging.len() + 1 != n {
        return None;
    }
    let mut cost = Money::ZERO;
    let mut days = Vec::with_capacity(n);
    for d in 0..n {
        let from = if d == 0 { q.origin.as_str() } else { lodging[d - 1] };
        let to = if d + 1 == n { q.origin.as_str() } else { lodging[d] };
        let (current_city, transportation) = if from == to {
            (CurrentCity::City(to.to_string()), None)
        } else {
            let (text, fare) = cheapest_ride(task, from, to)?;
            cost += fare;
            (
                CurrentCity::Transition {
                    from: from.to_string(),
                    to: to.to_string(),
                },
                Some(text),
            )
        };
        days.push(TravelPlanDay {
            day: DayIndex::new(d as u32 + 1)?,
            people_number: q.people,
            current_city,
            transportation,
            breakfast: None,
            attraction: Vec::new(),
            lunch: None,
            dinner: None,
            accommodation: None,
        });
    }
    let mut d = 0;
    for (city, &k) in order.iter().zip(split) {
        let (listing, stay_cost) = cheapest_stay(task, city, k)?;
        cost += stay_cost;
        for day in &mut days[d..d + k as usize] {
            day.accommodation = Some(PlaceRef::new(listing.name.clone(), listing.city.clone()));
        }
        d += k as usize;
    }
    cost += place_cuisines(task, &mut days)?;
    Some(Candidate { cost, days })
}

/// Adds the cheapest distinct restaurants that cover every required cuisine.
fn place_cuisines(task: &TravelTask, days: &mut [TravelPlanDay]) -> Option<Money> {
    let wanted: Vec<String> = task
        .query
        .constraints
        .iter()
        .filter_map(|c| match c {
            TravelConstraint::Cuisine(x) => Some(x.to_ascii_lowercase()),
            _ => None,
        })
        .collect();
    if wanted.is_empty() {
        return Some(Money::ZERO);
    }
    let people = u64::from(task.query.people);
    let reachable: Vec<usize> = task
        .sandbox
        .restaurants
        .iter()
        .enumerate()
        .filter(|(_, r)| days.iter().any(|d| d.current_city.mentions(&r.city)))
        .map(|(i, _)| i)
        .collect();

    let mut best: Option<(Money, Vec<usize>)> = None;
    for mask in 1u32..(1 << reachable.len()) {
        let chosen: Vec<usize> = (0..reachable.len())
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| reachable[b])
            .collect();
        if chosen.len() > wanted.len() {
            continue;
        }
        let rs: Vec<_> = chosen.iter().map(|&i| &task.sandbox.restaurants[i]).collect();
        let covers = wanted
            .iter()
            .all(|w| rs.iter().any(|r| r.cuisines.iter().any(|c| c.eq_ignore_ascii_case(w))));
        if !covers {
            continue;
        }
        let cost: Money = rs.iter().map(|r| r.average_cost.times(people)).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, chosen));
        }
    }
    let (cost, chosen) = best?;
    for i in chosen {
        let r = &task.sandbox.restaurants[i];
        let place = PlaceRef::new(r.name.clone(), r.city.clone());
        let slot = days.iter_mut().find_map(|d| {
            if !d.current_city.mentions(&r.city) {
                return None;
            }
            [&mut d.breakfast, &mut d.lunch, &mut d.dinner]
                .into_iter()
                .find(|s| s.is_none())
        })?;
        *slot = Some(place);
    }
    Some(cost)
}
