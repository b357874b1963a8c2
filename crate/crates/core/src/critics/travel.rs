use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use super::{Critique, CritiqueReport};
use crate::domain::{
    CostModel, CurrentCity, GroundCostMode, GroundMode, Money, PlaceRef, TransportBan,
    TravelConstraint, TravelPlanDay, TravelSandbox, TravelTask,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("unresolved entity: {0}")]
    UnresolvedEntity(String),
}

/// A transportation field, decoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leg {
    Flight { number: String },
    Ground { mode: GroundMode, from: String, to: String },
}

fn flight_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(?i:flight number):\s*([A-Za-z0-9]+)").expect("flight regex"))
}

fn ground_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(?i:(self-driving|taxi))\s*,\s*from (.+?) to (.+?)(?:,.*)?$").expect("ground regex")
    })
}

pub fn parse_leg(text: &str) -> Option<Leg> {
    let text = text.trim();
    if let Some(c) = flight_regex().captures(text) {
        return Some(Leg::Flight {
            number: c[1].to_string(),
        });
    }
    let c = ground_regex().captures(text)?;
    let mode = if c[1].eq_ignore_ascii_case("taxi") {
        GroundMode::Taxi
    } else {
        GroundMode::SelfDriving
    };
    Some(Leg::Ground {
        mode,
        from: c[2].trim().to_string(),
        to: c[3].trim().to_string(),
    })
}

/// Endpoints of a leg as the sandbox records them.
fn leg_route<'a>(sandbox: &'a TravelSandbox, leg: &'a Leg) -> Option<(&'a str, &'a str)> {
    match leg {
        Leg::Flight { number } => sandbox.flight(number).map(|f| (f.origin.as_str(), f.dest.as_str())),
        Leg::Ground { mode, from, to } => sandbox
            .ground(from, to, *mode)
            .map(|g| (g.origin.as_str(), g.dest.as_str())),
    }
}

pub fn get_total_cost(sandbox: &TravelSandbox, plan: &[TravelPlanDay]) -> Result<Money, CostError> {
    get_total_cost_with(sandbox, plan, CostModel::default())
}

/// Transport, meals and rooms for the party; attractions are free.
pub fn get_total_cost_with(
    sandbox: &TravelSandbox,
    plan: &[TravelPlanDay],
    model: CostModel,
) -> Result<Money, CostError> {
    let mut total = Money::default();
    for day in plan {
        let people = u64::from(day.people_number);
        if let Some(text) = &day.transportation {
            let leg = parse_leg(text)
                .ok_or_else(|| CostError::UnresolvedEntity(format!("transportation '{text}'")))?;
            total += match &leg {
                Leg::Flight { number } => sandbox
                    .flight(number)
                    .ok_or_else(|| CostError::UnresolvedEntity(format!("flight {number}")))?
                    .price
                    .times(people),
                Leg::Ground { mode, from, to } => {
                    let g = sandbox.ground(from, to, *mode).ok_or_else(|| {
                        CostError::UnresolvedEntity(format!("{} from {from} to {to}", mode.label()))
                    })?;
                    match model.ground {
                        GroundCostMode::Group => g.cost,
                        GroundCostMode::PerPerson => g.cost.times(people),
                    }
                }
            };
        }
        for (_, meal) in day.meals() {
            if let Some(p) = meal {
                let r = sandbox
                    .restaurant(&p.name, &p.city)
                    .ok_or_else(|| CostError::UnresolvedEntity(format!("restaurant {p}")))?;
                total += r.average_cost.times(people);
            }
        }
        if let Some(p) = &day.accommodation {
            let a = sandbox
                .accommodation(&p.name, &p.city)
                .ok_or_else(|| CostError::UnresolvedEntity(format!("accommodation {p}")))?;
            let rooms = people.div_ceil(u64::from(a.maximum_occupancy.max(1)));
            total += a.price_per_night.times(rooms);
        }
    }
    Ok(total)
}

pub fn critique_travel(task: &TravelTask, plan: &[TravelPlanDay]) -> CritiqueReport {
    let entities = entities(&task.sandbox, plan);
    let resolvable = entities.passed;
    CritiqueReport::new(vec![
        minimum_nights(&task.sandbox, plan),
        entities,
        hard_constraints(task, plan),
        budget(task, plan, resolvable),
        routing(task, plan),
        restaurant_repeat(plan),
    ])
}

fn invalid(field: &str, day: &TravelPlanDay) -> String {
    format!(
        "The {field} in day {} is invalid or not in the data provided.",
        day.day.get()
    )
}

fn entities(sandbox: &TravelSandbox, plan: &[TravelPlanDay]) -> Critique {
    let mut messages = Vec::new();
    for day in plan {
        let here = &day.current_city;
        if let Some(text) = &day.transportation {
            let known = parse_leg(text).is_some_and(|leg| leg_route(sandbox, &leg).is_some());
            if !known {
                messages.push(invalid("transportation", day));
            }
        }
        let meal_ok = |p: &PlaceRef| here.mentions(&p.city) && sandbox.restaurant(&p.name, &p.city).is_some();
        if let Some(p) = &day.breakfast {
            if !meal_ok(p) {
                messages.push(invalid("breakfast", day));
            }
        }
        if day
            .attraction
            .iter()
            .any(|p| !here.mentions(&p.city) || sandbox.attraction(&p.name, &p.city).is_none())
        {
            messages.push(invalid("attraction", day));
        }
        for (field, meal) in [("lunch", &day.lunch), ("dinner", &day.dinner)] {
            if let Some(p) = meal {
                if !meal_ok(p) {
                    messages.push(invalid(field, day));
                }
            }
        }
        if let Some(p) = &day.accommodation {
            if p.city != here.arrival() || sandbox.accommodation(&p.name, &p.city).is_none() {
                messages.push(invalid("accommodation", day));
            }
        }
    }
    Critique::from_messages("entities", messages)
}

/// Runs of consecutive days sharing one accommodation, in plan order.
fn accommodation_blocks(plan: &[TravelPlanDay]) -> Vec<(&PlaceRef, u32)> {
    let mut blocks: Vec<(&PlaceRef, u32)> = Vec::new();
    let mut prev: Option<&PlaceRef> = None;
    for day in plan {
        match (&day.accommodation, prev) {
            (Some(p), Some(q)) if p == q => {
                if let Some(last) = blocks.last_mut() {
                    last.1 += 1;
                }
            }
            (Some(p), _) => blocks.push((p, 1)),
            (None, _) => {}
        }
        prev = day.accommodation.as_ref();
    }
    blocks
}

fn minimum_nights(sandbox: &TravelSandbox, plan: &[TravelPlanDay]) -> Critique {
    let messages = accommodation_blocks(plan)
        .into_iter()
        .filter(|(p, nights)| {
            sandbox
                .accommodation(&p.name, &p.city)
                .is_some_and(|a| *nights < a.minimum_nights)
        })
        .map(|(p, _)| format!("The accommodation {p} do not obey the minumum nights rule."))
        .collect();
    Critique::from_messages("minimum_nights", messages)
}

fn distinct_accommodations(plan: &[TravelPlanDay]) -> Vec<&PlaceRef> {
    let mut seen = BTreeSet::new();
    plan.iter()
        .filter_map(|d| d.accommodation.as_ref())
        .filter(|p| seen.insert(*p))
        .collect()
}

fn hard_constraints(task: &TravelTask, plan: &[TravelPlanDay]) -> Critique {
    let sandbox = &task.sandbox;
    let mut messages = Vec::new();
    for constraint in &task.query.constraints {
        match constraint {
            TravelConstraint::RoomRule(rule) => {
                for p in distinct_accommodations(plan) {
                    if let Some(a) = sandbox.accommodation(&p.name, &p.city) {
                        if a.house_rules.contains(rule) {
                            messages.push(format!("The accommodation {p} does not allow {}.", rule.label()));
                        }
                    }
                }
            }
            TravelConstraint::RoomType(req) => {
                for p in distinct_accommodations(plan) {
                    if let Some(a) = sandbox.accommodation(&p.name, &p.city) {
                        if !req.accepts(a.room_type) {
                            messages.push(format!(
                                "The accommodation {p} is a {} but the query asks for {}.",
                                a.room_type.label(),
                                req.label()
                            ));
                        }
                    }
                }
            }
            TravelConstraint::Cuisine(cuisine) => {
                let served = plan.iter().flat_map(|d| d.meals()).any(|(_, meal)| {
                    meal.and_then(|p| sandbox.restaurant(&p.name, &p.city))
                        .is_some_and(|r| r.cuisines.iter().any(|c| c.eq_ignore_ascii_case(cuisine)))
                });
                if !served {
                    messages.push(format!("The plan does not include any restaurant serving {cuisine} cuisine."));
                }
            }
            TravelConstraint::TransportMode(ban) => {
                for day in plan {
                    let leg = day.transportation.as_deref().and_then(parse_leg);
                    let banned = match (ban, &leg) {
                        (TransportBan::NoFlight, Some(Leg::Flight { .. })) => true,
                        (TransportBan::NoSelfDriving, Some(Leg::Ground { mode, .. })) => {
                            *mode == GroundMode::SelfDriving
                        }
                        _ => false,
                    };
                    if banned {
                        messages.push(format!(
                            "The transportation in day {} breaks the {} rule.",
                            day.day.get(),
                            ban.label()
                        ));
                    }
                }
            }
        }
    }
    Critique::from_messages("hard_constraints", messages)
}

/// Unresolvable names are already reported by the entity critic, so the cost
/// failure is only spelled out when that critic found nothing.
fn budget(task: &TravelTask, plan: &[TravelPlanDay], resolvable: bool) -> Critique {
    let mut messages = Vec::new();
    match get_total_cost_with(&task.sandbox, plan, task.cost_model) {
        Ok(cost) if cost > task.query.budget => messages.push(format!(
            "The total cost of the plan is {cost}, which exceeds the budget of {}.",
            task.query.budget
        )),
        Ok(_) => {}
        Err(e) if resolvable => messages.push(format!("The total cost of the plan cannot be computed: {e}.")),
        Err(_) => {}
    }
    Critique::from_messages("budget", messages)
}

fn routing(task: &TravelTask, plan: &[TravelPlanDay]) -> Critique {
    let q = &task.query;
    let mut messages = Vec::new();
    if plan.len() as u32 != q.days {
        messages.push(format!("The plan covers {} days, expected {} days.", plan.len(), q.days));
    }
    if plan.iter().enumerate().any(|(i, d)| d.day.get() as usize != i + 1) {
        messages.push(format!("The days must be numbered 1 to {} in order.", plan.len()));
    }
    for day in plan {
        if day.people_number != q.people {
            messages.push(format!(
                "The number of people in day {} is {}, expected {}.",
                day.day.get(),
                day.people_number,
                q.people
            ));
        }
    }

    let known = |c: &str| c == q.origin || q.destinations.iter().any(|d| d == c);
    if let Some(first) = plan.first() {
        if !matches!(&first.current_city, CurrentCity::Transition { from, .. } if *from == q.origin) {
            messages.push(format!("The trip must start by leaving {} on day 1.", q.origin));
        }
    }
    if let Some(last) = plan.last() {
        if !matches!(&last.current_city, CurrentCity::Transition { to, .. } if *to == q.origin) {
            messages.push(format!("The trip must return to {} on the last day.", q.origin));
        }
        if last.accommodation.is_some() {
            messages.push(format!(
                "No accommodation is needed in day {} after returning to {}.",
                last.day.get(),
                q.origin
            ));
        }
    }

    let mut visited = BTreeSet::new();
    for (i, day) in plan.iter().enumerate() {
        let d = day.day.get();
        let city = &day.current_city;
        if !known(city.departure()) || !known(city.arrival()) {
            messages.push(format!("The current city in day {d} is not part of the trip."));
        }
        if i > 0 && plan[i - 1].current_city.arrival() != city.departure() {
            messages.push(format!("The current city in day {d} does not follow from day {}.", d - 1));
        }
        if i + 1 < plan.len() {
            if city.arrival() == q.origin {
                messages.push(format!("The trip is back in {} before the last day.", q.origin));
            }
            visited.insert(city.arrival());
            if day.accommodation.is_none() {
                messages.push(format!("The accommodation in day {d} is missing."));
            }
        }
        match (city, &day.transportation) {
            (CurrentCity::Transition { .. }, None) => {
                messages.push(format!("The transportation in day {d} is missing."));
            }
            (CurrentCity::Transition { from, to }, Some(text)) => {
                let matches = parse_leg(text)
                    .as_ref()
                    .and_then(|leg| leg_route(&task.sandbox, leg))
                    .is_some_and(|(a, b)| a == from && b == to);
                if !matches {
                    messages.push(format!(
                        "The transportation in day {d} does not go from {from} to {to}."
                    ));
                }
            }
            (CurrentCity::City(_), Some(_)) => {
                messages.push(format!("The transportation in day {d} is set but the day has no travel."));
            }
            (CurrentCity::City(_), None) => {}
        }
    }
    let mut runs: Vec<&str> = Vec::new();
    for day in plan.iter().take(plan.len().saturating_sub(1)) {
        let city = day.current_city.arrival();
        if runs.last() != Some(&city) {
            if runs.contains(&city) {
                messages.push(format!("The trip visits {city} more than once."));
            }
            runs.push(city);
        }
    }
    for dest in &q.destinations {
        if !visited.contains(dest.as_str()) {
            messages.push(format!("The destination {dest} is never visited."));
        }
    }
    Critique::from_messages("routing", messages)
}

fn restaurant_repeat(plan: &[TravelPlanDay]) -> Critique {
    let mut counts: BTreeMap<&PlaceRef, usize> = BTreeMap::new();
    let mut order = Vec::new();
    for (_, meal) in plan.iter().flat_map(|d| d.meals()) {
        if let Some(p) = meal {
            let n = counts.entry(p).or_default();
            *n += 1;
            if *n == 2 {
                order.push(p);
            }
        }
    }
    let messages = order
        .into_iter()
        .map(|p| format!("The restaurant {p} is chosen more than once."))
        .collect();
    Critique::from_messages("restaurant_repeat", messages)
}

/// Accommodations whose listing alone rules them out for this query.
pub fn flag_unfit_accommodations(task: &TravelTask) -> BTreeSet<PlaceRef> {
    let nights = task.query.days.saturating_sub(1);
    let per_city = if task.query.destinations.is_empty() {
        nights
    } else {
        nights / task.query.destinations.len() as u32
    };
    task.sandbox
        .accommodations
        .iter()
        .filter(|a| {
            a.minimum_nights > per_city.max(1)
                || task.query.constraints.iter().any(|c| match c {
                    TravelConstraint::RoomRule(rule) => a.house_rules.contains(rule),
                    TravelConstraint::RoomType(req) => !req.accepts(a.room_type),
                    _ => false,
                })
        })
        .map(|a| PlaceRef::new(a.name.clone(), a.city.clone()))
        .collect()
}

/// Accommodations in `plan` that the minimum-nights or room critics reject
/// and that no other plan for the same query could use either. A listing
/// booked too briefly is only kept out when its minimum stay exceeds the
/// longest possible stay in its city.
pub fn accommodations_flagged_in(task: &TravelTask, plan: &[TravelPlanDay]) -> BTreeSet<PlaceRef> {
    let q = &task.query;
    let longest = q
        .days
        .saturating_sub(1)
        .saturating_sub((q.destinations.len() as u32).saturating_sub(1));
    let room_ok = |a: &crate::domain::Accommodation| {
        q.constraints.iter().all(|c| match c {
            TravelConstraint::RoomRule(rule) => !a.house_rules.contains(rule),
            TravelConstraint::RoomType(req) => req.accepts(a.room_type),
            _ => true,
        })
    };
    let mut out = BTreeSet::new();
    for (p, nights) in accommodation_blocks(plan) {
        let Some(a) = task.sandbox.accommodation(&p.name, &p.city) else { continue };
        let short = nights < a.minimum_nights && a.minimum_nights > longest;
        if short || !room_ok(a) {
            out.insert(p.clone());
        }
    }
    out
}
