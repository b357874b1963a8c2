//! Seeded synthetic instances. Every instance is checked by the matching
//! oracle before it is returned, so a perfect planner can solve all of them.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    validate_query, Accommodation, Attraction, CalendarQuery, CostModel, Domain, Flight,
    FlightEdge, Friend, GroundMode, GroundTransport, HouseRule, MeetingQuery, Money, Participant,
    Query, QueryInstance, Restaurant, RoomType, RoomTypeRequirement, Stay, TransportBan,
    TravelConstraint, TravelQuery, TravelSandbox, TravelTask, TravelTime, TripEvent, TripQuery,
};
use crate::oracle::{self, CancelToken, OracleError, MAX_FRIENDS};
use crate::parse::render_plan;
use crate::time::{TimeInterval, TimeOfDay, Weekday};

use super::query_text;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("parameter {name}={value} is outside {min}..={max}")]
    ParamsOutOfRange {
        name: &'static str,
        value: u32,
        min: u32,
        max: u32,
    },
    #[error("could not produce a satisfiable instance after {0} attempts")]
    Unsatisfiable(u32),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Axis values. Unset axes are drawn at random for each instance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    /// Calendar participants.
    pub participants: Option<u32>,
    /// Calendar candidate days.
    pub days: Option<u32>,
    /// Trip cities.
    pub cities: Option<u32>,
    /// Meeting friends.
    pub friends: Option<u32>,
    /// Travel trip length: 3, 5 or 7.
    pub travel_days: Option<u32>,
    /// Travel hard constraints, 0 to 3.
    pub constraints: Option<u32>,
}

const MAX_ATTEMPTS: u32 = 500;

fn check(name: &'static str, value: Option<u32>, min: u32, max: u32) -> Result<(), GenerateError> {
    match value {
        Some(v) if v < min || v > max => Err(GenerateError::ParamsOutOfRange {
            name,
            value: v,
            min,
            max,
        }),
        _ => Ok(()),
    }
}

impl GenParams {
    pub fn validate(&self, domain: Domain) -> Result<(), GenerateError> {
        match domain {
            Domain::Calendar => {
                check("participants", self.participants, 1, 7)?;
                check("days", self.days, 1, 5)
            }
            Domain::Trip => check("cities", self.cities, 1, oracle::MAX_CITIES as u32),
            Domain::Meeting => check("friends", self.friends, 0, MAX_FRIENDS as u32),
            Domain::Travel => {
                check("travel_days", self.travel_days, 3, 7)?;
                if let Some(d) = self.travel_days {
                    if d % 2 == 0 {
                        return Err(GenerateError::ParamsOutOfRange { name: "travel_days", value: d, min: 3, max: 7 });
                    }
                }
                check("constraints", self.constraints, 0, 3)
            }
        }
    }
}

/// `n` instances from `seed`. Identical arguments give identical output.
pub fn generate_instances(
    domain: Domain,
    params: &GenParams,
    n: usize,
    seed: u64,
) -> Result<Vec<QueryInstance>, GenerateError> {
    params.validate(domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let id = format!("{}-{seed}-{i:04}", domain.name());
            generate_one(domain, params, &mut rng, id)
        })
        .collect()
}

fn generate_one(
    domain: Domain,
    params: &GenParams,
    rng: &mut ChaCha8Rng,
    id: String,
) -> Result<QueryInstance, GenerateError> {
    let cancel = CancelToken::new();
    for _ in 0..MAX_ATTEMPTS {
        let (query, prompt_text) = match domain {
            Domain::Calendar => {
                let q = calendar(params, rng);
                let text = query_text::render_calendar_query(&q);
                (Query::Calendar(q), text)
            }
            Domain::Trip => {
                let q = trip(params, rng);
                let text = query_text::render_trip_query(&q);
                (Query::Trip(q), text)
            }
            Domain::Meeting => {
                let q = meeting(params, rng);
                let text = query_text::render_meeting_query(&q);
                (Query::Meeting(q), text)
            }
            Domain::Travel => {
                let Some(t) = travel(params, rng) else { continue };
                let text = query_text::render_travel_query(&t);
                (Query::Travel(t), text)
            }
        };
        let verdict = oracle::solve(&query, &cancel)?;
        let Some(witness) = verdict.witness.filter(|_| verdict.valid) else {
            continue;
        };
        let instance = QueryInstance {
            id: id.clone(),
            domain,
            subset: query.subset_label(),
            query,
            prompt_text,
            golden: Some(render_plan(&witness)),
        };
        debug_assert!(validate_query(&instance).is_empty(), "{:?}", validate_query(&instance));
        return Ok(instance);
    }
    Err(GenerateError::Unsatisfiable(MAX_ATTEMPTS))
}

// ---------------------------------------------------------------------------

const PEOPLE: [&str; 24] = [
    "Michelle", "Steven", "Jerry", "Roger", "Karen", "Dorothy", "Arthur", "Lisa", "Denise",
    "Bobby", "Ruth", "Eric", "Judy", "Olivia", "Wayne", "Nathan", "Gloria", "Harold", "Diane",
    "Albert", "Walter", "Marie", "Grace", "Samuel",
];

fn calendar(params: &GenParams, rng: &mut ChaCha8Rng) -> CalendarQuery {
    // Two shapes: several people on one day, or two people over several days.
    let multi_day = match (params.participants, params.days) {
        (_, Some(d)) => d > 1,
        (Some(p), None) => p == 2 && rng.random_bool(0.5),
        (None, None) => rng.random_bool(0.5),
    };
    let (n_people, n_days) = if multi_day {
        (params.participants.unwrap_or(2), params.days.unwrap_or_else(|| rng.random_range(2..=5)))
    } else {
        (params.participants.unwrap_or_else(|| rng.random_range(3..=7)), params.days.unwrap_or(1))
    };
    let days: Vec<Weekday> = Weekday::ALL[..n_days as usize].to_vec();
    let duration = if rng.random_bool(0.5) { 30 } else { 60 };
    let window = TimeInterval::from_minutes(540, 1020).expect("work window");
    let names: Vec<&str> = PEOPLE.choose_multiple(rng, n_people as usize).copied().collect();
    let participants = names
        .iter()
        .map(|name| {
            let mut busy = BTreeMap::new();
            if rng.random_bool(0.15) {
                return Participant { name: name.to_string(), busy };
            }
            for &day in &days {
                let mut blocks = Vec::new();
                let mut t = 540;
                while t < 1020 {
                    let len = 30 * rng.random_range(1..=4u32);
                    let end = (t + len).min(1020);
                    if rng.random_bool(0.4) {
                        blocks.push(TimeInterval::from_minutes(t, end).expect("block"));
                    }
                    t = end + 30 * rng.random_range(1..=2u32);
                }
                if !blocks.is_empty() {
                    busy.insert(day, blocks);
                }
            }
            Participant { name: name.to_string(), busy }
        })
        .collect();
    CalendarQuery {
        participants,
        duration,
        work_window: window,
        candidate_days: days,
        prefer_earliest: rng.random_bool(0.3),
    }
}

const CITIES: [&str; 20] = [
    "Berlin", "Prague", "Stuttgart", "Manchester", "Nice", "Reykjavik", "Florence", "Vilnius",
    "Oslo", "Dubrovnik", "Vienna", "Frankfurt", "Valencia", "Edinburgh", "London", "Munich",
    "Budapest", "Porto", "Lyon", "Riga",
];

fn trip(params: &GenParams, rng: &mut ChaCha8Rng) -> TripQuery {
    let n = params.cities.unwrap_or_else(|| rng.random_range(3..=8)) as usize;
    let cities: Vec<&str> = CITIES.choose_multiple(rng, n).copied().collect();
    let stays: Vec<Stay> = cities
        .iter()
        .map(|c| Stay { city: c.to_string(), days: rng.random_range(2..=5) })
        .collect();
    let total_days = stays.iter().map(|s| s.days).sum::<u32>() + 1 - n as u32;

    // A hidden route that the flight graph is built around.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut flights = Vec::new();
    let add = |flights: &mut Vec<FlightEdge>, a: &str, b: &str, both: bool| {
        let dup = flights.iter().any(|f: &FlightEdge| {
            (f.from == a && f.to == b) || (f.from == b && f.to == a)
        });
        if !dup && a != b {
            flights.push(FlightEdge { from: a.into(), to: b.into(), bidirectional: both });
        }
    };
    for w in order.windows(2) {
        add(&mut flights, cities[w[0]], cities[w[1]], rng.random_bool(0.8));
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = cities.choose(rng).copied().unwrap_or_default();
        let b = cities.choose(rng).copied().unwrap_or_default();
        add(&mut flights, a, b, rng.random_bool(0.7));
    }
    flights.shuffle(rng);

    let mut events = Vec::new();
    let mut day = 1;
    for &i in &order {
        let (start, end) = (day, day + stays[i].days - 1);
        if rng.random_bool(0.35) {
            let s = rng.random_range(start..=end);
            let e = rng.random_range(s..=end);
            events.push(TripEvent {
                city: stays[i].city.clone(),
                start_day: s,
                end_day: e,
                description: String::new(),
            });
        }
        day = end;
    }
    // Events are listed next to their city in the query, not in route order.
    events.sort_by_key(|e| stays.iter().position(|s| s.city == e.city));
    TripQuery { total_days, stays, events, flights }
}

const PLACES: [&str; 14] = [
    "Fisherman's Wharf", "Embarcadero", "Golden Gate Park", "Mission District", "Union Square",
    "North Beach", "Pacific Heights", "Sunset District", "Chinatown", "Nob Hill", "Marina District",
    "Haight-Ashbury", "Presidio", "Richmond District",
];

fn meeting(params: &GenParams, rng: &mut ChaCha8Rng) -> MeetingQuery {
    let n = params.friends.unwrap_or_else(|| rng.random_range(1..=8)) as usize;
    let places: Vec<&str> = PLACES.choose_multiple(rng, n + 1).copied().collect();
    let names: Vec<&str> = PEOPLE.choose_multiple(rng, n).copied().collect();
    let start = places[0];
    let mut travel = Vec::new();
    for (i, a) in places.iter().enumerate() {
        for (j, b) in places.iter().enumerate() {
            if i < j {
                let base = rng.random_range(5..=30u32);
                travel.push(TravelTime { from: a.to_string(), to: b.to_string(), minutes: base });
                let back = (base + rng.random_range(0..=4)).saturating_sub(2).max(3);
                travel.push(TravelTime { from: b.to_string(), to: a.to_string(), minutes: back });
            }
        }
    }
    travel.sort_by(|x, y| {
        let key = |t: &TravelTime| {
            (
                places.iter().position(|p| *p == t.from),
                places.iter().position(|p| *p == t.to),
            )
        };
        key(x).cmp(&key(y))
    });
    let friends = names
        .iter()
        .zip(&places[1..])
        .map(|(name, place)| {
            let quarter = |q: u32| q * 15;
            let open = quarter(rng.random_range(32..=80));
            let min_duration = quarter(rng.random_range(1..=8));
            let close = (open + min_duration + quarter(rng.random_range(0..=24))).min(quarter(92));
            Friend {
                name: name.to_string(),
                location: place.to_string(),
                window: TimeInterval::from_minutes(open, close.max(open + min_duration)).expect("window"),
                min_duration,
            }
        })
        .collect();
    MeetingQuery {
        start_location: start.to_string(),
        arrival: TimeOfDay::from_hm(9, 0).expect("arrival"),
        friends,
        travel,
        city: "San Francisco".into(),
    }
}

const US_CITIES: [&str; 12] = [
    "Washington", "Myrtle Beach", "Ithaca", "Charlotte", "Denver", "Austin", "Seattle", "Boston",
    "Atlanta", "Phoenix", "Chicago", "Miami",
];

const CUISINES: [&str; 6] = ["Chinese", "Italian", "Indian", "Mexican", "French", "American"];

const LISTING_WORDS: [&str; 8] = [
    "Cozy", "Sunny", "Spacious", "Quiet", "Modern", "Charming", "Bright", "Classic",
];
const LISTING_KINDS: [&str; 6] = ["studio", "loft", "apartment", "room", "suite", "cottage"];
const DINERS: [&str; 8] = ["Bistro", "Kitchen", "Grill", "Cafe", "House", "Table", "Diner", "Garden"];
const SIGHTS: [&str; 6] = ["Museum", "Park", "Aquarium", "Gallery", "Pier", "Gardens"];

fn travel(params: &GenParams, rng: &mut ChaCha8Rng) -> Option<TravelTask> {
    let days = params
        .travel_days
        .unwrap_or_else(|| *[3u32, 5, 7].choose(rng).unwrap_or(&3));
    let n_dest = ((days - 1) / 2) as usize;
    let picked: Vec<&str> = US_CITIES.choose_multiple(rng, n_dest + 1).copied().collect();
    let origin = picked[0].to_string();
    let destinations: Vec<String> = picked[1..].iter().map(|s| s.to_string()).collect();
    let people = rng.random_range(1..=4u32);

    let mut sb = TravelSandbox::default();
    let route: Vec<&str> = std::iter::once(origin.as_str())
        .chain(destinations.iter().map(String::as_str))
        .chain(std::iter::once(origin.as_str()))
        .collect();
    let mut flight_no = rng.random_range(1_000_000..9_000_000u32);
    for leg in route.windows(2) {
        let (a, b) = (leg[0].to_string(), leg[1].to_string());
        if rng.random_bool(0.85) {
            let dep = rng.random_range(5 * 60..20 * 60u32);
            sb.flights.push(Flight {
                flight_number: format!("F{flight_no}"),
                origin: a.clone(),
                dest: b.clone(),
                price: Money::from_dollars(rng.random_range(60..=400)),
                dep: TimeOfDay::from_minutes(dep).ok()?,
                arr: TimeOfDay::from_minutes(dep + rng.random_range(60..=200)).ok()?,
            });
            flight_no += rng.random_range(1..5000);
        }
        sb.ground_transport.push(GroundTransport {
            origin: a.clone(),
            dest: b.clone(),
            mode: GroundMode::Taxi,
            cost: Money::from_dollars(rng.random_range(40..=600)),
        });
        if rng.random_bool(0.5) {
            sb.ground_transport.push(GroundTransport {
                origin: a,
                dest: b,
                mode: GroundMode::SelfDriving,
                cost: Money::from_dollars(rng.random_range(20..=300)),
            });
        }
    }
    let per_city_listings = if n_dest == 3 { 2 } else { 3 };
    for city in &destinations {
        for _ in 0..per_city_listings {
            let name = format!(
                "{} {} in {city}",
                LISTING_WORDS.choose(rng)?,
                LISTING_KINDS.choose(rng)?
            );
            if sb.accommodation(&name, city).is_some() {
                continue;
            }
            let mut house_rules: Vec<HouseRule> =
                HouseRule::ALL.into_iter().filter(|_| rng.random_bool(0.25)).collect();
            house_rules.sort_by_key(|r| r.label());
            sb.accommodations.push(Accommodation {
                name,
                city: city.clone(),
                price_per_night: Money::from_dollars(rng.random_range(40..=400)),
                room_type: *[RoomType::EntireHome, RoomType::PrivateRoom, RoomType::SharedRoom].choose(rng)?,
                house_rules,
                minimum_nights: *[1u32, 1, 1, 2, 3].choose(rng)?,
                maximum_occupancy: rng.random_range(1..=4),
            });
        }
        for _ in 0..2 {
            let name = format!("{} {}", LISTING_WORDS.choose(rng)?, DINERS.choose(rng)?);
            if sb.restaurant(&name, city).is_some() {
                continue;
            }
            let how_many = rng.random_range(1..=3);
            let cuisines: Vec<String> = CUISINES
                .choose_multiple(rng, how_many)
                .map(|c| c.to_string())
                .collect();
            sb.restaurants.push(Restaurant {
                name,
                city: city.clone(),
                average_cost: Money::from_dollars(rng.random_range(10..=80)),
                cuisines,
                rating: f64::from(rng.random_range(20..=50u32)) / 10.0,
            });
        }
        for _ in 0..2 {
            let name = format!("{city} {}", SIGHTS.choose(rng)?);
            if sb.attraction(&name, city).is_none() {
                sb.attractions.push(Attraction { name, city: city.clone() });
            }
        }
    }

    let k = params.constraints.unwrap_or_else(|| rng.random_range(0..=3)) as usize;
    let mut pool: Vec<TravelConstraint> = vec![
        TravelConstraint::RoomRule(*HouseRule::ALL.choose(rng)?),
        TravelConstraint::RoomType(
            *[
                RoomTypeRequirement::EntireRoom,
                RoomTypeRequirement::PrivateRoom,
                RoomTypeRequirement::NotSharedRoom,
            ]
            .choose(rng)?,
        ),
        TravelConstraint::Cuisine(CUISINES.choose(rng)?.to_string()),
        TravelConstraint::TransportMode(*[TransportBan::NoFlight, TransportBan::NoSelfDriving].choose(rng)?),
    ];
    pool.shuffle(rng);
    pool.truncate(k);

    let mut task = TravelTask {
        query: TravelQuery {
            origin,
            destinations,
            days,
            people,
            budget: Money::from_dollars(1_000_000),
            constraints: pool,
        },
        sandbox: sb,
        cost_model: CostModel::default(),
    };
    let verdict = oracle::solve_travel_small(&task).ok()?;
    let witness = match verdict.witness? {
        crate::parse::PlanDocument::Travel(days) => days,
        _ => return None,
    };
    let cheapest = oracle::brute_force_cost(&task, &witness)?;
    // Leave some slack above the cheapest plan, rounded up to $100.
    let slack = cheapest.cents() * rng.random_range(100..=140u64) / 100;
    task.query.budget = Money::from_cents(slack.div_ceil(10_000) * 10_000);
    Some(task)
}
