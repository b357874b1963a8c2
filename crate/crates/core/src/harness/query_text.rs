//! Natural-language task text: rendering for generated instances and parsing
//! for ingested ones. Parsing accepts the rendered forms plus the wording
//! variations of the public benchmark prompts.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::domain::{
    Domain, Query, QueryInstance, CalendarQuery, FlightEdge, Friend, MeetingQuery, Participant, Stay, TravelConstraint,
    TravelSandbox, TravelTask, TravelTime, TripEvent, TripQuery, RoomTypeRequirement, TransportBan,
};
use crate::time::{parse_time_of_day, TimeInterval, TimeOfDay, Weekday};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryTextError {
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("unsupported sentence: '{0}'")]
    Unsupported(String),
    #[error("bad value in '{0}'")]
    BadValue(String),
    #[error("{0} queries have no plain-text form; use JSON")]
    NoTextForm(Domain),
}

fn re(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("query text regex"))
}

fn squash(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// "A", "A and B", "A, B and C".
pub fn join_names<S: AsRef<str>>(names: &[S]) -> String {
    match names {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [init @ .., last] => format!(
            "{} and {}",
            init.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(", "),
            last.as_ref()
        ),
    }
}

fn split_names(text: &str) -> Vec<String> {
    text.split(", ")
        .flat_map(|part| part.split(" and "))
        .flat_map(|part| part.split(" or "))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

// ---------------------------------------------------------------------------
// Calendar

fn duration_words(minutes: u32) -> String {
    match minutes {
        30 => "half an hour".into(),
        60 => "one hour".into(),
        90 => "one and a half hours".into(),
        120 => "two hours".into(),
        m => format!("{m} minutes"),
    }
}

fn parse_duration_words(text: &str) -> Option<u32> {
    static NUM: OnceLock<Regex> = OnceLock::new();
    let t = text.trim();
    let fixed = match t {
        "half an hour" => Some(30),
        "one hour" | "an hour" => Some(60),
        "one and a half hours" | "an hour and a half" | "one hour and a half" => Some(90),
        "two hours" => Some(120),
        _ => None,
    };
    fixed.or_else(|| {
        let c = re(&NUM, r"^(\d+) (minutes?|hours?)$").captures(t)?;
        let n: u32 = c[1].parse().ok()?;
        Some(if c[2].starts_with("hour") { n * 60 } else { n })
    })
}

const BUSY_VERBS: [&str; 3] = ["has meetings", "is busy", "has blocked their calendar"];

pub fn render_calendar_query(q: &CalendarQuery) -> String {
    let names: Vec<&str> = q.participants.iter().map(|p| p.name.as_str()).collect();
    let days: Vec<&str> = q.candidate_days.iter().map(|d| d.name()).collect();
    let on = if days.len() == 1 {
        days[0].to_string()
    } else {
        let mut words = join_names(&days);
        if days.len() > 2 {
            words = format!("{} or {}", days[..days.len() - 1].join(", "), days[days.len() - 1]);
        } else {
            words = words.replace(" and ", " or ");
        }
        format!("either {words}")
    };
    let mut out = format!(
        "You need to schedule a meeting for {} for {} between the work hours of {} to {} on {}. \n\n",
        join_names(&names),
        duration_words(q.duration),
        q.work_window.start(),
        q.work_window.end(),
        on
    );
    out.push_str(&format!(
        "Here are the existing schedules for everyone during the {}: \n",
        if days.len() == 1 { "day" } else { "days" }
    ));
    for (i, p) in q.participants.iter().enumerate() {
        let groups: Vec<String> = q
            .candidate_days
            .iter()
            .filter(|d| !p.busy_on(**d).is_empty())
            .map(|d| {
                let blocks: Vec<String> = p
                    .busy_on(*d)
                    .iter()
                    .map(|b| format!("{} to {}", b.start(), b.end()))
                    .collect();
                format!("{d} during {}", blocks.join(", "))
            })
            .collect();
        if groups.is_empty() {
            let span = if days.len() == 1 { "day" } else { "week" };
            out.push_str(&format!("{}'s calendar is wide open the entire {span}.\n", p.name));
        } else {
            out.push_str(&format!(
                "{} {} on {}; \n",
                p.name,
                BUSY_VERBS[i % BUSY_VERBS.len()],
                groups.join(", ")
            ));
        }
    }
    out.push('\n');
    if q.prefer_earliest {
        out.push_str("You would like to schedule the meeting at their earlist availability.\n");
    }
    out.push_str("Find a time that works for everyone's schedule and constraints. ");
    out
}

fn parse_blocks(text: &str) -> Result<BTreeMap<Weekday, Vec<TimeInterval>>, QueryTextError> {
    static DAY: OnceLock<Regex> = OnceLock::new();
    static SPAN: OnceLock<Regex> = OnceLock::new();
    let day_re = re(
        &DAY,
        r"(Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday) during ((?:\d{1,2}:\d{2} to \d{1,2}:\d{2}(?:,\s*)?)+)",
    );
    let span_re = re(&SPAN, r"(\d{1,2}:\d{2}) to (\d{1,2}:\d{2})");
    let mut out: BTreeMap<Weekday, Vec<TimeInterval>> = BTreeMap::new();
    for c in day_re.captures_iter(text) {
        let day: Weekday = c[1].parse().map_err(|_| QueryTextError::BadValue(c[1].to_string()))?;
        for s in span_re.captures_iter(&c[2]) {
            let bad = || QueryTextError::BadValue(s[0].to_string());
            let a = parse_time_of_day(&s[1]).map_err(|_| bad())?;
            let b = parse_time_of_day(&s[2]).map_err(|_| bad())?;
            out.entry(day).or_default().push(TimeInterval::new(a, b).map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// Reads a calendar task. Availability preferences ("does not want to meet
/// on Monday after 13:30") become busy blocks for that participant.
pub fn parse_calendar_query(text: &str) -> Result<CalendarQuery, QueryTextError> {
    static HEAD: OnceLock<Regex> = OnceLock::new();
    static OPEN: OnceLock<Regex> = OnceLock::new();
    static BUSY: OnceLock<Regex> = OnceLock::new();
    static PREF: OnceLock<Regex> = OnceLock::new();
    let head = re(
        &HEAD,
        r"You need to schedule a meeting for (.+?) for (.+?) between the work hours of (\d{1,2}:\d{2}) to (\d{1,2}:\d{2}) on (?:either )?(.+?)\.(?:\s|$)",
    );
    let open = re(&OPEN, r"^(.+?)'s calendar is wide open the entire (?:day|week)\.?$");
    let busy = re(
        &BUSY,
        r"^(.+?) (?:has meetings|is busy|has blocked their calendar) on (.+?);?$",
    );
    let pref = re(
        &PREF,
        r"^(.+?) (?:do not want to meet|does not want to meet|would like to avoid more meetings|would rather not meet|can not meet|cannot meet) on (Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)(?: (before|after) (\d{1,2}:\d{2}))?\.?$",
    );

    let flat = squash(text);
    let c = head.captures(&flat).ok_or(QueryTextError::Missing("meeting request sentence"))?;
    let names = split_names(&c[1]);
    let duration =
        parse_duration_words(&c[2]).ok_or_else(|| QueryTextError::BadValue(c[2].to_string()))?;
    let bad_time = |s: &str| QueryTextError::BadValue(s.to_string());
    let ws = parse_time_of_day(&c[3]).map_err(|_| bad_time(&c[3]))?;
    let we = parse_time_of_day(&c[4]).map_err(|_| bad_time(&c[4]))?;
    let work_window = TimeInterval::new(ws, we).map_err(|_| bad_time(&c[0]))?;
    let candidate_days = split_names(&c[5])
        .iter()
        .map(|d| d.parse::<Weekday>().map_err(|_| QueryTextError::BadValue(d.clone())))
        .collect::<Result<Vec<_>, _>>()?;

    let mut participants: Vec<Participant> = names
        .iter()
        .map(|n| Participant {
            name: n.clone(),
            busy: BTreeMap::new(),
        })
        .collect();
    let mut prefer_earliest = false;

    let body = text
        .split_once("Here are the existing schedules")
        .map(|(_, rest)| rest)
        .ok_or(QueryTextError::Missing("existing schedules"))?;
    for raw in body.lines().skip(1) {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("Find a time") || line.starts_with("SOLUTION") {
            continue;
        }
        if line.contains("earlist availability") || line.contains("earliest availability") {
            prefer_earliest = true;
            continue;
        }
        if let Some(m) = open.captures(line) {
            if !names.iter().any(|n| n == &m[1]) {
                return Err(QueryTextError::Unsupported(line.to_string()));
            }
            continue;
        }
        if let Some(m) = busy.captures(line) {
            let who = participants
                .iter_mut()
                .find(|p| p.name == m[1])
                .ok_or_else(|| QueryTextError::Unsupported(line.to_string()))?;
            for (day, blocks) in parse_blocks(&m[2])? {
                who.busy.entry(day).or_default().extend(blocks);
            }
            continue;
        }
        if let Some(m) = pref.captures(line) {
            let day: Weekday = m[2].parse().map_err(|_| QueryTextError::BadValue(line.to_string()))?;
            let block = match (m.get(3).map(|x| x.as_str()), m.get(4)) {
                (Some(side), Some(t)) => {
                    let t = parse_time_of_day(t.as_str()).map_err(|_| bad_time(line))?;
                    let t = t.max(ws).min(we);
                    if side == "before" {
                        TimeInterval::new(ws, t)
                    } else {
                        TimeInterval::new(t, we)
                    }
                }
                _ => Ok(work_window),
            };
            let who = participants
                .iter_mut()
                .find(|p| p.name == m[1])
                .ok_or_else(|| QueryTextError::Unsupported(line.to_string()))?;
            if let Ok(block) = block {
                who.busy.entry(day).or_default().push(block);
            }
            continue;
        }
        return Err(QueryTextError::Unsupported(line.to_string()));
    }
    Ok(CalendarQuery {
        participants,
        duration,
        work_window,
        candidate_days,
        prefer_earliest,
    })
}

// ---------------------------------------------------------------------------
// Trip

pub fn render_trip_query(q: &TripQuery) -> String {
    let mut out = format!(
        "You plan to visit {} European cities for {} days in total. You only take direct flights to commute between cities.",
        q.stays.len(),
        q.total_days
    );
    let mut event_no = 0;
    for (i, stay) in q.stays.iter().enumerate() {
        let (c, k) = (&stay.city, stay.days);
        let unit = if k == 1 { "day" } else { "days" };
        out.push(' ');
        out.push_str(&match i % 3 {
            0 => format!("You plan to stay in {c} for {k} {unit}."),
            1 => format!("You want to spend {k} {unit} in {c}."),
            _ => format!("You would like to visit {c} for {k} {unit}."),
        });
        for e in q.events.iter().filter(|e| e.city == *c) {
            out.push(' ');
            out.push_str(&render_event(e, event_no));
            event_no += 1;
        }
    }
    let edges: Vec<String> = q
        .flights
        .iter()
        .map(|f| {
            if f.bidirectional {
                format!("{} and {}", f.from, f.to)
            } else {
                format!("from {} to {}", f.from, f.to)
            }
        })
        .collect();
    out.push_str("\n\nHere are the cities that have direct flights:\n");
    out.push_str(&edges.join(", "));
    out.push_str(&format!(
        ".\n\nFind a trip plan of visiting the cities for {} days by taking direct flights to commute between them.",
        q.total_days
    ));
    out
}

fn render_event(e: &TripEvent, n: usize) -> String {
    let (c, s, t) = (&e.city, e.start_day, e.end_day);
    if !e.description.is_empty() {
        return format!("{} in {c} between day {s} and day {t}.", e.description);
    }
    match n % 5 {
        0 => format!("You are going to attend a wedding in {c} between day {s} and day {t}."),
        1 => format!("You want to meet a friend in {c} between day {s} and day {t}."),
        2 => format!("You plan to visit relatives in {c} between day {s} and day {t}."),
        3 => format!("You would like to meet your friends at {c} between day {s} and day {t} to tour together."),
        _ => format!("You have to attend a workshop in {c} between day {s} and day {t}."),
    }
}

pub fn parse_trip_query(text: &str) -> Result<TripQuery, QueryTextError> {
    static HEAD: OnceLock<Regex> = OnceLock::new();
    static STAY: OnceLock<Regex> = OnceLock::new();
    static SPEND: OnceLock<Regex> = OnceLock::new();
    static SHOW: OnceLock<Regex> = OnceLock::new();
    static EVENT: OnceLock<Regex> = OnceLock::new();
    let head = re(&HEAD, r"You plan to visit (\d+) European cities for (\d+) days in total");
    let stay = re(
        &STAY,
        r"^You (?:plan to stay in|would like to visit|want to visit|plan to visit) ([A-Z][\w' -]*?) for (\d+) days?$",
    );
    let spend = re(&SPEND, r"^You (?:want to spend|would like to spend|plan to spend) (\d+) days? in ([A-Z][\w' -]*?)$");
    let show = re(
        &SHOW,
        r"^From day (\d+) to day (\d+), there is (?:a|an) (.+?) you want to attend in ([A-Z][\w' -]*?)$",
    );
    let event = re(
        &EVENT,
        r"^(.+?) (?:in|at) ([A-Z][\w' -]*?) between day (\d+) and day (\d+)(?: .*)?$",
    );

    let flat = squash(text);
    let (constraints, rest) = flat
        .split_once("Here are the cities that have direct flights:")
        .ok_or(QueryTextError::Missing("flight list"))?;
    let h = head.captures(constraints).ok_or(QueryTextError::Missing("trip header"))?;
    let total_days: u32 = h[2].parse().map_err(|_| QueryTextError::BadValue(h[0].to_string()))?;
    let body = &constraints[h.get(0).map_or(0, |m| m.end())..];

    let num = |s: &str| s.parse::<u32>().map_err(|_| QueryTextError::BadValue(s.to_string()));
    let mut stays = Vec::new();
    let mut events = Vec::new();
    for sentence in body.split(". ").map(|s| s.trim().trim_end_matches('.').trim()) {
        if sentence.is_empty() || sentence.starts_with("You only take direct flights") {
            continue;
        }
        if let Some(c) = stay.captures(sentence) {
            stays.push(Stay { city: c[1].to_string(), days: num(&c[2])? });
        } else if let Some(c) = spend.captures(sentence) {
            stays.push(Stay { city: c[2].to_string(), days: num(&c[1])? });
        } else if let Some(c) = show.captures(sentence) {
            events.push(TripEvent {
                city: c[4].to_string(),
                start_day: num(&c[1])?,
                end_day: num(&c[2])?,
                description: String::new(),
            });
        } else if let Some(c) = event.captures(sentence) {
            events.push(TripEvent {
                city: c[2].to_string(),
                start_day: num(&c[3])?,
                end_day: num(&c[4])?,
                description: String::new(),
            });
        } else {
            return Err(QueryTextError::Unsupported(sentence.to_string()));
        }
    }

    let edges_text = rest.split(". Find a trip plan").next().unwrap_or(rest).trim();
    let edges_text = edges_text.trim_end_matches('.');
    let mut flights = Vec::new();
    for edge in edges_text.split(", ").map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(one_way) = edge.strip_prefix("from ") {
            let (a, b) = one_way
                .split_once(" to ")
                .ok_or_else(|| QueryTextError::BadValue(edge.to_string()))?;
            flights.push(FlightEdge { from: a.trim().into(), to: b.trim().into(), bidirectional: false });
        } else {
            let (a, b) = edge
                .split_once(" and ")
                .ok_or_else(|| QueryTextError::BadValue(edge.to_string()))?;
            flights.push(FlightEdge { from: a.trim().into(), to: b.trim().into(), bidirectional: true });
        }
    }
    Ok(TripQuery {
        total_days,
        stays,
        events,
        flights,
    })
}

// ---------------------------------------------------------------------------
// Meeting

pub fn render_meeting_query(q: &MeetingQuery) -> String {
    let mut out = format!(
        "You are visiting {} for the day and want to meet as many friends as possible. Solve the problem by considering various different schedules and picking the best one to optimize your goals.\n\nTravel distances (in minutes):\n",
        q.city
    );
    for t in &q.travel {
        out.push_str(&format!("{} to {}: {}.\n", t.from, t.to, t.minutes));
    }
    out.push_str(&format!(
        "\nCONSTRAINTS: You arrive at {} at {}.",
        q.start_location,
        q.arrival.to_12h()
    ));
    for f in &q.friends {
        out.push_str(&format!(
            " {} will be at {} from {} to {}. You'd like to meet {} for a minimum of {} minutes.",
            f.name,
            f.location,
            f.window.start().to_12h(),
            f.window.end().to_12h(),
            f.name,
            f.min_duration
        ));
    }
    out
}

pub fn parse_meeting_query(text: &str) -> Result<MeetingQuery, QueryTextError> {
    static CITY: OnceLock<Regex> = OnceLock::new();
    static EDGE: OnceLock<Regex> = OnceLock::new();
    static ARRIVE: OnceLock<Regex> = OnceLock::new();
    static FRIEND: OnceLock<Regex> = OnceLock::new();
    const CLOCK: &str = r"(\d{1,2}:\d{2}\s?[AaPp][Mm])";
    let city_re = re(&CITY, r"You are visiting (.+?) for the day");
    let edge_re = re(&EDGE, r"^(.+?) to (.+?): (\d+)\.?$");
    let arrive_re = re(&ARRIVE, &format!(r"You arrive at (.+?) at {CLOCK}\."));
    let friend_re = re(
        &FRIEND,
        &format!(
            r"([A-Z][\w'-]*) will be at (.+?) from {CLOCK} to {CLOCK}\. You'd like to meet ([A-Z][\w'-]*) for a minimum of (\d+) minutes\."
        ),
    );

    let city = city_re
        .captures(text)
        .map(|c| c[1].to_string())
        .unwrap_or_else(|| "San Francisco".to_string());
    let (matrix, constraints) = text
        .split_once("CONSTRAINTS:")
        .ok_or(QueryTextError::Missing("CONSTRAINTS"))?;
    let matrix = matrix
        .split_once("Travel distances (in minutes):")
        .map(|(_, m)| m)
        .ok_or(QueryTextError::Missing("travel distances"))?;
    let mut travel = Vec::new();
    for line in matrix.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let c = edge_re
            .captures(line)
            .ok_or_else(|| QueryTextError::Unsupported(line.to_string()))?;
        travel.push(TravelTime {
            from: c[1].to_string(),
            to: c[2].to_string(),
            minutes: c[3].parse().map_err(|_| QueryTextError::BadValue(line.to_string()))?,
        });
    }

    let flat = squash(constraints);
    let clock = |s: &str| -> Result<TimeOfDay, QueryTextError> {
        parse_time_of_day(s).map_err(|_| QueryTextError::BadValue(s.to_string()))
    };
    let a = arrive_re.captures(&flat).ok_or(QueryTextError::Missing("arrival sentence"))?;
    let mut friends = Vec::new();
    for c in friend_re.captures_iter(&flat) {
        if c[1] != c[5] {
            return Err(QueryTextError::BadValue(c[0].to_string()));
        }
        let window = TimeInterval::new(clock(&c[3])?, clock(&c[4])?)
            .map_err(|_| QueryTextError::BadValue(c[0].to_string()))?;
        friends.push(Friend {
            name: c[1].to_string(),
            location: c[2].to_string(),
            window,
            min_duration: c[6].parse().map_err(|_| QueryTextError::BadValue(c[0].to_string()))?,
        });
    }
    Ok(MeetingQuery {
        start_location: a[1].to_string(),
        arrival: clock(&a[2])?,
        friends,
        travel,
        city,
    })
}

// ---------------------------------------------------------------------------
// Travel

const ACCOMMODATION_HEADER: &str = "Accommodations in ";

fn money_plain(m: crate::domain::Money) -> String {
    m.to_string().trim_start_matches('$').to_string()
}

/// The reference tables a travel prompt exposes, one row per line.
pub fn render_sandbox(sb: &TravelSandbox) -> String {
    let mut out = String::new();
    let mut cities: Vec<&str> = Vec::new();
    for c in sb
        .accommodations
        .iter()
        .map(|a| a.city.as_str())
        .chain(sb.restaurants.iter().map(|r| r.city.as_str()))
        .chain(sb.attractions.iter().map(|a| a.city.as_str()))
    {
        if !cities.contains(&c) {
            cities.push(c);
        }
    }
    if !sb.flights.is_empty() {
        out.push_str("Flights:\nFlight Number | Price | DepTime | ArrTime | OriginCityName | DestCityName\n");
        for f in &sb.flights {
            out.push_str(&format!(
                "{} | {} | {} | {} | {} | {}\n",
                f.flight_number,
                money_plain(f.price),
                f.dep,
                f.arr,
                f.origin,
                f.dest
            ));
        }
    }
    if !sb.ground_transport.is_empty() {
        out.push_str("Ground transport:\nMode | Origin | Destination | Cost\n");
        for g in &sb.ground_transport {
            out.push_str(&format!("{} | {} | {} | {}\n", g.mode.label(), g.origin, g.dest, money_plain(g.cost)));
        }
    }
    for city in &cities {
        let rows: Vec<_> = sb.accommodations.iter().filter(|a| a.city == *city).collect();
        if !rows.is_empty() {
            out.push_str(&format!(
                "{ACCOMMODATION_HEADER}{city}:\nNAME | price | room type | house_rules | minimum nights | maximum occupancy | city\n"
            ));
            for a in rows {
                let rules = if a.house_rules.is_empty() {
                    "-".to_string()
                } else {
                    a.house_rules
                        .iter()
                        .map(|r| format!("No {}", r.label()))
                        .collect::<Vec<_>>()
                        .join(" & ")
                };
                out.push_str(&format!(
                    "{} | {} | {} | {} | {} | {} | {}\n",
                    a.name,
                    money_plain(a.price_per_night),
                    a.room_type.label(),
                    rules,
                    a.minimum_nights,
                    a.maximum_occupancy,
                    a.city
                ));
            }
        }
        let rows: Vec<_> = sb.restaurants.iter().filter(|r| r.city == *city).collect();
        if !rows.is_empty() {
            out.push_str(&format!("Restaurants in {city}:\nName | Average Cost | Cuisines | Aggregate Rating | City\n"));
            for r in rows {
                out.push_str(&format!(
                    "{} | {} | {} | {:.1} | {}\n",
                    r.name,
                    money_plain(r.average_cost),
                    r.cuisines.join(", "),
                    r.rating,
                    r.city
                ));
            }
        }
        let rows: Vec<_> = sb.attractions.iter().filter(|a| a.city == *city).collect();
        if !rows.is_empty() {
            out.push_str(&format!("Attractions in {city}:\nName | City\n"));
            for a in rows {
                out.push_str(&format!("{} | {}\n", a.name, a.city));
            }
        }
    }
    out
}

/// Removes the rows of flagged accommodations; headers and other tables stay.
pub fn filter_context(block: &str, flagged: &std::collections::BTreeSet<String>) -> String {
    if flagged.is_empty() {
        return block.to_string();
    }
    let mut in_accommodations = false;
    let mut out = String::with_capacity(block.len());
    for line in block.split_inclusive('\n') {
        let body = line.trim_end_matches('\n');
        if body.ends_with(':') && !body.contains(" | ") {
            in_accommodations = body.starts_with(ACCOMMODATION_HEADER);
        }
        let name = body.split(" | ").next().unwrap_or("").trim();
        if in_accommodations && body.contains(" | ") && flagged.contains(name) {
            continue;
        }
        out.push_str(line);
    }
    out
}

fn constraint_sentence(c: &TravelConstraint) -> String {
    match c {
        TravelConstraint::RoomRule(r) => format!("The accommodation must allow {}.", r.label()),
        TravelConstraint::RoomType(RoomTypeRequirement::EntireRoom) => "We require an entire room.".into(),
        TravelConstraint::RoomType(RoomTypeRequirement::PrivateRoom) => "We require a private room.".into(),
        TravelConstraint::RoomType(RoomTypeRequirement::SharedRoom) => "We are fine with a shared room only.".into(),
        TravelConstraint::RoomType(RoomTypeRequirement::NotSharedRoom) => "We do not want a shared room.".into(),
        TravelConstraint::Cuisine(x) => format!("We would like to try {x} cuisine."),
        TravelConstraint::TransportMode(TransportBan::NoFlight) => "We do not want to take any flights.".into(),
        TravelConstraint::TransportMode(TransportBan::NoSelfDriving) => "We will not self-drive.".into(),
    }
}

/// The query sentence alone.
pub fn render_travel_request(t: &TravelTask) -> String {
    let q = &t.query;
    let who = if q.people == 1 {
        "1 person".to_string()
    } else {
        format!("{} people", q.people)
    };
    let mut out = format!(
        "Could you create a travel plan for {who} from {} to {} spanning {} days, with a budget of {}?",
        q.origin,
        join_names(&q.destinations),
        q.days,
        q.budget
    );
    for c in &q.constraints {
        out.push(' ');
        out.push_str(&constraint_sentence(c));
    }
    out
}

/// Reference block followed by the query sentence.
pub fn render_travel_query(t: &TravelTask) -> String {
    format!(
        "Given information:\n{}\nQuery: {}",
        render_sandbox(&t.sandbox),
        render_travel_request(t)
    )
}

/// Prompt text for a structured query.
pub fn render_query(query: &Query) -> String {
    match query {
        Query::Travel(t) => render_travel_query(t),
        Query::Trip(q) => render_trip_query(q),
        Query::Meeting(q) => render_meeting_query(q),
        Query::Calendar(q) => render_calendar_query(q),
    }
}

/// Reads a Natural Plan style query text.
pub fn parse_query(domain: Domain, text: &str) -> Result<Query, QueryTextError> {
    match domain {
        Domain::Travel => Err(QueryTextError::NoTextForm(domain)),
        Domain::Trip => parse_trip_query(text).map(Query::Trip),
        Domain::Meeting => parse_meeting_query(text).map(Query::Meeting),
        Domain::Calendar => parse_calendar_query(text).map(Query::Calendar),
    }
}

/// An instance whose prompt is the canonical render of `query`.
pub fn instance_from_query(id: impl Into<String>, query: Query) -> QueryInstance {
    QueryInstance {
        id: id.into(),
        domain: query.domain(),
        subset: query.subset_label(),
        prompt_text: render_query(&query),
        query,
        golden: None,
    }
}

/// An instance that keeps `text` verbatim as its prompt.
pub fn instance_from_text(id: impl Into<String>, domain: Domain, text: &str) -> Result<QueryInstance, QueryTextError> {
    let query = parse_query(domain, text)?;
    Ok(QueryInstance {
        id: id.into(),
        domain,
        subset: query.subset_label(),
        prompt_text: text.to_string(),
        query,
        golden: None,
    })
}
