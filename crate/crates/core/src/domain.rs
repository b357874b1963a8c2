//! Query and plan data models for the four scheduling domains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::time::{DayIndex, TimeInterval, TimeOfDay, Weekday};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Travel,
    Trip,
    Meeting,
    Calendar,
}

impl Domain {
    pub const ALL: [Domain; 4] = [Domain::Travel, Domain::Trip, Domain::Meeting, Domain::Calendar];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Travel => "travel",
            Domain::Trip => "trip",
            Domain::Meeting => "meeting",
            Domain::Calendar => "calendar",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown domain {s:?} (expected travel, trip, meeting or calendar)"))
    }
}

// ---------------------------------------------------------------------------
// Calendar scheduling

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub name: String,
    #[serde(default)]
    pub busy: BTreeMap<Weekday, Vec<TimeInterval>>,
}

impl Participant {
    pub fn busy_on(&self, day: Weekday) -> &[TimeInterval] {
        self.busy.get(&day).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalendarQuery {
    pub participants: Vec<Participant>,
    /// Meeting length in minutes.
    pub duration: u32,
    pub work_window: TimeInterval,
    pub candidate_days: Vec<Weekday>,
    #[serde(default)]
    pub prefer_earliest: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CalendarProposal {
    pub day: Weekday,
    pub slot: TimeInterval,
}

// ---------------------------------------------------------------------------
// Trip planning

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stay {
    pub city: String,
    pub days: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripEvent {
    pub city: String,
    pub start_day: u32,
    pub end_day: u32,
    /// Free-text reason used when rendering the query ("attend a wedding").
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlightEdge {
    pub from: String,
    pub to: String,
    pub bidirectional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripQuery {
    pub total_days: u32,
    /// Required stays in the order the query lists them.
    pub stays: Vec<Stay>,
    #[serde(default)]
    pub events: Vec<TripEvent>,
    pub flights: Vec<FlightEdge>,
}

impl TripQuery {
    pub fn has_flight(&self, from: &str, to: &str) -> bool {
        self.flights.iter().any(|f| {
            (f.from == from && f.to == to) || (f.bidirectional && f.from == to && f.to == from)
        })
    }

    pub fn required_days(&self, city: &str) -> Option<u32> {
        self.stays.iter().find(|s| s.city == city).map(|s| s.days)
    }

    /// Sum of inclusive stay lengths: each flight day counts for both cities.
    pub fn expected_stay_sum(&self) -> u32 {
        self.total_days + (self.stays.len() as u32).saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripSegment {
    pub city: String,
    pub start_day: DayIndex,
    pub end_day: DayIndex,
}

impl TripSegment {
    pub fn new(city: impl Into<String>, start: u32, end: u32) -> Option<Self> {
        let segment = TripSegment {
            city: city.into(),
            start_day: DayIndex::new(start)?,
            end_day: DayIndex::new(end)?,
        };
        (start <= end).then_some(segment)
    }

    /// Inclusive day count.
    pub fn length(&self) -> u32 {
        self.end_day.get() + 1 - self.start_day.get()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripPlan {
    pub segments: Vec<TripSegment>,
}

// ---------------------------------------------------------------------------
// Meeting planning

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Friend {
    pub name: String,
    pub location: String,
    pub window: TimeInterval,
    pub min_duration: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravelTime {
    pub from: String,
    pub to: String,
    pub minutes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetingQuery {
    pub start_location: String,
    pub arrival: TimeOfDay,
    pub friends: Vec<Friend>,
    /// Directed travel matrix.
    pub travel: Vec<TravelTime>,
    /// City label used when rendering the query text.
    #[serde(default = "default_meeting_city")]
    pub city: String,
}

fn default_meeting_city() -> String {
    "San Francisco".to_string()
}

impl MeetingQuery {
    pub fn travel_minutes(&self, from: &str, to: &str) -> Option<u32> {
        self.travel
            .iter()
            .find(|t| t.from == from && t.to == to)
            .map(|t| t.minutes)
    }

    pub fn friend(&self, name: &str) -> Option<&Friend> {
        self.friends.iter().find(|f| f.name == name)
    }

    /// Every location mentioned by the query, start first.
    pub fn locations(&self) -> Vec<String> {
        let mut out = vec![self.start_location.clone()];
        for f in &self.friends {
            if !out.contains(&f.location) {
                out.push(f.location.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "lowercase")]
pub enum MeetingStep {
    Start { location: String, time: TimeOfDay },
    Travel { to: String, minutes: u32, arrive: TimeOfDay },
    Wait { until: TimeOfDay },
    Meet { friend: String, start: TimeOfDay, end: TimeOfDay },
}

impl MeetingStep {
    /// The canonical sentence for this step, without the trailing period.
    pub fn sentence(&self) -> String {
        match self {
            MeetingStep::Start { location, time } => {
                format!("You start at {location} at {}", time.to_12h())
            }
            MeetingStep::Travel { to, minutes, arrive } => {
                format!("You travel to {to} in {minutes} minutes and arrive at {}", arrive.to_12h())
            }
            MeetingStep::Wait { until } => format!("You wait until {}", until.to_12h()),
            MeetingStep::Meet { friend, start, end } => format!(
                "You meet {friend} for {} minutes from {} to {}",
                end.minutes().saturating_sub(start.minutes()),
                start.to_12h(),
                end.to_12h()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetingPlan {
    pub steps: Vec<MeetingStep>,
}

impl MeetingPlan {
    pub fn friends_met(&self) -> usize {
        let met: BTreeSet<&str> = self
            .steps
            .iter()
            .filter_map(|s| match s {
                MeetingStep::Meet { friend, .. } => Some(friend.as_str()),
                _ => None,
            })
            .collect();
        met.len()
    }
}

// ---------------------------------------------------------------------------
// Travel planner

/// Whole cents. Serialized as a decimal dollar amount.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(u64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn from_cents(cents: u64) -> Self {
        Money(cents)
    }

    pub fn from_dollars(dollars: u64) -> Self {
        Money(dollars * 100)
    }

    /// Rounds to the nearest cent; negative and non-finite amounts are rejected.
    pub fn from_f64(dollars: f64) -> Option<Self> {
        (dollars.is_finite() && dollars >= 0.0).then(|| Money((dollars * 100.0).round() as u64))
    }

    pub fn cents(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn times(self, n: u64) -> Money {
        Money(self.0 * n)
    }
}

impl std::ops::Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl std::iter::Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (dollars, cents) = (self.0 / 100, self.0 % 100);
        if cents == 0 {
            write!(f, "${dollars}")
        } else {
            write!(f, "${dollars}.{cents:02}")
        }
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_multiple_of(100) {
            serializer.serialize_u64(self.0 / 100)
        } else {
            serializer.serialize_f64(self.as_f64())
        }
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        Money::from_f64(value).ok_or_else(|| serde::de::Error::custom("amount must be a non-negative number"))
    }
}

/// Activities a listing may forbid; a query constraint asks that one be allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HouseRule {
    Smoking,
    Parties,
    ChildrenUnder10,
    Visitors,
    Pets,
}

impl HouseRule {
    pub const ALL: [HouseRule; 5] = [
        HouseRule::Smoking,
        HouseRule::Parties,
        HouseRule::ChildrenUnder10,
        HouseRule::Visitors,
        HouseRule::Pets,
    ];

    pub fn label(self) -> &'static str {
        match self {
            HouseRule::Smoking => "smoking",
            HouseRule::Parties => "parties",
            HouseRule::ChildrenUnder10 => "children under 10",
            HouseRule::Visitors => "visitors",
            HouseRule::Pets => "pets",
        }
    }

    pub fn from_label(text: &str) -> Option<Self> {
        let needle = text.trim().trim_start_matches("No ").trim_start_matches("no ").trim();
        HouseRule::ALL
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(needle))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomType {
    EntireHome,
    PrivateRoom,
    SharedRoom,
}

impl RoomType {
    pub fn label(self) -> &'static str {
        match self {
            RoomType::EntireHome => "Entire home/apt",
            RoomType::PrivateRoom => "Private room",
            RoomType::SharedRoom => "Shared room",
        }
    }

    pub fn from_label(text: &str) -> Option<Self> {
        [RoomType::EntireHome, RoomType::PrivateRoom, RoomType::SharedRoom]
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(text.trim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomTypeRequirement {
    EntireRoom,
    PrivateRoom,
    SharedRoom,
    NotSharedRoom,
}

impl RoomTypeRequirement {
    pub fn accepts(self, room: RoomType) -> bool {
        match self {
            RoomTypeRequirement::EntireRoom => room == RoomType::EntireHome,
            RoomTypeRequirement::PrivateRoom => room == RoomType::PrivateRoom,
            RoomTypeRequirement::SharedRoom => room == RoomType::SharedRoom,
            RoomTypeRequirement::NotSharedRoom => room != RoomType::SharedRoom,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RoomTypeRequirement::EntireRoom => "entire room",
            RoomTypeRequirement::PrivateRoom => "private room",
            RoomTypeRequirement::SharedRoom => "shared room",
            RoomTypeRequirement::NotSharedRoom => "not shared room",
        }
    }

    pub fn from_label(text: &str) -> Option<Self> {
        [
            RoomTypeRequirement::EntireRoom,
            RoomTypeRequirement::PrivateRoom,
            RoomTypeRequirement::SharedRoom,
            RoomTypeRequirement::NotSharedRoom,
        ]
        .into_iter()
        .find(|r| r.label().eq_ignore_ascii_case(text.trim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportBan {
    NoFlight,
    NoSelfDriving,
}

impl TransportBan {
    pub fn label(self) -> &'static str {
        match self {
            TransportBan::NoFlight => "no flight",
            TransportBan::NoSelfDriving => "no self-driving",
        }
    }

    pub fn from_label(text: &str) -> Option<Self> {
        [TransportBan::NoFlight, TransportBan::NoSelfDriving]
            .into_iter()
            .find(|b| b.label().eq_ignore_ascii_case(text.trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TravelConstraint {
    RoomRule(HouseRule),
    RoomType(RoomTypeRequirement),
    Cuisine(String),
    TransportMode(TransportBan),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accommodation {
    pub name: String,
    pub city: String,
    pub price_per_night: Money,
    pub room_type: RoomType,
    /// Activities the listing forbids.
    #[serde(default)]
    pub house_rules: Vec<HouseRule>,
    pub minimum_nights: u32,
    pub maximum_occupancy: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Restaurant {
    pub name: String,
    pub city: String,
    pub average_cost: Money,
    #[serde(default)]
    pub cuisines: Vec<String>,
    #[serde(default)]
    pub rating: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attraction {
    pub name: String,
    pub city: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flight {
    pub flight_number: String,
    pub origin: String,
    pub dest: String,
    pub price: Money,
    pub dep: TimeOfDay,
    pub arr: TimeOfDay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundMode {
    SelfDriving,
    Taxi,
}

impl GroundMode {
    pub fn label(self) -> &'static str {
        match self {
            GroundMode::SelfDriving => "Self-driving",
            GroundMode::Taxi => "Taxi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTransport {
    pub origin: String,
    pub dest: String,
    pub mode: GroundMode,
    pub cost: Money,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TravelSandbox {
    #[serde(default)]
    pub accommodations: Vec<Accommodation>,
    #[serde(default)]
    pub restaurants: Vec<Restaurant>,
    #[serde(default)]
    pub attractions: Vec<Attraction>,
    #[serde(default)]
    pub flights: Vec<Flight>,
    #[serde(default)]
    pub ground_transport: Vec<GroundTransport>,
}

impl TravelSandbox {
    pub fn accommodation(&self, name: &str, city: &str) -> Option<&Accommodation> {
        self.accommodations.iter().find(|a| a.name == name && a.city == city)
    }

    pub fn restaurant(&self, name: &str, city: &str) -> Option<&Restaurant> {
        self.restaurants.iter().find(|r| r.name == name && r.city == city)
    }

    pub fn attraction(&self, name: &str, city: &str) -> Option<&Attraction> {
        self.attractions.iter().find(|a| a.name == name && a.city == city)
    }

    pub fn flight(&self, number: &str) -> Option<&Flight> {
        self.flights.iter().find(|f| f.flight_number == number)
    }

    pub fn ground(&self, origin: &str, dest: &str, mode: GroundMode) -> Option<&GroundTransport> {
        self.ground_transport
            .iter()
            .find(|g| g.origin == origin && g.dest == dest && g.mode == mode)
    }

    /// Violations of the table invariants: unique names per (table, city).
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |table: &str, keys: Vec<(&str, &str)>| {
            let mut seen = BTreeSet::new();
            for (name, city) in keys {
                if !seen.insert((name, city)) {
                    out.push(format!("duplicate {table} {name:?} in {city}"));
                }
            }
        };
        check(
            "accommodation",
            self.accommodations.iter().map(|a| (a.name.as_str(), a.city.as_str())).collect(),
        );
        check(
            "restaurant",
            self.restaurants.iter().map(|r| (r.name.as_str(), r.city.as_str())).collect(),
        );
        check(
            "attraction",
            self.attractions.iter().map(|a| (a.name.as_str(), a.city.as_str())).collect(),
        );
        let mut numbers = BTreeSet::new();
        for f in &self.flights {
            if !numbers.insert(f.flight_number.as_str()) {
                out.push(format!("duplicate flight {}", f.flight_number));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravelQuery {
    pub origin: String,
    pub destinations: Vec<String>,
    pub days: u32,
    pub people: u32,
    pub budget: Money,
    #[serde(default)]
    pub constraints: Vec<TravelConstraint>,
}

/// How ground transport cost scales with the party size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundCostMode {
    /// One cost per leg for the whole group.
    #[default]
    Group,
    PerPerson,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    #[serde(default)]
    pub ground: GroundCostMode,
}

/// A travel query together with the reference data its prompt exposes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TravelTask {
    pub query: TravelQuery,
    pub sandbox: TravelSandbox,
    #[serde(default)]
    pub cost_model: CostModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaceRef {
    pub name: String,
    pub city: String,
}

impl PlaceRef {
    pub fn new(name: impl Into<String>, city: impl Into<String>) -> Self {
        PlaceRef {
            name: name.into(),
            city: city.into(),
        }
    }
}

impl fmt::Display for PlaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.name, self.city)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurrentCity {
    City(String),
    Transition { from: String, to: String },
}

impl CurrentCity {
    /// The city the traveller ends the day in.
    pub fn arrival(&self) -> &str {
        match self {
            CurrentCity::City(c) => c,
            CurrentCity::Transition { to, .. } => to,
        }
    }

    pub fn departure(&self) -> &str {
        match self {
            CurrentCity::City(c) => c,
            CurrentCity::Transition { from, .. } => from,
        }
    }

    pub fn mentions(&self, city: &str) -> bool {
        self.departure() == city || self.arrival() == city
    }
}

impl fmt::Display for CurrentCity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurrentCity::City(c) => f.write_str(c),
            CurrentCity::Transition { from, to } => write!(f, "from {from} to {to}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravelPlanDay {
    pub day: DayIndex,
    pub people_number: u32,
    pub current_city: CurrentCity,
    pub transportation: Option<String>,
    pub breakfast: Option<PlaceRef>,
    pub attraction: Vec<PlaceRef>,
    pub lunch: Option<PlaceRef>,
    pub dinner: Option<PlaceRef>,
    pub accommodation: Option<PlaceRef>,
}

impl TravelPlanDay {
    /// Meals in serving order, with their field names.
    pub fn meals(&self) -> [(&'static str, Option<&PlaceRef>); 3] {
        [
            ("breakfast", self.breakfast.as_ref()),
            ("lunch", self.lunch.as_ref()),
            ("dinner", self.dinner.as_ref()),
        ]
    }
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Query {
    Travel(TravelTask),
    Trip(TripQuery),
    Meeting(MeetingQuery),
    Calendar(CalendarQuery),
}

impl Query {
    pub fn domain(&self) -> Domain {
        match self {
            Query::Travel(_) => Domain::Travel,
            Query::Trip(_) => Domain::Trip,
            Query::Meeting(_) => Domain::Meeting,
            Query::Calendar(_) => Domain::Calendar,
        }
    }

    /// Complexity label along the axis each benchmark slices by.
    pub fn subset_label(&self) -> String {
        match self {
            Query::Travel(t) => format!("constraints={}", t.query.constraints.len()),
            Query::Trip(t) => format!("cities={}", t.stays.len()),
            Query::Meeting(m) => format!("people={}", m.friends.len()),
            Query::Calendar(c) => format!(
                "participants={},days={}",
                c.participants.len(),
                c.candidate_days.len()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryInstance {
    pub id: String,
    pub domain: Domain,
    pub query: Query,
    pub prompt_text: String,
    pub subset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<String>,
}

/// Checks every type invariant; returns one message per violation.
pub fn validate_query(instance: &QueryInstance) -> Vec<String> {
    let mut out = Vec::new();
    if instance.query.domain() != instance.domain {
        out.push(format!(
            "domain tag {} does not match {} query",
            instance.domain,
            instance.query.domain()
        ));
    }
    match &instance.query {
        Query::Calendar(q) => validate_calendar(q, &mut out),
        Query::Trip(q) => validate_trip(q, &mut out),
        Query::Meeting(q) => validate_meeting(q, &mut out),
        Query::Travel(t) => validate_travel(t, &mut out),
    }
    out
}

fn validate_calendar(q: &CalendarQuery, out: &mut Vec<String>) {
    if q.participants.is_empty() {
        out.push("no participants".to_string());
    }
    if q.candidate_days.is_empty() {
        out.push("no candidate days".to_string());
    }
    if q.duration == 0 {
        out.push("meeting duration must be positive".to_string());
    } else if q.duration > q.work_window.duration() {
        out.push(format!(
            "meeting duration {} exceeds the work window {}",
            q.duration, q.work_window
        ));
    }
    let mut names = BTreeSet::new();
    for p in &q.participants {
        if !names.insert(p.name.as_str()) {
            out.push(format!("duplicate participant {}", p.name));
        }
    }
}

fn validate_trip(q: &TripQuery, out: &mut Vec<String>) {
    if q.stays.is_empty() {
        out.push("no cities to visit".to_string());
        return;
    }
    if q.total_days == 0 {
        out.push("total days must be positive".to_string());
    }
    let mut cities = BTreeSet::new();
    for s in &q.stays {
        if s.days == 0 {
            out.push(format!("stay in {} must last at least one day", s.city));
        }
        if !cities.insert(s.city.as_str()) {
            out.push(format!("city {} listed twice", s.city));
        }
    }
    let sum: u32 = q.stays.iter().map(|s| s.days).sum();
    if sum != q.expected_stay_sum() {
        out.push(format!(
            "stay lengths sum to {sum}, expected {} ({} days plus {} flight days)",
            q.expected_stay_sum(),
            q.total_days,
            q.stays.len() - 1
        ));
    }
    for e in &q.events {
        if !cities.contains(e.city.as_str()) {
            out.push(format!("event city {} is not among the stays", e.city));
        }
        if e.start_day == 0 || e.start_day > e.end_day || e.end_day > q.total_days {
            out.push(format!(
                "event in {} has invalid day range {}-{}",
                e.city, e.start_day, e.end_day
            ));
        }
    }
    for f in &q.flights {
        if !cities.contains(f.from.as_str()) || !cities.contains(f.to.as_str()) {
            out.push(format!("flight {} - {} mentions an unknown city", f.from, f.to));
        }
    }
}

fn validate_meeting(q: &MeetingQuery, out: &mut Vec<String>) {
    let mut names = BTreeSet::new();
    for f in &q.friends {
        if f.min_duration == 0 {
            out.push(format!("minimum duration for {} must be positive", f.name));
        }
        if !names.insert(f.name.as_str()) {
            out.push(format!("duplicate friend {}", f.name));
        }
    }
    let locations = q.locations();
    for from in &locations {
        for to in &locations {
            if from != to && q.travel_minutes(from, to).is_none() {
                out.push(format!("missing travel time from {from} to {to}"));
            }
        }
    }
}

fn validate_travel(t: &TravelTask, out: &mut Vec<String>) {
    let q = &t.query;
    if q.people == 0 {
        out.push("people must be at least 1".to_string());
    }
    if q.budget == Money::ZERO {
        out.push("budget must be positive".to_string());
    }
    if q.destinations.is_empty() {
        out.push("no destinations".to_string());
    }
    if ![3, 5, 7].contains(&q.days) {
        out.push(format!("trip length {} is not one of 3, 5 or 7 days", q.days));
    }
    out.extend(t.sandbox.violations());
}
