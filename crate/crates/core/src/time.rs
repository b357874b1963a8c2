//! Minute-resolution clock, interval and day arithmetic.
//!
//! Every time value in the four domains is a whole minute of a single day.
//! Intervals are half-open, so a block ending at 11:00 and one starting at
//! 11:00 do not overlap.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MINUTES_PER_DAY: u16 = 1440;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimeError {
    #[error("malformed time: {0:?}")]
    MalformedTime(String),
    #[error("time out of range: {0:?}")]
    OutOfRange(String),
    #[error("interval must have start < end, got {start} - {end}")]
    EmptyInterval { start: TimeOfDay, end: TimeOfDay },
    #[error("unknown weekday: {0:?}")]
    UnknownWeekday(String),
}

/// Minutes since midnight, always in `[0, 1440)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay(u16);

impl TimeOfDay {
    pub const MIDNIGHT: TimeOfDay = TimeOfDay(0);

    pub fn from_minutes(minutes: u32) -> Result<Self, TimeError> {
        if minutes < MINUTES_PER_DAY as u32 {
            Ok(TimeOfDay(minutes as u16))
        } else {
            Err(TimeError::OutOfRange(format!("{minutes} minutes")))
        }
    }

    pub fn from_hm(hour: u32, minute: u32) -> Result<Self, TimeError> {
        if hour >= 24 || minute >= 60 {
            return Err(TimeError::OutOfRange(format!("{hour}:{minute:02}")));
        }
        Self::from_minutes(hour * 60 + minute)
    }

    pub fn minutes(self) -> u32 {
        self.0 as u32
    }

    pub fn hour(self) -> u32 {
        self.minutes() / 60
    }

    pub fn minute(self) -> u32 {
        self.minutes() % 60
    }

    /// Adds minutes, failing if the result leaves the day.
    pub fn checked_add(self, minutes: u32) -> Option<TimeOfDay> {
        Self::from_minutes(self.minutes().checked_add(minutes)?).ok()
    }

    /// `H:MM`, 24-hour, no leading zero on the hour.
    pub fn to_24h(self) -> String {
        format!("{}:{:02}", self.hour(), self.minute())
    }

    pub fn to_12h(self) -> String {
        format_time_12h(self)
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_24h())
    }
}

impl FromStr for TimeOfDay {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_time_of_day(s)
    }
}

impl Serialize for TimeOfDay {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_24h())
    }
}

impl<'de> Deserialize<'de> for TimeOfDay {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_time_of_day(&text).map_err(serde::de::Error::custom)
    }
}

fn time_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(\d{1,2}):(\d{2})\s?(?i:(AM|PM))?$").expect("time regex")
    })
}

/// Parses `H:MM`/`HH:MM` 24-hour clocks and `H:MMAM`/`H:MM PM` 12-hour clocks.
pub fn parse_time_of_day(text: &str) -> Result<TimeOfDay, TimeError> {
    let trimmed = text.trim();
    let caps = time_regex()
        .captures(trimmed)
        .ok_or_else(|| TimeError::MalformedTime(text.to_string()))?;
    let hour: u32 = caps[1]
        .parse()
        .map_err(|_| TimeError::MalformedTime(text.to_string()))?;
    let minute: u32 = caps[2]
        .parse()
        .map_err(|_| TimeError::MalformedTime(text.to_string()))?;
    if minute >= 60 {
        return Err(TimeError::OutOfRange(text.to_string()));
    }
    match caps.get(3).map(|m| m.as_str().to_ascii_uppercase()) {
        None => {
            if hour >= 24 {
                return Err(TimeError::OutOfRange(text.to_string()));
            }
            TimeOfDay::from_hm(hour, minute)
        }
        Some(suffix) => {
            if !(1..=12).contains(&hour) {
                return Err(TimeError::OutOfRange(text.to_string()));
            }
            let base = hour % 12;
            let hour24 = if suffix == "PM" { base + 12 } else { base };
            TimeOfDay::from_hm(hour24, minute)
        }
    }
}

/// Canonical 12-hour clock: `9:22AM`, `12:00PM`, no space before the suffix.
pub fn format_time_12h(t: TimeOfDay) -> String {
    let (hour, minute) = (t.hour(), t.minute());
    let suffix = if hour < 12 { "AM" } else { "PM" };
    let display = match hour % 12 {
        0 => 12,
        h => h,
    };
    format!("{display}:{minute:02}{suffix}")
}

/// Half-open `[start, end)` with `start < end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct TimeInterval {
    start: TimeOfDay,
    end: TimeOfDay,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    start: TimeOfDay,
    end: TimeOfDay,
}

impl TryFrom<RawInterval> for TimeInterval {
    type Error = TimeError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        TimeInterval::new(raw.start, raw.end)
    }
}

impl From<TimeInterval> for RawInterval {
    fn from(iv: TimeInterval) -> Self {
        RawInterval {
            start: iv.start,
            end: iv.end,
        }
    }
}

impl TimeInterval {
    pub fn new(start: TimeOfDay, end: TimeOfDay) -> Result<Self, TimeError> {
        if start < end {
            Ok(TimeInterval { start, end })
        } else {
            Err(TimeError::EmptyInterval { start, end })
        }
    }

    /// Convenience constructor from raw minute values.
    pub fn from_minutes(start: u32, end: u32) -> Result<Self, TimeError> {
        Self::new(TimeOfDay::from_minutes(start)?, TimeOfDay::from_minutes(end)?)
    }

    pub fn start(&self) -> TimeOfDay {
        self.start
    }

    pub fn end(&self) -> TimeOfDay {
        self.end
    }

    pub fn duration(&self) -> u32 {
        self.end.minutes() - self.start.minutes()
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn contains_time(&self, t: TimeOfDay) -> bool {
        self.start <= t && t < self.end
    }

    pub fn intersection(&self, other: &TimeInterval) -> Option<TimeInterval> {
        TimeInterval::new(self.start.max(other.start), self.end.min(other.end)).ok()
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.start, self.end)
    }
}

/// Sorted, disjoint, maximal free intervals of `window` not covered by `busy`.
pub fn free_intervals(busy: &[TimeInterval], window: TimeInterval) -> Vec<TimeInterval> {
    let mut clipped: Vec<TimeInterval> = busy
        .iter()
        .filter_map(|b| b.intersection(&window))
        .collect();
    clipped.sort();

    let mut free = Vec::new();
    let mut cursor = window.start;
    for block in clipped {
        if block.start > cursor {
            free.push(TimeInterval {
                start: cursor,
                end: block.start,
            });
        }
        cursor = cursor.max(block.end);
    }
    if cursor < window.end {
        free.push(TimeInterval {
            start: cursor,
            end: window.end,
        });
    }
    free
}

/// 1-based trip day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct DayIndex(u32);

impl DayIndex {
    pub fn new(day: u32) -> Option<Self> {
        (day >= 1).then_some(DayIndex(day))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for DayIndex {
    type Error = String;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        DayIndex::new(value).ok_or_else(|| "day index must be >= 1".to_string())
    }
}

impl From<DayIndex> for u32 {
    fn from(d: DayIndex) -> u32 {
        d.0
    }
}

impl fmt::Display for DayIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    pub const ALL: [Weekday; 7] = [
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
        Weekday::Sunday,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Weekday::Monday => "Monday",
            Weekday::Tuesday => "Tuesday",
            Weekday::Wednesday => "Wednesday",
            Weekday::Thursday => "Thursday",
            Weekday::Friday => "Friday",
            Weekday::Saturday => "Saturday",
            Weekday::Sunday => "Sunday",
        }
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Weekday {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let needle = s.trim();
        Weekday::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(needle))
            .ok_or_else(|| TimeError::UnknownWeekday(s.to_string()))
    }
}
