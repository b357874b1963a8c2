use std::sync::OnceLock;

use regex::Regex;
use serde_json::{Map, Value};

use super::{FormatCritique, PlanDocument};
use crate::domain::{CurrentCity, PlaceRef, TravelPlanDay};
use crate::time::DayIndex;

pub const DAY_KEYS: [&str; 9] = [
    "day",
    "people_number",
    "current_city",
    "transportation",
    "breakfast",
    "attraction",
    "lunch",
    "dinner",
    "accommodation",
];

fn transition_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^from (.+?) to (.+)$").expect("transition regex"))
}

/// Drops a surrounding ```json fence and any prose outside the outermost array.
fn json_payload(text: &str) -> &str {
    let mut body = text.trim();
    if let Some(open) = body.find("```") {
        let after = &body[open + 3..];
        let after = after.find('\n').map(|i| &after[i + 1..]).unwrap_or("");
        body = match after.find("```") {
            Some(close) => &after[..close],
            None => after,
        };
    }
    match (body.find('['), body.rfind(']')) {
        (Some(a), Some(b)) if a < b => &body[a..=b],
        _ => body.trim(),
    }
}

fn optional_text(value: &Value) -> Result<Option<String>, String> {
    match value {
        Value::Null => Ok(None),
        Value::String(s) => {
            let s = s.trim();
            if s.is_empty() || s == "-" {
                Ok(None)
            } else {
                Ok(Some(s.to_string()))
            }
        }
        other => Err(format!("expected a string, found {other}")),
    }
}

fn place(text: &str) -> Result<PlaceRef, String> {
    match text.rsplit_once(", ") {
        Some((name, city)) if !name.trim().is_empty() && !city.trim().is_empty() => {
            Ok(PlaceRef::new(name.trim(), city.trim()))
        }
        _ => Err(format!("'{text}' must be written as 'name, city'")),
    }
}

fn positive_int(value: &Value) -> Option<u32> {
    value.as_u64().filter(|&n| n >= 1).and_then(|n| u32::try_from(n).ok())
}

fn current_city(text: Option<String>) -> Result<CurrentCity, String> {
    let text = text.ok_or_else(|| "\"current_city\": must not be empty".to_string())?;
    Ok(match transition_regex().captures(&text) {
        Some(c) => CurrentCity::Transition {
            from: c[1].trim().to_string(),
            to: c[2].trim().to_string(),
        },
        None => CurrentCity::City(text),
    })
}

fn optional_place(obj: &Map<String, Value>, key: &str) -> Result<Option<PlaceRef>, String> {
    let raw = optional_text(&obj[key]).map_err(|e| format!("\"{key}\": {e}"))?;
    raw.map(|t| place(&t).map_err(|e| format!("\"{key}\": {e}")))
        .transpose()
}

fn attractions(obj: &Map<String, Value>) -> Result<Vec<PlaceRef>, String> {
    let raw = optional_text(&obj["attraction"]).map_err(|e| format!("\"attraction\": {e}"))?;
    raw.map(|text| {
        text.split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| place(p).map_err(|e| format!("\"attraction\": {e}")))
            .collect()
    })
    .unwrap_or_else(|| Ok(Vec::new()))
}

fn take<T>(problems: &mut Vec<String>, r: Result<T, String>) -> Option<T> {
    r.map_err(|e| problems.push(e)).ok()
}

fn parse_day(index: usize, obj: &Map<String, Value>, errors: &mut Vec<String>) -> Option<TravelPlanDay> {
    let label = obj
        .get("day")
        .and_then(positive_int)
        .map(|d| format!("day {d}"))
        .unwrap_or_else(|| format!("entry {}", index + 1));
    let missing: Vec<String> = DAY_KEYS
        .iter()
        .filter(|k| !obj.contains_key(**k))
        .map(|k| format!("The {label} is missing the key \"{k}\""))
        .collect();
    if !missing.is_empty() {
        errors.extend(missing);
        return None;
    }

    let mut problems = Vec::new();
    let day = take(&mut problems, 
        obj["day"]
            .as_u64()
            .and_then(|d| u32::try_from(d).ok())
            .and_then(DayIndex::new)
            .ok_or_else(|| format!("\"day\": expected a positive integer, found {}", obj["day"])),
    );
    let people_number = take(&mut problems, positive_int(&obj["people_number"]).ok_or_else(|| {
        format!(
            "\"people_number\": expected a positive integer, found {}",
            obj["people_number"]
        )
    }));
    let current = take(&mut problems, 
        optional_text(&obj["current_city"])
            .map_err(|e| format!("\"current_city\": {e}"))
            .and_then(current_city),
    );
    let transportation =
        take(&mut problems, optional_text(&obj["transportation"]).map_err(|e| format!("\"transportation\": {e}")));
    let breakfast = take(&mut problems, optional_place(obj, "breakfast"));
    let attraction = take(&mut problems, attractions(obj));
    let lunch = take(&mut problems, optional_place(obj, "lunch"));
    let dinner = take(&mut problems, optional_place(obj, "dinner"));
    let accommodation = take(&mut problems, optional_place(obj, "accommodation"));

    if !problems.is_empty() {
        errors.extend(problems.into_iter().map(|p| format!("The {label} has an invalid {p}")));
        return None;
    }
    Some(TravelPlanDay {
        day: day?,
        people_number: people_number?,
        current_city: current?,
        transportation: transportation?,
        breakfast: breakfast?,
        attraction: attraction?,
        lunch: lunch?,
        dinner: dinner?,
        accommodation: accommodation?,
    })
}

/// Reads a JSON array of day objects, fenced or bare.
pub fn parse_travel_plan(text: &str) -> FormatCritique {
    let payload = json_payload(text);
    let value: Value = match serde_json::from_str(payload) {
        Ok(v) => v,
        Err(e) => return FormatCritique::fail(format!("The travel plan is not parsable JSON: {e}")),
    };
    let Value::Array(entries) = value else {
        return FormatCritique::fail("The travel plan must be a JSON array of day objects");
    };
    if entries.is_empty() {
        return FormatCritique::fail("The travel plan is an empty itinerary");
    }
    let mut errors = Vec::new();
    let mut days = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        match entry {
            Value::Object(obj) => {
                if let Some(day) = parse_day(i, obj, &mut errors) {
                    days.push(day);
                }
            }
            other => errors.push(format!("Entry {} is not a JSON object: {other}", i + 1)),
        }
    }
    if errors.is_empty() {
        FormatCritique::ok(PlanDocument::Travel(days), Vec::new())
    } else {
        FormatCritique::failed(errors)
    }
}

fn json_string(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn or_dash(p: Option<&PlaceRef>) -> String {
    p.map(ToString::to_string).unwrap_or_else(|| "-".to_string())
}

/// Pretty JSON with the key order and indentation of the prompt example.
pub fn render_travel(days: &[TravelPlanDay]) -> String {
    let mut out = String::from("[\n");
    for (i, d) in days.iter().enumerate() {
        let attraction = if d.attraction.is_empty() {
            "-".to_string()
        } else {
            d.attraction.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        };
        let fields = [
            ("day", d.day.get().to_string()),
            ("people_number", d.people_number.to_string()),
            ("current_city", json_string(&d.current_city.to_string())),
            (
                "transportation",
                json_string(d.transportation.as_deref().unwrap_or("-")),
            ),
            ("breakfast", json_string(&or_dash(d.breakfast.as_ref()))),
            ("attraction", json_string(&attraction)),
            ("lunch", json_string(&or_dash(d.lunch.as_ref()))),
            ("dinner", json_string(&or_dash(d.dinner.as_ref()))),
            ("accommodation", json_string(&or_dash(d.accommodation.as_ref()))),
        ];
        out.push_str("    {\n");
        let body: Vec<String> = fields
            .iter()
            .map(|(k, v)| format!("        \"{k}\": {v}"))
            .collect();
        out.push_str(&body.join(",\n"));
        out.push_str("\n    }");
        if i + 1 < days.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DAY: &str = r#"{"day": 1, "people_number": 2, "current_city": "from A to B",
        "transportation": "Flight Number: F1, from A to B", "breakfast": "-",
        "attraction": "Pier, B; Museum, B", "lunch": "Cafe, B", "dinner": "Grill, B",
        "accommodation": "Loft, B"}"#;

    #[test]
    fn parses_bare_array() {
        let c = parse_travel_plan(&format!("[{DAY}]"));
        assert!(c.passed, "{:?}", c.messages);
        let Some(PlanDocument::Travel(days)) = c.parsed else { panic!() };
        assert_eq!(days[0].breakfast, None);
        assert_eq!(days[0].attraction.len(), 2);
        assert_eq!(
            days[0].current_city,
            CurrentCity::Transition {
                from: "A".into(),
                to: "B".into()
            }
        );
    }

    #[test]
    fn parses_fenced_array() {
        let c = parse_travel_plan(&format!("```json\n[{DAY}]\n```"));
        assert!(c.passed, "{:?}", c.messages);
    }

    #[test]
    fn empty_itinerary() {
        let c = parse_travel_plan("[]");
        assert!(!c.passed);
        assert!(c.messages[0].contains("empty itinerary"));
    }

    #[test]
    fn missing_key_names_day_and_key() {
        let text = format!("[{}]", DAY.replace(r#""dinner": "Grill, B","#, ""));
        let c = parse_travel_plan(&text);
        assert!(!c.passed);
        assert_eq!(c.messages, vec!["The day 1 is missing the key \"dinner\""]);
    }

    #[test]
    fn non_integer_day() {
        let text = format!("[{}]", DAY.replace(r#""day": 1"#, r#""day": "one""#));
        let c = parse_travel_plan(&text);
        assert!(!c.passed);
        assert!(c.messages[0].contains("\"day\""), "{:?}", c.messages);
    }

    #[test]
    fn not_json() {
        assert!(!parse_travel_plan("I will travel to B").passed);
        assert!(!parse_travel_plan("{\"day\": 1}").passed);
    }
}
