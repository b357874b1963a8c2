use super::{ensure_size, CancelToken, OracleError, OracleVerdict};
use crate::domain::{TripPlan, TripQuery, TripSegment};
use crate::parse::PlanDocument;

pub const MAX_CITIES: usize = 10;

/// The segments an ordering of cities forces: day 1 start, stay lengths as
/// required, each flight day shared by both cities.
fn forced_segments(q: &TripQuery, order: &[usize]) -> Option<Vec<TripSegment>> {
    let mut start = 1u32;
    let mut out = Vec::with_capacity(order.len());
    for &i in order {
        let stay = &q.stays[i];
        let end = (start + stay.days).checked_sub(1)?;
        out.push(TripSegment::new(stay.city.clone(), start, end)?);
        start = end;
    }
    Some(out)
}

fn in_city_on(segments: &[TripSegment], city: &str, day: u32) -> bool {
    segments
        .iter()
        .any(|s| s.city == city && s.start_day.get() <= day && day <= s.end_day.get())
}

pub fn trip_plan_is_valid(q: &TripQuery, p: &TripPlan) -> bool {
    let mut order = Vec::with_capacity(p.segments.len());
    for seg in &p.segments {
        match q.stays.iter().position(|s| s.city == seg.city) {
            Some(i) if !order.contains(&i) => order.push(i),
            _ => return false,
        }
    }
    if order.len() != q.stays.len() {
        return false;
    }
    let Some(forced) = forced_segments(q, &order) else {
        return false;
    };
    if forced != p.segments || forced.last().map(|s| s.end_day.get()) != Some(q.total_days) {
        return false;
    }
    let flights_ok = order
        .windows(2)
        .all(|w| q.has_flight(&q.stays[w[0]].city, &q.stays[w[1]].city));
    let events_ok = q
        .events
        .iter()
        .all(|e| (e.start_day..=e.end_day).all(|d| in_city_on(&forced, &e.city, d)));
    flights_ok && events_ok
}

pub fn solve_trip(q: &TripQuery) -> Result<OracleVerdict, OracleError> {
    solve_trip_with(q, &CancelToken::new())
}

/// Depth-first over city orderings, pruning on flights, day overrun and events.
pub fn solve_trip_with(q: &TripQuery, cancel: &CancelToken) -> Result<OracleVerdict, OracleError> {
    ensure_size("number of cities", q.stays.len(), MAX_CITIES)?;
    let mut order = Vec::new();
    let mut used = vec![false; q.stays.len()];
    if q.stays.is_empty() || !dfs(q, cancel, &mut order, &mut used, 1)? {
        return Ok(OracleVerdict::invalid());
    }
    let segments = forced_segments(q, &order).unwrap_or_default();
    Ok(OracleVerdict::witnessed(
        PlanDocument::Trip(TripPlan { segments }),
        None,
    ))
}

fn dfs(
    q: &TripQuery,
    cancel: &CancelToken,
    order: &mut Vec<usize>,
    used: &mut [bool],
    start: u32,
) -> Result<bool, OracleError> {
    cancel.check()?;
    if order.len() == q.stays.len() {
        return Ok(start == q.total_days);
    }
    for i in 0..q.stays.len() {
        if used[i] {
            continue;
        }
        let stay = &q.stays[i];
        if let Some(&prev) = order.last() {
            if !q.has_flight(&q.stays[prev].city, &stay.city) {
                continue;
            }
        }
        let Some(end) = (start + stay.days).checked_sub(1) else {
            continue;
        };
        if stay.days == 0 || end > q.total_days {
            continue;
        }
        let events_fit = q
            .events
            .iter()
            .filter(|e| e.city == stay.city)
            .all(|e| start <= e.start_day && e.end_day <= end);
        if !events_fit {
            continue;
        }
        used[i] = true;
        order.push(i);
        if dfs(q, cancel, order, used, end)? {
            return Ok(true);
        }
        order.pop();
        used[i] = false;
    }
    Ok(false)
}
