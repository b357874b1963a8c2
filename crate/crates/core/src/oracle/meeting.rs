use super::{ensure_size, OracleError, OracleVerdict};
use crate::domain::{MeetingPlan, MeetingQuery, MeetingStep};
use crate::parse::PlanDocument;
use crate::time::TimeOfDay;

pub const MAX_FRIENDS: usize = 10;

/// Minutes to get from `a` to `b`; staying put is free.
fn hop(q: &MeetingQuery, a: &str, b: &str) -> Option<u32> {
    if a == b {
        Some(0)
    } else {
        q.travel_minutes(a, b)
    }
}

/// Earliest finish when meeting friend `i` for its minimum, leaving `from` at `now`.
fn meet_end(q: &MeetingQuery, from: &str, now: u32, i: usize) -> Option<u32> {
    let f = &q.friends[i];
    let arrive = now + hop(q, from, &f.location)?;
    let start = arrive.max(f.window.start().minutes());
    let end = start + f.min_duration;
    (f.min_duration > 0 && end <= f.window.end().minutes()).then_some(end)
}

/// Subset dynamic programme over (friends met, last friend) keeping the
/// earliest finish time, which dominates every later one.
pub fn max_meetings(q: &MeetingQuery) -> Result<OracleVerdict, OracleError> {
    let n = q.friends.len();
    ensure_size("number of friends", n, MAX_FRIENDS)?;
    let full = 1usize << n;
    let mut best: Vec<Vec<Option<(u32, usize)>>> = vec![vec![None; n]; full];
    let arrival = q.arrival.minutes();

    for i in 0..n {
        if let Some(end) = meet_end(q, &q.start_location, arrival, i) {
            best[1 << i][i] = Some((end, usize::MAX));
        }
    }
    for mask in 1..full {
        for last in 0..n {
            let Some((now, _)) = best[mask][last] else { continue };
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let Some(end) = meet_end(q, &q.friends[last].location, now, next) else {
                    continue;
                };
                let slot = &mut best[mask | (1 << next)][next];
                if slot.is_none_or(|(e, _)| end < e) {
                    *slot = Some((end, last));
                }
            }
        }
    }

    let mut top: Option<(u32, usize, usize)> = None;
    for (mask, row) in best.iter().enumerate() {
        for (last, cell) in row.iter().enumerate() {
            if cell.is_some() {
                let count = mask.count_ones();
                if top.is_none_or(|(c, _, _)| count > c) {
                    top = Some((count, mask, last));
                }
            }
        }
    }

    let mut order = Vec::new();
    if let Some((_, mut mask, mut last)) = top {
        loop {
            order.push(last);
            let Some((_, prev)) = best[mask][last] else { break };
            mask &= !(1 << last);
            if prev == usize::MAX {
                break;
            }
            last = prev;
        }
        order.reverse();
    }
    let plan = witness(q, &order);
    let count = order.len() as u32;
    Ok(OracleVerdict::witnessed(PlanDocument::Meeting(plan), Some(count)))
}

fn clock(m: u32) -> TimeOfDay {
    TimeOfDay::from_minutes(m).expect("meeting times stay within the day")
}

fn witness(q: &MeetingQuery, order: &[usize]) -> MeetingPlan {
    let mut steps = vec![MeetingStep::Start {
        location: q.start_location.clone(),
        time: q.arrival,
    }];
    let mut here = q.start_location.clone();
    let mut now = q.arrival.minutes();
    for &i in order {
        let f = &q.friends[i];
        if f.location != here {
            let minutes = q.travel_minutes(&here, &f.location).unwrap_or(0);
            now += minutes;
            steps.push(MeetingStep::Travel {
                to: f.location.clone(),
                minutes,
                arrive: clock(now),
            });
            here = f.location.clone();
        }
        if now < f.window.start().minutes() {
            now = f.window.start().minutes();
            steps.push(MeetingStep::Wait { until: clock(now) });
        }
        steps.push(MeetingStep::Meet {
            friend: f.name.clone(),
            start: clock(now),
            end: clock(now + f.min_duration),
        });
        now += f.min_duration;
    }
    MeetingPlan { steps }
}

/// Replays a plan against the query and reports whether every step holds.
pub fn meeting_plan_is_feasible(q: &MeetingQuery, p: &MeetingPlan) -> bool {
    let Some(MeetingStep::Start { location, time }) = p.steps.first() else {
        return false;
    };
    if *location != q.start_location || *time != q.arrival {
        return false;
    }
    let mut here = location.as_str();
    let mut now = time.minutes();
    let mut seen: Vec<&str> = Vec::new();
    for step in &p.steps[1..] {
        match step {
            MeetingStep::Start { .. } => return false,
            MeetingStep::Travel { to, minutes, arrive } => {
                if q.travel_minutes(here, to) != Some(*minutes) || now + minutes != arrive.minutes() {
                    return false;
                }
                here = to;
                now = arrive.minutes();
            }
            MeetingStep::Wait { until } => {
                if until.minutes() < now {
                    return false;
                }
                now = until.minutes();
            }
            MeetingStep::Meet { friend, start, end } => {
                let Some(f) = q.friends.iter().find(|f| f.name == *friend) else {
                    return false;
                };
                let (s, e) = (start.minutes(), end.minutes());
                let fits = f.location == here
                    && s == now
                    && e >= s
                    && e - s >= f.min_duration
                    && f.window.start().minutes() <= s
                    && e <= f.window.end().minutes()
                    && !seen.contains(&f.name.as_str());
                if !fits {
                    return false;
                }
                seen.push(&f.name);
                now = e;
            }
        }
    }
    true
}
