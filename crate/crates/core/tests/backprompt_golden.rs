mod common;

use common::*;
use modulo_core::critics::run_critic_pipeline;
use modulo_core::domain::QueryInstance;
use modulo_core::metacontroller::{build_backprompt, build_initial_prompt, IterationRecord, LoopConfig, Templates};

fn record(instance: &QueryInstance, raw: &str) -> IterationRecord {
    let r = run_critic_pipeline(instance, raw);
    IterationRecord {
        index: 1,
        prompt: String::new(),
        raw_response: raw.to_string(),
        format: r.format,
        report: r.report,
        depth: 1,
        parent: None,
    }
}

fn backprompt(instance: &QueryInstance, response: &str) -> String {
    let rec = record(instance, response);
    build_backprompt(&Templates::builtin(), instance, &[rec], &LoopConfig::default()).unwrap()
}

#[test]
fn calendar_backprompt_tail() {
    let inst = michelle();
    let bp = backprompt(&inst, &fixture("calendar_response.txt"));
    let tail = format!(
        "Query:\nTASK: {}\nSOLUTION: \n\nIncorrect meeting time:\nHere is the proposed time: Monday, 12:00 - 13:00\n\nErrors with the above meeting time:\n1. Jerry is busy on Monday between 11:30 and 12:30\n\nFixed meeting time: ",
        fixture("calendar_michelle_query.txt")
    );
    assert!(bp.ends_with(&tail), "{}", &bp[bp.len().saturating_sub(tail.len() + 200)..]);
    assert!(bp.starts_with("You are an expert at scheduling meetings. You are given a few constraints on the existing schedule of each participant, the meeting duration, and possibly some preferences on the meeting time. Propose a different time to meet than the one provided below such that it meets as many specified constraints as possible. "));
}

#[test]
fn meeting_backprompt_tail() {
    let inst = wharf();
    let response = fixture("meeting_response.txt");
    let bp = backprompt(&inst, &response);
    let tail = format!(
        "Query:\n{}\n\nIncorrect plan:\n{}\n\nErrors with the above plan:\nHad error: Invalid meeting time or location with step: 'You meet Ashley for 75 minutes from 9:25AM to 10:40AM'\n\nFixed plan: (Your response should start with 'SOLUTION:', and follow the same solution format as shown above.)\n",
        fixture("meeting_wharf_query.txt"),
        response.trim()
    );
    assert!(bp.ends_with(&tail), "{}", &bp[bp.len().saturating_sub(tail.len() + 200)..]);
    assert!(bp.starts_with("You are a meeting planner agent. Fix the below given meeting schedule"));
}

#[test]
fn trip_backprompt_tail() {
    let inst = berlin();
    let bp = backprompt(&inst, &fixture("trip_response.txt"));
    let response = fixture("trip_response.txt");
    let quoted = format!(
        "Query:\n{}\n\nIncorrect plan:\n{}\n\nErrors with the above plan:\n",
        fixture("trip_berlin_query.txt"),
        response.trim()
    );
    assert!(bp.contains(&quoted), "{}", &bp[bp.len().saturating_sub(3000)..]);
    let errors = &bp[bp.find(&quoted).unwrap() + quoted.len()..];
    let (errors, rest) = errors.split_once("\n\n").unwrap();
    assert!(errors.lines().any(|l| l == fixture("trip_expected_critique.txt").trim()));
    assert_eq!(rest, "Fixed plan:\n");
    assert!(bp.starts_with("You are an expert at planning trips. Fix the below given trip schedule"));
}

#[test]
fn travel_backprompt_tail() {
    let inst = myrtle_instance();
    let bp = backprompt(&inst, &fixture("travel_response.txt"));
    let tail = "\n\nBy inspecting your plan we find the following issue. Please refine your plan according to the feedback below:\n1. The accommodation Cozy Brooklyn Room - Next to Pratt Institute, Myrtle Beach do not obey the minumum nights rule.\n2. The breakfast in day 3 is invalid or not in the data provided.\n\nFixed Travel Plan (please only output the JSON string without explanatory information):\n";
    assert!(bp.ends_with(tail), "{}", &bp[bp.len().saturating_sub(tail.len() + 300)..]);
    assert!(bp.contains(&format!("{}\n\nTravel Plan:\n\n[\n    {{\n        \"day\": 1,", inst.prompt_text)));
    assert!(bp.starts_with("You are a proficient planner. Based on the provided information, query, and the backprompt, please fix the given travel plan"));
}

#[test]
fn initial_prompts_open_and_close() {
    let t = Templates::builtin();
    let cfg = LoopConfig::default();
    let cal = build_initial_prompt(&t, &michelle(), &cfg).unwrap();
    assert!(cal.starts_with("You are an expert at scheduling meetings."));
    assert!(cal.ends_with(&format!("Query:\nTASK: {}\nSOLUTION: ", fixture("calendar_michelle_query.txt"))));
    assert!(cal.contains(&format!("TASK: {}\nSOLUTION: Here is the proposed time: Monday, 11:00 - 11:30 \n\n", fixture("calendar_roger_query.txt"))));

    let travel = build_initial_prompt(&t, &myrtle_instance(), &cfg).unwrap();
    assert!(travel.starts_with("You are a proficient planner."));
    assert!(travel.ends_with("\nTravel Plan (please only output the JSON string without explanatory information):\n"));

    let trip = build_initial_prompt(&t, &berlin(), &cfg).unwrap();
    assert!(trip.contains(&format!("TASK: {}\nSOLUTION: Here is the trip plan for visiting the 10 European cities for 21 days:\n\n**Day 1-5:** Arriving in Edinburgh and visit Edinburgh for 5 days.\n**Day 5:** Fly from Edinburgh to Frankfurt.\n", fixture("trip_21_query.txt"))));
    assert!(trip.ends_with(&format!("\n\n\nQuery:\n{}\n", fixture("trip_berlin_query.txt"))));

    let meeting = build_initial_prompt(&t, &wharf(), &cfg).unwrap();
    assert!(meeting.contains("\n\nSOLUTION:You start at North Beach at 9:00AM. You travel to Golden Gate Park in 22 minutes and arrive at 9:22AM. You "));
    assert!(meeting.ends_with(&format!("Query:\n{}\n", fixture("meeting_wharf_query.txt"))));
}
