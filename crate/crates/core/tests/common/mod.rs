#![allow(dead_code)]

pub mod candidates;

use modulo_core::domain::{Domain, Query, QueryInstance, TravelTask};
use modulo_core::harness::query_text::{instance_from_text, render_travel_query};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn text_instance(domain: Domain, name: &str) -> QueryInstance {
    instance_from_text(name, domain, &fixture(name)).unwrap()
}

pub fn myrtle_task() -> TravelTask {
    serde_json::from_str(&fixture("travel_myrtle_task.json")).unwrap()
}

pub fn myrtle_instance() -> QueryInstance {
    let task = myrtle_task();
    QueryInstance {
        id: "myrtle".into(),
        domain: Domain::Travel,
        subset: Query::Travel(task.clone()).subset_label(),
        prompt_text: render_travel_query(&task),
        query: Query::Travel(task),
        golden: None,
    }
}

pub fn michelle() -> QueryInstance {
    text_instance(Domain::Calendar, "calendar_michelle_query.txt")
}

pub fn berlin() -> QueryInstance {
    text_instance(Domain::Trip, "trip_berlin_query.txt")
}

pub fn wharf() -> QueryInstance {
    text_instance(Domain::Meeting, "meeting_wharf_query.txt")
}
