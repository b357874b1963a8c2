//! Instances, evaluation and benchmark runs.

pub mod bench;
pub mod dataset;
pub mod evaluate;
pub mod generate;
pub mod ingest;
pub mod query_text;
pub mod report;
