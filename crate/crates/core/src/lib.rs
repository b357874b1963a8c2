//! Generate-test-critique loop for natural-language scheduling problems.
//!
//! A text generator proposes plans; sound per-domain critics accept or reject
//! them; a metacontroller feeds the critiques back until every critic agrees
//! or the budget runs out. Exhaustive oracles certify the critics at desk
//! scale.

pub mod critics;
pub mod domain;
pub mod gateway;
pub mod harness;
pub mod metacontroller;
pub mod oracle;
pub mod parse;
pub mod time;

pub use domain::{Domain, Query, QueryInstance};
pub use parse::{FormatCritique, PlanDocument};
