//! The generate-test-critique loop: prompt construction, backprompts and the
//! chain and breadth-first search drivers.

mod prompts;
mod search;
mod templates;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critics::{critique_plan, CritiqueReport};
use crate::domain::{Domain, QueryInstance};
use crate::gateway::GatewayError;
use crate::parse::{FormatCritique, PlanDocument};

pub use prompts::{
    build_backprompt, build_initial_prompt, flagged_accommodations, history_window, split_candidates,
    BINARY_FEEDBACK, COT_SUFFIX,
};
pub use search::{run, run_bfs, run_loop};
pub use templates::{fill, Fill, TemplateKind, Templates, CRITIC_EXTRACTION_PROMPT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("generator failed after {} records: {error}", transcript.len())]
    Generator {
        error: GatewayError,
        transcript: Vec<IterationRecord>,
    },
    #[error("no {kind} template for {domain}")]
    MissingTemplate { domain: Domain, kind: TemplateKind },
    #[error("the last record has no failing critique to report")]
    NoFailureToReport,
    #[error("bad loop config: {0}")]
    BadConfig(String),
    #[error("plan rejected on re-verification: {0}")]
    Unsound(String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackMode {
    #[default]
    Full,
    Binary,
    FirstOnly,
}

impl FromStr for FeedbackMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(FeedbackMode::Full),
            "binary" => Ok(FeedbackMode::Binary),
            "first" | "first_only" | "first-only" => Ok(FeedbackMode::FirstOnly),
            other => Err(format!("unknown feedback mode {other:?} (expected full, binary or first)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Chain,
    Bfs,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chain" => Ok(Strategy::Chain),
            "bfs" => Ok(Strategy::Bfs),
            other => Err(format!("unknown strategy {other:?} (expected chain or bfs)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Chain => "chain",
            Strategy::Bfs => "bfs",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoopConfig {
    /// Generator calls for a chain; depth limit for BFS.
    pub budget: u32,
    pub feedback_mode: FeedbackMode,
    /// Most recent failures shown in a backprompt, the latest included.
    pub history_n: u32,
    pub history_unique_only: bool,
    pub history_include_critiques: bool,
    /// Travel only: drop flagged accommodations from the reference block.
    pub filtering_enabled: bool,
    pub cot_suffix: bool,
    pub strategy: Strategy,
    pub bfs_branch_k: u32,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: Option<u32>,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            budget: 10,
            feedback_mode: FeedbackMode::Full,
            history_n: 1,
            history_unique_only: false,
            history_include_critiques: false,
            filtering_enabled: false,
            cot_suffix: false,
            strategy: Strategy::Chain,
            bfs_branch_k: 1,
            model: "gpt-4o-mini".into(),
            temperature: 0.0,
            max_tokens: None,
        }
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<(), LoopError> {
        if self.budget == 0 {
            return Err(LoopError::BadConfig("budget must be at least 1".into()));
        }
        if self.bfs_branch_k == 0 {
            return Err(LoopError::BadConfig("bfs_branch_k must be at least 1".into()));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(LoopError::BadConfig(format!(
                "temperature {} is outside 0..=2",
                self.temperature
            )));
        }
        Ok(())
    }
}

/// One checked candidate. Chains have one record per generator call; BFS
/// has one per candidate, so a call can leave up to k records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub index: u32,
    pub prompt: String,
    pub raw_response: String,
    pub format: FormatCritique,
    pub report: Option<CritiqueReport>,
    /// 1 for answers to the initial prompt.
    pub depth: u32,
    /// Index of the record whose failure this one answers.
    pub parent: Option<u32>,
}

impl IterationRecord {
    pub fn passed(&self) -> bool {
        self.format.passed && self.report.as_ref().is_some_and(|r| r.all_passed)
    }

    /// Format problems when the response did not parse, constraint
    /// violations otherwise.
    pub fn feedback_messages(&self) -> Vec<String> {
        if !self.format.passed {
            return self.format.messages.clone();
        }
        self.report.as_ref().map(|r| r.messages()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LoopStatus {
    Solved { plan: PlanDocument, at_iteration: u32 },
    Exhausted { budget: u32, last_feedback: Vec<String> },
}

/// Serializes for reports; there is no way back in, so every value went
/// through [`LoopOutcome::solved`] or [`LoopOutcome::exhausted`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopOutcome {
    status: LoopStatus,
    transcript: Vec<IterationRecord>,
    generator_calls: u32,
}

impl LoopOutcome {
    /// Re-runs the constraint critics; a plan they reject cannot be
    /// reported as solved.
    pub fn solved(
        instance: &QueryInstance,
        plan: PlanDocument,
        at_iteration: u32,
        transcript: Vec<IterationRecord>,
        generator_calls: u32,
    ) -> Result<Self, LoopError> {
        let report = critique_plan(&instance.query, &plan);
        if !report.all_passed {
            return Err(LoopError::Unsound(report.messages().join("; ")));
        }
        Ok(LoopOutcome {
            status: LoopStatus::Solved { plan, at_iteration },
            transcript,
            generator_calls,
        })
    }

    pub fn exhausted(budget: u32, transcript: Vec<IterationRecord>, generator_calls: u32) -> Self {
        let last_feedback = transcript
            .last()
            .map(IterationRecord::feedback_messages)
            .unwrap_or_default();
        LoopOutcome {
            status: LoopStatus::Exhausted { budget, last_feedback },
            transcript,
            generator_calls,
        }
    }

    pub fn status(&self) -> &LoopStatus {
        &self.status
    }

    pub fn transcript(&self) -> &[IterationRecord] {
        &self.transcript
    }

    pub fn generator_calls(&self) -> u32 {
        self.generator_calls
    }

    pub fn is_solved(&self) -> bool {
        matches!(self.status, LoopStatus::Solved { .. })
    }

    pub fn plan(&self) -> Option<&PlanDocument> {
        match &self.status {
            LoopStatus::Solved { plan, .. } => Some(plan),
            LoopStatus::Exhausted { .. } => None,
        }
    }

    /// Iteration (chain) or depth (BFS) of the accepted plan.
    pub fn solved_at(&self) -> Option<u32> {
        match &self.status {
            LoopStatus::Solved { at_iteration, .. } => Some(*at_iteration),
            LoopStatus::Exhausted { .. } => None,
        }
    }

    pub fn into_transcript(self) -> Vec<IterationRecord> {
        self.transcript
    }
}
