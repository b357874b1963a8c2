use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

use crate::critics::{accommodations_flagged_in, render_feedback};
use crate::domain::{Domain, Query, QueryInstance};
use crate::harness::query_text::filter_context;
use crate::parse::{render_plan, PlanDocument};

use super::templates::{fill, Fill, TemplateKind, Templates};
use super::{FeedbackMode, IterationRecord, LoopConfig, LoopError};

pub const BINARY_FEEDBACK: &str = "This time doesn't work. Come up with an alternative schedule";
pub const COT_SUFFIX: &str = "Think step-by-step";

const HISTORY_HEADER: &str = "Previously generated incorrect plans:\n\n";

fn finish(mut prompt: String, cfg: &LoopConfig) -> String {
    let k = cfg.bfs_branch_k;
    if cfg.strategy == super::Strategy::Bfs && k > 1 {
        prompt.push_str(&format!(
            "\nGive {k} different solutions. Start each one on its own line with \"Solution 1:\", \"Solution 2:\" and so on up to \"Solution {k}:\"."
        ));
    }
    if cfg.cot_suffix {
        prompt.push('\n');
        prompt.push_str(COT_SUFFIX);
    }
    prompt
}

pub fn build_initial_prompt(
    templates: &Templates,
    instance: &QueryInstance,
    cfg: &LoopConfig,
) -> Result<String, LoopError> {
    let template = templates.get(instance.domain, TemplateKind::Initial)?;
    let prompt = fill(
        template,
        &Fill {
            query: &instance.prompt_text,
            ..Fill::default()
        },
    );
    Ok(finish(prompt, cfg))
}

/// Key for unique-history deduplication: the canonical render when the
/// record parsed, the trimmed response otherwise.
pub(crate) fn plan_text(record: &IterationRecord) -> String {
    match &record.format.parsed {
        Some(plan) => render_plan(plan).trim_end().to_string(),
        None => record.raw_response.trim().to_string(),
    }
}

/// What a record looks like when quoted back. Travel plans are re-rendered
/// so code fences and chatter drop out; other domains quote the response.
pub(crate) fn quoted_plan(record: &IterationRecord) -> String {
    match &record.format.parsed {
        Some(plan @ PlanDocument::Travel(_)) => render_plan(plan).trim_end().to_string(),
        _ => record.raw_response.trim().to_string(),
    }
}

fn feedback_text(domain: Domain, messages: &[String], mode: FeedbackMode) -> String {
    match mode {
        FeedbackMode::Full => render_feedback(domain, messages),
        FeedbackMode::Binary => BINARY_FEEDBACK.to_string(),
        FeedbackMode::FirstOnly => render_feedback(domain, &messages[..messages.len().min(1)]),
    }
}

/// The failures a backprompt quotes, oldest first. The last element is the
/// latest failure; `history_n` 0 behaves as 1.
pub fn history_window<'a>(history: &'a [IterationRecord], cfg: &LoopConfig) -> Vec<&'a IterationRecord> {
    let failures: Vec<&IterationRecord> = history.iter().filter(|r| !r.passed()).collect();
    let failures = if cfg.history_unique_only {
        let mut seen = BTreeSet::new();
        let mut kept: Vec<&IterationRecord> = failures
            .into_iter()
            .rev()
            .filter(|r| seen.insert(plan_text(r)))
            .collect();
        kept.reverse();
        kept
    } else {
        failures
    };
    let n = (cfg.history_n.max(1) as usize).min(failures.len());
    failures[failures.len() - n..].to_vec()
}

/// Names of accommodations the critics flagged as unusable in any of the
/// given records.
pub fn flagged_accommodations(instance: &QueryInstance, history: &[IterationRecord]) -> BTreeSet<String> {
    let Query::Travel(task) = &instance.query else {
        return BTreeSet::new();
    };
    history
        .iter()
        .filter_map(|r| match &r.format.parsed {
            Some(PlanDocument::Travel(days)) => Some(accommodations_flagged_in(task, days)),
            _ => None,
        })
        .flatten()
        .map(|p| p.name)
        .collect()
}

/// Fix prompt answering the last record of `history`, which holds the
/// ancestors of the next candidate, oldest first.
pub fn build_backprompt(
    templates: &Templates,
    instance: &QueryInstance,
    history: &[IterationRecord],
    cfg: &LoopConfig,
) -> Result<String, LoopError> {
    let last = history.last().ok_or(LoopError::NoFailureToReport)?;
    let messages = last.feedback_messages();
    if last.passed() || messages.is_empty() {
        return Err(LoopError::NoFailureToReport);
    }
    let template = templates.get(instance.domain, TemplateKind::Fix)?;

    let window = history_window(history, cfg);
    let earlier = &window[..window.len().saturating_sub(1)];
    let history_block = if earlier.is_empty() {
        String::new()
    } else {
        let entries: Vec<String> = earlier
            .iter()
            .map(|r| {
                let mut entry = format!("Plan {}:\n{}", r.index, quoted_plan(r));
                if cfg.history_include_critiques {
                    entry.push_str("\nErrors:\n");
                    entry.push_str(&feedback_text(instance.domain, &r.feedback_messages(), cfg.feedback_mode));
                }
                entry
            })
            .collect();
        format!("{HISTORY_HEADER}{}\n\n", entries.join("\n\n"))
    };

    let query = if cfg.filtering_enabled && instance.domain == Domain::Travel {
        filter_context(&instance.prompt_text, &flagged_accommodations(instance, history))
    } else {
        instance.prompt_text.clone()
    };
    let previous = quoted_plan(last);
    let critiques = feedback_text(instance.domain, &messages, cfg.feedback_mode);
    let prompt = fill(
        template,
        &Fill {
            query: &query,
            previous_plan: &previous,
            critiques: &critiques,
            history: &history_block,
        },
    );
    Ok(finish(prompt, cfg))
}

fn solution_marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?m)^[ \t*#]*Solution (\d+)[ \t]*:[ \t*]*").unwrap())
}

/// Splits a multi-solution completion into at most `k` candidates. Text
/// without markers is one candidate.
pub fn split_candidates(text: &str, k: u32) -> Vec<String> {
    if k <= 1 {
        return vec![text.to_string()];
    }
    let marks: Vec<_> = solution_marker().find_iter(text).collect();
    if marks.is_empty() {
        return vec![text.to_string()];
    }
    marks
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let end = marks.get(i + 1).map_or(text.len(), |n| n.start());
            text[m.end()..end].trim().to_string()
        })
        .take(k as usize)
        .collect()
}
