use crate::critics::run_critic_pipeline;
use crate::domain::QueryInstance;
use crate::gateway::{GenerationRequest, Generator};

use super::prompts::{build_backprompt, build_initial_prompt, split_candidates};
use super::templates::Templates;
use super::{IterationRecord, LoopConfig, LoopError, LoopOutcome, Strategy};

fn request(prompt: &str, cfg: &LoopConfig) -> GenerationRequest {
    let mut req = GenerationRequest::from_prompt(prompt, cfg.model.clone());
    req.temperature = cfg.temperature;
    req.max_tokens = cfg.max_tokens;
    req
}

fn call(
    generator: &dyn Generator,
    prompt: &str,
    cfg: &LoopConfig,
    transcript: &[IterationRecord],
) -> Result<String, LoopError> {
    generator
        .complete(&request(prompt, cfg))
        .map_err(|error| LoopError::Generator {
            error,
            transcript: transcript.to_vec(),
        })
}

fn check(
    instance: &QueryInstance,
    index: u32,
    prompt: &str,
    raw: String,
    depth: u32,
    parent: Option<u32>,
) -> IterationRecord {
    let result = run_critic_pipeline(instance, &raw);
    IterationRecord {
        index,
        prompt: prompt.to_string(),
        raw_response: raw,
        format: result.format,
        report: result.report,
        depth,
        parent,
    }
}

fn solved(
    instance: &QueryInstance,
    record: &IterationRecord,
    transcript: Vec<IterationRecord>,
    calls: u32,
) -> Result<LoopOutcome, LoopError> {
    let plan = record
        .format
        .parsed
        .clone()
        .ok_or_else(|| LoopError::Unsound("passing record without a plan".into()))?;
    LoopOutcome::solved(instance, plan, record.depth, transcript, calls)
}

/// Chain or BFS, as the config says.
pub fn run(
    templates: &Templates,
    instance: &QueryInstance,
    generator: &dyn Generator,
    cfg: &LoopConfig,
) -> Result<LoopOutcome, LoopError> {
    match cfg.strategy {
        Strategy::Chain => run_loop(templates, instance, generator, cfg),
        Strategy::Bfs => run_bfs(templates, instance, generator, cfg),
    }
}

/// One candidate per call until the critics agree or `budget` calls are spent.
pub fn run_loop(
    templates: &Templates,
    instance: &QueryInstance,
    generator: &dyn Generator,
    cfg: &LoopConfig,
) -> Result<LoopOutcome, LoopError> {
    cfg.validate()?;
    let mut transcript: Vec<IterationRecord> = Vec::new();
    for i in 1..=cfg.budget {
        let prompt = if i == 1 {
            build_initial_prompt(templates, instance, cfg)?
        } else {
            build_backprompt(templates, instance, &transcript, cfg)?
        };
        let raw = call(generator, &prompt, cfg, &transcript)?;
        let record = check(instance, i, &prompt, raw, i, (i > 1).then(|| i - 1));
        let passed = record.passed();
        transcript.push(record);
        if passed {
            let last = transcript.last().cloned().expect("just pushed");
            return solved(instance, &last, transcript, i);
        }
    }
    Ok(LoopOutcome::exhausted(cfg.budget, transcript, cfg.budget))
}

fn ancestors(records: &[IterationRecord], index: u32) -> Vec<IterationRecord> {
    let mut path = Vec::new();
    let mut cur = Some(index);
    while let Some(i) = cur {
        let r = &records[i as usize - 1];
        path.push(r.clone());
        cur = r.parent;
    }
    path.reverse();
    path
}

/// Level-order search: every failing node asks for `bfs_branch_k`
/// alternatives in one call, down to depth `budget`.
pub fn run_bfs(
    templates: &Templates,
    instance: &QueryInstance,
    generator: &dyn Generator,
    cfg: &LoopConfig,
) -> Result<LoopOutcome, LoopError> {
    cfg.validate()?;
    let k = cfg.bfs_branch_k;
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut calls = 0u32;
    // Parents to expand at the next level; `None` is the root.
    let mut frontier: Vec<Option<u32>> = vec![None];
    for depth in 1..=cfg.budget {
        let mut next = Vec::new();
        for parent in frontier {
            let prompt = match parent {
                None => build_initial_prompt(templates, instance, cfg)?,
                Some(p) => build_backprompt(templates, instance, &ancestors(&records, p), cfg)?,
            };
            let raw = call(generator, &prompt, cfg, &records)?;
            calls += 1;
            for candidate in split_candidates(&raw, k) {
                let index = records.len() as u32 + 1;
                let record = check(instance, index, &prompt, candidate, depth, parent);
                let passed = record.passed();
                records.push(record);
                if passed {
                    let last = records.last().cloned().expect("just pushed");
                    return solved(instance, &last, records, calls);
                }
                next.push(Some(index));
            }
        }
        frontier = next;
    }
    Ok(LoopOutcome::exhausted(cfg.budget, records, calls))
}
