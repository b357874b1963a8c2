mod common;

use common::*;
use modulo_core::domain::{Domain, QueryInstance};
use modulo_core::gateway::{GenerationRequest, Generator, RecordingGenerator, ScriptedGenerator};
use modulo_core::harness::generate::{generate_instances, GenParams};
use modulo_core::harness::query_text::render_sandbox;
use modulo_core::metacontroller::{
    build_backprompt, run_bfs, run_loop, FeedbackMode, IterationRecord, LoopConfig, LoopStatus, Strategy, Templates,
    BINARY_FEEDBACK, COT_SUFFIX,
};
use modulo_core::Query;
use proptest::prelude::*;

const VALID: &str = "Here is the proposed time: Monday, 14:30 - 15:30";
const CLASH: &str = "Here is the proposed time: Monday, 12:00 - 13:00";

fn scripted(responses: &[&str]) -> ScriptedGenerator {
    ScriptedGenerator::new(responses.iter().map(|s| s.to_string()).collect())
}

fn chain(inst: &QueryInstance, responses: &[&str], cfg: &LoopConfig) -> modulo_core::metacontroller::LoopOutcome {
    run_loop(&Templates::builtin(), inst, &scripted(responses), cfg).unwrap()
}

#[test]
fn fail_then_pass_solves_at_two() {
    let out = chain(&michelle(), &["no idea", VALID], &LoopConfig::default());
    assert_eq!(out.solved_at(), Some(2));
    assert_eq!(out.transcript().len(), 2);
    assert!(!out.transcript()[0].format.passed);
}

#[test]
fn valid_first_solves_at_one() {
    let out = chain(&michelle(), &[VALID], &LoopConfig::default());
    assert_eq!(out.solved_at(), Some(1));
    assert_eq!(out.generator_calls(), 1);
}

#[test]
fn repeated_failure_exhausts_the_budget() {
    let cfg = LoopConfig::default();
    let out = chain(&michelle(), &[CLASH; 10], &cfg);
    assert_eq!(out.transcript().len(), 10);
    match out.status() {
        LoopStatus::Exhausted { budget, last_feedback } => {
            assert_eq!(*budget, 10);
            assert_eq!(last_feedback, &vec![fixture("calendar_expected_critique.txt").trim().to_string()]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn budget_one_is_a_single_direct_call() {
    let cfg = LoopConfig {
        budget: 1,
        ..LoopConfig::default()
    };
    let rec = RecordingGenerator::new(scripted(&[CLASH, VALID]));
    let out = run_loop(&Templates::builtin(), &michelle(), &rec, &cfg).unwrap();
    assert!(!out.is_solved());
    let calls = rec.transcript().entries;
    assert_eq!(calls.len(), 1);
    assert!(!calls[0].request.prompt().contains("Incorrect meeting time"));
}

#[test]
fn generator_errors_carry_the_transcript() {
    let err = run_loop(&Templates::builtin(), &michelle(), &scripted(&[CLASH]), &LoopConfig::default()).unwrap_err();
    match err {
        modulo_core::metacontroller::LoopError::Generator { transcript, .. } => assert_eq!(transcript.len(), 1),
        other => panic!("{other:?}"),
    }
}

fn failing_records(inst: &QueryInstance, responses: &[String]) -> Vec<IterationRecord> {
    responses
        .iter()
        .enumerate()
        .map(|(i, raw)| {
            let r = modulo_core::critics::run_critic_pipeline(inst, raw);
            IterationRecord {
                index: i as u32 + 1,
                prompt: String::new(),
                raw_response: raw.clone(),
                format: r.format,
                report: r.report,
                depth: i as u32 + 1,
                parent: (i > 0).then_some(i as u32),
            }
        })
        .collect()
}

/// Section after the query block, where plans and critiques are quoted.
fn quoted_part<'a>(bp: &'a str, inst: &QueryInstance) -> &'a str {
    let at = bp.rfind(&inst.prompt_text).unwrap() + inst.prompt_text.len();
    &bp[at..]
}

#[test]
fn binary_mode_carries_only_the_fixed_sentence() {
    let inst = myrtle_instance();
    let recs = failing_records(&inst, &[fixture("travel_response.txt")]);
    let cfg = LoopConfig {
        feedback_mode: FeedbackMode::Binary,
        ..LoopConfig::default()
    };
    let bp = build_backprompt(&Templates::builtin(), &inst, &recs, &cfg).unwrap();
    let block = bp.split("feedback below:\n").nth(1).unwrap();
    let block = block.split("\n\nFixed Travel Plan").next().unwrap();
    assert_eq!(block, BINARY_FEEDBACK);
    for m in recs[0].feedback_messages() {
        assert!(!bp.contains(&m), "{m}");
    }
}

#[test]
fn first_only_keeps_one_message() {
    let inst = myrtle_instance();
    let recs = failing_records(&inst, &[fixture("travel_response.txt")]);
    assert_eq!(recs[0].feedback_messages().len(), 2);
    let cfg = LoopConfig {
        feedback_mode: FeedbackMode::FirstOnly,
        ..LoopConfig::default()
    };
    let bp = build_backprompt(&Templates::builtin(), &inst, &recs, &cfg).unwrap();
    let block = bp.split("feedback below:\n").nth(1).unwrap();
    let block = block.split("\n\nFixed Travel Plan").next().unwrap();
    assert_eq!(block, "1. The accommodation Cozy Brooklyn Room - Next to Pratt Institute, Myrtle Beach do not obey the minumum nights rule.");
}

#[test]
fn cot_suffix_ends_every_prompt() {
    let cfg = LoopConfig {
        cot_suffix: true,
        ..LoopConfig::default()
    };
    let rec = RecordingGenerator::new(scripted(&[CLASH, VALID]));
    run_loop(&Templates::builtin(), &michelle(), &rec, &cfg).unwrap();
    for e in rec.transcript().entries {
        assert!(e.request.prompt().ends_with(COT_SUFFIX));
    }
}

fn attempt(j: usize) -> String {
    // Distinct raw text, same invalid slot for every attempt.
    format!("{CLASH} (attempt {j:02})")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn history_window_keeps_the_latest_n(n in 0u32..50, m in 1usize..50) {
        let inst = michelle();
        let responses: Vec<String> = (1..=m).map(attempt).collect();
        let recs = failing_records(&inst, &responses);
        let cfg = LoopConfig { history_n: n, ..LoopConfig::default() };
        let bp = build_backprompt(&Templates::builtin(), &inst, &recs, &cfg).unwrap();
        let quoted = quoted_part(&bp, &inst);
        let keep = (n.max(1) as usize).min(m);
        for j in 1..=m {
            let shown = quoted.contains(&format!("(attempt {j:02})"));
            prop_assert_eq!(shown, j > m - keep, "attempt {} of {} with n={}", j, m, n);
        }
    }

    #[test]
    fn unique_history_collapses_identical_renders(n in 1u32..50, m in 1usize..30) {
        let inst = michelle();
        let responses: Vec<String> = (1..=m).map(attempt).collect();
        let recs = failing_records(&inst, &responses);
        let cfg = LoopConfig { history_n: n, history_unique_only: true, ..LoopConfig::default() };
        let bp = build_backprompt(&Templates::builtin(), &inst, &recs, &cfg).unwrap();
        // All attempts render to the same slot, so only the latest survives.
        prop_assert!(!bp.contains("Previously generated incorrect plans"));
        let latest = format!("(attempt {m:02})");
        prop_assert!(bp.contains(&latest));
    }
}

#[test]
fn history_two_after_three_failures() {
    let inst = berlin();
    let base = fixture("trip_response.txt");
    let responses: Vec<String> = (1..=3).map(|j| format!("{}\nVariant {j}.", base.trim())).collect();
    let recs = failing_records(&inst, &responses);
    let cfg = LoopConfig {
        history_n: 2,
        history_include_critiques: true,
        ..LoopConfig::default()
    };
    let bp = build_backprompt(&Templates::builtin(), &inst, &recs, &cfg).unwrap();
    assert!(!bp.contains("Variant 1."));
    assert!(bp.contains("Previously generated incorrect plans:\n\nPlan 2:\n"));
    assert!(bp.contains("Variant 2.\nErrors:\n"));
    assert!(bp.contains("Incorrect plan:\n") && bp.contains("Variant 3.\n\nErrors with the above plan:\n"));
}

#[test]
fn filtering_removes_flagged_listings_for_good() {
    let inst = myrtle_instance();
    let Query::Travel(task) = &inst.query else { unreachable!() };
    let flagged = "Cozy Brooklyn Room - Next to Pratt Institute";
    let sandbox_block = render_sandbox(&task.sandbox);
    assert!(sandbox_block.contains(flagged));
    let first = fixture("travel_response.txt");
    let cfg = LoopConfig {
        filtering_enabled: true,
        budget: 4,
        ..LoopConfig::default()
    };
    let rec = RecordingGenerator::new(scripted(&[&first, "not json", "still not json", "no"]));
    let out = run_loop(&Templates::builtin(), &inst, &rec, &cfg).unwrap();
    assert!(!out.is_solved());
    let prompts: Vec<String> = rec.transcript().entries.iter().map(|e| e.request.prompt().to_string()).collect();
    let reference = |p: &str| p.split("Given information:\n").nth(1).unwrap().split("\nQuery: ").next().unwrap().to_string();
    assert!(reference(&prompts[0]).contains(flagged));
    for p in &prompts[1..] {
        let rows = reference(p);
        assert!(!rows.contains(flagged), "flagged row kept");
        assert!(rows.contains("Sunny Oceanfront Studio"));
    }
    // Without filtering the row stays.
    let plain = RecordingGenerator::new(scripted(&[&first, "x"]));
    run_loop(&Templates::builtin(), &inst, &plain, &LoopConfig { budget: 2, ..LoopConfig::default() }).unwrap();
    assert!(reference(plain.transcript().entries[1].request.prompt()).contains(flagged));
}

#[test]
fn bfs_with_one_branch_is_the_chain() {
    let inst = michelle();
    let script = ["nothing", CLASH, "Monday?", VALID];
    let chain_cfg = LoopConfig::default();
    let bfs_cfg = LoopConfig {
        strategy: Strategy::Bfs,
        bfs_branch_k: 1,
        ..LoopConfig::default()
    };
    let a = run_loop(&Templates::builtin(), &inst, &scripted(&script), &chain_cfg).unwrap();
    let b = run_bfs(&Templates::builtin(), &inst, &scripted(&script), &bfs_cfg).unwrap();
    assert_eq!(a, b);
    let a = run_loop(&Templates::builtin(), &inst, &scripted(&[CLASH; 10]), &chain_cfg).unwrap();
    let b = run_bfs(&Templates::builtin(), &inst, &scripted(&[CLASH; 10]), &bfs_cfg).unwrap();
    assert_eq!(a, b);
}

fn listed(items: &[&str]) -> String {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| format!("Solution {}: {s}", i + 1))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn bfs_finds_the_first_valid_child_at_depth_two() {
    let inst = michelle();
    let level1 = listed(&[CLASH, "Here is the proposed time: Monday, 9:00 - 10:00", "junk"]);
    let child_a = listed(&["junk", "junk", "junk"]);
    let child_b = listed(&["junk", VALID, CLASH]);
    let unused = listed(&[VALID, VALID, VALID]);
    let cfg = LoopConfig {
        strategy: Strategy::Bfs,
        bfs_branch_k: 3,
        ..LoopConfig::default()
    };
    let gen = scripted(&[&level1, &child_a, &child_b, &unused]);
    let out = run_bfs(&Templates::builtin(), &inst, &gen, &cfg).unwrap();
    assert_eq!(out.solved_at(), Some(2));
    assert_eq!(out.generator_calls(), 3);
    assert_eq!(gen.remaining(), 1);
    // 3 at level one, 3 from the first child, 2 from the second.
    assert_eq!(out.transcript().len(), 8);
    let last = out.transcript().last().unwrap();
    assert_eq!((last.depth, last.parent), (2, Some(2)));
    assert!(out.transcript()[0].prompt.ends_with("up to \"Solution 3:\"."));
}

/// Answers every call with k failing candidates.
struct AlwaysWrong(u32);

impl Generator for AlwaysWrong {
    fn complete(&self, _req: &GenerationRequest) -> Result<String, modulo_core::gateway::GatewayError> {
        Ok(listed(&vec![CLASH; self.0 as usize]))
    }
}

#[test]
fn bfs_node_count_is_bounded() {
    let inst = michelle();
    for (k, depth) in [(3u32, 4u32), (2, 5)] {
        let cfg = LoopConfig {
            strategy: Strategy::Bfs,
            bfs_branch_k: k,
            budget: depth,
            ..LoopConfig::default()
        };
        let out = run_bfs(&Templates::builtin(), &inst, &AlwaysWrong(k), &cfg).unwrap();
        let bound: u32 = (1..=depth).map(|d| k.pow(d)).sum();
        assert!(!out.is_solved());
        assert_eq!(out.transcript().len() as u32, bound);
        assert!(out.transcript().iter().all(|r| r.depth <= depth));
    }
}

#[test]
fn replay_is_byte_identical() {
    let insts = generate_instances(Domain::Trip, &GenParams { cities: Some(4), ..GenParams::default() }, 3, 5).unwrap();
    for inst in &insts {
        let golden = inst.golden.clone().unwrap();
        let script = ["SOLUTION: nothing", "**Day 1-2:** somewhere", golden.as_str()];
        let cfg = LoopConfig {
            history_n: 3,
            history_include_critiques: true,
            ..LoopConfig::default()
        };
        let a = chain(inst, &script, &cfg);
        let b = chain(inst, &script, &cfg);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.solved_at(), Some(3));
    }
}
