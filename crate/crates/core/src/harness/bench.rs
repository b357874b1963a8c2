//! Parallel benchmark runs over a set of instances.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use serde::Serialize;

use crate::domain::{Domain, QueryInstance};
use crate::gateway::{
    load_script, make_backend, BackendSpec, CacheGenerator, GatewayError, Generator, ScriptFile, ScriptedGenerator,
};
use crate::metacontroller::{run, LoopConfig, LoopError, LoopOutcome, Templates};

use super::evaluate::evaluate_plan;

/// Result of one instance's loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub id: String,
    pub domain: Domain,
    pub subset: String,
    pub valid: bool,
    pub optimal: Option<bool>,
    /// Generator calls spent.
    pub iterations_used: u32,
    /// Iteration (or BFS depth) of the accepted plan.
    pub solved_at: Option<u32>,
    pub error: Option<String>,
    pub outcome: Option<LoopOutcome>,
}

/// Builds a fresh backend per instance so scripted queues are never shared
/// between concurrent loops.
pub type BackendFactory<'a> = dyn Fn(&QueryInstance) -> Result<Box<dyn Generator>, GatewayError> + Sync + 'a;

enum Prepared {
    Shared(Arc<dyn Generator>),
    Script(ScriptFile),
    Cache {
        dir: PathBuf,
        read_only: bool,
        inner: Option<Box<Prepared>>,
    },
}

fn prepare(spec: &BackendSpec) -> Result<Prepared, GatewayError> {
    Ok(match spec {
        BackendSpec::Http { .. } => Prepared::Shared(Arc::from(make_backend(spec)?)),
        BackendSpec::Scripted { script } => Prepared::Script(load_script(script)?),
        BackendSpec::Cache { dir, read_only, inner } => {
            if !*read_only && inner.is_none() {
                return Err(GatewayError::BadConfig("a writable cache needs an inner backend".into()));
            }
            Prepared::Cache {
                dir: dir.clone(),
                read_only: *read_only,
                inner: match inner {
                    Some(i) if !*read_only => Some(Box::new(prepare(i)?)),
                    _ => None,
                },
            }
        }
    })
}

fn instantiate(p: &Prepared, id: &str) -> Result<Box<dyn Generator>, GatewayError> {
    Ok(match p {
        Prepared::Shared(g) => Box::new(Arc::clone(g)),
        Prepared::Script(file) => Box::new(ScriptedGenerator::new(file.responses_for(id))),
        Prepared::Cache { dir, read_only, inner } => {
            let inner = inner.as_deref().map(|i| instantiate(i, id)).transpose()?;
            Box::new(CacheGenerator::new(dir, inner, *read_only)?)
        }
    })
}

/// A factory for `spec`. Live clients are shared; every instance gets its
/// own script queue, picked by id when the script is keyed that way.
pub fn factory_from_spec(spec: &BackendSpec) -> Result<Box<BackendFactory<'static>>, GatewayError> {
    let prepared = prepare(spec)?;
    Ok(Box::new(move |inst: &QueryInstance| instantiate(&prepared, &inst.id)))
}

/// Short label for reports: the outermost backend kind.
pub fn backend_label(spec: &BackendSpec) -> &'static str {
    match spec {
        BackendSpec::Http { .. } => "http",
        BackendSpec::Scripted { .. } => "scripted",
        BackendSpec::Cache { .. } => "cache",
    }
}

pub fn evaluate_instance(
    templates: &Templates,
    instance: &QueryInstance,
    generator: &dyn Generator,
    cfg: &LoopConfig,
) -> EvalResult {
    let mut result = EvalResult {
        id: instance.id.clone(),
        domain: instance.domain,
        subset: instance.subset.clone(),
        valid: false,
        optimal: None,
        iterations_used: 0,
        solved_at: None,
        error: None,
        outcome: None,
    };
    match run(templates, instance, generator, cfg) {
        Ok(outcome) => {
            if let Some(plan) = outcome.plan() {
                let score = evaluate_plan(instance, plan);
                result.valid = score.valid;
                result.optimal = score.optimal;
                result.solved_at = outcome.solved_at();
            }
            result.iterations_used = outcome.generator_calls();
            result.outcome = Some(outcome);
        }
        Err(LoopError::Generator { error, transcript }) => {
            result.iterations_used = transcript.len() as u32;
            result.error = Some(error.to_string());
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result
}

/// Runs every instance on a pool of `workers` threads. Results come back in
/// id order whatever the scheduling.
pub fn run_benchmark(
    instances: &[QueryInstance],
    factory: &BackendFactory<'_>,
    templates: &Templates,
    cfg: &LoopConfig,
    workers: usize,
) -> Vec<EvalResult> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(instances.len()));
    let workers = workers.clamp(1, instances.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(instance) = instances.get(i) else { break };
                let result = match factory(instance) {
                    Ok(backend) => evaluate_instance(templates, instance, backend.as_ref(), cfg),
                    Err(e) => EvalResult {
                        id: instance.id.clone(),
                        domain: instance.domain,
                        subset: instance.subset.clone(),
                        valid: false,
                        optimal: None,
                        iterations_used: 0,
                        solved_at: None,
                        error: Some(e.to_string()),
                        outcome: None,
                    },
                };
                results.lock().expect("result lock").push(result);
            });
        }
    });
    let mut results = results.into_inner().expect("result lock");
    results.sort_by(|a, b| a.id.cmp(&b.id));
    results
}
