mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use modulo_core::critics::run_critic_pipeline;
use modulo_core::domain::{Domain, Query, QueryInstance, TravelTask};
use modulo_core::harness::bench::{backend_label, factory_from_spec, run_benchmark};
use modulo_core::harness::dataset::{instances_to_jsonl, load_instances};
use modulo_core::harness::evaluate::evaluate_plan;
use modulo_core::harness::generate::{generate_instances, GenParams};
use modulo_core::harness::ingest::{ingest_natural_plan, ingest_travelplanner_csv};
use modulo_core::harness::query_text::{instance_from_query, instance_from_text};
use modulo_core::harness::report::{Report, ReportFormat, ReportMeta};
use modulo_core::metacontroller::Templates;
use modulo_core::oracle::{solve, CancelToken};
use modulo_core::parse::render_plan;

use config::{bad, BadConfig, RunArgs};

#[derive(Debug, Parser)]
#[command(name = "modulo", version, about = "Generate-test-critique loops over scheduling benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the loop over a dataset and write reports.
    Run(RunArgs),
    /// Check one plan against one query.
    Verify {
        #[arg(long)]
        domain: Domain,
        /// Instance or query JSON, or Natural Plan query text.
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Solve a query exhaustively.
    Oracle {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        query: PathBuf,
    },
    /// Generate satisfiable synthetic instances as JSON lines.
    Gen {
        #[arg(long)]
        domain: Domain,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        participants: Option<u32>,
        #[arg(long)]
        days: Option<u32>,
        #[arg(long)]
        cities: Option<u32>,
        #[arg(long)]
        friends: Option<u32>,
        #[arg(long)]
        travel_days: Option<u32>,
        #[arg(long)]
        constraints: Option<u32>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render a saved report.
    Report {
        /// Directory holding report.json.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert upstream benchmark files to JSON lines.
    Ingest {
        #[arg(long, value_enum)]
        source: Source,
        /// Domain of a Natural Plan file.
        #[arg(long)]
        domain: Option<Domain>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    NaturalPlan,
    Travelplanner,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Accepts an instance, a bare query, a travel task, or query text.
fn load_query(domain: Domain, path: &Path) -> anyhow::Result<QueryInstance> {
    let text = read(path)?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let inst = if let Ok(inst) = serde_json::from_str::<QueryInstance>(&text) {
        inst
    } else if let Ok(q) = serde_json::from_str::<Query>(&text) {
        instance_from_query(id, q)
    } else if let Ok(t) = serde_json::from_str::<TravelTask>(&text) {
        instance_from_query(id, Query::Travel(t))
    } else {
        instance_from_text(id, domain, &text).map_err(|e| bad(format!("{}: {e}", path.display())))?
    };
    if inst.domain != domain {
        return Err(bad(format!("{} holds a {} query, not {domain}", path.display(), inst.domain)));
    }
    Ok(inst)
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let s = args.resolve()?;
    let mut instances = load_instances(&s.dataset).map_err(|e| bad(e.to_string()))?;
    if let Some(d) = s.domain {
        instances.retain(|i| i.domain == d);
    }
    if instances.is_empty() {
        return Err(bad(format!("{} has no instances to run", s.dataset.display())));
    }
    let factory = factory_from_spec(&s.backend).map_err(|e| bad(e.to_string()))?;
    let templates = Templates::builtin();
    let results = run_benchmark(&instances, factory.as_ref(), &templates, &s.loop_config, s.workers);
    let meta = ReportMeta {
        backend: backend_label(&s.backend).to_string(),
        config: s.loop_config.clone(),
    };
    let report = Report::from_results(meta, &results);
    report.write_to(&s.out, &ReportFormat::ALL)?;
    let mut lines = String::new();
    for r in &results {
        lines.push_str(&serde_json::to_string(r)?);
        lines.push('\n');
    }
    std::fs::write(s.out.join("results.jsonl"), lines)?;
    print!("{}", report.to_csv());
    let errored = report.errored();
    if errored > 0 {
        for i in report.instances.iter().filter(|i| i.error.is_some()) {
            eprintln!("{}: {}", i.id, i.error.as_deref().unwrap_or(""));
        }
        eprintln!("{errored} instance(s) errored");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(domain: Domain, query: &Path, plan: &Path) -> anyhow::Result<ExitCode> {
    let inst = load_query(domain, query)?;
    let text = read(plan)?;
    let result = run_critic_pipeline(&inst, &text);
    let score = result.format.parsed.as_ref().map(|p| evaluate_plan(&inst, p));
    let out = json!({
        "valid": result.all_passed(),
        "optimal": score.and_then(|s| s.optimal),
        "format": result.format.messages,
        "messages": result.feedback_messages(),
        "report": result.report,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if result.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_oracle(domain: Domain, query: &Path) -> anyhow::Result<ExitCode> {
    let inst = load_query(domain, query)?;
    let verdict = solve(&inst.query, &CancelToken::new()).map_err(|e| bad(e.to_string()))?;
    let out = json!({
        "valid": verdict.valid,
        "optimum": verdict.optimum,
        "witness": verdict.witness.as_ref().map(render_plan),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn run_cli(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Verify { domain, query, plan } => cmd_verify(domain, &query, &plan),
        Command::Oracle { domain, query } => cmd_oracle(domain, &query),
        Command::Gen {
            domain,
            n,
            seed,
            participants,
            days,
            cities,
            friends,
            travel_days,
            constraints,
            out,
        } => {
            let params = GenParams {
                participants,
                days,
                cities,
                friends,
                travel_days,
                constraints,
            };
            let insts = generate_instances(domain, &params, n, seed).map_err(|e| bad(e.to_string()))?;
            emit(out.as_deref(), &instances_to_jsonl(&insts))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, format, out } => {
            let format: ReportFormat = format.parse().map_err(|e: modulo_core::harness::report::ReportError| bad(e.to_string()))?;
            let report = Report::from_json(&read(&input.join("report.json"))?).map_err(|e| bad(e.to_string()))?;
            emit(out.as_deref(), &report.render(format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ingest {
            source,
            domain,
            input,
            out,
        } => {
            let text = read(&input)?;
            let insts = match source {
                Source::NaturalPlan => {
                    let domain = domain.ok_or_else(|| bad("--source natural-plan needs --domain"))?;
                    ingest_natural_plan(domain, &text)
                }
                Source::Travelplanner => ingest_travelplanner_csv(&text),
            }
            .map_err(|e| bad(e.to_string()))?;
            emit(out.as_deref(), &instances_to_jsonl(&insts))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<BadConfig>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
