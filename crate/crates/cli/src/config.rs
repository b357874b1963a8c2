use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use modulo_core::domain::Domain;
use modulo_core::gateway::{BackendSpec, DEFAULT_API_KEY_ENV};
use modulo_core::metacontroller::{FeedbackMode, LoopConfig, Strategy};

/// Setup problems; these exit with status 2.
#[derive(Debug)]
pub struct BadConfig(pub String);

impl fmt::Display for BadConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadConfig {}

pub fn bad(msg: impl Into<String>) -> anyhow::Error {
    BadConfig(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Http,
    Scripted,
    Cache,
}

/// The JSON config file. Every `run` flag has a field here; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunFile {
    pub domain: Option<Domain>,
    pub dataset: Option<PathBuf>,
    pub backend: Option<BackendSpec>,
    #[serde(rename = "loop")]
    pub loop_config: Option<LoopConfig>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Keep only instances of this domain.
    #[arg(long)]
    pub domain: Option<Domain>,
    /// JSON-lines instance file.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Base URL of a chat-completions endpoint, e.g. http://localhost:8000/v1.
    #[arg(long)]
    pub url: Option<String>,
    #[arg(long)]
    pub api_key_env: Option<String>,
    /// Response script for the scripted backend (or behind a cache).
    #[arg(long)]
    pub script: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Serve from the cache only; misses are errors.
    #[arg(long)]
    pub read_only: bool,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub budget: Option<u32>,
    /// full, binary or first.
    #[arg(long)]
    pub feedback: Option<FeedbackMode>,
    #[arg(long)]
    pub history: Option<u32>,
    #[arg(long)]
    pub history_unique: bool,
    #[arg(long)]
    pub history_critiques: bool,
    #[arg(long)]
    pub filtering: bool,
    #[arg(long)]
    pub cot: bool,
    /// chain or bfs.
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub branch: Option<u32>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct RunSettings {
    pub domain: Option<Domain>,
    pub dataset: PathBuf,
    pub backend: BackendSpec,
    pub loop_config: LoopConfig,
    pub workers: usize,
    pub out: PathBuf,
}

fn backend_from_flags(kind: BackendKind, a: &RunArgs) -> anyhow::Result<BackendSpec> {
    let http = |a: &RunArgs| -> anyhow::Result<BackendSpec> {
        Ok(BackendSpec::Http {
            url: a.url.clone().ok_or_else(|| bad("--backend http needs --url"))?,
            api_key_env: a.api_key_env.clone().unwrap_or_else(|| DEFAULT_API_KEY_ENV.into()),
            max_retries: 3,
            timeout_secs: 120,
        })
    };
    Ok(match kind {
        BackendKind::Http => http(a)?,
        BackendKind::Scripted => BackendSpec::Scripted {
            script: a.script.clone().ok_or_else(|| bad("--backend scripted needs --script"))?,
        },
        BackendKind::Cache => {
            let inner = if a.read_only {
                None
            } else if let Some(script) = &a.script {
                Some(Box::new(BackendSpec::Scripted { script: script.clone() }))
            } else if a.url.is_some() {
                Some(Box::new(http(a)?))
            } else {
                return Err(bad("a writable cache needs --script or --url (or pass --read-only)"));
            };
            BackendSpec::Cache {
                dir: a.cache_dir.clone().ok_or_else(|| bad("--backend cache needs --cache-dir"))?,
                read_only: a.read_only,
                inner,
            }
        }
    })
}

impl RunArgs {
    pub fn resolve(&self) -> anyhow::Result<RunSettings> {
        let file: RunFile = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?
            }
            None => RunFile::default(),
        };
        let backend = match self.backend {
            Some(kind) => backend_from_flags(kind, self)?,
            None => file.backend.ok_or_else(|| bad("no backend: pass --backend or set it in the config file"))?,
        };
        let mut cfg = file.loop_config.unwrap_or_default();
        if let Some(v) = &self.model {
            cfg.model = v.clone();
        }
        if let Some(v) = self.budget {
            cfg.budget = v;
        }
        if let Some(v) = self.feedback {
            cfg.feedback_mode = v;
        }
        if let Some(v) = self.history {
            cfg.history_n = v;
        }
        cfg.history_unique_only |= self.history_unique;
        cfg.history_include_critiques |= self.history_critiques;
        cfg.filtering_enabled |= self.filtering;
        cfg.cot_suffix |= self.cot;
        if let Some(v) = self.strategy {
            cfg.strategy = v;
        }
        if let Some(v) = self.branch {
            cfg.bfs_branch_k = v;
        }
        if let Some(v) = self.temperature {
            cfg.temperature = v;
        }
        cfg.validate().map_err(|e| bad(e.to_string()))?;
        let workers = self.workers.or(file.workers).unwrap_or(1);
        if workers == 0 {
            return Err(bad("--workers must be at least 1"));
        }
        Ok(RunSettings {
            domain: self.domain.or(file.domain),
            dataset: self
                .dataset
                .clone()
                .or(file.dataset)
                .ok_or_else(|| bad("no dataset: pass --dataset or set it in the config file"))?,
            backend,
            loop_config: cfg,
            workers,
            out: self.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("modulo-out")),
        })
    }
}
