//! Per-subset accuracy tables in CSV, JSON and Markdown.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::Domain;
use crate::metacontroller::LoopConfig;

use super::bench::EvalResult;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("bad report json: {0}")]
    Json(String),
    #[error("unknown report format {0:?} (expected csv, json or markdown)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown];

    pub fn file_name(self) -> &'static str {
        match self {
            ReportFormat::Csv => "report.csv",
            ReportFormat::Json => "report.json",
            ReportFormat::Markdown => "report.md",
        }
    }
}

impl std::str::FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub backend: String,
    pub config: LoopConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetRow {
    pub domain: Domain,
    pub subset: String,
    pub instances: u32,
    pub valid: u32,
    /// Solved by the first call alone, as direct prompting would be.
    pub direct_valid: u32,
    pub optimal: Option<u32>,
    pub errored: u32,
    pub accuracy_pct: f64,
    /// Mean iteration of acceptance over solved instances.
    pub mean_iterations: Option<f64>,
}

impl SubsetRow {
    pub fn accuracy_text(&self) -> String {
        format!("{:.2}", self.accuracy_pct)
    }

    pub fn mean_iterations_text(&self) -> String {
        self.mean_iterations.map_or_else(|| "n/a".to_string(), |m| format!("{m:.2}"))
    }

    pub fn direct_pct(&self) -> f64 {
        pct(self.direct_valid, self.instances)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub id: String,
    pub domain: Domain,
    pub subset: String,
    pub valid: bool,
    pub optimal: Option<bool>,
    pub iterations_used: u32,
    pub solved_at: Option<u32>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    /// One row per (domain, subset), easiest first.
    pub rows: Vec<SubsetRow>,
    /// One row per domain over all its subsets.
    pub totals: Vec<SubsetRow>,
    /// The most complex subset of each domain.
    pub hardest: Vec<SubsetRow>,
    pub instances: Vec<InstanceSummary>,
}

fn pct(num: u32, den: u32) -> f64 {
    if den == 0 {
        return 0.0;
    }
    (num as f64 * 10000.0 / den as f64).round() / 100.0
}

/// Numbers in a subset label, e.g. "participants=2,days=5" gives [2, 5].
fn label_numbers(label: &str) -> Vec<u64> {
    label
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .filter_map(|s| s.parse().ok())
        .collect()
}

/// Complexity of a subset: the product of the numbers in its label, so two
/// people over five days outranks seven people on one day.
pub fn subset_complexity(label: &str) -> u64 {
    label_numbers(label).iter().product()
}

fn row<'a>(domain: Domain, subset: &str, results: impl Iterator<Item = &'a InstanceSummary>) -> SubsetRow {
    let mut r = SubsetRow {
        domain,
        subset: subset.to_string(),
        instances: 0,
        valid: 0,
        direct_valid: 0,
        optimal: None,
        errored: 0,
        accuracy_pct: 0.0,
        mean_iterations: None,
    };
    let mut solved_iters = 0u64;
    for res in results {
        r.instances += 1;
        if res.error.is_some() {
            r.errored += 1;
        }
        // `valid` is only ever set for solved outcomes; check again anyway.
        if res.valid && res.solved_at.is_some() {
            r.valid += 1;
            solved_iters += res.solved_at.unwrap_or(0) as u64;
            if res.solved_at == Some(1) {
                r.direct_valid += 1;
            }
        }
        if let Some(opt) = res.optimal {
            *r.optimal.get_or_insert(0) += opt as u32;
        }
    }
    r.accuracy_pct = pct(r.valid, r.instances);
    if r.valid > 0 {
        r.mean_iterations = Some(solved_iters as f64 / r.valid as f64);
    }
    r
}

impl Report {
    pub fn from_results(meta: ReportMeta, results: &[EvalResult]) -> Self {
        let mut instances: Vec<InstanceSummary> = results
            .iter()
            .map(|r| InstanceSummary {
                id: r.id.clone(),
                domain: r.domain,
                subset: r.subset.clone(),
                valid: r.valid && r.outcome.as_ref().is_some_and(|o| o.is_solved()),
                optimal: r.optimal,
                iterations_used: r.iterations_used,
                solved_at: r.solved_at,
                error: r.error.clone(),
            })
            .collect();
        instances.sort_by(|a, b| a.id.cmp(&b.id));
        Self::from_summaries(meta, instances)
    }

    pub fn from_summaries(meta: ReportMeta, instances: Vec<InstanceSummary>) -> Self {
        let mut groups: BTreeMap<(usize, u64, Vec<u64>, String), Vec<&InstanceSummary>> = BTreeMap::new();
        for s in &instances {
            let d = Domain::ALL.iter().position(|d| *d == s.domain).unwrap_or(0);
            groups
                .entry((d, subset_complexity(&s.subset), label_numbers(&s.subset), s.subset.clone()))
                .or_default()
                .push(s);
        }
        let rows: Vec<SubsetRow> = groups
            .iter()
            .map(|((d, _, _, subset), members)| row(Domain::ALL[*d], subset, members.iter().copied()))
            .collect();
        let mut totals = Vec::new();
        let mut hardest = Vec::new();
        for d in Domain::ALL {
            let of_domain: Vec<&SubsetRow> = rows.iter().filter(|r| r.domain == d).collect();
            if of_domain.is_empty() {
                continue;
            }
            totals.push(row(d, "all", instances.iter().filter(|s| s.domain == d)));
            // Rows are sorted by complexity, so the last one is the hardest.
            hardest.push((*of_domain.last().expect("non-empty")).clone());
        }
        Report {
            meta,
            rows,
            totals,
            hardest,
            instances,
        }
    }

    pub fn errored(&self) -> usize {
        self.instances.iter().filter(|i| i.error.is_some()).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))
    }

    /// Columns: domain, subset, instances, valid, accuracy_pct,
    /// mean_iterations. Per-domain totals follow with subset "all".
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["domain", "subset", "instances", "valid", "accuracy_pct", "mean_iterations"])
            .expect("csv header");
        for r in self.rows.iter().chain(&self.totals) {
            w.write_record([
                r.domain.name().to_string(),
                r.subset.clone(),
                r.instances.to_string(),
                r.valid.to_string(),
                r.accuracy_text(),
                r.mean_iterations_text(),
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.meta.config;
        let mut out = format!(
            "# Benchmark report\n\nBackend: {}. Model: {}. Strategy: {}. Budget: {}.\n\n",
            self.meta.backend, c.model, c.strategy, c.budget
        );
        let table = |out: &mut String, rows: &[&SubsetRow]| {
            out.push_str("| Domain | Subset | Instances | Direct | LM | Accuracy % | Mean iterations |\n");
            out.push_str("|---|---|---|---|---|---|---|\n");
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.2} | {} | {} | {} |\n",
                    r.domain,
                    r.subset,
                    r.instances,
                    r.direct_pct(),
                    r.valid,
                    r.accuracy_text(),
                    r.mean_iterations_text()
                ));
            }
        };
        out.push_str("## Accuracy by subset\n\n");
        table(&mut out, &self.rows.iter().chain(&self.totals).collect::<Vec<_>>());
        out.push_str("\n## Hardest subsets\n\n");
        table(&mut out, &self.hardest.iter().collect::<Vec<_>>());
        let errors: Vec<_> = self.instances.iter().filter(|i| i.error.is_some()).collect();
        if !errors.is_empty() {
            out.push_str("\n## Errors\n\n");
            for e in errors {
                out.push_str(&format!("- {}: {}\n", e.id, e.error.as_deref().unwrap_or("")));
            }
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }

    /// Writes the given formats into `dir` under their fixed file names.
    pub fn write_to(&self, dir: &Path, formats: &[ReportFormat]) -> Result<(), ReportError> {
        let io = |path: &Path, e: std::io::Error| ReportError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for f in formats {
            let path = dir.join(f.file_name());
            std::fs::write(&path, self.render(*f)).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}
