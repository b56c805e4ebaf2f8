//! Benchmark execution: load, filter, evaluate, then write results,
//! statistics, summary and issues.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use bcibench::eval::{evaluate, Issue, IssueKind, ResultRow};
use bcibench::stats::StatsOptions;
use serde::Serialize;

use crate::config::BenchmarkConfig;
use crate::report::{group_by_paradigm, summary_markdown};
use crate::stats_cmd::{compare_rows, write_results, StatsReport};
use crate::{io_err, CliError, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const STATS_FILE: &str = "stats.json";
pub const SUMMARY_FILE: &str = "summary.md";
pub const ERRORS_FILE: &str = "errors.json";

#[derive(Debug, Clone, Serialize)]
pub struct FailedComparison {
    pub pipeline_a: String,
    pub pipeline_b: String,
    pub error: String,
}

/// Every ordered pair of pipelines sharing a paradigm.
#[derive(Debug, Clone, Serialize, Default)]
pub struct RunStats {
    pub comparisons: Vec<StatsReport>,
    pub failed: Vec<FailedComparison>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<ResultRow>,
    pub issues: Vec<Issue>,
    pub stats: RunStats,
}

fn dataset_issue(dataset: String, message: String) -> Issue {
    Issue {
        dataset,
        subject: None,
        session: None,
        pipeline: None,
        fold: None,
        kind: IssueKind::Failed,
        message,
    }
}

pub fn pairwise_stats(rows: &[ResultRow], opts: &StatsOptions) -> RunStats {
    let mut out = RunStats::default();
    for group in group_by_paradigm(rows).values() {
        let pipelines: BTreeSet<&str> = group.iter().map(|r| r.pipeline.as_str()).collect();
        for a in &pipelines {
            for b in pipelines.iter().filter(|b| *b != a) {
                match compare_rows(group, a, b, opts) {
                    Ok(r) => out.comparisons.push(r),
                    Err(e) => out.failed.push(FailedComparison {
                        pipeline_a: a.to_string(),
                        pipeline_b: b.to_string(),
                        error: e.to_string(),
                    }),
                }
            }
        }
    }
    out
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).map_err(io_err(path))
}

/// Runs the configured benchmark and writes its outputs to `out_dir`.
/// Relative dataset paths resolve against `base_dir`. Failing datasets
/// and units are recorded in `errors.json`; the call fails only when no
/// unit produced a score.
pub fn run(cfg: &BenchmarkConfig, base_dir: &Path, out_dir: &Path) -> Result<RunReport> {
    cfg.validate()?;
    let plan = cfg.effective_plan();
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    let mut ids = BTreeSet::new();
    let mut used_pipelines = BTreeSet::new();
    let mut all_loaded = true;

    for src in &cfg.datasets {
        let ds = match src.load(base_dir) {
            Ok(ds) => ds,
            Err(e) => {
                all_loaded = false;
                issues.push(dataset_issue(src.label(), e.to_string()));
                continue;
            }
        };
        if !ids.insert(ds.id.clone()) {
            return Err(CliError::InvalidConfig(format!("dataset id {} appears twice", ds.id)));
        }
        let pipelines = cfg.pipelines_for(ds.paradigm)?;
        if pipelines.is_empty() {
            return Err(CliError::InvalidConfig(format!(
                "no {} pipeline configured for dataset {}",
                ds.paradigm, ds.id
            )));
        }
        used_pipelines.extend(pipelines.iter().map(|p| p.name.clone()));
        let (lo, hi) = cfg.band(ds.paradigm);
        let filtered = match ds.bandpass(lo, hi) {
            Ok(f) => f,
            Err(e) => {
                issues.push(dataset_issue(ds.id.clone(), e.to_string()));
                continue;
            }
        };
        match evaluate(&filtered, &pipelines, &plan, &cfg.meter, cfg.jobs) {
            Ok(ev) => {
                rows.extend(ev.rows);
                issues.extend(ev.issues);
            }
            Err(e) => issues.push(dataset_issue(ds.id.clone(), e.to_string())),
        }
    }
    if all_loaded {
        if let Some(p) = cfg.pipeline_specs()?.iter().find(|p| !used_pipelines.contains(&p.name)) {
            return Err(CliError::InvalidConfig(format!(
                "pipeline {} matches no dataset of paradigm {}",
                p.name, p.paradigm
            )));
        }
    }

    rows.sort_by(|a, b| {
        (&a.dataset, a.subject, &a.session, &a.pipeline, a.fold).cmp(&(&b.dataset, b.subject, &b.session, &b.pipeline, b.fold))
    });
    issues.sort();
    let stats = pairwise_stats(
        &rows,
        &StatsOptions {
            seed: plan.seed,
            ..StatsOptions::default()
        },
    );

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    write_results(&out_dir.join(RESULTS_FILE), &rows)?;
    write_json(&out_dir.join(ERRORS_FILE), &issues)?;
    write_json(&out_dir.join(STATS_FILE), &stats)?;
    let summary_path = out_dir.join(SUMMARY_FILE);
    fs::write(&summary_path, summary_markdown(&rows)?).map_err(io_err(&summary_path))?;

    if rows.is_empty() {
        return Err(CliError::AllUnitsFailed(issues.len()));
    }
    Ok(RunReport { rows, issues, stats })
}
