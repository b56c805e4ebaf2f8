//! Pairwise pipeline comparison from a results file.

use std::collections::BTreeMap;
use std::path::Path;

use bcibench::eval::{derive_seed, ResultRow};
use bcibench::stats::{compare_pipelines, stouffer_combine, CombinedStat, DatasetStat, PairedScores, StatsError, StatsOptions};
use serde::{Deserialize, Serialize};

use crate::{io_err, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedDataset {
    pub dataset_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub pipeline_a: String,
    pub pipeline_b: String,
    /// One-tailed alternative: A better than B.
    pub datasets: Vec<DatasetStat>,
    pub combined: CombinedStat,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedDataset>,
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(file);
    let rows = rdr.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(rows)
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Mean score per subject, over all of its sessions and folds.
pub fn subject_means<'a>(rows: &'a [ResultRow], pipeline: &str) -> BTreeMap<&'a str, BTreeMap<u32, f64>> {
    let mut acc: BTreeMap<&str, BTreeMap<u32, (f64, usize)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.pipeline == pipeline) {
        let e = acc.entry(&r.dataset).or_default().entry(r.subject).or_insert((0.0, 0));
        e.0 += r.score;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(d, subj)| (d, subj.into_iter().map(|(s, (sum, n))| (s, sum / n as f64)).collect()))
        .collect()
}

/// Compares `a` against `b` on every dataset where both ran, pairing
/// subject means, then combines datasets with Stouffer's method. Each
/// dataset's Monte-Carlo seed is derived from `opts.seed` and its id.
pub fn compare_rows(rows: &[ResultRow], a: &str, b: &str, opts: &StatsOptions) -> Result<StatsReport> {
    for p in [a, b] {
        if !rows.iter().any(|r| r.pipeline == p) {
            return Err(CliError::NotFound(format!("pipeline {p:?} has no results")));
        }
    }
    let ma = subject_means(rows, a);
    let mb = subject_means(rows, b);
    let mut datasets = Vec::new();
    let mut skipped = Vec::new();
    for (ds, sa) in &ma {
        let Some(sb) = mb.get(ds) else { continue };
        let paired: Vec<(f64, f64)> = sa.iter().filter_map(|(s, x)| sb.get(s).map(|y| (*x, *y))).collect();
        if paired.len() < 2 {
            skipped.push(SkippedDataset {
                dataset_id: ds.to_string(),
                reason: format!("{} paired subjects, need at least 2", paired.len()),
            });
            continue;
        }
        let scores = PairedScores {
            dataset_id: ds.to_string(),
            a: paired.iter().map(|p| p.0).collect(),
            b: paired.iter().map(|p| p.1).collect(),
        };
        let o = StatsOptions {
            seed: derive_seed(opts.seed, &[ds]),
            ..*opts
        };
        datasets.push(compare_pipelines(&scores, &o)?);
    }
    if datasets.is_empty() {
        return Err(CliError::Stats(StatsError::InvalidInput(format!(
            "no dataset has at least 2 subjects scored by both {a} and {b}"
        ))));
    }
    let combined = stouffer_combine(&datasets)?;
    Ok(StatsReport {
        pipeline_a: a.to_string(),
        pipeline_b: b.to_string(),
        datasets,
        combined,
        skipped,
    })
}

pub fn stats_command(results: &Path, a: &str, b: &str, opts: &StatsOptions) -> Result<StatsReport> {
    compare_rows(&read_results(results)?, a, b, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bcibench::stats::Method;

    fn row(ds: &str, subject: u32, pipeline: &str, fold: usize, score: f64) -> ResultRow {
        ResultRow {
            dataset: ds.into(),
            subject,
            session: "0".into(),
            pipeline: pipeline.into(),
            fold,
            metric: "roc_auc".into(),
            score,
            ..Default::default()
        }
    }

    #[test]
    fn pairs_subject_means() {
        let mut rows = vec![];
        for s in 1..=4 {
            for f in 0..2 {
                rows.push(row("d", s, "A", f, 0.6 + 0.01 * s as f64 + 0.02 * f as f64));
                rows.push(row("d", s, "B", f, 0.5 + 0.02 * s as f64));
            }
        }
        rows.push(row("d", 9, "A", 0, 0.9));
        rows.push(row("solo", 1, "A", 0, 0.9));
        let means = subject_means(&rows, "A");
        assert!((means["d"][&1] - 0.62).abs() < 1e-12);
        let r = compare_rows(&rows, "A", "B", &StatsOptions::default()).unwrap();
        assert_eq!(r.datasets.len(), 1);
        assert_eq!(r.datasets[0].n_subjects, 4);
        assert_eq!(r.datasets[0].method, Method::PermExact);
        assert!((r.datasets[0].p_value - 1.0 / 16.0).abs() < 1e-12);
        assert!(matches!(compare_rows(&rows, "A", "C", &StatsOptions::default()), Err(CliError::NotFound(_))));
    }
}
