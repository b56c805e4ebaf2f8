//! Summary tables (per-dataset mean ± std over subjects, in percent) and
//! rank histograms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use bcibench::dsp::Paradigm;
use bcibench::eval::{rank_pipelines, ResultRow};
use bcibench::pipelines::lookup;

use crate::reference::{ReferenceTable, REFERENCE_LABEL, REFERENCE_TABLES};
use crate::stats_cmd::subject_means;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub mean: f64,
    pub std: f64,
    pub n_subjects: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub pipeline: String,
    /// One entry per dataset column; `None` where the pipeline has no score.
    pub cells: Vec<Option<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub title: String,
    pub datasets: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

/// Average rounded to two decimals and printed without trailing zeros,
/// keeping one decimal place: 77.2, 72.67, 80.0.
pub fn format_average(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0;
    let s = format!("{r}");
    if s.contains('.') || !r.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

impl SummaryTable {
    /// Mean and sample std (ddof 1) over subject means, ×100. Pipelines
    /// and datasets are listed alphabetically.
    pub fn from_rows(title: &str, rows: &[ResultRow]) -> Self {
        let datasets: Vec<String> = rows.iter().map(|r| r.dataset.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let pipelines: BTreeSet<&str> = rows.iter().map(|r| r.pipeline.as_str()).collect();
        let rows = pipelines
            .into_iter()
            .map(|p| {
                let means = subject_means(rows, p);
                let cells = datasets
                    .iter()
                    .map(|d| {
                        means.get(d.as_str()).map(|subj| {
                            let v: Vec<f64> = subj.values().map(|x| 100.0 * x).collect();
                            let (mean, std) = mean_std(&v);
                            Cell {
                                mean,
                                std,
                                n_subjects: v.len(),
                            }
                        })
                    })
                    .collect();
                SummaryRow {
                    pipeline: p.to_string(),
                    cells,
                }
            })
            .collect();
        Self {
            title: title.to_string(),
            datasets,
            rows,
        }
    }

    pub fn from_reference(t: &ReferenceTable) -> Self {
        Self {
            title: format!("{} ({}, {REFERENCE_LABEL})", t.title, t.metric),
            datasets: t.datasets.iter().map(|d| d.to_string()).collect(),
            rows: t
                .rows
                .iter()
                .map(|r| SummaryRow {
                    pipeline: r.pipeline.to_string(),
                    cells: r
                        .cells
                        .iter()
                        .map(|&(mean, std, _)| {
                            Some(Cell {
                                mean,
                                std,
                                n_subjects: 0,
                            })
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Mean over the datasets a pipeline was scored on.
    pub fn row_average(&self, row: usize) -> Option<f64> {
        mean(self.rows[row].cells.iter().flatten().map(|c| c.mean))
    }

    /// Mean over pipelines for each dataset, then the overall value.
    pub fn average_row(&self) -> Vec<Option<f64>> {
        let mut out: Vec<Option<f64>> = (0..self.datasets.len())
            .map(|j| mean(self.rows.iter().filter_map(|r| r.cells[j]).map(|c| c.mean)))
            .collect();
        out.push(mean((0..self.rows.len()).filter_map(|i| self.row_average(i))));
        out
    }

    /// `bold[i][j]`: row `i` has the highest mean in dataset column `j`
    /// (ties all bold); the last column marks the highest average.
    pub fn bold_mask(&self) -> Vec<Vec<bool>> {
        let n = self.datasets.len();
        let col_max: Vec<f64> = (0..n)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.cells[j])
                    .map(|c| c.mean)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let avgs: Vec<Option<f64>> = (0..self.rows.len()).map(|i| self.row_average(i)).collect();
        let avg_max = avgs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        self.rows
            .iter()
            .zip(&avgs)
            .map(|(r, a)| {
                let mut b: Vec<bool> = r.cells.iter().zip(&col_max).map(|(c, m)| c.is_some_and(|c| c.mean == *m)).collect();
                b.push(a.is_some_and(|a| a == avg_max));
                b
            })
            .collect()
    }

    pub fn to_markdown(&self) -> String {
        let bold = self.bold_mask();
        let mut header = vec!["pipeline".to_string()];
        header.extend(self.datasets.iter().cloned());
        header.push("Average".into());
        let mut lines = vec![header];
        for (i, (r, b)) in self.rows.iter().zip(&bold).enumerate() {
            let mut line = vec![r.pipeline.clone()];
            for (c, &bb) in r.cells.iter().zip(b) {
                line.push(match c {
                    None => "-".into(),
                    Some(c) if bb => format!("**{:.2}** ± **{:.2}**", c.mean, c.std),
                    Some(c) => format!("{:.2} ± {:.2}", c.mean, c.std),
                });
            }
            line.push(match self.row_average(i) {
                None => "-".into(),
                Some(a) if b[self.datasets.len()] => format!("**{}**", format_average(a)),
                Some(a) => format_average(a),
            });
            lines.push(line);
        }
        let mut avg = vec!["Average".to_string()];
        avg.extend(self.average_row().into_iter().map(|a| a.map_or("-".into(), format_average)));
        lines.push(avg);

        let widths: Vec<usize> = (0..lines[0].len())
            .map(|j| lines.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
            .collect();
        let fmt_line = |l: &[String]| {
            let cells: Vec<String> = l
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (c, w))| if j == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            format!("| {} |", cells.join(" | "))
        };
        let mut out = format!("### {}\n\n", self.title);
        out += &fmt_line(&lines[0]);
        out.push('\n');
        let rule: Vec<String> = widths
            .iter()
            .enumerate()
            .map(|(j, w)| if j == 0 { format!(":{}", "-".repeat(w + 1)) } else { format!("{}:", "-".repeat(w + 1)) })
            .collect();
        out += &format!("|{}|\n", rule.join("|"));
        for l in &lines[1..] {
            out += &fmt_line(l);
            out.push('\n');
        }
        out
    }

    /// Long format: one line per (pipeline, dataset) plus averages.
    pub fn write_csv(&self, paradigm: &str, w: &mut csv::Writer<impl std::io::Write>) -> Result<()> {
        for (i, r) in self.rows.iter().enumerate() {
            for (d, c) in self.datasets.iter().zip(&r.cells) {
                if let Some(c) = c {
                    w.write_record([
                        paradigm,
                        &r.pipeline,
                        d,
                        &c.n_subjects.to_string(),
                        &format!("{:.2}", c.mean),
                        &format!("{:.2}", c.std),
                    ])?;
                }
            }
            if let Some(a) = self.row_average(i) {
                w.write_record([paradigm, &r.pipeline, "Average", "", &format_average(a), ""])?;
            }
        }
        Ok(())
    }
}

/// Splits rows by the paradigm of their pipeline; names outside the
/// catalog go to `None`.
pub fn group_by_paradigm(rows: &[ResultRow]) -> BTreeMap<Option<Paradigm>, Vec<ResultRow>> {
    let mut out: BTreeMap<Option<Paradigm>, Vec<ResultRow>> = BTreeMap::new();
    for r in rows {
        out.entry(lookup(&r.pipeline).ok().map(|e| e.paradigm)).or_default().push(r.clone());
    }
    out
}

fn group_title(p: Option<Paradigm>, rows: &[ResultRow]) -> String {
    let metrics: BTreeSet<&str> = rows.iter().map(|r| r.metric.as_str()).collect();
    let name = p.map_or("Other", |p| p.as_str());
    format!("{name} ({})", metrics.into_iter().collect::<Vec<_>>().join(", "))
}

/// Sessions where every pipeline of the group has a score; ranking needs
/// a complete grid.
fn complete_sessions(rows: &[ResultRow]) -> (Vec<ResultRow>, usize) {
    let pipelines: BTreeSet<&str> = rows.iter().map(|r| r.pipeline.as_str()).collect();
    let mut seen: BTreeMap<(&str, u32, &str), BTreeSet<&str>> = BTreeMap::new();
    for r in rows {
        seen.entry((&r.dataset, r.subject, &r.session)).or_default().insert(&r.pipeline);
    }
    let dropped = seen.values().filter(|s| s.len() != pipelines.len()).count();
    let kept = rows
        .iter()
        .filter(|r| seen[&(r.dataset.as_str(), r.subject, r.session.as_str())].len() == pipelines.len())
        .cloned()
        .collect();
    (kept, dropped)
}

pub fn rank_histogram_markdown(rows: &[ResultRow]) -> Result<String> {
    let (kept, dropped) = complete_sessions(rows);
    if kept.is_empty() {
        return Ok("No session has scores for every pipeline.\n".into());
    }
    let t = rank_pipelines(&kept)?;
    let mut out = String::new();
    let head: Vec<String> = t.ranks.iter().map(|r| format!("rank {r}")).collect();
    let _ = writeln!(out, "| pipeline | {} |", head.join(" | "));
    let _ = writeln!(out, "|:--|{}|", vec!["--:"; t.ranks.len()].join("|"));
    for (p, c) in t.pipelines.iter().zip(&t.counts) {
        let c: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "| {p} | {} |", c.join(" | "));
    }
    let _ = writeln!(out, "\nCounts over {} sessions.", t.n_sessions);
    if dropped > 0 {
        let _ = writeln!(out, "{dropped} sessions without a score for every pipeline were left out.");
    }
    Ok(out)
}

/// Markdown report: per paradigm a summary table and a rank histogram.
pub fn summary_markdown(rows: &[ResultRow]) -> Result<String> {
    let mut out = String::from("# Benchmark summary\n\nScores in percent, mean ± std over subject means. Bold marks the best pipeline per dataset.\n\n");
    for (p, group) in group_by_paradigm(rows) {
        let title = group_title(p, &group);
        out += &SummaryTable::from_rows(&title, &group).to_markdown();
        out += &format!("\n#### Rank histogram, {}\n\n", p.map_or("Other", |p| p.as_str()));
        out += &rank_histogram_markdown(&group)?;
        out.push('\n');
    }
    Ok(out)
}

pub fn summary_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(vec![]);
    w.write_record(["paradigm", "pipeline", "dataset", "n_subjects", "mean", "std"])?;
    for (p, group) in group_by_paradigm(rows) {
        let name = p.map_or("Other", |p| p.as_str());
        SummaryTable::from_rows(name, &group).write_csv(name, &mut w)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::CliError::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// All published tables, labeled as reference material.
pub fn reference_markdown() -> String {
    let mut out = format!("# Published results, {REFERENCE_LABEL}\n\n");
    for t in REFERENCE_TABLES {
        out += &SummaryTable::from_reference(t).to_markdown();
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_average() {
        assert_eq!(format_average(72.6683), "72.67");
        assert_eq!(format_average(77.2049), "77.2");
        assert_eq!(format_average(80.0), "80.0");
        assert_eq!(format_average(30.3), "30.3");
    }

    #[test]
    fn ddof_one_over_subjects() {
        let mut rows = vec![];
        for (s, v) in [(1, 0.6), (2, 0.8)] {
            for fold in 0..5 {
                rows.push(ResultRow {
                    dataset: "d".into(),
                    subject: s,
                    session: "0".into(),
                    pipeline: "MDM".into(),
                    fold,
                    metric: "roc_auc".into(),
                    score: v,
                    ..Default::default()
                });
            }
        }
        let t = SummaryTable::from_rows("t", &rows);
        let c = t.rows[0].cells[0].unwrap();
        assert!((c.mean - 70.0).abs() < 1e-9);
        assert!((c.std - 200f64.sqrt()).abs() < 1e-9);
        assert_eq!(c.n_subjects, 2);
        assert!(t.to_markdown().contains("**70.00** ± **14.14**"));
    }
}
