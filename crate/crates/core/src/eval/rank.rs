use std::collections::BTreeMap;

use super::{EvalError, Result, ResultRow};

/// How often each pipeline took each rank across sessions.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub pipelines: Vec<String>,
    /// Distinct ranks observed, ascending; midranks appear as halves.
    pub ranks: Vec<f64>,
    /// `counts[p][r]`: sessions where `pipelines[p]` had rank `ranks[r]`.
    pub counts: Vec<Vec<usize>>,
    pub n_sessions: usize,
}

/// Ranks pipelines by mean fold score within every (dataset, subject,
/// session); rank 1 is best and ties share the mean of their ranks.
pub fn rank_pipelines(rows: &[ResultRow]) -> Result<RankTable> {
    let mut sums: BTreeMap<(&str, u32, &str), BTreeMap<&str, (f64, usize)>> = BTreeMap::new();
    for r in rows {
        let e = sums
            .entry((&r.dataset, r.subject, &r.session))
            .or_default()
            .entry(&r.pipeline)
            .or_insert((0.0, 0));
        e.0 += r.score;
        e.1 += 1;
    }
    let mut pipelines: Vec<&str> = rows.iter().map(|r| r.pipeline.as_str()).collect();
    pipelines.sort_unstable();
    pipelines.dedup();

    let mut per_session: Vec<Vec<f64>> = Vec::with_capacity(sums.len());
    for ((dataset, subject, session), scores) in &sums {
        if let Some(p) = pipelines.iter().find(|p| !scores.contains_key(*p)) {
            return Err(EvalError::IncompleteGrid(format!(
                "{p} has no score for {dataset} subject {subject} session {session}"
            )));
        }
        let means: Vec<f64> = pipelines
            .iter()
            .map(|p| {
                let (s, n) = scores[p];
                s / n as f64
            })
            .collect();
        per_session.push(midranks_descending(&means));
    }

    let mut ranks: Vec<f64> = per_session.iter().flatten().copied().collect();
    ranks.sort_by(f64::total_cmp);
    ranks.dedup();
    let mut counts = vec![vec![0; ranks.len()]; pipelines.len()];
    for session in &per_session {
        for (p, r) in session.iter().enumerate() {
            let j = ranks.iter().position(|x| x == r).unwrap_or(0);
            counts[p][j] += 1;
        }
    }
    Ok(RankTable {
        pipelines: pipelines.into_iter().map(String::from).collect(),
        ranks,
        counts,
        n_sessions: per_session.len(),
    })
}

fn midranks_descending(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}
