use crate::dsp::Epochs;
use crate::pipelines::{fit, Grid, Hyper, PipelineSpec};

use super::split::{ensure_disjoint, stratified_kfold};
use super::{derive_seed, score_model, EvalError, Metric, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub hyper: Hyper,
    /// Mean inner-fold metric, or the first error message.
    pub outcome: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: Hyper,
    /// Empty when the grid has at most one candidate.
    pub candidates: Vec<CandidateScore>,
}

/// Cartesian product in declaration order, last key varying fastest.
pub fn candidates(grid: &Grid) -> Result<Vec<Hyper>> {
    if let Some((k, _)) = grid.iter().find(|(_, v)| v.is_empty()) {
        return Err(EvalError::InvalidPlan(format!("grid axis {k:?} has no values")));
    }
    let mut out = vec![Hyper::new()];
    for (key, values) in grid {
        out = out
            .into_iter()
            .flat_map(|h| {
                values.iter().map(move |&v| {
                    let mut h = h.clone();
                    h.insert(key.clone(), v);
                    h
                })
            })
            .collect();
    }
    Ok(out)
}

/// Exhaustive search scored by inner stratified cross-validation on
/// `train` only. Ties go to the earliest candidate. The caller refits the
/// winner on all of `train`.
pub fn nested_grid_search(
    spec: &PipelineSpec,
    train: &Epochs,
    grid: &Grid,
    inner_folds: usize,
    metric: Metric,
    seed: u64,
) -> Result<SearchOutcome> {
    let cands = candidates(grid)?;
    if cands.len() == 1 {
        return Ok(SearchOutcome {
            best: cands.into_iter().next().unwrap_or_default(),
            candidates: Vec::new(),
        });
    }
    // small classes get fewer inner folds rather than no search at all
    let smallest = train.class_counts().into_iter().filter(|&c| c > 0).min().unwrap_or(0);
    let k = inner_folds.min(smallest);
    if k < 2 {
        return Err(EvalError::StratificationImpossible {
            class: 0,
            count: smallest,
            k: inner_folds,
        });
    }
    let folds = stratified_kfold(&train.labels, k, derive_seed(seed, &["inner-split"]))?;
    let parts: Vec<(Epochs, Epochs)> = folds
        .iter()
        .map(|f| {
            ensure_disjoint(&f.train, &f.test)?;
            Ok((train.subset(&f.train), train.subset(&f.test)))
        })
        .collect::<Result<_>>()?;

    let mut scored = Vec::with_capacity(cands.len());
    for hyper in cands {
        let mut total = 0.0;
        let mut outcome = Ok(0.0);
        for (i, (tr, te)) in parts.iter().enumerate() {
            let s = fit(spec, tr, &hyper, derive_seed(seed, &["inner", &i.to_string()]))
                .map_err(EvalError::from)
                .and_then(|m| score_model(&m, te, metric));
            match s {
                Ok(s) => total += s,
                Err(e) => {
                    outcome = Err(e.to_string());
                    break;
                }
            }
        }
        scored.push(CandidateScore {
            hyper,
            outcome: outcome.map(|_| total / parts.len() as f64),
        });
    }
    let best = scored
        .iter()
        .filter_map(|c| c.outcome.as_ref().ok().map(|&s| (s, c)))
        .fold(None, |acc: Option<(f64, &CandidateScore)>, (s, c)| match acc {
            Some((b, _)) if b >= s => acc,
            _ => Some((s, c)),
        });
    match best {
        Some((_, c)) => Ok(SearchOutcome {
            best: c.hyper.clone(),
            candidates: scored,
        }),
        None => Err(EvalError::GridExhausted(
            scored
                .into_iter()
                .map(|c| (format!("{:?}", c.hyper), c.outcome.err().unwrap_or_default()))
                .collect(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use indexmap::indexmap;

    #[test]
    fn product_order() {
        let grid: Grid = indexmap! { "a".to_string() => vec![1.0, 2.0], "b".to_string() => vec![10.0, 20.0, 30.0] };
        let c = candidates(&grid).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!((c[0]["a"], c[0]["b"]), (1.0, 10.0));
        assert_eq!((c[1]["a"], c[1]["b"]), (1.0, 20.0));
        assert_eq!((c[5]["a"], c[5]["b"]), (2.0, 30.0));
        assert_eq!(candidates(&Grid::new()).unwrap(), vec![Hyper::new()]);
        let bad: Grid = indexmap! { "a".to_string() => vec![] };
        assert!(candidates(&bad).is_err());
    }
}
