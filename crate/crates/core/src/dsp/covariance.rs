use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DspError, Result};
use crate::spd::{SpdError, SpdMatrix};

/// Stand-in variance when a trial is identically constant.
pub const EPS_VAR: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovEstimator {
    Scm,
    #[default]
    #[serde(alias = "lwf", alias = "ledoit-wolf")]
    Shrunk,
}

fn centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = x.clone();
    for mut row in c.row_iter_mut() {
        let mean = row.mean();
        row.add_scalar_mut(-mean);
    }
    c
}

/// Ledoit–Wolf shrinkage intensity for already centered channels × samples data.
pub fn ledoit_wolf_shrinkage(xc: &DMatrix<f64>) -> f64 {
    let (n, t) = (xc.nrows() as f64, xc.ncols() as f64);
    let s = xc * xc.transpose() / t;
    let mu = s.trace() / n;
    let mut shifted = s.clone();
    for i in 0..xc.nrows() {
        shifted[(i, i)] -= mu;
    }
    let delta = shifted.norm_squared() / n;
    let fourth: f64 = xc.column_iter().map(|c| c.norm_squared().powi(2)).sum::<f64>() / t;
    let beta = ((fourth - s.norm_squared()) / (n * t)).min(delta);
    if delta <= 0.0 || beta <= 0.0 {
        0.0
    } else {
        (beta / delta).clamp(0.0, 1.0)
    }
}

/// Unbiased sample covariance without any definiteness check.
pub fn sample_covariance(trial: &DMatrix<f64>) -> DMatrix<f64> {
    let xc = centered(trial);
    &xc * xc.transpose() / (trial.ncols() as f64 - 1.0)
}

/// Channel covariance of a channels × samples trial after per-channel mean removal.
pub fn covariance(trial: &DMatrix<f64>, estimator: CovEstimator) -> Result<SpdMatrix> {
    let (n, t) = trial.shape();
    if t < 2 || n == 0 {
        return Err(DspError::InvalidInput(format!("need at least 2 samples, got {t}")));
    }
    if trial.iter().any(|v| !v.is_finite()) {
        return Err(DspError::InvalidInput("non-finite sample".into()));
    }
    let xc = centered(trial);
    let scm = &xc * xc.transpose() / (t as f64 - 1.0);
    match estimator {
        CovEstimator::Scm => Ok(SpdMatrix::new(scm)?),
        CovEstimator::Shrunk => {
            let mu = scm.trace() / n as f64;
            if !(mu > 0.0) {
                return Ok(SpdMatrix::from_diagonal(&vec![EPS_VAR; n])?);
            }
            let mut gamma = ledoit_wolf_shrinkage(&xc);
            let floor = 1e-8 * n as f64;
            loop {
                let mut m = scm.scale(1.0 - gamma);
                for i in 0..n {
                    m[(i, i)] += gamma * mu;
                }
                match SpdMatrix::new(m) {
                    Ok(p) => return Ok(p),
                    Err(SpdError::NotPositiveDefinite { .. }) if gamma < 1.0 => {
                        gamma = (gamma.max(floor / 10.0) * 10.0).min(1.0);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
}

/// Shrunk covariance of the delay-embedded signal
/// `[X(t); X(t − lag); …; X(t − (order − 1)·lag)]` over the samples where all
/// delays exist.
pub fn augmented_covariance(trial: &DMatrix<f64>, order: usize, lag: usize) -> Result<SpdMatrix> {
    let (n, t) = trial.shape();
    let span = order.saturating_sub(1) * lag;
    if order == 0 || lag == 0 || t <= span + 1 {
        return Err(DspError::InvalidEmbedding {
            order,
            lag,
            samples: t,
        });
    }
    let len = t - span;
    let mut emb = DMatrix::zeros(n * order, len);
    for k in 0..order {
        let start = span - k * lag;
        emb.view_mut((k * n, 0), (n, len))
            .copy_from(&trial.columns(start, len));
    }
    covariance(&emb, CovEstimator::Shrunk)
}
