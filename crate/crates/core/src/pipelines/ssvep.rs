//! SSVEP decoders: canonical correlation against sinusoidal references,
//! task-related component analysis, and frequency-band extended covariances.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

use super::spatial::{generalized_eig, vconcat};
use super::{PipelineError, Result};
use crate::dsp::{bandpass_trial, covariance, design_butter_bandpass, BiquadCascade, CovEstimator, DspError, Epochs};
use crate::spd::{sym_eig, SpdMatrix, SymMatrix};

/// Stimulation frequencies read from class names such as `"13"`, `"6.66"`
/// or `"13Hz"`.
pub fn class_frequencies(classes: &[String]) -> Result<Vec<f64>> {
    classes
        .iter()
        .map(|c| {
            let t = c.trim();
            let end = t
                .char_indices()
                .find(|(_, ch)| !(ch.is_ascii_digit() || *ch == '.'))
                .map_or(t.len(), |(i, _)| i);
            t[..end]
                .parse::<f64>()
                .ok()
                .filter(|f| *f > 0.0)
                .ok_or_else(|| PipelineError::InvalidInput(format!("class {c:?} does not name a frequency")))
        })
        .collect()
}

fn centered_rows(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = x.clone();
    for mut row in c.row_iter_mut() {
        let m = row.mean();
        row.add_scalar_mut(-m);
    }
    c
}

/// `{sin, cos}(2π·k·f·t)` for `k = 1..=n_harmonics`, one row each.
pub fn reference_signals(freq: f64, n_harmonics: usize, sfreq: f64, n_samples: usize) -> Result<DMatrix<f64>> {
    if n_harmonics == 0 {
        return Err(PipelineError::InvalidHyper("need at least one harmonic".into()));
    }
    let top = freq * n_harmonics as f64;
    if top >= sfreq / 2.0 {
        return Err(DspError::InvalidBand {
            low: freq,
            high: top,
            sfreq,
        }
        .into());
    }
    Ok(DMatrix::from_fn(2 * n_harmonics, n_samples, |r, t| {
        let k = (r / 2 + 1) as f64;
        let phase = 2.0 * PI * k * freq * t as f64 / sfreq;
        if r % 2 == 0 {
            phase.sin()
        } else {
            phase.cos()
        }
    }))
}

fn ridge_invsqrt(c: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = c.nrows();
    let tr = c.trace();
    if !(tr > 0.0) {
        return None;
    }
    let mut c = c;
    for i in 0..n {
        c[(i, i)] += 1e-10 * tr / n as f64;
    }
    SpdMatrix::new(c).ok().map(|p| p.invsqrt().as_matrix().clone())
}

/// Largest canonical correlation between the rows of `x` and of `y`.
pub fn canonical_correlation(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
    if x.ncols() != y.ncols() {
        return Err(PipelineError::DimensionMismatch {
            expected: y.ncols(),
            found: x.ncols(),
        });
    }
    let (xc, yc) = (centered_rows(x), centered_rows(y));
    let (Some(kx), Some(ky)) = (ridge_invsqrt(&xc * xc.transpose()), ridge_invsqrt(&yc * yc.transpose())) else {
        return Ok(0.0);
    };
    let m = kx * (&xc * yc.transpose()) * ky;
    let eig = sym_eig(&SymMatrix::from_symmetrized(m.transpose() * &m)?);
    Ok(eig.eigenvalues[0].max(0.0).sqrt().min(1.0))
}

/// Training-free CCA decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct Cca {
    pub freqs: Vec<f64>,
    pub refs: Vec<DMatrix<f64>>,
}

impl Cca {
    pub fn new(freqs: &[f64], n_harmonics: usize, sfreq: f64, n_samples: usize) -> Result<Self> {
        let min = freqs.iter().copied().fold(f64::INFINITY, f64::min);
        if (n_samples as f64) < sfreq / min {
            return Err(PipelineError::InvalidInput(format!(
                "{n_samples} samples is shorter than one period of {min} Hz"
            )));
        }
        let refs = freqs
            .iter()
            .map(|&f| reference_signals(f, n_harmonics, sfreq, n_samples))
            .collect::<Result<_>>()?;
        Ok(Self {
            freqs: freqs.to_vec(),
            refs,
        })
    }

    pub fn correlations(&self, trial: &DMatrix<f64>) -> Result<Vec<f64>> {
        self.refs.iter().map(|r| canonical_correlation(trial, r)).collect()
    }

    pub fn predict_proba(&self, trials: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
        let mut scores = DMatrix::zeros(trials.len(), self.freqs.len());
        for (i, t) in trials.iter().enumerate() {
            for (j, r) in self.correlations(t)?.into_iter().enumerate() {
                scores[(i, j)] = r;
            }
        }
        Ok(super::riemann::softmax_rows(&scores))
    }
}

/// Leading TRCA eigenpair for repeated trials of one class: maximizes
/// summed inter-trial covariance `wᵀSw` relative to `wᵀQw`.
pub fn trca_component(trials: &[&DMatrix<f64>]) -> Result<(f64, DVector<f64>)> {
    if trials.len() < 2 {
        return Err(PipelineError::DegenerateLabels("TRCA needs at least 2 trials per class".into()));
    }
    let n = trials[0].nrows();
    let mut sum = DMatrix::zeros(n, trials[0].ncols());
    let mut q = DMatrix::zeros(n, n);
    for t in trials {
        let c = centered_rows(t);
        q += &c * c.transpose();
        sum += c;
    }
    let s = &sum * sum.transpose() - &q;
    let tr = q.trace();
    for i in 0..n {
        q[(i, i)] += 1e-10 * tr / n as f64;
    }
    let (vals, vecs) = generalized_eig(&s, &SpdMatrix::new(q)?)?;
    Ok((vals[0], vecs.column(0).into_owned()))
}

fn pearson(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let (ma, mb) = (a.mean(), b.mean());
    let (mut num, mut da, mut db) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        num += (x - ma) * (y - mb);
        da += (x - ma).powi(2);
        db += (y - mb).powi(2);
    }
    if da > 0.0 && db > 0.0 {
        (num / (da * db).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trca {
    pub filters: Vec<DVector<f64>>,
    pub templates: Vec<DMatrix<f64>>,
}

impl Trca {
    pub fn fit(e: &Epochs) -> Result<Self> {
        let mut filters = Vec::new();
        let mut templates = Vec::new();
        for k in 0..e.n_classes() {
            let trials: Vec<&DMatrix<f64>> =
                e.data.iter().zip(&e.labels).filter(|(_, &l)| l == k).map(|(t, _)| t).collect();
            let (_, w) = trca_component(&trials)?;
            let mut mean = DMatrix::zeros(e.n_channels(), e.n_samples());
            for t in &trials {
                mean += centered_rows(t);
            }
            filters.push(w);
            templates.push(mean / trials.len() as f64);
        }
        Ok(Self { filters, templates })
    }

    pub fn correlations(&self, trial: &DMatrix<f64>) -> Vec<f64> {
        self.filters
            .iter()
            .zip(&self.templates)
            .map(|(w, tpl)| {
                let a = (w.transpose() * trial).transpose();
                let b = (w.transpose() * tpl).transpose();
                pearson(&a, &b)
            })
            .collect()
    }

    pub fn predict_proba(&self, trials: &[DMatrix<f64>]) -> DMatrix<f64> {
        let mut scores = DMatrix::zeros(trials.len(), self.filters.len());
        for (i, t) in trials.iter().enumerate() {
            for (j, r) in self.correlations(t).into_iter().enumerate() {
                scores[(i, j)] = r;
            }
        }
        super::riemann::softmax_rows(&scores)
    }
}

/// One band-pass per stimulation frequency, `f ± halfwidth`.
pub fn ssvep_filter_bank(freqs: &[f64], halfwidth: f64, sfreq: f64) -> Result<Vec<BiquadCascade>> {
    if !(halfwidth > 0.0) {
        return Err(PipelineError::InvalidHyper(format!("band half-width must be positive, got {halfwidth}")));
    }
    freqs
        .iter()
        .map(|&f| design_butter_bandpass(f - halfwidth, f + halfwidth, sfreq, 4).map_err(PipelineError::from))
        .collect()
}

/// Shrunk covariance of the trial band-passed around each frequency and
/// stacked along channels.
pub fn ssvep_extended_cov(trial: &DMatrix<f64>, bank: &[BiquadCascade]) -> Result<SpdMatrix> {
    let parts: Vec<DMatrix<f64>> = bank
        .iter()
        .map(|c| bandpass_trial(c, trial).map_err(PipelineError::from))
        .collect::<Result<_>>()?;
    let refs: Vec<&DMatrix<f64>> = parts.iter().collect();
    Ok(covariance(&vconcat(&refs), CovEstimator::Shrunk)?)
}
