//! Spatial filters (CSP family, XDAWN) and the raw-signal features built on them.

use nalgebra::{DMatrix, DVector};

use super::{PipelineError, Result};
use crate::dsp::{
    bandpass_trial, covariance, design_butter_bandpass, sample_covariance, BiquadCascade, CovEstimator, Epochs,
    EPS_VAR,
};
use crate::spd::{sym_eig, SpdMatrix, SymMatrix};

/// Filters as rows (`k × n`), patterns as columns (`n × k`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialFilterBank {
    pub filters: DMatrix<f64>,
    pub patterns: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
}

impl SpatialFilterBank {
    pub fn len(&self) -> usize {
        self.filters.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.nrows() == 0
    }

    fn stack(banks: &[SpatialFilterBank]) -> SpatialFilterBank {
        let k: usize = banks.iter().map(|b| b.len()).sum();
        let n = banks.first().map_or(0, |b| b.filters.ncols());
        let mut filters = DMatrix::zeros(k, n);
        let mut patterns = DMatrix::zeros(n, k);
        let mut eigenvalues = DVector::zeros(k);
        let mut row = 0;
        for b in banks {
            filters.rows_mut(row, b.len()).copy_from(&b.filters);
            patterns.columns_mut(row, b.len()).copy_from(&b.patterns);
            eigenvalues.rows_mut(row, b.len()).copy_from(&b.eigenvalues);
            row += b.len();
        }
        SpatialFilterBank {
            filters,
            patterns,
            eigenvalues,
        }
    }
}

/// Solves `a v = λ b v` for symmetric `a` and SPD `b` by whitening with
/// `b^{-1/2}`. Eigenvalues descend; columns of the returned matrix satisfy
/// `Vᵀ b V = I`.
pub(crate) fn generalized_eig(a: &DMatrix<f64>, b: &SpdMatrix) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let w = b.invsqrt();
    let w = w.as_matrix();
    let m = SymMatrix::from_symmetrized(w * a * w)?;
    let eig = sym_eig(&m);
    Ok((eig.eigenvalues, w * eig.eigenvectors))
}

fn check_nfilter(nfilter: usize, n: usize) -> Result<()> {
    if nfilter == 0 || nfilter > n {
        return Err(PipelineError::InvalidHyper(format!(
            "nfilter {nfilter} must be in 1..={n}"
        )));
    }
    Ok(())
}

/// Indices alternating between the top and bottom of a descending list.
fn alternate(n: usize, k: usize) -> Vec<usize> {
    let (mut lo, mut hi) = (0, n);
    (0..k)
        .map(|i| {
            if i % 2 == 0 {
                lo += 1;
                lo - 1
            } else {
                hi -= 1;
                hi
            }
        })
        .collect()
}

fn csp_with_denominator(sd: &DMatrix<f64>, denom: &SpdMatrix, nfilter: usize) -> Result<SpatialFilterBank> {
    let n = sd.nrows();
    check_nfilter(nfilter, n)?;
    let (vals, vecs) = generalized_eig(sd, denom)?;
    let idx = alternate(n, nfilter);
    let v = DMatrix::from_fn(n, nfilter, |i, j| vecs[(i, idx[j])]);
    Ok(SpatialFilterBank {
        filters: v.transpose(),
        patterns: denom.as_matrix() * &v,
        eigenvalues: DVector::from_iterator(nfilter, idx.iter().map(|&i| vals[i])),
    })
}

/// Common spatial patterns: `S_d v = λ S_c v` with `S_d = Σ1 − Σ2` and
/// `S_c = Σ1 + Σ2`.
pub fn csp_fit(c1: &SpdMatrix, c2: &SpdMatrix, nfilter: usize) -> Result<SpatialFilterBank> {
    let sd = c1.as_matrix() - c2.as_matrix();
    let sc = SpdMatrix::new(c1.as_matrix() + c2.as_matrix())?;
    csp_with_denominator(&sd, &sc, nfilter)
}

/// CSP with the Tikhonov-regularized denominator `S_c + α·tr(S_c)/n·I`.
pub fn trcsp_fit(c1: &SpdMatrix, c2: &SpdMatrix, nfilter: usize, alpha: f64) -> Result<SpatialFilterBank> {
    if !(alpha >= 0.0) {
        return Err(PipelineError::InvalidHyper(format!("alpha must be non-negative, got {alpha}")));
    }
    let sd = c1.as_matrix() - c2.as_matrix();
    let mut sc = c1.as_matrix() + c2.as_matrix();
    let n = sc.nrows();
    let load = alpha * sc.trace() / n as f64;
    for i in 0..n {
        sc[(i, i)] += load;
    }
    csp_with_denominator(&sd, &SpdMatrix::new(sc)?, nfilter)
}

/// Log of the unbiased per-channel variance, floored at `EPS_VAR`.
pub fn logvar_features(e: &Epochs) -> Result<DMatrix<f64>> {
    if e.n_samples() < 2 {
        return Err(PipelineError::InvalidInput("need at least 2 samples".into()));
    }
    let mut out = DMatrix::zeros(e.len(), e.n_channels());
    for (i, trial) in e.data.iter().enumerate() {
        for (j, row) in trial.row_iter().enumerate() {
            out[(i, j)] = unbiased_variance(row.iter()).max(EPS_VAR).ln();
        }
    }
    Ok(out)
}

fn unbiased_variance<'a>(values: impl ExactSizeIterator<Item = &'a f64> + Clone) -> f64 {
    let n = values.len() as f64;
    let mean = values.clone().sum::<f64>() / n;
    values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// How class covariances are formed for CSP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CspVariant {
    Plain,
    /// Tikhonov-regularized denominator.
    Tikhonov(f64),
    /// Class covariances shrunk with the Ledoit–Wolf intensity.
    Shrunk,
}

fn class_covariance(trials: &[&DMatrix<f64>], variant: CspVariant) -> Result<SpdMatrix> {
    match variant {
        CspVariant::Shrunk => {
            let t = trials[0].ncols();
            let mut cat = DMatrix::zeros(trials[0].nrows(), t * trials.len());
            for (k, tr) in trials.iter().enumerate() {
                let mut block = (*tr).clone();
                for mut row in block.row_iter_mut() {
                    let m = row.mean();
                    row.add_scalar_mut(-m);
                }
                cat.columns_mut(k * t, t).copy_from(&block);
            }
            Ok(covariance(&cat, CovEstimator::Shrunk)?)
        }
        _ => {
            let mut acc = DMatrix::zeros(trials[0].nrows(), trials[0].nrows());
            for tr in trials {
                acc += sample_covariance(tr);
            }
            Ok(SpdMatrix::new(acc / trials.len() as f64)?)
        }
    }
}

/// CSP filters for two classes, or concatenated one-vs-rest filters for more.
pub fn csp_train(e: &Epochs, nfilter: usize, variant: CspVariant) -> Result<SpatialFilterBank> {
    let fit_pair = |a: Vec<&DMatrix<f64>>, b: Vec<&DMatrix<f64>>| -> Result<SpatialFilterBank> {
        let (c1, c2) = (class_covariance(&a, variant)?, class_covariance(&b, variant)?);
        match variant {
            CspVariant::Tikhonov(alpha) => trcsp_fit(&c1, &c2, nfilter, alpha),
            _ => csp_fit(&c1, &c2, nfilter),
        }
    };
    let split = |k: usize| -> (Vec<&DMatrix<f64>>, Vec<&DMatrix<f64>>) {
        e.data.iter().zip(&e.labels).fold((vec![], vec![]), |(mut a, mut b), (t, &l)| {
            if l == k {
                a.push(t);
            } else {
                b.push(t);
            }
            (a, b)
        })
    };
    if e.n_classes() == 2 {
        let (pos, neg) = split(1);
        // class order matches labels: first class covariance in the numerator
        fit_pair(neg, pos)
    } else {
        let banks = (0..e.n_classes())
            .map(|k| {
                let (a, b) = split(k);
                fit_pair(a, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpatialFilterBank::stack(&banks))
    }
}

/// Log-variance of spatially filtered trials.
pub fn filtered_logvar(bank: &SpatialFilterBank, trials: &[DMatrix<f64>]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(trials.len(), bank.len());
    for (i, tr) in trials.iter().enumerate() {
        let c = sample_covariance(tr);
        for (j, v) in bank.filters.row_iter().enumerate() {
            let var = (v * &c * v.transpose())[(0, 0)];
            out[(i, j)] = var.max(EPS_VAR).ln();
        }
    }
    out
}

/// Histogram mutual information (nats) between a feature and class labels,
/// 8 equal-width bins over the observed range.
pub fn mutual_information(x: &[f64], labels: &[usize], n_classes: usize) -> f64 {
    const BINS: usize = 8;
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let width = (hi - lo) / BINS as f64;
    let n = x.len() as f64;
    let mut joint = vec![vec![0.0; n_classes]; BINS];
    for (&v, &l) in x.iter().zip(labels) {
        let b = if width > 0.0 {
            (((v - lo) / width) as usize).min(BINS - 1)
        } else {
            0
        };
        joint[b][l] += 1.0 / n;
    }
    let pc: Vec<f64> = (0..n_classes).map(|c| joint.iter().map(|r| r[c]).sum()).collect();
    let mut mi = 0.0;
    for row in &joint {
        let pb: f64 = row.iter().sum();
        for (c, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (pb * pc[c])).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Indices of the `k` highest-scoring entries (ties to the lower index),
/// returned in ascending order.
fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

/// Filter-bank CSP: per-band filtering, CSP, log-variance, then mutual
/// information feature selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Fbcsp {
    pub bands: Vec<(BiquadCascade, SpatialFilterBank)>,
    pub selected: Vec<usize>,
    pub mi: Vec<f64>,
}

impl Fbcsp {
    pub fn fit(e: &Epochs, bands: &[(f64, f64)], nfilter_per_band: usize, k_features: Option<usize>) -> Result<Self> {
        if bands.is_empty() {
            return Err(PipelineError::InvalidHyper("filter bank has no bands".into()));
        }
        let mut fitted = Vec::with_capacity(bands.len());
        let mut feats = Vec::with_capacity(bands.len());
        for &(lo, hi) in bands {
            let cascade = design_butter_bandpass(lo, hi, e.sfreq, 4)?;
            let filtered = filter_trials(&cascade, &e.data)?;
            let bank = csp_train(&with_data(e, filtered.clone()), nfilter_per_band, CspVariant::Plain)?;
            feats.push(filtered_logvar(&bank, &filtered));
            fitted.push((cascade, bank));
        }
        let x = hconcat(&feats);
        let total = x.ncols();
        let k = k_features.unwrap_or(total.min(10));
        if k == 0 || k > total {
            return Err(PipelineError::InvalidHyper(format!(
                "k_features {k} must be in 1..={total}"
            )));
        }
        let mi: Vec<f64> = x
            .column_iter()
            .map(|c| mutual_information(c.as_slice(), &e.labels, e.n_classes()))
            .collect();
        Ok(Self {
            bands: fitted,
            selected: top_k(&mi, k),
            mi,
        })
    }

    pub fn transform(&self, trials: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
        let mut feats = Vec::with_capacity(self.bands.len());
        for (cascade, bank) in &self.bands {
            feats.push(filtered_logvar(bank, &filter_trials(cascade, trials)?));
        }
        let x = hconcat(&feats);
        Ok(DMatrix::from_fn(x.nrows(), self.selected.len(), |i, j| x[(i, self.selected[j])]))
    }
}

fn filter_trials(cascade: &BiquadCascade, trials: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
    trials
        .iter()
        .map(|t| bandpass_trial(cascade, t).map_err(PipelineError::from))
        .collect()
}

fn with_data(e: &Epochs, data: Vec<DMatrix<f64>>) -> Epochs {
    Epochs {
        data,
        labels: e.labels.clone(),
        classes: e.classes.clone(),
        sfreq: e.sfreq,
        tmin: e.tmin,
    }
}

pub(crate) fn hconcat(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        out.columns_mut(c, b.ncols()).copy_from(b);
        c += b.ncols();
    }
    out
}

pub(crate) fn vconcat(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.rows_mut(r, b.nrows()).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Mean of the trials of class `class`.
pub fn evoked(e: &Epochs, class: usize) -> Result<DMatrix<f64>> {
    let mut acc = DMatrix::zeros(e.n_channels(), e.n_samples());
    let mut count = 0;
    for (t, &l) in e.data.iter().zip(&e.labels) {
        if l == class {
            acc += t;
            count += 1;
        }
    }
    if count == 0 {
        return Err(PipelineError::DegenerateLabels(format!(
            "no trials of class {:?}",
            e.classes.get(class)
        )));
    }
    Ok(acc / count as f64)
}

/// Shrunk covariance of all training trials concatenated in time.
pub fn signal_covariance(e: &Epochs) -> Result<SpdMatrix> {
    let refs: Vec<&DMatrix<f64>> = e.data.iter().collect();
    Ok(covariance(&hconcat_refs(&refs), CovEstimator::Shrunk)?)
}

fn hconcat_refs(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let owned: Vec<DMatrix<f64>> = blocks.iter().map(|b| (*b).clone()).collect();
    hconcat(&owned)
}

/// XDAWN filters for one class: `Σ_template v = λ Σ_signal v` with
/// `Σ_template = P Pᵀ / T` from the class evoked response `P`.
pub fn xdawn_filters(p: &DMatrix<f64>, signal: &SpdMatrix, nfilter: usize) -> Result<SpatialFilterBank> {
    let n = p.nrows();
    check_nfilter(nfilter, n)?;
    let template = p * p.transpose() / p.ncols() as f64;
    let (vals, vecs) = generalized_eig(&template, signal)?;
    let v = vecs.columns(0, nfilter).into_owned();
    Ok(SpatialFilterBank {
        filters: v.transpose(),
        patterns: signal.as_matrix() * &v,
        eigenvalues: vals.rows(0, nfilter).into_owned(),
    })
}

/// XDAWN filters for `class` from training epochs.
pub fn xdawn_fit(e: &Epochs, class: usize, nfilter: usize) -> Result<SpatialFilterBank> {
    let p = evoked(e, class)?;
    xdawn_filters(&p, &signal_covariance(e)?, nfilter)
}

/// Per-class XDAWN filters and filtered evoked responses.
#[derive(Debug, Clone, PartialEq)]
pub struct XdawnState {
    /// Stacked filters of all classes, `(classes·nfilter) × n`.
    pub filters: DMatrix<f64>,
    /// Stacked filtered class prototypes, `(classes·nfilter) × T`.
    pub prototypes: DMatrix<f64>,
}

impl XdawnState {
    pub fn fit(e: &Epochs, nfilter: usize) -> Result<Self> {
        let signal = signal_covariance(e)?;
        let mut filters = Vec::new();
        let mut protos = Vec::new();
        for k in 0..e.n_classes() {
            let p = evoked(e, k)?;
            let bank = xdawn_filters(&p, &signal, nfilter)?;
            protos.push(&bank.filters * &p);
            filters.push(bank.filters);
        }
        let f_refs: Vec<&DMatrix<f64>> = filters.iter().collect();
        let p_refs: Vec<&DMatrix<f64>> = protos.iter().collect();
        Ok(Self {
            filters: vconcat(&f_refs),
            prototypes: vconcat(&p_refs),
        })
    }

    pub fn apply(&self, trial: &DMatrix<f64>) -> DMatrix<f64> {
        &self.filters * trial
    }

    /// Flattened filtered trial.
    pub fn vectorize(&self, trial: &DMatrix<f64>) -> DVector<f64> {
        let y = self.apply(trial);
        DVector::from_iterator(y.len(), y.transpose().iter().copied())
    }

    /// Covariance of the super-trial `[prototypes; filtered trial]`.
    pub fn super_trial_cov(&self, trial: &DMatrix<f64>) -> Result<SpdMatrix> {
        let y = self.apply(trial);
        Ok(covariance(&vconcat(&[&self.prototypes, &y]), CovEstimator::Shrunk)?)
    }
}

/// Prototype for ERP covariances, optionally compressed onto its `svd_n`
/// leading left singular vectors.
pub fn erp_prototype(p: &DMatrix<f64>, svd_n: Option<usize>) -> Result<DMatrix<f64>> {
    match svd_n {
        None => Ok(p.clone()),
        Some(k) => {
            if k == 0 || k > p.nrows() {
                return Err(PipelineError::InvalidHyper(format!(
                    "svd_n {k} must be in 1..={}",
                    p.nrows()
                )));
            }
            let eig = sym_eig(&SymMatrix::from_symmetrized(p * p.transpose())?);
            let u = eig.eigenvectors.columns(0, k);
            Ok(u.transpose() * p)
        }
    }
}

/// Shrunk covariance of the super-trial `[prototype; trial]`.
pub fn erp_cov(trial: &DMatrix<f64>, prototype: &DMatrix<f64>) -> Result<SpdMatrix> {
    if prototype.ncols() != trial.ncols() {
        return Err(PipelineError::DimensionMismatch {
            expected: prototype.ncols(),
            found: trial.ncols(),
        });
    }
    Ok(covariance(&vconcat(&[prototype, trial]), CovEstimator::Shrunk)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn diag(v: &[f64]) -> SpdMatrix {
        SpdMatrix::from_diagonal(v).unwrap()
    }

    fn noise(n: usize, t: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        DMatrix::from_fn(n, t, |_, _| StandardNormal.sample(rng))
    }

    #[test]
    fn csp_toy_oracle() {
        let bank = csp_fit(&diag(&[4.0, 1.0]), &diag(&[1.0, 4.0]), 2).unwrap();
        assert!((bank.eigenvalues[0] - 0.6).abs() < 1e-10);
        assert!((bank.eigenvalues[1] + 0.6).abs() < 1e-10);
        let s = 1.0 / 5f64.sqrt();
        assert!((bank.filters[(0, 0)].abs() - s).abs() < 1e-10 && bank.filters[(0, 1)].abs() < 1e-10);
        assert!((bank.filters[(1, 1)].abs() - s).abs() < 1e-10 && bank.filters[(1, 0)].abs() < 1e-10);
    }

    #[test]
    fn csp_equal_classes_zero_eigenvalues() {
        let c = SpdMatrix::new(DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, 0.2, 0.1, 0.2, 1.5])).unwrap();
        let bank = csp_fit(&c, &c, 3).unwrap();
        assert!(bank.eigenvalues.amax() < 1e-12);
        let sc = c.as_matrix() * 2.0;
        for v in bank.filters.row_iter() {
            assert!((v * &sc * v.transpose())[(0, 0)] > 0.0);
        }
    }

    #[test]
    fn csp_label_swap_mirrors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = noise(4, 200, &mut rng);
        let b = noise(4, 200, &mut rng) * 1.5;
        let c1 = SpdMatrix::new(sample_covariance(&a)).unwrap();
        let c2 = SpdMatrix::new(sample_covariance(&b)).unwrap();
        let f = csp_fit(&c1, &c2, 4).unwrap();
        let g = csp_fit(&c2, &c1, 4).unwrap();
        // alternate ordering pairs the extremes, so a swap exchanges neighbours
        for i in 0..4 {
            let j = i ^ 1;
            assert!((f.eigenvalues[i] + g.eigenvalues[j]).abs() < 1e-10);
            let dot = f.filters.row(i).dot(&g.filters.row(j)).abs();
            let norm = f.filters.row(i).norm() * g.filters.row(j).norm();
            assert!((dot / norm - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn trcsp_limits() {
        let (c1, c2) = (diag(&[4.0, 1.0, 2.0]), diag(&[1.0, 4.0, 2.5]));
        let csp = csp_fit(&c1, &c2, 3).unwrap();
        let tr0 = trcsp_fit(&c1, &c2, 3, 0.0).unwrap();
        for i in 0..3 {
            let d = (csp.filters.row(i).dot(&tr0.filters.row(i)).abs()
                - csp.filters.row(i).norm() * tr0.filters.row(i).norm())
            .abs();
            assert!(d < 1e-8);
        }
        let big = trcsp_fit(&c1, &c2, 1, 1e6).unwrap();
        let v = big.filters.row(0) / big.filters.row(0).norm();
        // leading eigenvector of S_d = diag(3, -3, -0.5)
        assert!((v[0].abs() - 1.0).abs() < 1e-3);
        let mut prev = f64::INFINITY;
        for alpha in [0.0, 0.1, 1.0, 10.0] {
            let lead = trcsp_fit(&c1, &c2, 1, alpha).unwrap().eigenvalues[0].abs();
            assert!(lead <= prev + 1e-12);
            prev = lead;
        }
    }

    #[test]
    fn logvar_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = noise(3, 500, &mut rng);
        let e = Epochs::new(vec![t.clone()], vec![0], vec!["a".into()], 100.0, 0.0).unwrap();
        let f0 = logvar_features(&e).unwrap();
        let cov = sample_covariance(&t);
        for j in 0..3 {
            assert!((f0[(0, j)] - cov[(j, j)].ln()).abs() < 1e-9);
        }
        t.row_mut(1).scale_mut(2.0);
        let e2 = Epochs::new(vec![t], vec![0], vec!["a".into()], 100.0, 0.0).unwrap();
        let f1 = logvar_features(&e2).unwrap();
        assert!((f1[(0, 1)] - f0[(0, 1)] - 4f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn mutual_information_bounds() {
        let labels: Vec<usize> = (0..100).map(|i| i % 2).collect();
        let perfect: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
        assert!((mutual_information(&perfect, &labels, 2) - 2f64.ln()).abs() < 1e-12);
        assert_eq!(mutual_information(&vec![1.0; 100], &labels, 2), 0.0);
        assert_eq!(top_k(&[0.1, 0.5, 0.5, 0.2], 2), vec![1, 2]);
        assert_eq!(top_k(&[0.3, 0.1, 0.9], 3), vec![0, 1, 2]);
    }

    #[test]
    fn xdawn_concentrates_on_erp_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = 100;
        let erp: Vec<f64> = (0..t).map(|i| (-(i as f64 - 50.0).powi(2) / 50.0).exp() * 3.0).collect();
        let mut data = Vec::new();
        let mut labels = Vec::new();
        for k in 0..60 {
            let mut x = noise(4, t, &mut rng);
            if k % 2 == 1 {
                for i in 0..t {
                    x[(0, i)] += erp[i];
                }
            }
            data.push(x);
            labels.push(k % 2);
        }
        let e = Epochs::new(data, labels, vec!["NonTarget".into(), "Target".into()], 100.0, 0.0).unwrap();
        let bank = xdawn_fit(&e, 1, 2).unwrap();
        let w = bank.filters.row(0);
        assert!(w[0].abs() / w.norm() > 0.9);
        let sig = signal_covariance(&e).unwrap();
        let gram = &bank.filters * sig.as_matrix() * bank.filters.transpose();
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-8);
        assert!(xdawn_fit(&e, 1, 5).is_err());
    }

    #[test]
    fn erp_cov_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let trial = noise(31, 64, &mut rng);
        let p = noise(31, 64, &mut rng);
        assert_eq!(erp_cov(&trial, &p).unwrap().dim(), 62);
        let compressed = erp_prototype(&p, Some(4)).unwrap();
        assert_eq!(erp_cov(&trial, &compressed).unwrap().dim(), 35);
        assert!(erp_prototype(&p, Some(32)).is_err());
        let zero = DMatrix::zeros(3, 64);
        let small = trial.rows(0, 3).into_owned();
        let c = erp_cov(&small, &zero).unwrap();
        let m = c.as_matrix();
        assert!(m.view((0, 3), (3, 3)).amax() < 1e-12);
        for i in 0..3 {
            assert!(m[(i, i)] > 0.0);
            for j in 0..3 {
                if i != j {
                    assert!(m[(i, j)].abs() < 1e-12);
                }
            }
        }
    }
}
