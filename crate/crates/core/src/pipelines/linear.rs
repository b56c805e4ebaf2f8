//! Linear classifier heads on feature vectors: LDA, elastic-net logistic
//! regression, a linear hinge-loss classifier, and one-vs-rest composition.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PipelineError, Result};
use crate::dsp::ledoit_wolf_shrinkage;
use crate::spd::sym_eig_raw;

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + exp(z)) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn check_finite(x: &DMatrix<f64>) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(PipelineError::InvalidInput("non-finite feature".into()))
    }
}

fn check_binary(x: &DMatrix<f64>, y: &[bool]) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(PipelineError::DimensionMismatch {
            expected: x.nrows(),
            found: y.len(),
        });
    }
    if !y.iter().any(|&v| v) || y.iter().all(|&v| v) {
        return Err(PipelineError::DegenerateLabels("binary head needs both classes".into()));
    }
    check_finite(x)
}

/// Binary linear scorer: `p(positive) = σ(scale · (w·x + b) + offset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub w: DVector<f64>,
    pub b: f64,
    pub scale: f64,
    pub offset: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &DMatrix<f64>) -> DVector<f64> {
        (x * &self.w).add_scalar(self.b)
    }

    pub fn proba(&self, x: &DMatrix<f64>) -> DVector<f64> {
        self.decision(x).map(|d| sigmoid(self.scale * d + self.offset))
    }
}

/// Per-column mean and standard deviation.
#[derive(Debug, Clone)]
struct Standardizer {
    mean: DVector<f64>,
    std: DVector<f64>,
}

impl Standardizer {
    fn fit(x: &DMatrix<f64>) -> Self {
        let n = x.nrows() as f64;
        let mean = DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / n));
        let std = DVector::from_iterator(
            x.ncols(),
            x.column_iter().zip(mean.iter()).map(|(c, m)| {
                let s = (c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
                if s > 1e-12 {
                    s
                } else {
                    1.0
                }
            }),
        );
        Self { mean, std }
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| (x[(i, j)] - self.mean[j]) / self.std[j])
    }

    /// Maps weights learned on standardized features back to raw features.
    fn unfold(&self, w: &DVector<f64>, b: f64) -> (DVector<f64>, f64) {
        let w_raw = w.component_div(&self.std);
        let b_raw = b - w_raw.dot(&self.mean);
        (w_raw, b_raw)
    }
}

/// Covariance shrinkage for LDA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shrinkage {
    None,
    /// Ledoit–Wolf intensity.
    Auto,
    Fixed(f64),
}

/// Shrunk covariance of centered rows (`samples × features`).
pub(crate) fn shrunk_scatter(xc: &DMatrix<f64>, shrinkage: Shrinkage, dof: f64) -> DMatrix<f64> {
    let d = xc.ncols();
    let s = xc.transpose() * xc / dof;
    let gamma = match shrinkage {
        Shrinkage::None => return s,
        Shrinkage::Auto => ledoit_wolf_shrinkage(&xc.transpose()),
        Shrinkage::Fixed(g) => g.clamp(0.0, 1.0),
    };
    let mu = s.trace() / d as f64;
    let mut out = s * (1.0 - gamma);
    for i in 0..d {
        out[(i, i)] += gamma * mu;
    }
    out
}

/// Solves `a x = b` for symmetric positive-definite `a`, failing when `a` is
/// numerically singular.
pub(crate) fn spd_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let eig = sym_eig_raw(a)?;
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if !(max > 0.0) || min <= 1e-12 * max {
        return Err(PipelineError::SingularCovariance);
    }
    let v = &eig.eigenvectors;
    let coef = (v.transpose() * b).component_div(&eig.eigenvalues);
    Ok(v * coef)
}

pub fn lda_fit(x: &DMatrix<f64>, y: &[bool], shrinkage: Shrinkage) -> Result<LinearModel> {
    check_binary(x, y)?;
    let d = x.ncols();
    let mut means = [DVector::zeros(d), DVector::zeros(d)];
    let mut counts = [0usize; 2];
    for (row, &c) in x.row_iter().zip(y) {
        means[c as usize] += row.transpose();
        counts[c as usize] += 1;
    }
    for k in 0..2 {
        means[k] /= counts[k] as f64;
    }
    let xc = DMatrix::from_fn(x.nrows(), d, |i, j| x[(i, j)] - means[y[i] as usize][j]);
    let dof = (x.nrows() as f64 - 2.0).max(1.0);
    let sigma = shrunk_scatter(&xc, shrinkage, dof);
    let w = spd_solve(&sigma, &(&means[1] - &means[0]))?;
    let b = -w.dot(&((&means[0] + &means[1]) * 0.5));
    Ok(LinearModel {
        w,
        b,
        scale: 1.0,
        offset: 0.0,
    })
}

/// Mean logistic loss + `strength · (l1_ratio·‖w‖₁ + (1 − l1_ratio)/2·‖w‖₂²)`,
/// intercept unpenalized, fitted by FISTA with backtracking on internally
/// standardized features.
pub fn logreg_elasticnet_fit(x: &DMatrix<f64>, y: &[bool], l1_ratio: f64, strength: f64) -> Result<LinearModel> {
    check_binary(x, y)?;
    if !(0.0..=1.0).contains(&l1_ratio) || !(strength >= 0.0) {
        return Err(PipelineError::InvalidHyper(format!(
            "l1_ratio {l1_ratio} must be in [0, 1] and strength {strength} non-negative"
        )));
    }
    let st = Standardizer::fit(x);
    let z = st.apply(x);
    let n = z.nrows() as f64;
    let d = z.ncols();
    let s = DVector::from_iterator(y.len(), y.iter().map(|&v| if v { 1.0 } else { -1.0 }));
    let l1 = strength * l1_ratio;
    let l2 = strength * (1.0 - l1_ratio);

    // theta = [w; b]
    let smooth = |t: &DVector<f64>| -> (f64, DVector<f64>) {
        let w = t.rows(0, d);
        let margin = (&z * w).add_scalar(t[d]).component_mul(&s);
        let loss = margin.iter().map(|&m| softplus(-m)).sum::<f64>() / n + 0.5 * l2 * w.norm_squared();
        let r = DVector::from_iterator(margin.len(), margin.iter().zip(s.iter()).map(|(&m, &si)| -si * sigmoid(-m) / n));
        let mut grad = DVector::zeros(d + 1);
        grad.rows_mut(0, d).copy_from(&(z.transpose() * &r + w * l2));
        grad[d] = r.sum();
        (loss, grad)
    };
    let prox = |v: &DVector<f64>, step: f64| -> DVector<f64> {
        let thr = step * l1;
        let mut out = v.clone();
        for i in 0..d {
            out[i] = v[i].signum() * (v[i].abs() - thr).max(0.0);
        }
        out
    };
    let objective = |t: &DVector<f64>| smooth(t).0 + l1 * t.rows(0, d).lp_norm(1);

    let mut theta = DVector::zeros(d + 1);
    let mut yk = theta.clone();
    let mut tk: f64 = 1.0;
    let mut lip = 1.0;
    let mut obj = objective(&theta);
    for _ in 0..5000 {
        let (fy, gy) = smooth(&yk);
        let next = loop {
            let cand = prox(&(&yk - &gy * (1.0 / lip)), 1.0 / lip);
            let diff = &cand - &yk;
            let bound = fy + gy.dot(&diff) + 0.5 * lip * diff.norm_squared();
            if smooth(&cand).0 <= bound + 1e-15 * fy.abs() || lip > 1e15 {
                break cand;
            }
            lip *= 2.0;
        };
        let step = (&next - &theta).norm();
        let next_obj = objective(&next);
        if next_obj > obj {
            // adaptive restart
            tk = 1.0;
            yk = theta.clone();
            if step < 1e-7 {
                break;
            }
            continue;
        }
        let t_next = (1.0 + (1.0 + 4.0 * tk * tk).sqrt()) / 2.0;
        yk = &next + (&next - &theta) * ((tk - 1.0) / t_next);
        tk = t_next;
        theta = next;
        obj = next_obj;
        if step < 1e-7 {
            break;
        }
    }
    let (w, b) = st.unfold(&theta.rows(0, d).into_owned(), theta[d]);
    Ok(LinearModel {
        w,
        b,
        scale: 1.0,
        offset: 0.0,
    })
}

/// L2-regularized hinge loss, `λ = 1/(C·n)`, by averaged stochastic
/// subgradient descent over 200 seeded epochs. The intercept is an extra
/// constant feature. Probabilities come from a sigmoid fitted to the
/// training decision values.
pub fn linear_margin_fit(x: &DMatrix<f64>, y: &[bool], c: f64, seed: u64) -> Result<LinearModel> {
    check_binary(x, y)?;
    if !(c > 0.0) {
        return Err(PipelineError::InvalidHyper(format!("C must be positive, got {c}")));
    }
    let st = Standardizer::fit(x);
    let z = st.apply(x);
    let (n, d) = z.shape();
    let lambda = 1.0 / (c * n as f64);
    let radius = 1.0 / lambda.sqrt();
    let rows: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let mut r = DVector::from_element(d + 1, 1.0);
            r.rows_mut(0, d).copy_from(&z.row(i).transpose());
            r
        })
        .collect();
    let s: Vec<f64> = y.iter().map(|&v| if v { 1.0 } else { -1.0 }).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut w = DVector::zeros(d + 1);
    let mut avg = DVector::zeros(d + 1);
    let mut t = 0usize;
    for _ in 0..200 {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let margin = s[i] * w.dot(&rows[i]);
            w *= 1.0 - eta * lambda;
            if margin < 1.0 {
                w.axpy(eta * s[i], &rows[i], 1.0);
            }
            let norm = w.norm();
            if norm > radius {
                w *= radius / norm;
            }
            avg.axpy(1.0 / t as f64, &(&w - &avg), 1.0);
        }
    }
    let (w_raw, b_raw) = st.unfold(&avg.rows(0, d).into_owned(), avg[d]);
    let mut model = LinearModel {
        w: w_raw,
        b: b_raw,
        scale: 1.0,
        offset: 0.0,
    };
    let (a, b) = platt(&model.decision(x), y);
    model.scale = a;
    model.offset = b;
    Ok(model)
}

/// Fits `p = σ(a·f + b)` to decision values by Newton's method with
/// Platt's smoothed targets. Falls back to the identity link when the
/// fitted slope is not positive.
fn platt(f: &DVector<f64>, y: &[bool]) -> (f64, f64) {
    let n_pos = y.iter().filter(|&&v| v).count() as f64;
    let n_neg = y.len() as f64 - n_pos;
    let hi = (n_pos + 1.0) / (n_pos + 2.0);
    let lo = 1.0 / (n_neg + 2.0);
    let target: Vec<f64> = y.iter().map(|&v| if v { hi } else { lo }).collect();
    let loss = |a: f64, b: f64| -> f64 {
        f.iter()
            .zip(&target)
            .map(|(&fi, &ti)| {
                let z = a * fi + b;
                softplus(z) - ti * z
            })
            .sum()
    };
    let (mut a, mut b) = (1.0, 0.0);
    let mut cur = loss(a, b);
    for _ in 0..100 {
        let (mut ga, mut gb, mut haa, mut hab, mut hbb) = (0.0, 0.0, 1e-12, 0.0, 1e-12);
        for (&fi, &ti) in f.iter().zip(&target) {
            let p = sigmoid(a * fi + b);
            let r = p - ti;
            let w = p * (1.0 - p);
            ga += r * fi;
            gb += r;
            haa += w * fi * fi;
            hab += w * fi;
            hbb += w;
        }
        let det = haa * hbb - hab * hab;
        if det.abs() < 1e-300 {
            break;
        }
        let da = (hbb * ga - hab * gb) / det;
        let db = (haa * gb - hab * ga) / det;
        let mut step = 1.0;
        let mut improved = false;
        while step > 1e-10 {
            let (na, nb) = (a - step * da, b - step * db);
            let nl = loss(na, nb);
            if nl < cur - 1e-4 * step * (ga * da + gb * db) {
                (a, b, cur) = (na, nb, nl);
                improved = true;
                break;
            }
            step /= 2.0;
        }
        if !improved || (ga.abs() < 1e-9 && gb.abs() < 1e-9) {
            break;
        }
    }
    if a > 0.0 && a.is_finite() && b.is_finite() {
        (a, b)
    } else {
        (1.0, 0.0)
    }
}

/// Head choice for feature-vector pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeadKind {
    Lda { shrinkage: Shrinkage },
    Logistic { l1_ratio: f64, c: f64 },
    Svm { c: f64 },
}

impl HeadKind {
    fn fit_binary(&self, x: &DMatrix<f64>, y: &[bool], seed: u64) -> Result<LinearModel> {
        match *self {
            HeadKind::Lda { shrinkage } => lda_fit(x, y, shrinkage),
            HeadKind::Logistic { l1_ratio, c } => {
                if !(c > 0.0) {
                    return Err(PipelineError::InvalidHyper(format!("C must be positive, got {c}")));
                }
                logreg_elasticnet_fit(x, y, l1_ratio, 1.0 / (c * x.nrows() as f64))
            }
            HeadKind::Svm { c } => linear_margin_fit(x, y, c, seed),
        }
    }
}

/// Binary model, or one model per class (one-vs-rest) with normalized
/// probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearHead {
    pub models: Vec<LinearModel>,
    pub n_classes: usize,
}

impl LinearHead {
    pub fn fit(kind: HeadKind, x: &DMatrix<f64>, labels: &[usize], n_classes: usize, seed: u64) -> Result<Self> {
        if n_classes < 2 {
            return Err(PipelineError::DegenerateLabels("need at least 2 classes".into()));
        }
        let models = if n_classes == 2 {
            let y: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
            vec![kind.fit_binary(x, &y, seed)?]
        } else {
            (0..n_classes)
                .map(|k| {
                    let y: Vec<bool> = labels.iter().map(|&l| l == k).collect();
                    kind.fit_binary(x, &y, seed.wrapping_add(k as u64))
                })
                .collect::<Result<_>>()?
        };
        Ok(Self { models, n_classes })
    }

    pub fn n_features(&self) -> usize {
        self.models[0].w.len()
    }

    /// Rows are trials, columns classes.
    pub fn predict_proba(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.n_features() {
            return Err(PipelineError::DimensionMismatch {
                expected: self.n_features(),
                found: x.ncols(),
            });
        }
        if self.n_classes == 2 {
            let p = self.models[0].proba(x);
            return Ok(DMatrix::from_fn(x.nrows(), 2, |i, j| if j == 1 { p[i] } else { 1.0 - p[i] }));
        }
        let cols: Vec<DVector<f64>> = self.models.iter().map(|m| m.proba(x)).collect();
        let mut out = DMatrix::from_fn(x.nrows(), self.n_classes, |i, j| cols[j][i]);
        for mut row in out.row_iter_mut() {
            let sum = row.sum();
            if sum > 0.0 && sum.is_finite() {
                row /= sum;
            } else {
                row.fill(1.0 / self.n_classes as f64);
            }
        }
        Ok(out)
    }
}
