//! Paired pipeline comparisons per dataset and their Stouffer combination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("effect size undefined: differences have zero variance")]
    EffectUndefined,
}

pub type Result<T> = std::result::Result<T, StatsError>;

/// One-tailed direction of the paired tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// A − B > 0.
    #[default]
    Greater,
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PermExact,
    PermMc,
    Wilcoxon,
}

impl Method {
    /// Test used for `n` subjects: exact permutation below 13, Monte-Carlo
    /// permutation up to 20, Wilcoxon above.
    pub fn for_subjects(n: usize) -> Method {
        match n {
            0..=12 => Method::PermExact,
            13..=20 => Method::PermMc,
            _ => Method::Wilcoxon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedScores {
    pub dataset_id: String,
    /// Per-subject mean scores of pipeline A.
    pub a: Vec<f64>,
    /// Same subjects, same order, pipeline B.
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStat {
    pub dataset_id: String,
    pub n_subjects: usize,
    pub p_value: f64,
    /// `None` when the differences are constant and nonzero.
    pub smd: Option<f64>,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedStat {
    pub z: f64,
    pub p_value: f64,
    /// `None` if any dataset's SMD is undefined.
    pub combined_smd: Option<f64>,
    pub weights: Vec<f64>,
    /// Set when an input p-value was clamped away from 0 or 1.
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StatsOptions {
    pub n_mc: usize,
    pub seed: u64,
    pub alternative: Alternative,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self {
            n_mc: 10_000,
            seed: 0,
            alternative: Alternative::Greater,
        }
    }
}

const P_CLAMP: f64 = 1e-12;

fn differences(a: &[f64], b: &[f64], alt: Alternative) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(StatsError::InvalidInput(format!("{} vs {} paired scores", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(StatsError::InvalidInput("need at least 2 subjects".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::InvalidInput("scores must be finite".into()));
    }
    let sign = match alt {
        Alternative::Greater => 1.0,
        Alternative::Less => -1.0,
    };
    Ok(a.iter().zip(b).map(|(x, y)| sign * (x - y)).collect())
}

fn mean_sd(d: &[f64]) -> (f64, f64) {
    let n = d.len() as f64;
    let m = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

/// Paired t statistic mean(d) / (sd(d)/√N); ±∞ for constant nonzero d.
pub fn paired_t(d: &[f64]) -> f64 {
    let (m, sd) = mean_sd(d);
    m / (sd / (d.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermMode {
    /// Exhaustive below 13 subjects, Monte-Carlo otherwise.
    Auto,
    Exact,
    MonteCarlo,
}

/// One-tailed sign-flip permutation test of the paired t statistic.
///
/// Under sign flips Σd² is fixed, so t is increasing in Σd and the
/// comparison runs on sums. The identity flip is counted, so p ≥ 1/#perms.
/// All-zero differences give p = 1.
pub fn perm_paired_ttest(a: &[f64], b: &[f64], mode: PermMode, opts: &StatsOptions) -> Result<f64> {
    let d = differences(a, b, opts.alternative)?;
    if d.iter().all(|&v| v == 0.0) {
        return Ok(1.0);
    }
    let n = d.len();
    let observed: f64 = d.iter().sum();
    let tol = 1e-12 * d.iter().map(|v| v.abs()).sum::<f64>();
    let exact = match mode {
        PermMode::Auto => n < 13,
        PermMode::Exact => {
            if n > 24 {
                return Err(StatsError::InvalidInput(format!("2^{n} flips is too many to enumerate")));
            }
            true
        }
        PermMode::MonteCarlo => false,
    };
    if exact {
        let total = 1u64 << n;
        let hits = (0..total)
            .filter(|mask| {
                let s: f64 = d.iter().enumerate().map(|(i, v)| if mask >> i & 1 == 1 { -v } else { *v }).sum();
                s >= observed - tol
            })
            .count();
        Ok(hits as f64 / total as f64)
    } else {
        if opts.n_mc == 0 {
            return Err(StatsError::InvalidInput("n_mc must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let hits = (0..opts.n_mc)
            .filter(|_| {
                let s: f64 = d.iter().map(|v| if rng.random::<bool>() { -v } else { *v }).sum();
                s >= observed - tol
            })
            .count();
        Ok((hits + 1) as f64 / (opts.n_mc + 1) as f64)
    }
}

/// One-tailed Wilcoxon signed-rank test, normal approximation with
/// tie-corrected variance and continuity correction. Zero differences are
/// dropped; if none remain, p = 1.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alt: Alternative) -> Result<f64> {
    let d: Vec<f64> = differences(a, b, alt)?.into_iter().filter(|&v| v != 0.0).collect();
    if d.is_empty() {
        return Ok(1.0);
    }
    let n = d.len() as f64;
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs()));
    let mut w_plus = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && d[order[j + 1]].abs() == d[order[i]].abs() {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        w_plus += rank * order[i..=j].iter().filter(|&&k| d[k] > 0.0).count() as f64;
        i = j + 1;
    }
    let mean = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return Ok(if w_plus > mean { 0.5 } else { 1.0 });
    }
    let z = (w_plus - mean - 0.5) / var.sqrt();
    Ok(upper_tail(z))
}

/// Standardized mean difference of paired scores, mean(d)/sd(d), times the
/// small-sample factor J = 1 − 3/(4(N−1) − 1).
pub fn smd(a: &[f64], b: &[f64]) -> Result<f64> {
    let d = differences(a, b, Alternative::Greater)?;
    let (m, sd) = mean_sd(&d);
    if !(sd > 0.0) {
        return Err(StatsError::EffectUndefined);
    }
    let df = (d.len() - 1) as f64;
    Ok(m / sd * (1.0 - 3.0 / (4.0 * df - 1.0)))
}

/// Runs the test selected by subject count and attaches the SMD.
/// Identical score vectors report an SMD of 0.
pub fn compare_pipelines(scores: &PairedScores, opts: &StatsOptions) -> Result<DatasetStat> {
    let n = scores.a.len();
    let method = Method::for_subjects(n);
    let p_value = match method {
        Method::PermExact => perm_paired_ttest(&scores.a, &scores.b, PermMode::Exact, opts)?,
        Method::PermMc => perm_paired_ttest(&scores.a, &scores.b, PermMode::MonteCarlo, opts)?,
        Method::Wilcoxon => wilcoxon_signed_rank(&scores.a, &scores.b, opts.alternative)?,
    };
    let smd = match smd(&scores.a, &scores.b) {
        Ok(s) => Some(s),
        Err(StatsError::EffectUndefined) if scores.a == scores.b => Some(0.0),
        Err(StatsError::EffectUndefined) => None,
        Err(e) => return Err(e),
    };
    Ok(DatasetStat {
        dataset_id: scores.dataset_id.clone(),
        n_subjects: n,
        p_value,
        smd,
        method,
    })
}

/// Stouffer combination with weights w_i = √(N_i / ΣN), so Σw² = 1.
pub fn stouffer_combine(stats: &[DatasetStat]) -> Result<CombinedStat> {
    if stats.is_empty() {
        return Err(StatsError::InvalidInput("no datasets to combine".into()));
    }
    if let Some(s) = stats.iter().find(|s| s.n_subjects == 0 || !(s.p_value >= 0.0 && s.p_value <= 1.0)) {
        return Err(StatsError::InvalidInput(format!("bad statistic for {}", s.dataset_id)));
    }
    let total: f64 = stats.iter().map(|s| s.n_subjects as f64).sum();
    let weights: Vec<f64> = stats.iter().map(|s| (s.n_subjects as f64 / total).sqrt()).collect();
    let mut clamped = false;
    let z: f64 = stats
        .iter()
        .zip(&weights)
        .map(|(s, w)| {
            let p = s.p_value.clamp(P_CLAMP, 1.0 - P_CLAMP);
            clamped |= p != s.p_value;
            w * phi_inv(1.0 - p)
        })
        .sum();
    let combined_smd = stats
        .iter()
        .zip(&weights)
        .map(|(s, w)| s.smd.map(|v| v * w))
        .sum::<Option<f64>>();
    Ok(CombinedStat {
        z,
        p_value: upper_tail(z),
        combined_smd,
        weights,
        clamped,
    })
}

/// Standard normal CDF.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// 1 − Φ(x) without cancellation.
pub fn upper_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse standard normal CDF: Acklam's rational approximation refined by
/// one Halley step. Arguments are clamped to [1e-12, 1 − 1e-12].
pub fn phi_inv(q: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const LOW: f64 = 0.02425;
    let q = q.clamp(P_CLAMP, 1.0 - P_CLAMP);
    let tail = |p: f64| {
        let r = (-2.0 * p.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    let x = if q < LOW {
        tail(q)
    } else if q > 1.0 - LOW {
        -tail(1.0 - q)
    } else {
        let s = q - 0.5;
        let r = s * s;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * s
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    // the residual uses the tail that keeps precision on each side
    let e = if x < 0.0 { phi(x) - q } else { (1.0 - q) - upper_tail(x) };
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_inv_oracles() {
        // mpmath, 30 digits
        assert!((phi_inv(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((phi_inv(0.001) + 3.090_232_306_167_813_5).abs() < 1e-12);
        assert!((phi_inv(1e-10) + 6.361_340_902_404_056).abs() < 1e-9);
        assert_eq!(phi_inv(0.5), 0.0);
        // dyadic extremes keep 1 − q exact
        for q in [2f64.powi(-30), 2f64.powi(-10), 0.01, 0.2, 0.37, 0.49, 0.6, 0.9, 0.99999] {
            assert!((phi_inv(q) + phi_inv(1.0 - q)).abs() < 1e-9);
            assert!((phi(phi_inv(q)) - q).abs() < 1e-15 + 1e-12 * q);
        }
    }

    #[test]
    fn all_positive_triplet() {
        let a = [1.0, 2.0, 3.0];
        let b = [0.0, 1.0, 2.0];
        assert_eq!(perm_paired_ttest(&a, &b, PermMode::Exact, &StatsOptions::default()).unwrap(), 0.125);
        assert_eq!(perm_paired_ttest(&a, &a, PermMode::Exact, &StatsOptions::default()).unwrap(), 1.0);
        assert!(paired_t(&[1.0, 1.0, 1.0]).is_infinite());
    }

    #[test]
    fn exact_p_is_a_multiple_of_the_flip_count() {
        let a = [0.71, 0.64, 0.80, 0.55, 0.62, 0.77, 0.69];
        let b = [0.70, 0.60, 0.74, 0.58, 0.61, 0.70, 0.66];
        let p = perm_paired_ttest(&a, &b, PermMode::Exact, &StatsOptions::default()).unwrap();
        let k = p * 128.0;
        assert_eq!(k, k.round());
        let q = perm_paired_ttest(&b, &a, PermMode::Exact, &StatsOptions::default()).unwrap();
        // flips pair up as (s, −s), so p(A>B) + p(B>A) = 1 + P(S = −S_obs)
        assert!(p + q >= 1.0);
    }

    #[test]
    fn wilcoxon_oracles() {
        let d: Vec<f64> = (1..=25).map(f64::from).collect();
        let zero = vec![0.0; 25];
        let p = wilcoxon_signed_rank(&d, &zero, Alternative::Greater).unwrap();
        // scipy.stats.wilcoxon(..., alternative='greater', method='approx')
        assert!((p - 6.535302739006514e-06).abs() < 1e-12);
        let t = [1., 2., 2., 3., -1., 0., 4., -4., 5., 5., 5., -2., 3., 1., 6., -3., 2., 7., 0., 1., 2., -1., 3., 4.];
        let p = wilcoxon_signed_rank(&t, &vec![0.0; t.len()], Alternative::Greater).unwrap();
        assert!((p - 0.0032512926591736113).abs() < 1e-12);
        let mirrored: Vec<f64> = (1..=15).flat_map(|k| [k as f64, -(k as f64)]).collect();
        let p = wilcoxon_signed_rank(&mirrored, &vec![0.0; 30], Alternative::Greater).unwrap();
        assert!((p - 0.5).abs() < 0.05);
        assert_eq!(wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0], Alternative::Greater).unwrap(), 1.0);
    }

    #[test]
    fn wilcoxon_directions_complement() {
        let a: Vec<f64> = (0..25).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..25).map(|i| (i as f64 * 0.11).cos() * 0.5).collect();
        let g = wilcoxon_signed_rank(&a, &b, Alternative::Greater).unwrap();
        let l = wilcoxon_signed_rank(&b, &a, Alternative::Greater).unwrap();
        // continuity correction shifts both tails by half a rank
        assert!((g + l - 1.0).abs() < 0.05);
        assert_eq!(l, wilcoxon_signed_rank(&a, &b, Alternative::Less).unwrap());
    }

    #[test]
    fn smd_properties() {
        let b = [0.6, 0.7, 0.65, 0.72, 0.58, 0.69];
        let jitter = [0.01, -0.02, 0.015, -0.005, 0.0, 0.01];
        let a: Vec<f64> = b.iter().zip(jitter).map(|(x, j)| x + 0.05 + j).collect();
        let s = smd(&a, &b).unwrap();
        assert!((s + smd(&b, &a).unwrap()).abs() < 1e-15);
        let (m, sd) = mean_sd(&jitter.iter().map(|j| 0.05 + j).collect::<Vec<_>>());
        assert!((s - m / sd * (1.0 - 3.0 / 19.0)).abs() < 1e-12);
        assert_eq!(smd(&b, &b), Err(StatsError::EffectUndefined));
    }

    #[test]
    fn dispatch_thresholds() {
        for n in 2..=200 {
            let expected = if n < 13 {
                Method::PermExact
            } else if n <= 20 {
                Method::PermMc
            } else {
                Method::Wilcoxon
            };
            assert_eq!(Method::for_subjects(n), expected);
        }
    }

    #[test]
    fn stouffer_cases() {
        let stat = |p: f64, n: usize| DatasetStat {
            dataset_id: "d".into(),
            n_subjects: n,
            p_value: p,
            smd: Some(0.5),
            method: Method::PermExact,
        };
        let one = stouffer_combine(&[stat(0.037, 9)]).unwrap();
        assert!((one.p_value - 0.037).abs() < 1e-12);
        let two = stouffer_combine(&[stat(0.05, 10), stat(0.05, 10)]).unwrap();
        assert!((two.z - 2.326_174_307_353_348).abs() < 1e-9);
        assert!((two.p_value - 0.010_004_626_858_059).abs() < 1e-9);
        let many = stouffer_combine(&[stat(0.2, 3), stat(0.5, 54), stat(0.01, 12), stat(1.0, 7)]).unwrap();
        assert!((many.weights.iter().map(|w| w * w).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(many.clamped);
        assert!(many.p_value > 0.0 && many.p_value <= 1.0);
    }
}
