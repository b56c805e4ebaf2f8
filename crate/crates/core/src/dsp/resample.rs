//! Rational-ratio polyphase resampling with a Kaiser-windowed sinc kernel.

use nalgebra::DMatrix;
use std::f64::consts::PI;

use super::{DspError, Epochs, Result};

const MAX_DENOMINATOR: u64 = 10_000;
const KAISER_BETA: f64 = 5.0;
const HALF_TAPS_PER_PHASE: usize = 10;

/// Best rational approximation `up/down` of `ratio` with a bounded denominator.
fn rational(ratio: f64) -> Option<(usize, usize)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut x = ratio;
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a as f64;
        if ((h1 as f64 / k1 as f64) - ratio).abs() <= 1e-9 * ratio || frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1 == 0 || h1 == 0 || ((h1 as f64 / k1 as f64) - ratio).abs() > 1e-9 * ratio {
        return None;
    }
    Some((h1 as usize, k1 as usize))
}

/// Modified Bessel function of the first kind, order zero.
fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let q = x * x / 4.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn kernel(up: usize, down: usize) -> (Vec<f64>, usize) {
    let max = up.max(down);
    let half = HALF_TAPS_PER_PHASE * max;
    let n = 2 * half + 1;
    let cutoff = 1.0 / max as f64;
    let i0b = bessel_i0(KAISER_BETA);
    let mut h: Vec<f64> = (0..n)
        .map(|i| {
            let m = i as f64 - half as f64;
            let sinc = if m == 0.0 {
                1.0
            } else {
                (PI * cutoff * m).sin() / (PI * cutoff * m)
            };
            let r = m / half as f64;
            let w = bessel_i0(KAISER_BETA * (1.0 - r * r).max(0.0).sqrt()) / i0b;
            cutoff * sinc * w
        })
        .collect();
    let sum: f64 = h.iter().sum();
    for v in &mut h {
        *v *= up as f64 / sum;
    }
    (h, half)
}

fn resample_signal(x: &[f64], up: usize, down: usize, h: &[f64], half: usize) -> Vec<f64> {
    let n_out = ((x.len() * up) as f64 / down as f64).round() as usize;
    (0..n_out)
        .map(|m| {
            // taps h[m·down + half − i·up] for valid i
            let pos = m * down + half;
            let i_hi = (pos / up).min(x.len().saturating_sub(1));
            let i_lo = pos.saturating_sub(h.len() - 1).div_ceil(up);
            (i_lo..=i_hi).map(|i| x[i] * h[pos - i * up]).sum()
        })
        .collect()
}

/// Resamples every trial to `new_sfreq`. Output length is
/// `round(samples · new_sfreq / sfreq)`.
pub fn resample(e: &Epochs, new_sfreq: f64) -> Result<Epochs> {
    if !(new_sfreq > 0.0) || !new_sfreq.is_finite() {
        return Err(DspError::InvalidInput(format!("new_sfreq must be positive, got {new_sfreq}")));
    }
    if new_sfreq == e.sfreq {
        return Ok(e.clone());
    }
    let (up, down) = rational(new_sfreq / e.sfreq).ok_or(DspError::UnsupportedRatio {
        sfreq: e.sfreq,
        new_sfreq,
    })?;
    let (h, half) = kernel(up, down);
    let data = e
        .data
        .iter()
        .map(|trial| {
            let rows: Vec<Vec<f64>> = trial
                .row_iter()
                .map(|r| {
                    let x: Vec<f64> = r.iter().copied().collect();
                    resample_signal(&x, up, down, &h, half)
                })
                .collect();
            let n_out = rows.first().map_or(0, Vec::len);
            DMatrix::from_fn(rows.len(), n_out, |c, t| rows[c][t])
        })
        .collect();
    Ok(Epochs {
        data,
        labels: e.labels.clone(),
        classes: e.classes.clone(),
        sfreq: new_sfreq,
        tmin: e.tmin,
    })
}
