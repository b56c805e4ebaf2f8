//! Butterworth band-pass design as a cascade of second-order sections, and
//! forward-backward (zero-phase) filtering.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::{DspError, Epochs, Recording, Result};

/// One second-order section, `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b0 + self.b1 * z_inv + self.b2 * z2) / (1.0 + self.a1 * z_inv + self.a2 * z2)
    }

    /// Roots of `z² + a1 z + a2`.
    pub fn poles(&self) -> [Complex64; 2] {
        let disc = Complex64::new(self.a1 * self.a1 - 4.0 * self.a2, 0.0).sqrt();
        [(-self.a1 + disc) / 2.0, (-self.a1 - disc) / 2.0]
    }

    /// Direct-form II transposed state after a unit step has settled.
    fn step_state(&self) -> ([f64; 2], f64) {
        let gain = (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2);
        let z1 = self.b2 - self.a2 * gain;
        let z0 = self.b1 - self.a1 * gain + z1;
        ([z0, z1], gain)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiquadCascade {
    pub sections: Vec<Biquad>,
    pub sfreq: f64,
}

impl BiquadCascade {
    /// Complex frequency response at `freq_hz`.
    pub fn response(&self, freq_hz: f64) -> Complex64 {
        let w = 2.0 * PI * freq_hz / self.sfreq;
        let z_inv = Complex64::from_polar(1.0, -w);
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z_inv))
    }

    pub fn magnitude_db(&self, freq_hz: f64) -> f64 {
        20.0 * self.response(freq_hz).norm().log10()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.sections.iter().flat_map(|s| s.poles()).collect()
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < 1.0)
    }

    /// Odd-extension length used by [`filtfilt`].
    pub fn padlen(&self) -> usize {
        3 * (2 * self.sections.len() + 1)
    }

    fn initial_state(&self) -> Vec<[f64; 2]> {
        let mut scale = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let (z, gain) = s.step_state();
                let out = [z[0] * scale, z[1] * scale];
                scale *= gain;
                out
            })
            .collect()
    }

    fn run(&self, x: &mut [f64], state: &mut [[f64; 2]]) {
        for v in x.iter_mut() {
            let mut sig = *v;
            for (s, z) in self.sections.iter().zip(state.iter_mut()) {
                let y = s.b0 * sig + z[0];
                z[0] = s.b1 * sig - s.a1 * y + z[1];
                z[1] = s.b2 * sig - s.a2 * y;
                sig = y;
            }
            *v = sig;
        }
    }
}

/// Digital Butterworth band-pass: analog prototype of `order` poles,
/// low-pass to band-pass transform on pre-warped edges, bilinear transform,
/// then one biquad per conjugate pole pair (`order` sections, overall
/// transfer-function order `2 * order`). Gain is normalized to 1 at the
/// geometric center of the band.
pub fn design_butter_bandpass(low_hz: f64, high_hz: f64, sfreq: f64, order: usize) -> Result<BiquadCascade> {
    let nyq = sfreq / 2.0;
    if !(sfreq > 0.0 && low_hz > 0.0 && low_hz < high_hz && high_hz < nyq) || order == 0 {
        return Err(DspError::InvalidBand {
            low: low_hz,
            high: high_hz,
            sfreq,
        });
    }
    let fs2 = 2.0 * sfreq;
    let w1 = fs2 * (PI * low_hz / sfreq).tan();
    let w2 = fs2 * (PI * high_hz / sfreq).tan();
    let bw = w2 - w1;
    let w0_sq = w1 * w2;

    let mut poles = Vec::with_capacity(2 * order);
    for k in 1..=order {
        let theta = PI * (2 * k + order - 1) as f64 / (2 * order) as f64;
        let p = Complex64::from_polar(1.0, theta);
        let pb = p * bw;
        let disc = (pb * pb - 4.0 * w0_sq).sqrt();
        for s in [(pb + disc) / 2.0, (pb - disc) / 2.0] {
            poles.push((fs2 + s) / (fs2 - s));
        }
    }

    let mut sections: Vec<Biquad> = pair_poles(poles)
        .into_iter()
        .map(|(a1, a2)| Biquad {
            b0: 1.0,
            b1: 0.0,
            b2: -1.0,
            a1,
            a2,
        })
        .collect();

    let center = 2.0 * (w0_sq.sqrt() / fs2).atan();
    let z_inv = Complex64::from_polar(1.0, -center);
    let mag = sections
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z_inv))
        .norm();
    let g = mag.recip().powf(1.0 / sections.len() as f64);
    for s in &mut sections {
        s.b0 *= g;
        s.b2 *= g;
    }
    let cascade = BiquadCascade { sections, sfreq };
    if !cascade.is_stable() {
        return Err(DspError::InvalidBand {
            low: low_hz,
            high: high_hz,
            sfreq,
        });
    }
    Ok(cascade)
}

/// Groups poles into conjugate pairs (or pairs of real poles) and returns
/// `(a1, a2)` denominators, ordered by increasing pole radius.
fn pair_poles(poles: Vec<Complex64>) -> Vec<(f64, f64)> {
    let tol = 1e-10;
    let (mut complex, mut real): (Vec<_>, Vec<_>) = poles.into_iter().partition(|p| p.im.abs() > tol);
    complex.retain(|p| p.im > 0.0);
    real.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut out: Vec<(f64, f64, f64)> = complex
        .iter()
        .map(|p| (-2.0 * p.re, p.norm_sqr(), p.norm()))
        .collect();
    for pair in real.chunks(2) {
        let (r1, r2) = (pair[0].re, pair.get(1).map_or(0.0, |p| p.re));
        out.push((-(r1 + r2), r1 * r2, r1.abs().max(r2.abs())));
    }
    out.sort_by(|a, b| a.2.total_cmp(&b.2));
    out.into_iter().map(|(a1, a2, _)| (a1, a2)).collect()
}

/// One forward-backward pass: odd-reflection padding of `padlen` samples at
/// each end, forward pass, backward pass, both started from the steady state
/// of a step at the first sample.
fn forward_backward(f: &BiquadCascade, x: &[f64]) -> Vec<f64> {
    let padlen = f.padlen();
    let n = x.len();
    let mut ext = Vec::with_capacity(n + 2 * padlen);
    let (first, last) = (x[0], x[n - 1]);
    ext.extend((1..=padlen).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=padlen).map(|i| 2.0 * last - x[n - 1 - i]));

    let zi = f.initial_state();
    let scaled = |v: f64| zi.iter().map(|z| [z[0] * v, z[1] * v]).collect::<Vec<_>>();

    let mut state = scaled(ext[0]);
    f.run(&mut ext, &mut state);
    ext.reverse();
    let mut state = scaled(ext[0]);
    f.run(&mut ext, &mut state);
    ext.reverse();
    ext.truncate(padlen + n);
    ext.drain(..padlen);
    ext
}

/// Zero-phase filtering. The forward-backward pass is averaged with its
/// time-reversed counterpart, so reversing the input exactly reverses the
/// output, edge transients included.
pub fn filtfilt(f: &BiquadCascade, x: &[f64]) -> Result<Vec<f64>> {
    let padlen = f.padlen();
    let n = x.len();
    if n <= padlen {
        return Err(DspError::SignalTooShort {
            len: n,
            required: padlen,
        });
    }
    let a = forward_backward(f, x);
    let xr: Vec<f64> = x.iter().rev().copied().collect();
    let b = forward_backward(f, &xr);
    Ok(a.iter().zip(b.iter().rev()).map(|(u, v)| 0.5 * (u + v)).collect())
}

/// Filters every row of a channels × samples matrix.
pub fn bandpass_trial(f: &BiquadCascade, data: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(data.nrows(), data.ncols());
    for (i, row) in data.row_iter().enumerate() {
        let x: Vec<f64> = row.iter().copied().collect();
        let y = filtfilt(f, &x)?;
        for (j, v) in y.into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

/// Zero-phase band-pass of a continuous recording.
pub fn bandpass_recording(rec: &Recording, low_hz: f64, high_hz: f64, order: usize) -> Result<Recording> {
    let f = design_butter_bandpass(low_hz, high_hz, rec.sfreq, order)?;
    Ok(Recording {
        data: bandpass_trial(&f, &rec.data)?,
        sfreq: rec.sfreq,
        events: rec.events.clone(),
    })
}

/// Zero-phase band-pass applied to each trial independently.
pub fn bandpass_epochs(e: &Epochs, low_hz: f64, high_hz: f64, order: usize) -> Result<Epochs> {
    let f = design_butter_bandpass(low_hz, high_hz, e.sfreq, order)?;
    Ok(Epochs {
        data: e.data.iter().map(|t| bandpass_trial(&f, t)).collect::<Result<_>>()?,
        labels: e.labels.clone(),
        classes: e.classes.clone(),
        sfreq: e.sfreq,
        tmin: e.tmin,
    })
}
