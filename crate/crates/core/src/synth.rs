//! Seeded synthetic recordings for the three paradigms. Each generator
//! plants exactly the structure one pipeline family relies on: a class
//! dependent spatial covariance (MI), an additive transient (ERP), or line
//! spectra (SSVEP), over 1/f background noise.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{epoch, DspError, Event, Paradigm, Recording};
use crate::eval::{derive_seed, Dataset, SessionEpochs};

#[derive(Debug, Clone, Error)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("frequency {freq} Hz leaves no harmonic room below Nyquist at {sfreq} Hz")]
    InvalidBand { freq: f64, sfreq: f64 },
    #[error(transparent)]
    Dsp(#[from] DspError),
}

pub type Result<T> = std::result::Result<T, SynthError>;

/// Seconds of noise before the first trial and between trials.
const GAP_S: f64 = 1.0;
/// MI source band.
const MI_BAND: (f64, f64) = (10.0, 14.0);
/// Relative amplitude of MI sources outside their own class.
const MI_IDLE_GAIN: f64 = 0.25;
const ERP_LATENCY_S: f64 = 0.3;
const ERP_WIDTH_S: f64 = 0.05;
/// Non-targets per target.
pub const ERP_RATIO: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub paradigm: Paradigm,
    /// Dataset id; defaults to `synth_<paradigm>`.
    pub name: Option<String>,
    pub n_subjects: usize,
    pub n_sessions: usize,
    pub n_channels: usize,
    /// For ERP, the target count; non-targets are five times as many.
    pub n_trials_per_class: usize,
    pub n_classes: usize,
    pub sfreq: f64,
    pub trial_len_s: f64,
    /// Signal to background power ratio per channel.
    pub snr: f64,
    /// Standard deviation of the per-subject perturbation of the mixing.
    pub subject_shift: f64,
    pub seed: u64,
    /// SSVEP stimulation frequencies; defaults to 9, 11, 13, ... Hz.
    pub freqs: Option<Vec<f64>>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            paradigm: Paradigm::Mi,
            name: None,
            n_subjects: 2,
            n_sessions: 1,
            n_channels: 8,
            n_trials_per_class: 50,
            n_classes: 2,
            sfreq: 128.0,
            trial_len_s: 2.0,
            snr: 5.0,
            subject_shift: 0.0,
            seed: 0,
            freqs: None,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_subjects", self.n_subjects),
            ("n_sessions", self.n_sessions),
            ("n_channels", self.n_channels),
            ("n_trials_per_class", self.n_trials_per_class),
            ("n_classes", self.n_classes),
        ];
        if let Some((k, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(SynthError::InvalidSpec(format!("{k} must be at least 1")));
        }
        if !(self.sfreq > 0.0) || !(self.trial_len_s > 0.0) {
            return Err(SynthError::InvalidSpec("sfreq and trial_len_s must be positive".into()));
        }
        if !(self.snr >= 0.0) || !(self.subject_shift >= 0.0) {
            return Err(SynthError::InvalidSpec("snr and subject_shift must be non-negative".into()));
        }
        if (self.trial_len_s * self.sfreq).round() < 2.0 {
            return Err(SynthError::InvalidSpec("trials shorter than two samples".into()));
        }
        Ok(())
    }

    pub fn id(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("synth_{}", self.paradigm.as_str().to_lowercase()))
    }

    /// SSVEP frequencies in use: the explicit list, or 9 Hz upward in 2 Hz
    /// steps.
    pub fn ssvep_freqs(&self) -> Vec<f64> {
        self.freqs
            .clone()
            .unwrap_or_else(|| (0..self.n_classes).map(|i| 9.0 + 2.0 * i as f64).collect())
    }
}

/// One continuous synthetic session.
#[derive(Debug, Clone)]
pub struct SynthRecording {
    pub subject: u32,
    pub session: String,
    pub recording: Recording,
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub id: String,
    pub paradigm: Paradigm,
    pub classes: Vec<String>,
    pub tmin: f64,
    pub tmax: f64,
    pub recordings: Vec<SynthRecording>,
}

impl SynthData {
    /// Cuts every recording into unfiltered epochs.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let sessions = self
            .recordings
            .iter()
            .map(|r| {
                let ep = epoch(&r.recording, self.tmin, self.tmax, &self.classes)?;
                Ok(SessionEpochs {
                    subject: r.subject,
                    session: r.session.clone(),
                    epochs: ep.epochs,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Dataset {
            id: self.id.clone(),
            paradigm: self.paradigm,
            sessions,
        })
    }
}

/// Dispatches on the spec's paradigm.
pub fn generate(spec: &SynthSpec) -> Result<SynthData> {
    match spec.paradigm {
        Paradigm::Mi => gen_mi(spec),
        Paradigm::Erp => gen_erp(spec),
        Paradigm::Ssvep => gen_ssvep(spec, &spec.ssvep_freqs()),
    }
}

fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Real noise with amplitude spectrum `shape(f)`, zero mean, unit variance.
fn shaped_noise(rng: &mut ChaCha8Rng, n: usize, sfreq: f64, shape: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut buf: Vec<Complex64> = (0..n).map(|_| Complex64::new(StandardNormal.sample(rng), 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * sfreq / n as f64;
        *v *= shape(f);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let mut x: Vec<f64> = buf.iter().map(|c| c.re).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    let sd = if sd > 0.0 { sd } else { 1.0 };
    x.iter_mut().for_each(|v| *v = (*v - mean) / sd);
    x
}

/// 1/f power spectrum, flat below 1 Hz so drift does not swamp the band.
fn pink(f: f64) -> f64 {
    1.0 / f.max(1.0).sqrt()
}

fn background(rng: &mut ChaCha8Rng, n_channels: usize, n: usize, sfreq: f64) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n_channels, n);
    for c in 0..n_channels {
        for (j, v) in shaped_noise(rng, n, sfreq, pink).into_iter().enumerate() {
            x[(c, j)] = v;
        }
    }
    x
}

/// Unit-RMS spatial pattern per column, shifted per subject.
fn subject_mixing(spec: &SynthSpec, cols: usize, subject: u32) -> DMatrix<f64> {
    let mut base_rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &["mixing"]));
    let mut m = randn(&mut base_rng, spec.n_channels, cols);
    if spec.subject_shift > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &["shift", &subject.to_string()]));
        m += randn(&mut rng, spec.n_channels, cols) * spec.subject_shift;
    }
    let rms_target = (spec.n_channels as f64).sqrt();
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col *= rms_target / norm;
        }
    }
    m
}

struct Layout {
    onsets: Vec<usize>,
    trial_len: usize,
    n_samples: usize,
}

fn layout(spec: &SynthSpec, n_trials: usize) -> Layout {
    let trial_len = (spec.trial_len_s * spec.sfreq).round() as usize;
    let gap = (GAP_S * spec.sfreq).round() as usize;
    let onsets = (0..n_trials).map(|i| gap + i * (trial_len + gap)).collect();
    Layout {
        onsets,
        trial_len,
        n_samples: gap + n_trials * (trial_len + gap),
    }
}

/// Generates all (subject, session) recordings; `body` receives a
/// session-specific generator, the shuffled trial labels and the layout.
fn sessions<F>(spec: &SynthSpec, classes: &[String], labels: Vec<usize>, body: F) -> Result<Vec<SynthRecording>>
where
    F: Fn(&mut ChaCha8Rng, u32, &[usize], &Layout) -> DMatrix<f64> + Sync,
{
    let units: Vec<(u32, usize)> = (1..=spec.n_subjects as u32)
        .flat_map(|s| (0..spec.n_sessions).map(move |k| (s, k)))
        .collect();
    units
        .par_iter()
        .map(|&(subject, k)| {
            let session = k.to_string();
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &["session", &subject.to_string(), &session]));
            let mut order = labels.clone();
            order.shuffle(&mut rng);
            let lay = layout(spec, order.len());
            let data = body(&mut rng, subject, &order, &lay);
            let events = lay
                .onsets
                .iter()
                .zip(&order)
                .map(|(&sample, &l)| Event {
                    sample,
                    label: classes[l].clone(),
                })
                .collect();
            Ok(SynthRecording {
                subject,
                session,
                recording: Recording::new(data, spec.sfreq, events)?,
            })
        })
        .collect()
}

fn balanced_labels(n_classes: usize, per_class: usize) -> Vec<usize> {
    (0..n_classes).flat_map(|c| std::iter::repeat_n(c, per_class)).collect()
}

/// Motor imagery: class `c` raises the power of a 10–14 Hz source with its
/// own spatial pattern during the trial.
pub fn gen_mi(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    if MI_BAND.1 >= spec.sfreq / 2.0 {
        return Err(SynthError::InvalidBand {
            freq: MI_BAND.1,
            sfreq: spec.sfreq,
        });
    }
    let classes: Vec<String> = match spec.n_classes {
        2 => vec!["left_hand".into(), "right_hand".into()],
        k => (0..k).map(|c| format!("class_{c}")).collect(),
    };
    let labels = balanced_labels(spec.n_classes, spec.n_trials_per_class);
    let amp = spec.snr.sqrt();
    let recordings = sessions(spec, &classes, labels, |rng, subject, order, lay| {
        let mix = subject_mixing(spec, spec.n_classes, subject);
        let mut x = background(rng, spec.n_channels, lay.n_samples, spec.sfreq);
        let mut src = DMatrix::zeros(spec.n_classes, lay.n_samples);
        for k in 0..spec.n_classes {
            let s = shaped_noise(rng, lay.n_samples, spec.sfreq, |f| {
                if (MI_BAND.0..=MI_BAND.1).contains(&f) {
                    1.0
                } else {
                    0.0
                }
            });
            for (j, v) in s.into_iter().enumerate() {
                src[(k, j)] = v * MI_IDLE_GAIN;
            }
        }
        for (&onset, &label) in lay.onsets.iter().zip(order) {
            for j in onset..onset + lay.trial_len {
                src[(label, j)] /= MI_IDLE_GAIN;
            }
        }
        x += mix * src * amp;
        x
    })?;
    Ok(SynthData {
        id: spec.id(),
        paradigm: Paradigm::Mi,
        classes,
        tmin: 0.0,
        tmax: spec.trial_len_s,
        recordings,
    })
}

/// ERP oddball: targets carry a Gaussian bump peaking 300 ms after onset on
/// a fixed spatial pattern; non-targets are background only.
pub fn gen_erp(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    if spec.n_classes != 2 {
        return Err(SynthError::InvalidSpec("ERP data is binary (n_classes = 2)".into()));
    }
    if spec.trial_len_s <= ERP_LATENCY_S {
        return Err(SynthError::InvalidSpec("ERP trials must outlast the 300 ms peak".into()));
    }
    let classes = vec!["NonTarget".to_string(), "Target".to_string()];
    let n = spec.n_trials_per_class;
    let labels: Vec<usize> = std::iter::repeat_n(0, ERP_RATIO * n).chain(std::iter::repeat_n(1, n)).collect();
    let amp = spec.snr.sqrt();
    let recordings = sessions(spec, &classes, labels, |rng, subject, order, lay| {
        let pattern: DVector<f64> = subject_mixing(spec, 1, subject).column(0).into_owned();
        let mut x = background(rng, spec.n_channels, lay.n_samples, spec.sfreq);
        let bump: Vec<f64> = (0..lay.trial_len)
            .map(|j| {
                let t = j as f64 / spec.sfreq - ERP_LATENCY_S;
                amp * (-t * t / (2.0 * ERP_WIDTH_S * ERP_WIDTH_S)).exp()
            })
            .collect();
        for (&onset, &label) in lay.onsets.iter().zip(order) {
            if label == 1 {
                for (j, b) in bump.iter().enumerate() {
                    for c in 0..spec.n_channels {
                        x[(c, onset + j)] += pattern[c] * b;
                    }
                }
            }
        }
        x
    })?;
    Ok(SynthData {
        id: spec.id(),
        paradigm: Paradigm::Erp,
        classes,
        tmin: 0.0,
        tmax: spec.trial_len_s,
        recordings,
    })
}

/// SSVEP: class `f` trials carry sinusoids at `f` and `2f`, the harmonic at
/// half amplitude, on a fixed spatial pattern.
pub fn gen_ssvep(spec: &SynthSpec, freqs: &[f64]) -> Result<SynthData> {
    spec.validate()?;
    if freqs.len() != spec.n_classes {
        return Err(SynthError::InvalidSpec(format!(
            "{} frequencies for {} classes",
            freqs.len(),
            spec.n_classes
        )));
    }
    if let Some(&f) = freqs.iter().find(|&&f| !(f > 0.0) || f > spec.sfreq / 4.0) {
        return Err(SynthError::InvalidBand { freq: f, sfreq: spec.sfreq });
    }
    let classes: Vec<String> = freqs.iter().map(|f| format!("{f}")).collect();
    let mut sorted = classes.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != classes.len() {
        return Err(SynthError::InvalidSpec("duplicate stimulation frequencies".into()));
    }
    let labels = balanced_labels(spec.n_classes, spec.n_trials_per_class);
    // a sinusoid of amplitude a has power a²/2
    let amp = (2.0 * spec.snr).sqrt();
    let recordings = sessions(spec, &classes, labels, |rng, subject, order, lay| {
        let pattern: DVector<f64> = subject_mixing(spec, 1, subject).column(0).into_owned();
        let mut x = background(rng, spec.n_channels, lay.n_samples, spec.sfreq);
        for (&onset, &label) in lay.onsets.iter().zip(order) {
            let f = freqs[label];
            let phase: f64 = rng.random_range(-0.2..0.2);
            for j in 0..lay.trial_len {
                let t = j as f64 / spec.sfreq;
                let s = amp * ((2.0 * PI * f * t + phase).sin() + 0.5 * (4.0 * PI * f * t + 2.0 * phase).sin());
                for c in 0..spec.n_channels {
                    x[(c, onset + j)] += pattern[c] * s;
                }
            }
        }
        x
    })?;
    Ok(SynthData {
        id: spec.id(),
        paradigm: Paradigm::Ssvep,
        classes,
        tmin: 0.0,
        tmax: spec.trial_len_s,
        recordings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(paradigm: Paradigm) -> SynthSpec {
        SynthSpec {
            paradigm,
            n_subjects: 1,
            n_trials_per_class: 10,
            sfreq: 128.0,
            trial_len_s: 1.0,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn deterministic() {
        let spec = small(Paradigm::Mi);
        let a = gen_mi(&spec).unwrap();
        let b = gen_mi(&spec).unwrap();
        assert_eq!(a.recordings[0].recording.data, b.recordings[0].recording.data);
        let c = gen_mi(&SynthSpec { seed: 1, ..spec }).unwrap();
        assert_ne!(a.recordings[0].recording.data, c.recordings[0].recording.data);
    }

    #[test]
    fn pink_noise_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let n = 1 << 14;
        let x = shaped_noise(&mut rng, n, 128.0, pink);
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let band = |lo: f64, hi: f64| {
            let (a, b) = ((lo * n as f64 / 128.0) as usize, (hi * n as f64 / 128.0) as usize);
            buf[a..b].iter().map(|c| c.norm_sqr()).sum::<f64>() / (b - a) as f64
        };
        // power density halves per octave
        let ratio = band(4.0, 6.0) / band(8.0, 12.0);
        assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn erp_ratio_and_counts() {
        let d = gen_erp(&small(Paradigm::Erp)).unwrap().to_dataset().unwrap();
        let counts = d.sessions[0].epochs.class_counts();
        assert_eq!(counts, vec![50, 10]);
        assert!(gen_erp(&SynthSpec { n_classes: 3, ..small(Paradigm::Erp) }).is_err());
    }

    #[test]
    fn ssvep_frequency_limits() {
        let spec = SynthSpec {
            n_classes: 2,
            ..small(Paradigm::Ssvep)
        };
        assert!(matches!(gen_ssvep(&spec, &[10.0, 40.0]), Err(SynthError::InvalidBand { .. })));
        let d = gen_ssvep(&spec, &[9.0, 11.5]).unwrap();
        assert_eq!(d.classes, vec!["9", "11.5"]);
    }

    fn erp_difference_wave(snr: f64) -> Vec<f64> {
        let spec = SynthSpec { snr, ..small(Paradigm::Erp) };
        let d = gen_erp(&spec).unwrap().to_dataset().unwrap();
        let e = &d.sessions[0].epochs;
        let pattern = subject_mixing(&spec, 1, 1).column(0).into_owned();
        let mut diff = vec![0.0; e.n_samples()];
        let counts = e.class_counts();
        for (t, &l) in e.data.iter().zip(&e.labels) {
            let w = if l == 1 { 1.0 / counts[1] as f64 } else { -1.0 / counts[0] as f64 };
            let proj = pattern.transpose() * t / pattern.norm_squared();
            for (j, v) in proj.iter().enumerate() {
                diff[j] += w * v;
            }
        }
        diff
    }

    #[test]
    fn erp_peaks_near_300_ms() {
        let diff = erp_difference_wave(5.0);
        let peak = diff.iter().enumerate().fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        assert!((peak.0 as f64 / 128.0 - 0.3).abs() <= 0.02, "peak at {}", peak.0);
        let flat = erp_difference_wave(0.0);
        assert!(flat.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 0.5 * peak.1);
    }
}
