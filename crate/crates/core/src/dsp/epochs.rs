use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DspError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub sample: usize,
    pub label: String,
}

/// Continuous multichannel recording, channels × samples.
#[derive(Debug, Clone)]
pub struct Recording {
    pub data: DMatrix<f64>,
    pub sfreq: f64,
    pub events: Vec<Event>,
}

impl Recording {
    pub fn new(data: DMatrix<f64>, sfreq: f64, events: Vec<Event>) -> Result<Self> {
        if !(sfreq > 0.0) {
            return Err(DspError::InvalidInput(format!("sfreq must be positive, got {sfreq}")));
        }
        if let Some(ev) = events.iter().find(|e| e.sample >= data.ncols()) {
            return Err(DspError::InvalidInput(format!(
                "event at sample {} outside recording of {} samples",
                ev.sample,
                data.ncols()
            )));
        }
        Ok(Self { data, sfreq, events })
    }

    pub fn n_channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.data.ncols()
    }
}

/// Trials cut from recordings. `labels[i]` indexes into `classes`.
#[derive(Debug, Clone)]
pub struct Epochs {
    pub data: Vec<DMatrix<f64>>,
    pub labels: Vec<usize>,
    pub classes: Vec<String>,
    pub sfreq: f64,
    pub tmin: f64,
}

impl Epochs {
    pub fn new(
        data: Vec<DMatrix<f64>>,
        labels: Vec<usize>,
        classes: Vec<String>,
        sfreq: f64,
        tmin: f64,
    ) -> Result<Self> {
        if data.len() != labels.len() {
            return Err(DspError::InvalidInput(format!(
                "{} trials but {} labels",
                data.len(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= classes.len()) {
            return Err(DspError::InvalidInput(format!(
                "label {l} out of range for {} classes",
                classes.len()
            )));
        }
        if let Some(first) = data.first() {
            let shape = first.shape();
            if data.iter().any(|t| t.shape() != shape) {
                return Err(DspError::InvalidInput("trials differ in shape".into()));
            }
        }
        if !(sfreq > 0.0) {
            return Err(DspError::InvalidInput(format!("sfreq must be positive, got {sfreq}")));
        }
        Ok(Self {
            data,
            labels,
            classes,
            sfreq,
            tmin,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_channels(&self) -> usize {
        self.data.first().map_or(0, |t| t.nrows())
    }

    pub fn n_samples(&self) -> usize {
        self.data.first().map_or(0, |t| t.ncols())
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// True when every class has at least one trial.
    pub fn covers_all_classes(&self) -> bool {
        self.class_counts().iter().all(|&c| c > 0)
    }

    /// Trials at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Epochs {
        Epochs {
            data: indices.iter().map(|&i| self.data[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            classes: self.classes.clone(),
            sfreq: self.sfreq,
            tmin: self.tmin,
        }
    }

    /// Appends the trials of `other`, which must share classes and shape.
    pub fn concat(&mut self, other: &Epochs) -> Result<()> {
        if other.classes != self.classes {
            return Err(DspError::InvalidInput("class sets differ".into()));
        }
        if !self.is_empty() && !other.is_empty() && self.data[0].shape() != other.data[0].shape() {
            return Err(DspError::InvalidInput("trial shapes differ".into()));
        }
        self.data.extend(other.data.iter().cloned());
        self.labels.extend_from_slice(&other.labels);
        Ok(())
    }
}

/// Output of [`epoch`].
#[derive(Debug, Clone)]
pub struct Epoching {
    pub epochs: Epochs,
    /// Mapped events whose window fell outside the recording.
    pub dropped: usize,
}

/// Cuts one trial per event whose label appears in `classes`, covering
/// samples `[onset + round(tmin·sfreq), onset + round(tmin·sfreq) + round((tmax − tmin)·sfreq))`.
/// Events with other labels are ignored.
pub fn epoch(rec: &Recording, tmin: f64, tmax: f64, classes: &[String]) -> Result<Epoching> {
    if !(tmin < tmax) {
        return Err(DspError::InvalidInput(format!("tmin {tmin} must be below tmax {tmax}")));
    }
    let offset = (tmin * rec.sfreq).round() as i64;
    let len = ((tmax - tmin) * rec.sfreq).round() as usize;
    if len == 0 {
        return Err(DspError::InvalidInput("epoch window is shorter than one sample".into()));
    }
    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut dropped = 0;
    for ev in &rec.events {
        let Some(class) = classes.iter().position(|c| *c == ev.label) else {
            continue;
        };
        let start = ev.sample as i64 + offset;
        if start < 0 || start as usize + len > rec.n_samples() {
            dropped += 1;
            continue;
        }
        data.push(rec.data.columns(start as usize, len).into_owned());
        labels.push(class);
    }
    if data.is_empty() {
        return Err(DspError::EmptyEpochs);
    }
    let epochs = Epochs::new(data, labels, classes.to_vec(), rec.sfreq, tmin)?;
    Ok(Epoching { epochs, dropped })
}
