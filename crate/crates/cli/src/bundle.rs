//! Epoch-bundle files: a directory holding `meta.json` and `data.bin`
//! (little-endian f32, C order `[trial][channel][sample]`).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bcibench::dsp::{Epochs, Paradigm};
use bcibench::eval::{Dataset, SessionEpochs};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{io_err, CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const META_FILE: &str = "meta.json";
pub const DATA_FILE: &str = "data.bin";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub schema_version: u32,
    pub id: String,
    pub paradigm: Paradigm,
    pub sfreq: f64,
    pub tmin: f64,
    pub n_trials: usize,
    pub n_channels: usize,
    pub n_samples: usize,
    pub channels: Vec<String>,
    pub classes: Vec<String>,
    /// Class name of each trial.
    pub labels: Vec<String>,
    pub subjects: Vec<u32>,
    pub sessions: Vec<String>,
}

/// Trials of a dataset with per-trial subject and session ids.
#[derive(Debug, Clone)]
pub struct EpochBundle {
    pub id: String,
    pub paradigm: Paradigm,
    pub channels: Vec<String>,
    pub subjects: Vec<u32>,
    pub sessions: Vec<String>,
    pub epochs: Epochs,
}

impl EpochBundle {
    /// Concatenates the sessions of `ds` in order. Channels are named
    /// `EEG01`, `EEG02`, ….
    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        let first = ds
            .sessions
            .first()
            .ok_or_else(|| CliError::InvalidConfig(format!("dataset {} has no sessions", ds.id)))?;
        let (mut data, mut labels, mut subjects, mut sessions) = (vec![], vec![], vec![], vec![]);
        for s in &ds.sessions {
            if s.epochs.classes != first.epochs.classes || s.epochs.sfreq != first.epochs.sfreq {
                return Err(CliError::InvalidConfig(format!(
                    "session {} of subject {} differs in classes or sampling rate",
                    s.session, s.subject
                )));
            }
            data.extend(s.epochs.data.iter().cloned());
            labels.extend(&s.epochs.labels);
            subjects.extend(std::iter::repeat_n(s.subject, s.epochs.len()));
            sessions.extend(std::iter::repeat_n(s.session.clone(), s.epochs.len()));
        }
        let e = &first.epochs;
        let epochs = Epochs::new(data, labels, e.classes.clone(), e.sfreq, e.tmin)?;
        Ok(Self {
            id: ds.id.clone(),
            paradigm: ds.paradigm,
            channels: (1..=epochs.n_channels()).map(|i| format!("EEG{i:02}")).collect(),
            subjects,
            sessions,
            epochs,
        })
    }

    /// Splits trials by (subject, session), ordered by subject then session,
    /// keeping trial order within each group.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let mut groups: BTreeMap<(u32, &str), Vec<usize>> = BTreeMap::new();
        for (i, (s, sess)) in self.subjects.iter().zip(&self.sessions).enumerate() {
            groups.entry((*s, sess)).or_default().push(i);
        }
        let e = &self.epochs;
        let sessions = groups
            .into_iter()
            .map(|((subject, session), idx)| {
                let epochs = Epochs::new(
                    idx.iter().map(|&i| e.data[i].clone()).collect(),
                    idx.iter().map(|&i| e.labels[i]).collect(),
                    e.classes.clone(),
                    e.sfreq,
                    e.tmin,
                )?;
                Ok(SessionEpochs {
                    subject,
                    session: session.to_string(),
                    epochs,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Dataset {
            id: self.id.clone(),
            paradigm: self.paradigm,
            sessions,
        })
    }

    fn meta(&self) -> BundleMeta {
        let e = &self.epochs;
        BundleMeta {
            schema_version: SCHEMA_VERSION,
            id: self.id.clone(),
            paradigm: self.paradigm,
            sfreq: e.sfreq,
            tmin: e.tmin,
            n_trials: e.len(),
            n_channels: e.n_channels(),
            n_samples: e.n_samples(),
            channels: self.channels.clone(),
            classes: e.classes.clone(),
            labels: e.labels.iter().map(|&l| e.classes[l].clone()).collect(),
            subjects: self.subjects.clone(),
            sessions: self.sessions.clone(),
        }
    }
}

fn corrupt(msg: impl Into<String>) -> CliError {
    CliError::CorruptBundle(msg.into())
}

/// Writes `meta.json` and `data.bin` into `dir`, creating it if needed.
/// Samples are stored as f32.
pub fn save_bundle(dir: &Path, bundle: &EpochBundle) -> Result<()> {
    let meta = bundle.meta();
    validate(&meta)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut bytes = Vec::with_capacity(4 * meta.n_trials * meta.n_channels * meta.n_samples);
    for trial in &bundle.epochs.data {
        for ch in 0..meta.n_channels {
            for t in 0..meta.n_samples {
                bytes.extend_from_slice(&(trial[(ch, t)] as f32).to_le_bytes());
            }
        }
    }
    let data_path = dir.join(DATA_FILE);
    fs::write(&data_path, bytes).map_err(io_err(&data_path))?;
    let meta_path = dir.join(META_FILE);
    let mut json = serde_json::to_string_pretty(&meta)?;
    json.push('\n');
    fs::write(&meta_path, json).map_err(io_err(&meta_path))?;
    Ok(())
}

fn validate(meta: &BundleMeta) -> Result<()> {
    if meta.n_trials == 0 || meta.n_channels == 0 || meta.n_samples == 0 {
        return Err(corrupt("empty dimension"));
    }
    if !(meta.sfreq > 0.0 && meta.sfreq.is_finite()) || !meta.tmin.is_finite() {
        return Err(corrupt(format!("bad sfreq {} or tmin {}", meta.sfreq, meta.tmin)));
    }
    if meta.channels.len() != meta.n_channels {
        return Err(corrupt(format!("{} channel names for {} channels", meta.channels.len(), meta.n_channels)));
    }
    for (what, len) in [
        ("labels", meta.labels.len()),
        ("subjects", meta.subjects.len()),
        ("sessions", meta.sessions.len()),
    ] {
        if len != meta.n_trials {
            return Err(corrupt(format!("{len} {what} for {} trials", meta.n_trials)));
        }
    }
    if let Some(l) = meta.labels.iter().find(|l| !meta.classes.contains(l)) {
        return Err(corrupt(format!("label {l:?} is not among the classes")));
    }
    Ok(())
}

/// Reads and validates a bundle directory.
pub fn load_bundle(dir: &Path) -> Result<EpochBundle> {
    if !dir.is_dir() {
        return Err(CliError::NotFound(format!("bundle directory {}", dir.display())));
    }
    let meta_path = dir.join(META_FILE);
    let text = fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| corrupt(format!("meta.json: {e}")))?;
    let version = raw
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| corrupt("meta.json lacks schema_version"))?;
    if version != SCHEMA_VERSION as u64 {
        return Err(CliError::UnsupportedVersion(version.min(u32::MAX as u64) as u32));
    }
    let meta: BundleMeta = serde_json::from_value(raw).map_err(|e| corrupt(format!("meta.json: {e}")))?;
    validate(&meta)?;

    let data_path = dir.join(DATA_FILE);
    let bytes = fs::read(&data_path).map_err(io_err(&data_path))?;
    let expected = meta
        .n_trials
        .checked_mul(meta.n_channels)
        .and_then(|v| v.checked_mul(meta.n_samples))
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| corrupt("dimensions overflow"))?;
    if bytes.len() != expected {
        return Err(corrupt(format!("data.bin holds {} bytes, expected {expected}", bytes.len())));
    }

    let per_trial = meta.n_channels * meta.n_samples;
    let data = bytes
        .chunks_exact(4 * per_trial)
        .map(|chunk| {
            let v: Vec<f64> = chunk
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
                .collect();
            DMatrix::from_row_slice(meta.n_channels, meta.n_samples, &v)
        })
        .collect();
    let labels = meta
        .labels
        .iter()
        .map(|l| meta.classes.iter().position(|c| c == l).unwrap_or(0))
        .collect();
    let epochs = Epochs::new(data, labels, meta.classes, meta.sfreq, meta.tmin).map_err(|e| corrupt(e.to_string()))?;
    Ok(EpochBundle {
        id: meta.id,
        paradigm: meta.paradigm,
        channels: meta.channels,
        subjects: meta.subjects,
        sessions: meta.sessions,
        epochs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EpochBundle {
        let data = (0..6)
            .map(|k| DMatrix::from_fn(3, 5, |i, j| (k * 100 + i * 10 + j) as f64 * 0.25 - 7.0))
            .collect();
        EpochBundle {
            id: "toy".into(),
            paradigm: Paradigm::Mi,
            channels: vec!["C3".into(), "Cz".into(), "C4".into()],
            subjects: vec![2, 2, 1, 1, 2, 1],
            sessions: vec!["0".into(), "0".into(), "0".into(), "1".into(), "1".into(), "0".into()],
            epochs: Epochs::new(data, vec![0, 1, 0, 1, 1, 0], vec!["a".into(), "b".into()], 128.0, 0.5).unwrap(),
        }
    }

    #[test]
    fn c_order_layout() {
        let dir = tempfile::tempdir().unwrap();
        save_bundle(dir.path(), &sample()).unwrap();
        let bytes = fs::read(dir.path().join(DATA_FILE)).unwrap();
        assert_eq!(bytes.len(), 6 * 3 * 5 * 4);
        // trial 1, channel 2, sample 3 → offset (1·15 + 2·5 + 3)·4
        let at = (15 + 10 + 3) * 4;
        let v = f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        assert_eq!(v, (100 + 20 + 3) as f32 * 0.25 - 7.0);
    }

    #[test]
    fn groups_by_subject_then_session() {
        let ds = sample().to_dataset().unwrap();
        let keys: Vec<_> = ds.sessions.iter().map(|s| (s.subject, s.session.as_str(), s.epochs.len())).collect();
        assert_eq!(keys, vec![(1, "0", 2), (1, "1", 1), (2, "0", 2), (2, "1", 1)]);
        let back = EpochBundle::from_dataset(&ds).unwrap();
        assert_eq!(back.epochs.len(), 6);
        assert_eq!(back.channels[0], "EEG01");
    }

    #[test]
    fn version_checked_first() {
        let dir = tempfile::tempdir().unwrap();
        save_bundle(dir.path(), &sample()).unwrap();
        let p = dir.path().join(META_FILE);
        let text = fs::read_to_string(&p).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 2");
        fs::write(&p, text).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(CliError::UnsupportedVersion(2))));
    }

    #[test]
    fn unknown_label_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        save_bundle(dir.path(), &sample()).unwrap();
        let p = dir.path().join(META_FILE);
        let text = fs::read_to_string(&p).unwrap().replacen("\"b\"\n", "\"z\"\n", 1);
        fs::write(&p, text).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(CliError::CorruptBundle(_))));
    }
}
