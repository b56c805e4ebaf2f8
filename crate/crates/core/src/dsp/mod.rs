//! Signal conditioning: band-pass design and zero-phase filtering, epoching,
//! rational resampling and covariance estimation.

mod covariance;
mod epochs;
mod filter;
mod resample;

pub use covariance::{
    augmented_covariance, covariance, ledoit_wolf_shrinkage, sample_covariance, CovEstimator, EPS_VAR,
};
pub use epochs::{epoch, Epoching, Epochs, Event, Recording};
pub use filter::{
    bandpass_epochs, bandpass_recording, bandpass_trial, design_butter_bandpass, filtfilt, Biquad, BiquadCascade,
};
pub use resample::resample;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spd::SpdError;

#[derive(Debug, Clone, Error)]
pub enum DspError {
    #[error("invalid band [{low}, {high}] Hz at sampling rate {sfreq} Hz")]
    InvalidBand { low: f64, high: f64, sfreq: f64 },
    #[error("signal of {len} samples is too short, need more than {required}")]
    SignalTooShort { len: usize, required: usize },
    #[error("no usable epochs")]
    EmptyEpochs,
    #[error("unsupported resampling ratio {new_sfreq}/{sfreq}")]
    UnsupportedRatio { sfreq: f64, new_sfreq: f64 },
    #[error("invalid delay embedding: order {order}, lag {lag}, {samples} samples")]
    InvalidEmbedding {
        order: usize,
        lag: usize,
        samples: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Spd(#[from] SpdError),
}

pub type Result<T> = std::result::Result<T, DspError>;

/// BCI paradigm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Paradigm {
    #[serde(rename = "MI", alias = "mi")]
    Mi,
    #[serde(rename = "ERP", alias = "erp", alias = "P300")]
    Erp,
    #[serde(rename = "SSVEP", alias = "ssvep")]
    Ssvep,
}

impl Paradigm {
    /// Default preprocessing band in Hz.
    pub fn default_band(self) -> (f64, f64) {
        match self {
            Paradigm::Mi => (8.0, 32.0),
            Paradigm::Erp => (1.0, 24.0),
            Paradigm::Ssvep => (7.0, 45.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Paradigm::Mi => "MI",
            Paradigm::Erp => "ERP",
            Paradigm::Ssvep => "SSVEP",
        }
    }
}

impl std::fmt::Display for Paradigm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Paradigm {
    type Err = DspError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mi" => Ok(Paradigm::Mi),
            "erp" | "p300" => Ok(Paradigm::Erp),
            "ssvep" => Ok(Paradigm::Ssvep),
            other => Err(DspError::InvalidInput(format!("unknown paradigm {other:?}"))),
        }
    }
}
