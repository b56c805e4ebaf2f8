//! Metadata of the 36 public EEG datasets covered by the benchmark. Text
//! fields keep the printed form of the overview tables, including
//! annotations such as `2(3)` or per-subject session counts.

use bcibench::dsp::Paradigm;
use serde::Serialize;

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetDescriptor {
    pub id: &'static str,
    pub paradigm: Paradigm,
    pub n_subjects: u32,
    pub n_channels: u32,
    /// Classes used, with the total in parentheses when some are unused.
    pub n_classes: &'static str,
    /// Trials per class and session (MI, SSVEP) or NonTarget/Target epochs
    /// per session (ERP), mean ± std.
    pub trials_per_class_per_session: &'static str,
    pub trial_len_s: f64,
    pub sfreq_hz: f64,
    pub n_sessions: &'static str,
    pub n_runs: &'static str,
    /// Class list (MI, SSVEP) or stimulus keyboard (ERP).
    pub class_names: &'static str,
}

fn leading_number(s: &str) -> Option<f64> {
    let t = s.trim();
    let end = t
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_digit() || *c == '.'))
        .map_or(t.len(), |(i, _)| i);
    t[..end].parse().ok()
}

impl DatasetDescriptor {
    /// Classes used by the benchmark, e.g. 3 for `3(4)`.
    pub fn classes_used(&self) -> u32 {
        leading_number(self.n_classes).map_or(0, |v| v as u32)
    }

    /// All recorded classes, e.g. 4 for `3(4)`.
    pub fn classes_total(&self) -> u32 {
        match (self.n_classes.find('('), self.n_classes.find(')')) {
            (Some(a), Some(b)) if b > a => leading_number(&self.n_classes[a + 1..b]).map_or(0, |v| v as u32),
            _ => self.classes_used(),
        }
    }

    /// Session count when it is the same for every subject.
    pub fn sessions(&self) -> Option<u32> {
        self.n_sessions.trim().parse().ok()
    }

    /// Run count when it is the same for every subject.
    pub fn runs(&self) -> Option<u32> {
        self.n_runs.trim().parse().ok()
    }

    /// Mean trials per class and session, from the printed mean.
    pub fn trials_per_class(&self) -> Option<f64> {
        leading_number(self.trials_per_class_per_session)
    }

    /// Trials per subject across all classes and sessions, for MI and
    /// SSVEP rows with uniform sessions. For BNCI2014_001 this is
    /// 72 × 4 × 2 = 576 (12 per class and run over 6 runs).
    pub fn total_trials(&self) -> Option<f64> {
        if self.paradigm == Paradigm::Erp {
            return None;
        }
        Some(self.trials_per_class()? * self.classes_total() as f64 * self.sessions()? as f64)
    }
}

macro_rules! row {
    ($id:expr, $p:ident, $subj:expr, $ch:expr, $cls:expr, $trials:expr, $len:expr, $sf:expr, $sess:expr, $runs:expr, $names:expr) => {
        DatasetDescriptor {
            id: $id,
            paradigm: Paradigm::$p,
            n_subjects: $subj,
            n_channels: $ch,
            n_classes: $cls,
            trials_per_class_per_session: $trials,
            trial_len_s: $len,
            sfreq_hz: $sf,
            n_sessions: $sess,
            n_runs: $runs,
            class_names: $names,
        }
    };
}

#[rustfmt::skip]
static REGISTRY: &[DatasetDescriptor] = &[
    row!("AlexMI", Mi, 8, 16, "2(3)", "20 ± 0", 3.0, 512.0, "1", "1", "RH, F, (R)"),
    row!("BNCI2014_001", Mi, 9, 22, "3(4)", "72 ± 0", 4.0, 250.0, "2", "6", "RH, LH, F, (T)"),
    row!("BNCI2014_002", Mi, 14, 15, "2", "80 ± 0", 5.0, 512.0, "1", "8", "RH, F"),
    row!("BNCI2014_004", Mi, 9, 3, "2", "72.4 ± 9.5", 4.5, 250.0, "5", "1", "RH, LH"),
    row!("BNCI2015_001", Mi, 12, 13, "2", "100 ± 0", 5.0, 512.0, "3 subj. 8-11; 2 others", "1", "RH, F"),
    row!("BNCI2015_004", Mi, 9, 30, "2(5)", "39.4 ± 1.6", 7.0, 256.0, "2", "1", "RH, F"),
    row!("Cho2017", Mi, 52, 64, "2", "101.2 ± 4.7", 3.0, 512.0, "1", "1", "RH, LH"),
    row!("Lee2019_MI", Mi, 54, 62, "2", "50", 4.0, 1000.0, "2", "1", "RH, LH"),
    row!("GrosseWentrup2009", Mi, 10, 128, "2", "150 ± 0", 7.0, 500.0, "1", "1", "RH, LH"),
    row!("PhysionetMI", Mi, 109, 64, "4(5)", "22.6 ± 1.3", 3.0, 160.0, "1", "6***", "RH, LH, H, F, (R)"),
    row!("Schirrmeister2017", Mi, 14, 128, "3(4)", "240.8 ± 37.7", 4.0, 500.0, "1", "2", "RH, LH, F, (R)"),
    row!("Shin2017A", Mi, 29, 30, "2", "10 ± 0", 10.0, 200.0, "3", "1", "RH, LH"),
    row!("Weibo2014", Mi, 10, 60, "4(7)", "79 ± 3", 4.0, 200.0, "1", "1", "RH, LH, H, F, (LHRF), (RHLF), (R)"),
    row!("Zhou2016", Mi, 4, 14, "3", "50 ± 3.5", 5.0, 250.0, "3", "2", "RH, LF, F"),

    row!("BI2012", Erp, 25, 16, "2", "638.2 ± 1.9/127.6 ± 0.7", 1.0, 128.0, "1", "1", "36 aliens"),
    row!("BI2013a", Erp, 24, 16, "2", "400.3 ± 2.3/80.1 ± 0.5", 1.0, 512.0, "8 subj. 1-7; 1 subj. 8-24", "1", "36 aliens"),
    row!("BI2014a", Erp, 64, 16, "2", "794.5 ± 276.7/158.9 ± 55.3", 1.0, 512.0, "1", "1", "36 aliens"),
    row!("BI2014b", Erp, 37, 32, "2", "201.3 ± 61.5/40.3 ± 12.3", 1.0, 512.0, "1", "1", "36 aliens"),
    row!("BI2015a", Erp, 43, 32, "2", "461.8 ± 220.9/92.3 ± 44.1", 1.0, 512.0, "3", "1", "36 aliens"),
    row!("BI2015b", Erp, 44, 32, "2", "2158.7 ± 6.3/479.9 ± 0.3", 1.0, 512.0, "1", "4", "36 aliens"),
    row!("BNCI2014_008", Erp, 8, 8, "2", "3500 ± 0/700 ± 0", 1.0, 256.0, "1", "1", "36 char."),
    row!("BNCI2014_009", Erp, 10, 16, "2", "480 ± 0/96 ± 0", 0.8, 256.0, "3", "1", "36 char."),
    row!("BNCI2015_003", Erp, 10, 8, "2", "2250 ± 1500/270 ± 60", 0.8, 256.0, "1", "2", "36 char."),
    row!("EPFLP300", Erp, 8, 32, "2", "685.2 ± 16.9/137.2 ± 3.5", 1.0, 2048.0, "4", "6", "6 images"),
    row!("Huebner2017", Erp, 13, 31, "2", "3275.3 ± 2.1/1007.8 ± 0.6", 0.9, 1000.0, "2 subj. 6; 3 others", "9", "42 char."),
    row!("Huebner2018", Erp, 12, 31, "2", "3638.4 ± 7.7/1119.6 ± 2.5", 0.9, 1000.0, "3", "10", "42 char."),
    row!("Lee2019_ERP", Erp, 54, 62, "2", "3450/690", 1.0, 1000.0, "2", "1", "36 char."),
    row!("Sosulski2019", Erp, 13, 31, "2", "75 ± 0/15 ± 0", 1.2, 1000.0, "4 subj. 1; 3 others", "20", "2 tones"),
    row!("Cattan2019_VR", Erp, 21, 16, "2", "600 ± 0/120 ± 0", 1.0, 512.0, "2", "60", "36 crosses"),

    row!("Lee2019_SSVEP", Ssvep, 54, 62, "4", "25", 1.0, 1000.0, "2", "1", "4 (5.45-12)"),
    row!("MAMEM1", Ssvep, 10, 256, "5", "16.8 ± 3.5 classes 8.57,10.0; 21.0 ± 4.4 classes 6.66,7.5,12.0", 3.0, 250.0, "1", "3 subj. 1,3,8; 4 subj. 4,6; 5 others", "5 (6.66-12.00)"),
    row!("MAMEM2", Ssvep, 10, 256, "5", "20 class 12.0; 30 class 8.57; 25 others", 3.0, 250.0, "1", "5", "5 (6.66-12.00)"),
    row!("MAMEM3", Ssvep, 10, 14, "4", "20.0 ± 0.0 class 6.66; 25.0 ± 0.0 class 8.57; 30.0 ± 0.0 class 10.0; 25.0 ± 0.0 class 12.0", 3.0, 128.0, "1", "10", "4 (6.66-12.00)"),
    row!("Nakanishi2015", Ssvep, 9, 8, "12", "15.0 ± 0.0", 4.15, 256.0, "1", "1", "12 (9.25-14.75)"),
    row!("Kalunga2016", Ssvep, 12, 8, "4", "20.0 ± 7.7", 2.0, 256.0, "1", "5 subj. 12; 4 subj. 10; 3 subj. 7; 2 others", "4 (13,17,21,rest)"),
    row!("Wang2016", Ssvep, 34, 62, "40", "6.0 ± 0.0", 5.0, 250.0, "1", "1", "40 (8-15.8)"),
];

/// Names used in result tables for some registry ids.
const ALIASES: &[(&str, &str)] = &[
    ("AlexandreMotorImagery", "AlexMI"),
    ("PhysionetMotorImagery", "PhysionetMI"),
    ("BrainInvaders2012", "BI2012"),
    ("BrainInvaders2013a", "BI2013a"),
    ("BrainInvaders2014a", "BI2014a"),
    ("BrainInvaders2014b", "BI2014b"),
    ("BrainInvaders2015a", "BI2015a"),
    ("BrainInvaders2015b", "BI2015b"),
    ("Lee2019-MI", "Lee2019_MI"),
];

fn normalize(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

pub fn registry() -> &'static [DatasetDescriptor] {
    REGISTRY
}

/// Finds a dataset by id, ignoring case and punctuation, so
/// `"BNCI2014-001"` and `"bnci2014_001"` both resolve.
pub fn registry_lookup(id: &str) -> Result<&'static DatasetDescriptor> {
    let key = normalize(id);
    let key = ALIASES
        .iter()
        .find(|(alias, _)| normalize(alias) == key)
        .map_or(key, |(_, target)| normalize(target));
    REGISTRY
        .iter()
        .find(|d| normalize(d.id) == key)
        .ok_or_else(|| CliError::NotFound(format!("dataset {id:?} is not in the registry")))
}
