//! Classification pipelines addressable by name, with a uniform
//! `fit` / `predict_proba` surface.

pub mod linear;
pub mod riemann;
pub mod spatial;
pub mod ssvep;

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{augmented_covariance, covariance, BiquadCascade, CovEstimator, DspError, Epochs, Paradigm};
use crate::spd::{SpdError, SpdMatrix};
use linear::{HeadKind, LinearHead, Shrinkage};
use riemann::{FgMdm, Mdm, TsModel};
use spatial::{erp_cov, erp_prototype, evoked, CspVariant, Fbcsp, SpatialFilterBank, XdawnState};
use ssvep::{class_frequencies, ssvep_extended_cov, ssvep_filter_bank, Cca, Trca};

#[derive(Debug, Clone, Error)]
pub enum PipelineError {
    #[error("unknown pipeline {0:?}")]
    UnknownPipeline(String),
    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),
    #[error("invalid hyperparameter: {0}")]
    InvalidHyper(String),
    #[error("singular covariance")]
    SingularCovariance,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error(transparent)]
    Spd(#[from] SpdError),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

/// Hyperparameter assignment, name → value.
pub type Hyper = IndexMap<String, f64>;
/// Hyperparameter grid, name → candidates in declaration order.
pub type Grid = IndexMap<String, Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PipelineKind {
    LogVarLda,
    LogVarSvm,
    CspLda,
    CspSvm,
    TrcspLda,
    DlcspShLda,
    FbcspSvm,
    FgMdm,
    Mdm,
    TsEl,
    TsLr,
    TsSvm,
    AcmTsSvm,
    XdawnLda,
    XdawnCovMdm,
    XdawnCovTsSvm,
    XdawnCovTsLr,
    ErpCovMdm,
    ErpCovSvdMdm,
    Trca,
    Cca,
    SsvepMdm,
    SsvepTsLr,
    SsvepTsSvm,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub paradigm: Paradigm,
    pub kind: PipelineKind,
    /// Accepted hyperparameters and their defaults.
    pub params: &'static [(&'static str, f64)],
}

const SVM_C: &[f64] = &[0.5, 1.0, 1.5];

impl CatalogEntry {
    /// Grid-search space for a dataset with `n_channels` electrodes.
    pub fn default_grid(&self, n_channels: usize) -> Grid {
        let range = |hi: usize| (1..=hi).map(|v| v as f64).collect::<Vec<_>>();
        let mut g = Grid::new();
        match self.kind {
            PipelineKind::CspSvm => {
                g.insert("csp_nfilter".into(), range(8).into_iter().skip(1).collect());
                g.insert("svc_C".into(), SVM_C.to_vec());
            }
            PipelineKind::TsEl => {
                g.insert("l1_ratio".into(), vec![0.20, 0.30, 0.45, 0.65, 0.75]);
            }
            PipelineKind::LogVarSvm => {
                g.insert(
                    "svc_C".into(),
                    vec![0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0],
                );
            }
            PipelineKind::TsSvm => {
                g.insert("svc_C".into(), SVM_C.to_vec());
            }
            PipelineKind::AcmTsSvm => {
                let hi = if n_channels > 100 {
                    3
                } else if n_channels >= 60 {
                    5
                } else {
                    10
                };
                g.insert("acm_order".into(), range(hi));
                g.insert("acm_lag".into(), range(hi));
                g.insert("svc_C".into(), SVM_C.to_vec());
            }
            _ => {}
        }
        g
    }

    fn accepts(&self, key: &str) -> bool {
        self.params.iter().any(|(k, _)| *k == key)
    }
}

macro_rules! entry {
    ($name:expr, $paradigm:ident, $kind:ident, [$(($k:expr, $v:expr)),* $(,)?]) => {
        CatalogEntry {
            name: $name,
            paradigm: Paradigm::$paradigm,
            kind: PipelineKind::$kind,
            params: &[$(($k, $v)),*],
        }
    };
}

static CATALOG: &[CatalogEntry] = &[
    entry!("LogVar+LDA", Mi, LogVarLda, []),
    entry!("LogVar+SVM", Mi, LogVarSvm, [("svc_C", 1.0)]),
    entry!("CSP+LDA", Mi, CspLda, [("csp_nfilter", 4.0)]),
    entry!("CSP+SVM", Mi, CspSvm, [("csp_nfilter", 4.0), ("svc_C", 1.0)]),
    entry!("TRCSP+LDA", Mi, TrcspLda, [("csp_nfilter", 4.0), ("trcsp_alpha", 0.1)]),
    entry!("DLCSPauto+shLDA", Mi, DlcspShLda, [("csp_nfilter", 4.0)]),
    entry!("FBCSP+SVM", Mi, FbcspSvm, [("fbcsp_nfilter", 4.0), ("fbcsp_k", 10.0), ("svc_C", 1.0)]),
    entry!("FgMDM", Mi, FgMdm, []),
    entry!("MDM", Mi, Mdm, []),
    entry!("TS+EL", Mi, TsEl, [("l1_ratio", 0.45), ("lr_C", 1.0)]),
    entry!("TS+LR", Mi, TsLr, [("lr_C", 1.0)]),
    entry!("TS+SVM", Mi, TsSvm, [("svc_C", 1.0)]),
    entry!("ACM+TS+SVM", Mi, AcmTsSvm, [("acm_order", 3.0), ("acm_lag", 1.0), ("svc_C", 1.0)]),
    entry!("XDAWN+LDA", Erp, XdawnLda, [("xdawn_nfilter", 2.0)]),
    entry!("XDAWNCov+MDM", Erp, XdawnCovMdm, [("xdawn_nfilter", 4.0)]),
    entry!("XDAWNCov+TS+SVM", Erp, XdawnCovTsSvm, [("xdawn_nfilter", 4.0), ("svc_C", 1.0)]),
    entry!("XDAWNCov+TS+LR", Erp, XdawnCovTsLr, [("xdawn_nfilter", 4.0), ("lr_C", 1.0)]),
    entry!("ERPCov+MDM", Erp, ErpCovMdm, []),
    entry!("ERPCov(svd_n=4)+MDM", Erp, ErpCovSvdMdm, [("svd_n", 4.0)]),
    entry!("TRCA", Ssvep, Trca, []),
    entry!("CCA", Ssvep, Cca, [("cca_harmonics", 2.0)]),
    entry!("SSVEP MDM", Ssvep, SsvepMdm, [("band_halfwidth", 0.5)]),
    entry!("SSVEP TS+LR", Ssvep, SsvepTsLr, [("band_halfwidth", 0.5), ("lr_C", 1.0)]),
    entry!("SSVEP TS+SVM", Ssvep, SsvepTsSvm, [("band_halfwidth", 0.5), ("svc_C", 1.0)]),
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Finds a pipeline by name, ignoring whitespace and case, so both
/// `"TS + LR"` and `"TS+LR"` resolve.
pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    let key = normalize(name);
    let key = match key.as_str() {
        "erpcov(svdn4)+mdm" | "erpcov(svd_n4)+mdm" => normalize("ERPCov(svd_n=4)+MDM"),
        _ => key,
    };
    CATALOG
        .iter()
        .find(|e| normalize(e.name) == key)
        .ok_or_else(|| PipelineError::UnknownPipeline(name.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub name: String,
    pub paradigm: Paradigm,
    /// `None` uses the catalog grid; an empty grid disables the search.
    #[serde(default)]
    pub grid: Option<Grid>,
}

impl PipelineSpec {
    pub fn new(name: &str) -> Result<Self> {
        let e = lookup(name)?;
        Ok(Self {
            name: e.name.to_string(),
            paradigm: e.paradigm,
            grid: None,
        })
    }

    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        let e = self.entry()?;
        if let Some(k) = grid.keys().find(|k| !e.accepts(k)) {
            return Err(PipelineError::InvalidHyper(format!("{k:?} is not a parameter of {}", e.name)));
        }
        self.grid = Some(grid);
        Ok(self)
    }

    pub fn entry(&self) -> Result<&'static CatalogEntry> {
        lookup(&self.name)
    }

    /// Grid to search for a dataset with `n_channels` electrodes.
    pub fn resolved_grid(&self, n_channels: usize) -> Result<Grid> {
        match &self.grid {
            Some(g) => Ok(g.clone()),
            None => Ok(self.entry()?.default_grid(n_channels)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureExtractor {
    LogVar,
    Csp(SpatialFilterBank),
    Fbcsp(Fbcsp),
    Xdawn(XdawnState),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CovFeature {
    Shrunk,
    Augmented { order: usize, lag: usize },
    XdawnCov(XdawnState),
    ErpCov(DMatrix<f64>),
    Ssvep(Vec<BiquadCascade>),
}

impl CovFeature {
    pub fn transform(&self, trial: &DMatrix<f64>) -> Result<SpdMatrix> {
        match self {
            CovFeature::Shrunk => Ok(covariance(trial, CovEstimator::Shrunk)?),
            CovFeature::Augmented { order, lag } => Ok(augmented_covariance(trial, *order, *lag)?),
            CovFeature::XdawnCov(x) => x.super_trial_cov(trial),
            CovFeature::ErpCov(p) => erp_cov(trial, p),
            CovFeature::Ssvep(bank) => ssvep_extended_cov(trial, bank),
        }
    }

    fn transform_all(&self, trials: &[DMatrix<f64>]) -> Result<Vec<SpdMatrix>> {
        trials.iter().map(|t| self.transform(t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RiemannHead {
    Mdm(Mdm),
    FgMdm(FgMdm),
    Ts(TsModel),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelState {
    Features { extractor: FeatureExtractor, head: LinearHead },
    Riemann { cov: CovFeature, head: RiemannHead },
    Cca(Cca),
    Trca(Trca),
}

/// A trained pipeline. Immutable after `fit`.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub spec: PipelineSpec,
    pub classes: Vec<String>,
    pub hyper: Hyper,
    pub n_channels: usize,
    pub n_samples: usize,
    pub sfreq: f64,
    pub state: ModelState,
}

struct Params<'a> {
    values: Hyper,
    explicit: &'a Hyper,
}

impl Params<'_> {
    fn real(&self, key: &str) -> f64 {
        self.values[key]
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v = self.values[key];
        if v >= 1.0 && v.fract() == 0.0 && v.is_finite() {
            Ok(v as usize)
        } else {
            Err(PipelineError::InvalidHyper(format!("{key} must be a positive integer, got {v}")))
        }
    }

    /// Integer parameter clamped to `max` unless it was given explicitly.
    fn count_clamped(&self, key: &str, max: usize) -> Result<usize> {
        let v = self.count(key)?;
        Ok(if self.explicit.contains_key(key) { v } else { v.min(max) })
    }
}

/// Index of the class treated as positive in binary problems: the one
/// named "Target" (any case), else the last.
pub fn target_class(classes: &[String]) -> usize {
    classes
        .iter()
        .position(|c| c.eq_ignore_ascii_case("target"))
        .unwrap_or(classes.len() - 1)
}

fn vectorize_xdawn(x: &XdawnState, trials: &[DMatrix<f64>]) -> DMatrix<f64> {
    let rows: Vec<_> = trials.iter().map(|t| x.vectorize(t)).collect();
    let d = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j])
}

fn extract(extractor: &FeatureExtractor, trials: &[DMatrix<f64>], sfreq: f64) -> Result<DMatrix<f64>> {
    match extractor {
        FeatureExtractor::LogVar => {
            let e = Epochs {
                data: trials.to_vec(),
                labels: vec![0; trials.len()],
                classes: vec![String::new()],
                sfreq,
                tmin: 0.0,
            };
            spatial::logvar_features(&e)
        }
        FeatureExtractor::Csp(bank) => Ok(spatial::filtered_logvar(bank, trials)),
        FeatureExtractor::Fbcsp(f) => f.transform(trials),
        FeatureExtractor::Xdawn(x) => Ok(vectorize_xdawn(x, trials)),
    }
}

fn check_labels(train: &Epochs) -> Result<()> {
    if train.n_classes() < 2 {
        return Err(PipelineError::DegenerateLabels("need at least 2 classes".into()));
    }
    let counts = train.class_counts();
    if let Some(k) = counts.iter().position(|&c| c == 0) {
        return Err(PipelineError::DegenerateLabels(format!(
            "class {:?} has no training trials",
            train.classes[k]
        )));
    }
    Ok(())
}

/// Filter-bank bands covering the MI band in 4 Hz steps.
pub const FBCSP_BANDS: &[(f64, f64)] = &[
    (8.0, 12.0),
    (12.0, 16.0),
    (16.0, 20.0),
    (20.0, 24.0),
    (24.0, 28.0),
    (28.0, 32.0),
];

/// Trains `spec` on `train`. `hyper` overrides catalog defaults; `seed`
/// drives every stochastic step.
pub fn fit(spec: &PipelineSpec, train: &Epochs, hyper: &Hyper, seed: u64) -> Result<FittedModel> {
    let entry = spec.entry()?;
    if let Some(k) = hyper.keys().find(|k| !entry.accepts(k)) {
        return Err(PipelineError::InvalidHyper(format!("{k:?} is not a parameter of {}", entry.name)));
    }
    check_labels(train)?;
    let mut values: Hyper = entry.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in hyper {
        values.insert(k.clone(), *v);
    }
    let p = Params {
        values,
        explicit: hyper,
    };
    let n = train.n_channels();
    let k = train.n_classes();
    let y = &train.labels;
    let svm = || HeadKind::Svm { c: p.real("svc_C") };
    let lr = |l1: f64| HeadKind::Logistic {
        l1_ratio: l1,
        c: p.real("lr_C"),
    };
    let lda = HeadKind::Lda {
        shrinkage: Shrinkage::None,
    };
    let shlda = HeadKind::Lda {
        shrinkage: Shrinkage::Auto,
    };

    let features = |extractor: FeatureExtractor, head: HeadKind| -> Result<ModelState> {
        let x = extract(&extractor, &train.data, train.sfreq)?;
        let head = LinearHead::fit(head, &x, y, k, seed)?;
        Ok(ModelState::Features { extractor, head })
    };
    let csp = |variant: CspVariant| -> Result<FeatureExtractor> {
        let nf = p.count_clamped("csp_nfilter", n)?;
        Ok(FeatureExtractor::Csp(spatial::csp_train(train, nf, variant)?))
    };
    let riemann = |cov: CovFeature, head: &dyn Fn(&[SpdMatrix]) -> Result<RiemannHead>| -> Result<ModelState> {
        let covs = cov.transform_all(&train.data)?;
        let head = head(&covs)?;
        Ok(ModelState::Riemann { cov, head })
    };
    let mdm = |c: &[SpdMatrix]| Ok(RiemannHead::Mdm(Mdm::fit(c, y, k)?));
    let ts = |kind: HeadKind| move |c: &[SpdMatrix]| Ok(RiemannHead::Ts(TsModel::fit(c, y, k, kind, seed)?));
    let xdawn = |default_max: usize| -> Result<XdawnState> {
        XdawnState::fit(train, p.count_clamped("xdawn_nfilter", default_max)?)
    };
    let ssvep_bank = || -> Result<CovFeature> {
        let freqs = class_frequencies(&train.classes)?;
        Ok(CovFeature::Ssvep(ssvep_filter_bank(&freqs, p.real("band_halfwidth"), train.sfreq)?))
    };

    let state = match entry.kind {
        PipelineKind::LogVarLda => features(FeatureExtractor::LogVar, lda)?,
        PipelineKind::LogVarSvm => features(FeatureExtractor::LogVar, svm())?,
        PipelineKind::CspLda => features(csp(CspVariant::Plain)?, lda)?,
        PipelineKind::CspSvm => features(csp(CspVariant::Plain)?, svm())?,
        PipelineKind::TrcspLda => features(csp(CspVariant::Tikhonov(p.real("trcsp_alpha")))?, lda)?,
        PipelineKind::DlcspShLda => features(csp(CspVariant::Shrunk)?, shlda)?,
        PipelineKind::FbcspSvm => {
            let nf = p.count_clamped("fbcsp_nfilter", n)?;
            let per_band = if k == 2 { nf } else { nf * k };
            let total = per_band * FBCSP_BANDS.len();
            let kf = p.count_clamped("fbcsp_k", total)?;
            let f = Fbcsp::fit(train, FBCSP_BANDS, nf, Some(kf))?;
            features(FeatureExtractor::Fbcsp(f), svm())?
        }
        PipelineKind::Mdm => riemann(CovFeature::Shrunk, &mdm)?,
        PipelineKind::FgMdm => riemann(CovFeature::Shrunk, &|c| Ok(RiemannHead::FgMdm(FgMdm::fit(c, y, k)?)))?,
        PipelineKind::TsEl => riemann(CovFeature::Shrunk, &ts(lr(p.real("l1_ratio"))))?,
        PipelineKind::TsLr => riemann(CovFeature::Shrunk, &ts(lr(0.0)))?,
        PipelineKind::TsSvm => riemann(CovFeature::Shrunk, &ts(svm()))?,
        PipelineKind::AcmTsSvm => {
            let cov = CovFeature::Augmented {
                order: p.count("acm_order")?,
                lag: p.count("acm_lag")?,
            };
            riemann(cov, &ts(svm()))?
        }
        PipelineKind::XdawnLda => features(FeatureExtractor::Xdawn(xdawn(n)?), shlda)?,
        PipelineKind::XdawnCovMdm => riemann(CovFeature::XdawnCov(xdawn(n)?), &mdm)?,
        PipelineKind::XdawnCovTsSvm => riemann(CovFeature::XdawnCov(xdawn(n)?), &ts(svm()))?,
        PipelineKind::XdawnCovTsLr => riemann(CovFeature::XdawnCov(xdawn(n)?), &ts(lr(0.0)))?,
        PipelineKind::ErpCovMdm | PipelineKind::ErpCovSvdMdm => {
            let proto = evoked(train, target_class(&train.classes))?;
            let svd_n = match entry.kind {
                PipelineKind::ErpCovSvdMdm => Some(p.count("svd_n")?),
                _ => None,
            };
            riemann(CovFeature::ErpCov(erp_prototype(&proto, svd_n)?), &mdm)?
        }
        PipelineKind::SsvepMdm => riemann(ssvep_bank()?, &mdm)?,
        PipelineKind::SsvepTsLr => riemann(ssvep_bank()?, &ts(lr(0.0)))?,
        PipelineKind::SsvepTsSvm => riemann(ssvep_bank()?, &ts(svm()))?,
        PipelineKind::Cca => {
            let freqs = class_frequencies(&train.classes)?;
            ModelState::Cca(Cca::new(&freqs, p.count("cca_harmonics")?, train.sfreq, train.n_samples())?)
        }
        PipelineKind::Trca => ModelState::Trca(Trca::fit(train)?),
    };
    Ok(FittedModel {
        spec: spec.clone(),
        classes: train.classes.clone(),
        hyper: p.values,
        n_channels: n,
        n_samples: train.n_samples(),
        sfreq: train.sfreq,
        state,
    })
}

impl FittedModel {
    /// Class probabilities, trials × classes, rows summing to 1.
    pub fn predict_proba(&self, test: &Epochs) -> Result<DMatrix<f64>> {
        if test.is_empty() {
            return Ok(DMatrix::zeros(0, self.classes.len()));
        }
        if test.n_channels() != self.n_channels {
            return Err(PipelineError::DimensionMismatch {
                expected: self.n_channels,
                found: test.n_channels(),
            });
        }
        if test.n_samples() != self.n_samples {
            return Err(PipelineError::DimensionMismatch {
                expected: self.n_samples,
                found: test.n_samples(),
            });
        }
        if test.sfreq != self.sfreq {
            return Err(PipelineError::InvalidInput(format!(
                "sampling rate {} differs from training rate {}",
                test.sfreq, self.sfreq
            )));
        }
        let p = match &self.state {
            ModelState::Features { extractor, head } => {
                head.predict_proba(&extract(extractor, &test.data, test.sfreq)?)?
            }
            ModelState::Riemann { cov, head } => {
                let covs = cov.transform_all(&test.data)?;
                match head {
                    RiemannHead::Mdm(m) => m.predict_proba(&covs)?,
                    RiemannHead::FgMdm(m) => m.predict_proba(&covs)?,
                    RiemannHead::Ts(m) => m.predict_proba(&covs)?,
                }
            }
            ModelState::Cca(c) => c.predict_proba(&test.data)?,
            ModelState::Trca(t) => t.predict_proba(&test.data),
        };
        Ok(p)
    }

    /// Most probable class per trial (first index on ties).
    pub fn predict(&self, test: &Epochs) -> Result<Vec<usize>> {
        let p = self.predict_proba(test)?;
        Ok(p.row_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
                    .0
            })
            .collect())
    }
}

/// Free-function form of [`FittedModel::predict_proba`].
pub fn predict_proba(m: &FittedModel, test: &Epochs) -> Result<DMatrix<f64>> {
    m.predict_proba(test)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_resolve() {
        for e in catalog() {
            assert_eq!(lookup(e.name).unwrap().name, e.name);
        }
        assert_eq!(lookup("TS + LR").unwrap().name, "TS+LR");
        assert_eq!(lookup("SSVEP TS + SVM").unwrap().name, "SSVEP TS+SVM");
        assert_eq!(lookup("ERPCov(svdn4)+MDM").unwrap().name, "ERPCov(svd_n=4)+MDM");
        assert!(matches!(lookup("EEGNet"), Err(PipelineError::UnknownPipeline(_))));
    }

    #[test]
    fn grids_follow_table() {
        let e = lookup("ACM+TS+SVM").unwrap();
        assert_eq!(e.default_grid(22)["acm_order"].len(), 10);
        assert_eq!(e.default_grid(60)["acm_lag"].len(), 5);
        assert_eq!(e.default_grid(128)["acm_lag"].len(), 3);
        assert_eq!(lookup("CSP+SVM").unwrap().default_grid(22)["csp_nfilter"], vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert!(lookup("MDM").unwrap().default_grid(8).is_empty());
        for e in catalog() {
            for k in e.default_grid(8).keys() {
                assert!(e.accepts(k), "{} grid key {k}", e.name);
            }
        }
    }

    #[test]
    fn spec_rejects_foreign_grid_keys() {
        let mut g = Grid::new();
        g.insert("svc_C".into(), vec![1.0]);
        assert!(PipelineSpec::new("MDM").unwrap().with_grid(g).is_err());
    }
}
