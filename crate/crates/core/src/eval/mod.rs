//! Evaluation strategies, splitting, nested grid search, metrics, and
//! resource metering.

pub mod meter;
pub mod metrics;
pub mod rank;
pub mod search;
pub mod split;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{bandpass_epochs, Epochs, Paradigm};
use crate::pipelines::{fit, target_class, FittedModel, PipelineError, PipelineSpec};

pub use meter::{Measurement, MeterConfig, Timing};
pub use metrics::{accuracy, roc_auc, Metric};
pub use rank::{rank_pipelines, RankTable};
pub use search::{candidates, nested_grid_search, CandidateScore, SearchOutcome};
pub use split::{ensure_disjoint, stratified_kfold, Fold};

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("class {class} has {count} trials, fewer than {k} folds")]
    StratificationImpossible { class: usize, count: usize, k: usize },
    #[error("insufficient units: {0}")]
    InsufficientUnits(String),
    #[error("every grid candidate failed")]
    GridExhausted(Vec<(String, String)>),
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("train/test leakage: {0}")]
    Leakage(String),
    #[error("incomplete grid: {0}")]
    IncompleteGrid(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

pub type Result<T> = std::result::Result<T, EvalError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    WithinSession,
    CrossSession,
    CrossSubject,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluationPlan {
    pub strategy: Strategy,
    pub outer_folds: usize,
    pub inner_folds: usize,
    pub seed: u64,
    /// `None` picks ROC-AUC for two classes and accuracy otherwise.
    pub metric: Option<Metric>,
}

impl Default for EvaluationPlan {
    fn default() -> Self {
        Self {
            strategy: Strategy::WithinSession,
            outer_folds: 5,
            inner_folds: 3,
            seed: 42,
            metric: None,
        }
    }
}

/// Trials of one recording session.
#[derive(Debug, Clone)]
pub struct SessionEpochs {
    pub subject: u32,
    pub session: String,
    pub epochs: Epochs,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub id: String,
    pub paradigm: Paradigm,
    pub sessions: Vec<SessionEpochs>,
}

impl Dataset {
    pub fn subjects(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.sessions.iter().map(|s| s.subject).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn classes(&self) -> &[String] {
        self.sessions.first().map_or(&[], |s| &s.epochs.classes)
    }

    /// Same dataset with every trial band-passed (4th-order Butterworth,
    /// zero phase).
    pub fn bandpass(&self, low_hz: f64, high_hz: f64) -> std::result::Result<Dataset, crate::dsp::DspError> {
        let sessions = self
            .sessions
            .iter()
            .map(|s| {
                Ok(SessionEpochs {
                    subject: s.subject,
                    session: s.session.clone(),
                    epochs: bandpass_epochs(&s.epochs, low_hz, high_hz, 4)?,
                })
            })
            .collect::<std::result::Result<_, crate::dsp::DspError>>()?;
        Ok(Dataset {
            id: self.id.clone(),
            paradigm: self.paradigm,
            sessions,
        })
    }
}

/// One scored (dataset, subject, session, pipeline, fold).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ResultRow {
    pub dataset: String,
    pub subject: u32,
    pub session: String,
    pub pipeline: String,
    pub fold: usize,
    pub metric: String,
    pub score: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub fit_time_s: f64,
    pub predict_time_s: f64,
    pub energy_wh: f64,
    pub co2_g: f64,
}

impl ResultRow {
    fn sort_key(&self) -> (&str, u32, &str, &str, usize) {
        (&self.dataset, self.subject, &self.session, &self.pipeline, self.fold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    Skipped,
    Failed,
}

/// A unit that produced no row, and why.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Issue {
    pub dataset: String,
    pub subject: Option<u32>,
    pub session: Option<String>,
    pub pipeline: Option<String>,
    pub fold: Option<usize>,
    pub kind: IssueKind,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Evaluation {
    /// Canonically sorted by (dataset, subject, session, pipeline, fold).
    pub rows: Vec<ResultRow>,
    pub issues: Vec<Issue>,
}

/// Stable 64-bit seed from a master seed and labels (FNV-1a, then a
/// splitmix64 finalizer). Independent of platform and scheduling.
pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    master.to_le_bytes().into_iter().for_each(&mut eat);
    for p in parts {
        p.bytes().for_each(&mut eat);
        eat(0xff);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Scores a fitted model on `test`. ROC-AUC ranks trials by the
/// probability of the target class.
pub fn score_model(model: &FittedModel, test: &Epochs, metric: Metric) -> Result<f64> {
    let proba = model.predict_proba(test)?;
    match metric {
        Metric::RocAuc => {
            if model.classes.len() != 2 {
                return Err(EvalError::UndefinedMetric(format!(
                    "ROC-AUC with {} classes",
                    model.classes.len()
                )));
            }
            let pos = target_class(&model.classes);
            let scores: Vec<f64> = proba.column(pos).iter().copied().collect();
            let labels: Vec<bool> = test.labels.iter().map(|&l| l == pos).collect();
            roc_auc(&scores, &labels)
        }
        Metric::Accuracy => {
            let pred: Vec<usize> = proba
                .row_iter()
                .map(|r| r.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b }).0)
                .collect();
            accuracy(&pred, &test.labels)
        }
    }
}

struct Unit<'a> {
    subject: u32,
    session: String,
    pipeline: &'a PipelineSpec,
    fold: usize,
    train: Epochs,
    test: Epochs,
}

struct Ctx<'a> {
    dataset: &'a Dataset,
    plan: &'a EvaluationPlan,
    metric: Metric,
    meter: &'a MeterConfig,
}

impl Ctx<'_> {
    fn issue(&self, kind: IssueKind, subject: Option<u32>, session: Option<&str>, message: String) -> Issue {
        Issue {
            dataset: self.dataset.id.clone(),
            subject,
            session: session.map(String::from),
            pipeline: None,
            fold: None,
            kind,
            message,
        }
    }

    fn run(&self, u: &Unit) -> std::result::Result<ResultRow, Issue> {
        let seed = derive_seed(
            self.plan.seed,
            &[&self.dataset.id, &u.subject.to_string(), &u.session, &u.pipeline.name, &u.fold.to_string()],
        );
        let fitted = || -> Result<FittedModel> {
            let grid = u.pipeline.resolved_grid(u.train.n_channels())?;
            let best = nested_grid_search(u.pipeline, &u.train, &grid, self.plan.inner_folds, self.metric, seed)?.best;
            Ok(fit(u.pipeline, &u.train, &best, seed)?)
        };
        let (model, fit_m) = self.meter.meter(fitted);
        let result = model.and_then(|m| {
            let (score, pred_m) = self.meter.meter(|| score_model(&m, &u.test, self.metric));
            score.map(|s| (s, pred_m))
        });
        match result {
            Ok((score, pred_m)) => {
                let total = fit_m + pred_m;
                Ok(ResultRow {
                    dataset: self.dataset.id.clone(),
                    subject: u.subject,
                    session: u.session.clone(),
                    pipeline: u.pipeline.name.clone(),
                    fold: u.fold,
                    metric: self.metric.to_string(),
                    score,
                    n_train: u.train.len(),
                    n_test: u.test.len(),
                    fit_time_s: fit_m.wall_s,
                    predict_time_s: pred_m.wall_s,
                    energy_wh: total.energy_wh,
                    co2_g: total.co2_g,
                })
            }
            Err(e) => Err(Issue {
                pipeline: Some(u.pipeline.name.clone()),
                fold: Some(u.fold),
                ..self.issue(IssueKind::Failed, Some(u.subject), Some(&u.session), e.to_string())
            }),
        }
    }
}

fn resolve_metric(dataset: &Dataset, plan: &EvaluationPlan) -> Result<Metric> {
    let k = dataset.classes().len();
    match plan.metric {
        Some(Metric::RocAuc) if k != 2 => Err(EvalError::InvalidPlan(format!(
            "roc_auc requires a binary problem, {} has {k} classes",
            dataset.id
        ))),
        Some(m) => Ok(m),
        None => Ok(Metric::for_classes(k)),
    }
}

fn check_inputs(dataset: &Dataset, pipelines: &[PipelineSpec], plan: &EvaluationPlan) -> Result<()> {
    if plan.outer_folds < 2 || plan.inner_folds < 2 {
        return Err(EvalError::InvalidPlan("outer and inner folds must be at least 2".into()));
    }
    if let Some(p) = pipelines.iter().find(|p| p.paradigm != dataset.paradigm) {
        return Err(EvalError::InvalidPlan(format!(
            "{} is a {} pipeline but {} is a {} dataset",
            p.name, p.paradigm, dataset.id, dataset.paradigm
        )));
    }
    if let Some(s) = dataset.sessions.iter().find(|s| s.epochs.classes != dataset.classes()) {
        return Err(EvalError::InvalidPlan(format!(
            "subject {} session {} has a different class list",
            s.subject, s.session
        )));
    }
    Ok(())
}

fn merge(units: Vec<Unit>, ctx: &Ctx, jobs: usize, mut issues: Vec<Issue>) -> Result<Evaluation> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| EvalError::InvalidPlan(format!("worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| units.par_iter().map(|u| ctx.run(u)).collect());
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(issue) => issues.push(issue),
        }
    }
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    issues.sort();
    Ok(Evaluation { rows, issues })
}

fn concat(parts: &[&SessionEpochs]) -> Result<Epochs> {
    let mut out = parts[0].epochs.clone();
    for p in &parts[1..] {
        out.concat(&p.epochs).map_err(PipelineError::from)?;
    }
    Ok(out)
}

fn distinct_classes(e: &Epochs) -> usize {
    e.class_counts().iter().filter(|&&c| c > 0).count()
}

/// Stratified k-fold inside every session. Sessions with fewer than two
/// classes are skipped and reported.
pub fn within_session_evaluate(
    dataset: &Dataset,
    pipelines: &[PipelineSpec],
    plan: &EvaluationPlan,
    meter: &MeterConfig,
    jobs: usize,
) -> Result<Evaluation> {
    check_inputs(dataset, pipelines, plan)?;
    let ctx = Ctx {
        dataset,
        plan,
        metric: resolve_metric(dataset, plan)?,
        meter,
    };
    let mut units = Vec::new();
    let mut issues = Vec::new();
    for s in &dataset.sessions {
        if distinct_classes(&s.epochs) < 2 {
            issues.push(ctx.issue(
                IssueKind::Skipped,
                Some(s.subject),
                Some(&s.session),
                "session has fewer than two classes".into(),
            ));
            continue;
        }
        // one split per session, shared by every pipeline
        let split_seed = derive_seed(plan.seed, &[&dataset.id, &s.subject.to_string(), &s.session, "split"]);
        let folds = match stratified_kfold(&s.epochs.labels, plan.outer_folds, split_seed) {
            Ok(f) => f,
            Err(e) => {
                issues.push(ctx.issue(IssueKind::Skipped, Some(s.subject), Some(&s.session), e.to_string()));
                continue;
            }
        };
        for (i, f) in folds.iter().enumerate() {
            ensure_disjoint(&f.train, &f.test)?;
            let (train, test) = (s.epochs.subset(&f.train), s.epochs.subset(&f.test));
            for p in pipelines {
                units.push(Unit {
                    subject: s.subject,
                    session: s.session.clone(),
                    pipeline: p,
                    fold: i,
                    train: train.clone(),
                    test: test.clone(),
                });
            }
        }
    }
    merge(units, &ctx, jobs, issues)
}

/// Leave-one-session-out per subject. Subjects with a single session are
/// skipped and reported.
pub fn cross_session_evaluate(
    dataset: &Dataset,
    pipelines: &[PipelineSpec],
    plan: &EvaluationPlan,
    meter: &MeterConfig,
    jobs: usize,
) -> Result<Evaluation> {
    check_inputs(dataset, pipelines, plan)?;
    let ctx = Ctx {
        dataset,
        plan,
        metric: resolve_metric(dataset, plan)?,
        meter,
    };
    let subjects = dataset.subjects();
    let per_subject: Vec<Vec<&SessionEpochs>> = subjects
        .iter()
        .map(|&sub| {
            let mut v: Vec<_> = dataset.sessions.iter().filter(|s| s.subject == sub).collect();
            v.sort_by(|a, b| a.session.cmp(&b.session));
            v
        })
        .collect();
    if per_subject.iter().all(|v| v.len() < 2) {
        return Err(EvalError::InsufficientUnits(format!(
            "{} has no subject with two or more sessions",
            dataset.id
        )));
    }
    let mut units = Vec::new();
    let mut issues = Vec::new();
    for (sub, sessions) in subjects.iter().zip(&per_subject) {
        if sessions.len() < 2 {
            issues.push(ctx.issue(IssueKind::Skipped, Some(*sub), None, "subject has a single session".into()));
            continue;
        }
        for (i, held) in sessions.iter().enumerate() {
            let rest: Vec<_> = sessions.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| *s).collect();
            if rest.iter().any(|s| s.session == held.session) {
                return Err(EvalError::Leakage(format!("session {} on both sides", held.session)));
            }
            let train = concat(&rest)?;
            for p in pipelines {
                units.push(Unit {
                    subject: *sub,
                    session: held.session.clone(),
                    pipeline: p,
                    fold: i,
                    train: train.clone(),
                    test: held.epochs.clone(),
                });
            }
        }
    }
    merge(units, &ctx, jobs, issues)
}

/// Leave-one-subject-out over all sessions. Rows carry session `"all"`.
pub fn cross_subject_evaluate(
    dataset: &Dataset,
    pipelines: &[PipelineSpec],
    plan: &EvaluationPlan,
    meter: &MeterConfig,
    jobs: usize,
) -> Result<Evaluation> {
    check_inputs(dataset, pipelines, plan)?;
    let ctx = Ctx {
        dataset,
        plan,
        metric: resolve_metric(dataset, plan)?,
        meter,
    };
    let subjects = dataset.subjects();
    if subjects.len() < 2 {
        return Err(EvalError::InsufficientUnits(format!("{} has fewer than two subjects", dataset.id)));
    }
    let mut units = Vec::new();
    for (i, &held) in subjects.iter().enumerate() {
        let (test_parts, train_parts): (Vec<&SessionEpochs>, Vec<&SessionEpochs>) =
            dataset.sessions.iter().partition(|s| s.subject == held);
        if train_parts.iter().any(|s| s.subject == held) {
            return Err(EvalError::Leakage(format!("subject {held} on both sides")));
        }
        let (train, test) = (concat(&train_parts)?, concat(&test_parts)?);
        for p in pipelines {
            units.push(Unit {
                subject: held,
                session: "all".into(),
                pipeline: p,
                fold: i,
                train: train.clone(),
                test: test.clone(),
            });
        }
    }
    merge(units, &ctx, jobs, Vec::new())
}

/// Dispatches on `plan.strategy`.
pub fn evaluate(
    dataset: &Dataset,
    pipelines: &[PipelineSpec],
    plan: &EvaluationPlan,
    meter: &MeterConfig,
    jobs: usize,
) -> Result<Evaluation> {
    match plan.strategy {
        Strategy::WithinSession => within_session_evaluate(dataset, pipelines, plan, meter, jobs),
        Strategy::CrossSession => cross_session_evaluate(dataset, pipelines, plan, meter, jobs),
        Strategy::CrossSubject => cross_subject_evaluate(dataset, pipelines, plan, meter, jobs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_sensitive() {
        let a = derive_seed(1, &["BNCI2014_001", "3", "0", "MDM", "2"]);
        assert_eq!(a, derive_seed(1, &["BNCI2014_001", "3", "0", "MDM", "2"]));
        assert_ne!(a, derive_seed(2, &["BNCI2014_001", "3", "0", "MDM", "2"]));
        assert_ne!(a, derive_seed(1, &["BNCI2014_001", "3", "0", "MDM", "3"]));
        // separators keep concatenations apart
        assert_ne!(derive_seed(0, &["ab", "c"]), derive_seed(0, &["a", "bc"]));
    }

    #[test]
    fn plan_defaults() {
        let p = EvaluationPlan::default();
        assert_eq!((p.outer_folds, p.inner_folds), (5, 3));
        assert_eq!(Metric::for_classes(2), Metric::RocAuc);
        assert_eq!(Metric::for_classes(4), Metric::Accuracy);
    }
}
