//! Declarative benchmark configuration (a single JSON document).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use bcibench::dsp::Paradigm;
use bcibench::eval::{Dataset, EvaluationPlan, MeterConfig};
use bcibench::pipelines::{catalog, Grid, PipelineSpec};
use bcibench::synth::{generate, SynthSpec};
use serde::{Deserialize, Serialize};

use crate::bundle::load_bundle;
use crate::registry::registry_lookup;
use crate::{io_err, CliError, Result};

pub const CARBON_ENV: &str = "BENCH_CARBON_INTENSITY_G_PER_KWH";

/// Where a dataset comes from. A bare string is a bundle directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSource {
    Path(PathBuf),
    Bundle { path: PathBuf },
    Synth { synth: SynthSpec },
}

impl DatasetSource {
    pub fn label(&self) -> String {
        match self {
            DatasetSource::Path(p) | DatasetSource::Bundle { path: p } => p.display().to_string(),
            DatasetSource::Synth { synth } => synth.id(),
        }
    }

    /// Loads the trials, resolving relative paths against `base`.
    pub fn load(&self, base: &Path) -> Result<Dataset> {
        match self {
            DatasetSource::Path(p) | DatasetSource::Bundle { path: p } => {
                let full = if p.is_absolute() { p.clone() } else { base.join(p) };
                if !full.exists() {
                    if let Ok(d) = registry_lookup(&p.display().to_string()) {
                        return Err(CliError::InvalidConfig(format!(
                            "{} is a registry entry (metadata only); convert the recordings to an epoch bundle and give its path",
                            d.id
                        )));
                    }
                }
                load_bundle(&full)?.to_dataset()
            }
            DatasetSource::Synth { synth } => Ok(generate(synth)?.to_dataset()?),
        }
    }
}

/// A catalog pipeline name, optionally with a grid override.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PipelineEntry {
    Name(String),
    Spec {
        name: String,
        #[serde(default)]
        grid: Option<Grid>,
    },
}

impl PipelineEntry {
    pub fn spec(&self) -> Result<PipelineSpec> {
        match self {
            PipelineEntry::Name(n) => Ok(PipelineSpec::new(n)?),
            PipelineEntry::Spec { name, grid: None } => Ok(PipelineSpec::new(name)?),
            PipelineEntry::Spec { name, grid: Some(g) } => Ok(PipelineSpec::new(name)?.with_grid(g.clone())?),
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub datasets: Vec<DatasetSource>,
    /// Empty runs every catalog pipeline of each dataset's paradigm.
    #[serde(default)]
    pub pipelines: Vec<PipelineEntry>,
    #[serde(default)]
    pub plan: EvaluationPlan,
    #[serde(default)]
    pub meter: MeterConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "one")]
    pub jobs: usize,
    /// Overrides `plan.seed` when set.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Band-pass overrides per paradigm, `[low_hz, high_hz]`.
    #[serde(default)]
    pub bands: BTreeMap<Paradigm, [f64; 2]>,
}

/// Carbon intensity used when the config does not set one.
pub fn default_carbon_intensity(env: Option<&str>) -> Result<f64> {
    match env {
        None => Ok(MeterConfig::default().carbon_intensity_g_per_kwh),
        Some(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| *x >= 0.0 && x.is_finite())
            .ok_or_else(|| CliError::InvalidConfig(format!("{CARBON_ENV}={v:?} is not a non-negative number"))),
    }
}

impl BenchmarkConfig {
    /// Parses a config. `carbon_env` is the value of
    /// `BENCH_CARBON_INTENSITY_G_PER_KWH`, used unless the config sets
    /// `meter.carbon_intensity_g_per_kwh` itself.
    pub fn from_json_str(text: &str, carbon_env: Option<&str>) -> Result<Self> {
        let mut raw: serde_json::Value = serde_json::from_str(text)?;
        let explicit = raw
            .get("meter")
            .and_then(|m| m.get("carbon_intensity_g_per_kwh"))
            .is_some();
        if !explicit {
            let ci = default_carbon_intensity(carbon_env)?;
            if let Some(obj) = raw.as_object_mut() {
                let meter = obj.entry("meter").or_insert_with(|| serde_json::json!({}));
                if let Some(m) = meter.as_object_mut() {
                    m.insert("carbon_intensity_g_per_kwh".into(), ci.into());
                }
            }
        }
        let cfg: BenchmarkConfig = serde_json::from_value(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let env = std::env::var(CARBON_ENV).ok();
        Self::from_json_str(&text, env.as_deref())
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(CliError::InvalidConfig("no datasets".into()));
        }
        if self.jobs == 0 {
            return Err(CliError::InvalidConfig("jobs must be at least 1".into()));
        }
        if self.plan.outer_folds < 2 || self.plan.inner_folds < 2 {
            return Err(CliError::InvalidConfig("outer_folds and inner_folds must be at least 2".into()));
        }
        self.meter.validate().map_err(CliError::InvalidConfig)?;
        for (p, [lo, hi]) in &self.bands {
            if !(*lo > 0.0 && lo < hi) {
                return Err(CliError::InvalidConfig(format!("band for {p} must satisfy 0 < low < high")));
            }
        }
        for d in &self.datasets {
            if let DatasetSource::Synth { synth } = d {
                synth.validate()?;
            }
        }
        self.pipeline_specs()?;
        Ok(())
    }

    pub fn pipeline_specs(&self) -> Result<Vec<PipelineSpec>> {
        self.pipelines.iter().map(PipelineEntry::spec).collect()
    }

    /// Pipelines to run on a dataset of `paradigm`.
    pub fn pipelines_for(&self, paradigm: Paradigm) -> Result<Vec<PipelineSpec>> {
        if self.pipelines.is_empty() {
            return catalog()
                .iter()
                .filter(|e| e.paradigm == paradigm)
                .map(|e| Ok(PipelineSpec::new(e.name)?))
                .collect();
        }
        Ok(self.pipeline_specs()?.into_iter().filter(|s| s.paradigm == paradigm).collect())
    }

    pub fn band(&self, paradigm: Paradigm) -> (f64, f64) {
        self.bands
            .get(&paradigm)
            .map_or_else(|| paradigm.default_band(), |[lo, hi]| (*lo, *hi))
    }

    pub fn effective_plan(&self) -> EvaluationPlan {
        let mut plan = self.plan.clone();
        if let Some(s) = self.seed {
            plan.seed = s;
        }
        plan
    }
}
