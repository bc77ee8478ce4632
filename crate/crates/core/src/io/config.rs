//! TOML run configuration.
//!
//! ```toml
//! out = "results"
//! densities = [1, 10, 16]
//!
//! [model]
//! kind = "random"
//! visible = 16
//! hidden = 8
//!
//! [[samplers]]
//! label = "G2"
//! sampler = { kind = "preset", name = "G2" }
//!
//! [plan]
//! n_per_trial = 50
//! num_trials = 200
//!
//! [energy]
//! e_active = 1.0
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::idx::{load_idx_images, DEFAULT_THRESHOLD};
use super::model_file::load_model;
use super::synth::{synth_dataset, SynthKind};
use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::harness::{EnergyModel, PlanTemplate, SamplerSpec};
use crate::neuro::{preset_config, AnalogConfig, DigitalSamplerConfig};
use crate::rbm::{cd1_train, RbmModel, TrainParams};
use crate::rng;

fn default_std() -> f64 {
    0.5
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSource {
    Path {
        path: PathBuf,
    },
    /// Gaussian parameters; `seed` defaults to one derived from the run seed.
    Random {
        visible: usize,
        hidden: usize,
        #[serde(default = "default_std")]
        weight_std: f64,
        #[serde(default = "default_std")]
        bias_std: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Train {
        data: DataSource,
        hidden: usize,
        #[serde(default)]
        params: TrainParams,
    },
}

impl Default for ModelSource {
    fn default() -> Self {
        ModelSource::Random {
            visible: 16,
            hidden: 8,
            weight_std: default_std(),
            bias_std: default_std(),
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSource {
    Synth {
        dataset: SynthKind,
        visible: usize,
        count: usize,
        #[serde(default)]
        noise: f64,
    },
    Idx {
        path: PathBuf,
        #[serde(default = "default_threshold")]
        threshold: f64,
        /// Keep only the first `limit` images.
        #[serde(default)]
        limit: Option<usize>,
    },
}

impl DataSource {
    /// Relative paths resolve against `base`.
    pub fn load(&self, base: &Path, seed: u64) -> Result<BitMatrix> {
        match self {
            DataSource::Synth {
                dataset,
                visible,
                count,
                noise,
            } => synth_dataset(*dataset, *visible, *count, *noise, seed),
            DataSource::Idx { path, threshold, limit } => {
                let all = load_idx_images(base.join(path), *threshold)?;
                Ok(match limit {
                    Some(k) if *k < all.rows() => {
                        let mut m = BitMatrix::with_cols(all.cols());
                        (0..*k).try_for_each(|r| m.push_row(&all.row(r)))?;
                        m
                    }
                    _ => all,
                })
            }
        }
    }
}

impl ModelSource {
    pub fn build(&self, base: &Path, seed: u64) -> Result<RbmModel> {
        match self {
            ModelSource::Path { path } => load_model(base.join(path)),
            ModelSource::Random {
                visible,
                hidden,
                weight_std,
                bias_std,
                seed: model_seed,
            } => RbmModel::random(
                *visible,
                *hidden,
                *weight_std,
                *bias_std,
                model_seed.unwrap_or_else(|| rng::derive_seed(seed, &[0x4d])),
            ),
            ModelSource::Train { data, hidden, params } => {
                let data = data.load(base, rng::derive_seed(seed, &[0x44]))?;
                Ok(cd1_train(&data, data.cols(), *hidden, params, rng::derive_seed(seed, &[0x54]))?.model)
            }
        }
    }

    /// Visible and hidden sizes, when known without loading anything.
    pub fn shape(&self) -> Option<(usize, usize)> {
        match self {
            ModelSource::Random { visible, hidden, .. } => Some((*visible, *hidden)),
            ModelSource::Train {
                data: DataSource::Synth { visible, .. },
                hidden,
                ..
            } => Some((*visible, *hidden)),
            _ => None,
        }
    }
}

/// Sampler kinds accepted in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SamplerEntrySpec {
    Ideal,
    /// One of the named configurations `G1`…`G7`.
    Preset {
        name: String,
        #[serde(default)]
        leak_density: Option<usize>,
    },
    Digital(DigitalSamplerConfig),
    Analog(AnalogConfig),
    Bernoulli {
        p: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerEntry {
    pub label: String,
    pub sampler: SamplerEntrySpec,
}

impl SamplerEntry {
    pub fn resolve(&self) -> Result<SamplerSpec> {
        let spec = match &self.sampler {
            SamplerEntrySpec::Ideal => SamplerSpec::Ideal,
            SamplerEntrySpec::Preset { name, leak_density } => {
                let cfg = preset_config(name)
                    .ok_or_else(|| Error::Config(format!("unknown table configuration '{name}'")))?;
                SamplerSpec::Digital(cfg.with_leak_density(leak_density.unwrap_or(1)))
            }
            SamplerEntrySpec::Digital(c) => SamplerSpec::Digital(c.clone()),
            SamplerEntrySpec::Analog(c) => SamplerSpec::Analog(c.clone()),
            SamplerEntrySpec::Bernoulli { p } => SamplerSpec::Bernoulli { p: *p },
        };
        spec.validate()
            .map_err(|e| Error::Config(format!("sampler '{}': {e}", self.label)))?;
        Ok(spec)
    }

    pub fn digital(&self) -> Result<DigitalSamplerConfig> {
        match self.resolve()? {
            SamplerSpec::Digital(c) => Ok(c),
            _ => Err(Error::Config(format!("sampler '{}' is not digital", self.label))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelSource,
    pub samplers: Vec<SamplerEntry>,
    pub plan: PlanTemplate,
    pub energy: EnergyModel,
    /// Leak densities for the leak sweep; defaults to 1, 10 and the larger layer size.
    pub densities: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.samplers {
            s.resolve()?;
        }
        self.energy
            .validate()
            .map_err(|e| Error::Config(format!("energy: {e}")))?;
        self.plan
            .settings
            .validate()
            .map_err(|e| Error::Config(format!("plan: {e}")))?;
        if self.plan.num_trials == 0 || self.plan.n_per_trial < 2 {
            return Err(Error::Config("plan: need num_trials ≥ 1 and n_per_trial ≥ 2".into()));
        }
        if let Some(d) = &self.densities {
            if d.is_empty() || d.contains(&0) {
                return Err(Error::Config(
                    "densities must be a non-empty list of positive sizes".into(),
                ));
            }
        }
        if let ModelSource::Random {
            weight_std, bias_std, ..
        } = self.model
        {
            if !(weight_std >= 0.0 && bias_std >= 0.0) {
                return Err(Error::Config("model: standard deviations must be non-negative".into()));
            }
        }
        Ok(())
    }

    pub fn densities_for(&self, model: &RbmModel) -> Vec<usize> {
        self.densities
            .clone()
            .unwrap_or_else(|| vec![1, 10, model.visible().max(model.hidden())])
    }

    pub fn build_model(&self, base: &Path, seed: u64) -> Result<Arc<RbmModel>> {
        self.model.build(base, seed).map(Arc::new)
    }
}
