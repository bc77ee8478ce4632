//! Repeated Crossmatch trials between two samplers, and the sweeps built on them.
//!
//! Trial `i` of a plan draws its randomness from streams derived from
//! `(base_seed, i, side)`, so results do not depend on thread scheduling or on
//! how many trials the plan contains.

mod energy;
mod stats;
mod sweep;

pub use energy::{chain_ticks, energy_estimate, epeff, interior_maximum, EnergyModel, EpeffReport};
pub use stats::{pvalue_stats, PValueStats, HISTOGRAM_BINS};
pub use sweep::{leak_density_sweep, parameter_sweep, PlanTemplate};

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::crossmatch::{crossmatch_test, CrossmatchOutcome, MatchingChoice};
use crate::error::{Error, Result};
use crate::neuro::{AnalogConfig, AnalogSampler, DigitalSampler, DigitalSamplerConfig};
use crate::rbm::{run_sampler_chain, ChainSettings, IdealSampler, RbmModel, SampleBatch};
use crate::rng;

/// Where one side of a comparison gets its samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SamplerSpec {
    Ideal,
    Digital(DigitalSamplerConfig),
    Analog(AnalogConfig),
    /// Independent Bernoulli(p) bits, one row per sample; ignores the model's parameters.
    Bernoulli {
        p: f64,
    },
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SamplerSpec::Ideal => Ok(()),
            SamplerSpec::Digital(c) => c.validate(),
            SamplerSpec::Analog(c) => c.validate(),
            SamplerSpec::Bernoulli { p } if (0.0..=1.0).contains(p) => Ok(()),
            SamplerSpec::Bernoulli { p } => Err(Error::invalid(format!("Bernoulli p must be in [0, 1], got {p}"))),
        }
    }

    /// Window length in hardware ticks per layer update (1 for software samplers).
    pub fn ticks_per_layer(&self) -> u32 {
        match self {
            SamplerSpec::Digital(c) => c.tw,
            SamplerSpec::Analog(c) => c.window,
            _ => 1,
        }
    }
}

/// A sampler bound to a model and chain settings.
#[derive(Clone, Debug)]
pub struct SamplerSide {
    pub spec: SamplerSpec,
    pub model: Arc<RbmModel>,
    pub settings: ChainSettings,
}

impl SamplerSide {
    pub fn new(spec: SamplerSpec, model: Arc<RbmModel>, settings: ChainSettings) -> Self {
        SamplerSide { spec, model, settings }
    }

    /// Draws `n` samples with the given chain seed.
    pub fn generate(&self, n: usize, seed: u64) -> Result<SampleBatch> {
        let settings = ChainSettings {
            n_samples: n,
            ..self.settings.clone()
        };
        match &self.spec {
            SamplerSpec::Ideal => run_sampler_chain(&self.model, &settings, &IdealSampler, seed),
            SamplerSpec::Digital(c) => {
                run_sampler_chain(&self.model, &settings, &DigitalSampler::new(c.clone())?, seed)
            }
            SamplerSpec::Analog(c) => run_sampler_chain(&self.model, &settings, &AnalogSampler::new(c.clone())?, seed),
            SamplerSpec::Bernoulli { p } => {
                settings.validate()?;
                let mut r = rng::stream(seed);
                let mut samples = BitMatrix::with_cols(self.model.visible());
                let mut row = vec![false; self.model.visible()];
                for _ in 0..n {
                    row.iter_mut().for_each(|b| *b = r.random::<f64>() < *p);
                    samples.push_bools(&row)?;
                }
                Ok(SampleBatch {
                    samples,
                    sampler_id: format!("bernoulli(p={p})"),
                    seed,
                    settings,
                })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialPlan {
    pub side_a: SamplerSide,
    pub side_b: SamplerSide,
    pub n_per_trial: usize,
    pub num_trials: usize,
    pub base_seed: u64,
    pub matching: MatchingChoice,
}

/// Seeds used by one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialSeeds {
    pub side_a: u64,
    pub side_b: u64,
    pub tie: u64,
}

pub fn trial_seeds(base_seed: u64, trial: usize) -> TrialSeeds {
    TrialSeeds {
        side_a: rng::derive_seed(base_seed, &[trial as u64, 0]),
        side_b: rng::derive_seed(base_seed, &[trial as u64, 1]),
        tie: rng::derive_seed(base_seed, &[trial as u64, 2]),
    }
}

impl TrialPlan {
    pub fn validate(&self) -> Result<()> {
        if self.num_trials == 0 {
            return Err(Error::invalid("num_trials must be at least 1"));
        }
        if self.n_per_trial < 2 {
            return Err(Error::invalid("n_per_trial must be at least 2"));
        }
        Error::check_dim(
            "model visible units",
            self.side_a.model.visible(),
            self.side_b.model.visible(),
        )?;
        for side in [&self.side_a, &self.side_b] {
            side.spec.validate()?;
            side.settings.validate()?;
        }
        Ok(())
    }

    /// Runs trial `trial` alone.
    pub fn run_trial(&self, trial: usize) -> Result<CrossmatchOutcome> {
        let seeds = trial_seeds(self.base_seed, trial);
        let x = self.side_a.generate(self.n_per_trial, seeds.side_a)?;
        let y = self.side_b.generate(self.n_per_trial, seeds.side_b)?;
        crossmatch_test(&x, &y, self.matching, seeds.tie)
    }
}

/// Outcomes of every trial, in trial order. Trials run in parallel.
pub fn run_trial_outcomes(plan: &TrialPlan) -> Result<Vec<CrossmatchOutcome>> {
    plan.validate()?;
    (0..plan.num_trials)
        .into_par_iter()
        .map(|i| plan.run_trial(i))
        .collect()
}

pub fn run_trials(plan: &TrialPlan) -> Result<PValueStats> {
    let outcomes = run_trial_outcomes(plan)?;
    let p: Vec<f64> = outcomes.iter().map(|o| o.p_value).collect();
    pvalue_stats(&p)
}
