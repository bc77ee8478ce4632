//! Digital integrate-and-fire sampling neuron with stochastic leak and
//! stochastic threshold.
//!
//! A unit with net input `x` starts at `V = scale * x`. For each of `Tw` window
//! steps the potential gains `leak` with probability 1/2, a threshold offset
//! `u` is drawn uniformly from `{0, …, 2^TM − 1}`, and the unit spikes if
//! `V ≥ Vt + u`. The sample is 1 if the unit spiked at any step. There is no
//! reset inside the window.
//!
//! Leak draws may be shared: units of a layer are split into groups of
//! `leak_density` and every unit in a group sees the same leak bit at a given
//! window step.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rbm::{
    run_sampler_chain, run_sampler_chain_counted, ChainSettings, DrawCounts, GibbsState, LayerSampler, RbmModel,
    SampleBatch,
};
use crate::rng::{self, StreamRng};

/// Largest window handled by [`digital_spike_prob_exact`].
pub const EXACT_WINDOW_LIMIT: u32 = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigitalSamplerConfig {
    /// Sampling window in steps.
    pub tw: u32,
    /// Deterministic threshold.
    pub vt: i64,
    /// Bit width of the stochastic threshold offset.
    pub tm: u32,
    pub leak: i64,
    /// Multiplier applied to net inputs.
    pub scale: f64,
    /// Data neurons per shared leak neuron.
    #[serde(default = "one")]
    pub leak_density: usize,
}

fn one() -> usize {
    1
}

impl DigitalSamplerConfig {
    pub fn new(tw: u32, vt: i64, tm: u32, leak: i64, scale: f64) -> Self {
        DigitalSamplerConfig {
            tw,
            vt,
            tm,
            leak,
            scale,
            leak_density: 1,
        }
    }

    pub fn with_leak_density(mut self, leak_density: usize) -> Self {
        self.leak_density = leak_density;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tw == 0 {
            return Err(Error::invalid("Tw must be at least 1"));
        }
        if !(1..=31).contains(&self.tm) {
            return Err(Error::invalid(format!("TM must be in 1..=31, got {}", self.tm)));
        }
        if self.leak_density == 0 {
            return Err(Error::invalid("leak density must be at least 1"));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::invalid("scale must be positive and finite"));
        }
        Ok(())
    }

    fn threshold_mask(&self) -> u32 {
        ((1u64 << self.tm) - 1) as u32
    }

    /// Probability that one window step spikes at potential `v`:
    /// `clamp(⌊v − Vt⌋ + 1, 0, 2^TM) / 2^TM`.
    pub fn step_spike_prob(&self, v: f64) -> f64 {
        let range = (1u64 << self.tm) as f64;
        ((v - self.vt as f64).floor() + 1.0).clamp(0.0, range) / range
    }

    pub fn label(&self) -> String {
        format!(
            "digital(Tw={},Vt={},TM={},leak={},scale={},ld={})",
            self.tw, self.vt, self.tm, self.leak, self.scale, self.leak_density
        )
    }
}

/// The seven configurations G1–G7: `(Tw, Vt, TM, leak, scale)`.
pub fn preset_configs() -> Vec<(String, DigitalSamplerConfig)> {
    [
        (1, -130, 8, 0, 50.0),
        (1, -80, 8, 102, 50.0),
        (2, 0, 8, 100, 50.0),
        (8, 79, 9, 49, 50.0),
        (16, 50, 9, 15, 30.0),
        (16, 100, 10, 30, 50.0),
        (16, 633, 8, 90, 100.0),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, (tw, vt, tm, leak, scale))| {
        (
            format!("G{}", i + 1),
            DigitalSamplerConfig::new(tw, vt, tm, leak, scale),
        )
    })
    .collect()
}

/// A short-window configuration whose exact spike probability at
/// `scale · x` stays within 0.02 of `sigmoid(x)` for every `x`.
pub fn calibrated_digital_config() -> DigitalSamplerConfig {
    DigitalSamplerConfig::new(4, 8, 8, 40, 32.0)
}

/// Looks up `G1`…`G7`.
pub fn preset_config(label: &str) -> Option<DigitalSamplerConfig> {
    preset_configs().into_iter().find(|(l, _)| l == label).map(|(_, c)| c)
}

/// Simulates one neuron for exactly `Tw` steps.
pub fn digital_neuron_sample(v_initial: f64, cfg: &DigitalSamplerConfig, rng: &mut StreamRng) -> bool {
    let mask = cfg.threshold_mask();
    let vt = cfg.vt as f64;
    let mut v = v_initial;
    let mut spiked = false;
    for _ in 0..cfg.tw {
        if rng.random::<bool>() {
            v += cfg.leak as f64;
        }
        let u = rng.next_u32() & mask;
        if v - vt >= u as f64 {
            spiked = true;
        }
    }
    spiked
}

/// Exact spike probability of [`digital_neuron_sample`].
///
/// Dynamic programme over `(step, number of leak successes)`: `survive[k]`
/// holds the probability of having reached the current step with `k` leak
/// increments and no spike.
pub fn digital_spike_prob_exact(v_initial: f64, cfg: &DigitalSamplerConfig) -> Result<f64> {
    if cfg.tw > EXACT_WINDOW_LIMIT {
        return Err(Error::invalid(format!(
            "exact spike probability needs Tw <= {EXACT_WINDOW_LIMIT}, got {}",
            cfg.tw
        )));
    }
    let tw = cfg.tw as usize;
    let mut survive = vec![0.0; tw + 1];
    survive[0] = 1.0;
    for t in 1..=tw {
        let mut next = vec![0.0; tw + 1];
        for k in 0..=t {
            let stay = 1.0 - cfg.step_spike_prob(v_initial + (cfg.leak * k as i64) as f64);
            let reach = survive[k] + if k > 0 { survive[k - 1] } else { 0.0 };
            next[k] = 0.5 * reach * stay;
        }
        survive = next;
    }
    Ok((1.0 - survive.iter().sum::<f64>()).clamp(0.0, 1.0))
}

/// How units are assigned to shared leak neurons.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeakGrouping {
    /// Consecutive index blocks of size `leak_density`.
    #[default]
    Consecutive,
    /// Blocks of a fixed seeded permutation of the layer.
    Random { seed: u64 },
}

impl LeakGrouping {
    fn order(&self, len: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..len).collect();
        if let LeakGrouping::Random { seed } = self {
            idx.sort_by_key(|&i| rng::derive_seed(*seed, &[len as u64, i as u64]));
        }
        idx
    }
}

/// [`LayerSampler`] backed by digital I&F neurons.
#[derive(Clone, Debug)]
pub struct DigitalSampler {
    cfg: DigitalSamplerConfig,
    grouping: LeakGrouping,
}

impl DigitalSampler {
    pub fn new(cfg: DigitalSamplerConfig) -> Result<Self> {
        Self::with_grouping(cfg, LeakGrouping::Consecutive)
    }

    pub fn with_grouping(cfg: DigitalSamplerConfig, grouping: LeakGrouping) -> Result<Self> {
        cfg.validate()?;
        Ok(DigitalSampler { cfg, grouping })
    }

    pub fn config(&self) -> &DigitalSamplerConfig {
        &self.cfg
    }
}

impl LayerSampler for DigitalSampler {
    fn sample_layer(&self, net: &[f64], out: &mut [bool], rng: &mut StreamRng, draws: &mut DrawCounts) {
        let cfg = &self.cfg;
        let mask = cfg.threshold_mask();
        let vt = cfg.vt as f64;
        let leak = cfg.leak as f64;
        let mut potential: Vec<f64> = net.iter().map(|x| cfg.scale * x).collect();
        out.fill(false);
        let order = self.grouping.order(net.len());
        for _ in 0..cfg.tw {
            for group in order.chunks(cfg.leak_density) {
                let inc = if rng.random::<bool>() { leak } else { 0.0 };
                draws.leak += 1;
                for &i in group {
                    potential[i] += inc;
                    let u = rng.next_u32() & mask;
                    if potential[i] - vt >= u as f64 {
                        out[i] = true;
                    }
                }
                draws.threshold += group.len() as u64;
            }
        }
    }

    fn id(&self) -> String {
        self.cfg.label()
    }
}

/// Block Gibbs sweep with digital neurons on both layers.
pub fn digital_gibbs_step(
    model: &RbmModel,
    state: &GibbsState,
    cfg: &DigitalSamplerConfig,
    rng: &mut StreamRng,
) -> Result<GibbsState> {
    digital_gibbs_step_counted(model, state, cfg, rng).map(|(s, _)| s)
}

/// [`digital_gibbs_step`] that also reports how many draws were made.
pub fn digital_gibbs_step_counted(
    model: &RbmModel,
    state: &GibbsState,
    cfg: &DigitalSamplerConfig,
    rng: &mut StreamRng,
) -> Result<(GibbsState, DrawCounts)> {
    state.check(model)?;
    let sampler = DigitalSampler::new(cfg.clone())?;
    let mut next = state.clone();
    let mut draws = DrawCounts::default();
    let mut hn = vec![0.0; model.hidden()];
    model.hidden_net(&next.v, &mut hn);
    sampler.sample_layer(&hn, &mut next.h, rng, &mut draws);
    let mut vn = vec![0.0; model.visible()];
    model.visible_net(&next.h, &mut vn);
    sampler.sample_layer(&vn, &mut next.v, rng, &mut draws);
    Ok((next, draws))
}

pub fn run_digital_chain(
    model: &RbmModel,
    settings: &ChainSettings,
    cfg: &DigitalSamplerConfig,
    seed: u64,
) -> Result<SampleBatch> {
    run_sampler_chain(model, settings, &DigitalSampler::new(cfg.clone())?, seed)
}

pub fn run_digital_chain_counted(
    model: &RbmModel,
    settings: &ChainSettings,
    cfg: &DigitalSamplerConfig,
    seed: u64,
) -> Result<(SampleBatch, DrawCounts)> {
    run_sampler_chain_counted(model, settings, &DigitalSampler::new(cfg.clone())?, seed)
}
