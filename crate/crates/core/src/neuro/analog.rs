//! Discretised analog leaky integrate-and-fire sampler.
//!
//! Membrane dynamics `C du/dt = −g_L u + I + σ ξ(t)` are integrated with
//! Euler–Maruyama:
//!
//! ```text
//! u ← u + (dt / C)(−g_L u + I) + (σ / C) √dt · z,   z ~ N(0, 1)
//! ```
//!
//! Crossing `θ` records a spike and resets `u` to `V_reset`. A unit samples 1
//! when it spikes at least once in `window` steps. Units of a layer are split
//! into consecutive groups of `noise_density` that read the same `z` at each
//! step.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rbm::{
    run_sampler_chain, run_sampler_chain_counted, ChainSettings, DrawCounts, LayerSampler, RbmModel, SampleBatch,
};
use crate::rng::StreamRng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalogConfig {
    pub capacitance: f64,
    pub leak_conductance: f64,
    pub threshold: f64,
    pub reset: f64,
    /// Noise amplitude σ.
    pub sigma: f64,
    pub dt: f64,
    /// Integration steps per sample.
    pub window: u32,
    /// Neurons per shared noise source.
    pub noise_density: usize,
    /// Input current per unit of RBM net input.
    pub gain: f64,
}

impl Default for AnalogConfig {
    fn default() -> Self {
        AnalogConfig {
            capacitance: 1.0,
            leak_conductance: 1.0,
            threshold: 1.0,
            reset: 0.0,
            sigma: 1.0,
            dt: 0.1,
            window: 10,
            noise_density: 1,
            gain: 1.0,
        }
    }
}

impl AnalogConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.capacitance) || !positive(self.leak_conductance) {
            return Err(Error::invalid("capacitance and leak conductance must be positive"));
        }
        if !positive(self.dt) {
            return Err(Error::invalid("dt must be positive"));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::invalid("sigma must be finite and non-negative"));
        }
        if !(self.threshold.is_finite() && self.reset.is_finite() && self.threshold > self.reset) {
            return Err(Error::invalid("threshold must exceed the reset potential"));
        }
        if self.window == 0 {
            return Err(Error::invalid("window must be at least 1 step"));
        }
        if self.noise_density == 0 {
            return Err(Error::invalid("noise density must be at least 1"));
        }
        if !self.gain.is_finite() {
            return Err(Error::invalid("gain must be finite"));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!(
            "analog(C={},gL={},theta={},reset={},sigma={},dt={},window={},nd={},gain={})",
            self.capacitance,
            self.leak_conductance,
            self.threshold,
            self.reset,
            self.sigma,
            self.dt,
            self.window,
            self.noise_density,
            self.gain
        )
    }

    fn euler(&self, u: f64, current: f64, z: f64) -> f64 {
        u + self.dt / self.capacitance * (-self.leak_conductance * u + current)
            + self.sigma / self.capacitance * self.dt.sqrt() * z
    }
}

/// Five-step window whose spike probability at current `gain · x` stays
/// within about 0.02 of `sigmoid(x)`.
pub fn calibrated_analog_config() -> AnalogConfig {
    AnalogConfig {
        threshold: 0.32,
        sigma: 1.0,
        window: 5,
        gain: 0.96,
        ..Default::default()
    }
}

/// Simulates one neuron from `u = V_reset`, reading its Gaussian noise from `noise`.
pub fn analog_lif_sample(input_current: f64, cfg: &AnalogConfig, mut noise: impl FnMut() -> f64) -> bool {
    let mut u = cfg.reset;
    let mut spiked = false;
    for _ in 0..cfg.window {
        u = cfg.euler(u, input_current, noise());
        if u >= cfg.threshold {
            spiked = true;
            u = cfg.reset;
        }
    }
    spiked
}

/// Noise closure drawing standard normals from `rng`.
pub fn gaussian_noise(rng: &mut StreamRng) -> impl FnMut() -> f64 + '_ {
    move || StandardNormal.sample(rng)
}

/// [`LayerSampler`] backed by analog LIF neurons; net input `x` drives current `gain · x`.
#[derive(Clone, Debug)]
pub struct AnalogSampler {
    cfg: AnalogConfig,
}

impl AnalogSampler {
    pub fn new(cfg: AnalogConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(AnalogSampler { cfg })
    }
}

impl LayerSampler for AnalogSampler {
    fn sample_layer(&self, net: &[f64], out: &mut [bool], rng: &mut StreamRng, draws: &mut DrawCounts) {
        let cfg = &self.cfg;
        let mut u = vec![cfg.reset; net.len()];
        out.fill(false);
        for _ in 0..cfg.window {
            for (g, group) in u.chunks_mut(cfg.noise_density).enumerate() {
                let z: f64 = StandardNormal.sample(rng);
                draws.gaussian += 1;
                let base = g * cfg.noise_density;
                for (k, uk) in group.iter_mut().enumerate() {
                    *uk = cfg.euler(*uk, cfg.gain * net[base + k], z);
                    if *uk >= cfg.threshold {
                        out[base + k] = true;
                        *uk = cfg.reset;
                    }
                }
            }
        }
    }

    fn id(&self) -> String {
        self.cfg.label()
    }
}

pub fn run_analog_chain(
    model: &RbmModel,
    settings: &ChainSettings,
    cfg: &AnalogConfig,
    seed: u64,
) -> Result<SampleBatch> {
    run_sampler_chain(model, settings, &AnalogSampler::new(cfg.clone())?, seed)
}

pub fn run_analog_chain_counted(
    model: &RbmModel,
    settings: &ChainSettings,
    cfg: &AnalogConfig,
    seed: u64,
) -> Result<(SampleBatch, DrawCounts)> {
    run_sampler_chain_counted(model, settings, &AnalogSampler::new(cfg.clone())?, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn spike_freq(current: f64, cfg: &AnalogConfig, trials: usize, seed: u64) -> f64 {
        let mut r = rng::stream(seed);
        let mut noise = gaussian_noise(&mut r);
        (0..trials)
            .filter(|_| analog_lif_sample(current, cfg, &mut noise))
            .count() as f64
            / trials as f64
    }

    #[test]
    fn noiseless_subthreshold_never_spikes() {
        let cfg = AnalogConfig {
            sigma: 0.0,
            window: 1000,
            ..Default::default()
        };
        assert!(!analog_lif_sample(0.0, &cfg, || 0.0));
        // Equilibrium I/g_L = 0.9 < θ.
        assert!(!analog_lif_sample(0.9, &cfg, || 0.0));
    }

    #[test]
    fn noiseless_suprathreshold_always_spikes() {
        let cfg = AnalogConfig {
            sigma: 0.0,
            window: 200,
            ..Default::default()
        };
        assert!(analog_lif_sample(1.5, &cfg, || 0.0));
        assert_eq!(spike_freq(1.5, &AnalogConfig { sigma: 0.0, ..cfg }, 100, 0), 1.0);
    }

    #[test]
    fn spike_probability_is_monotone_in_current() {
        let cfg = AnalogConfig::default();
        let trials = 100_000;
        let mut prev = 0.0;
        for k in 0..9 {
            let current = -2.0 + 0.5 * k as f64;
            let f = spike_freq(current, &cfg, trials, k);
            let slack = 2.0 * (0.25 / trials as f64).sqrt() * 2f64.sqrt();
            assert!(f >= prev - slack, "I={current} f={f} prev={prev}");
            prev = f;
        }
    }

    #[test]
    fn calibrated_config_tracks_sigmoid() {
        let cfg = calibrated_analog_config();
        for k in -12..=12 {
            let x = k as f64 * 0.5;
            let f = spike_freq(cfg.gain * x, &cfg, 40_000, (100 + k) as u64);
            assert!((f - crate::rbm::sigmoid_prob(x)).abs() < 0.03, "x={x} f={f}");
        }
    }

    #[test]
    fn shared_noise_draw_accounting() {
        let m = RbmModel::random(10, 4, 0.5, 0.2, 1).unwrap();
        let cfg = AnalogConfig {
            noise_density: 10,
            window: 7,
            ..Default::default()
        };
        let s = ChainSettings {
            burn_in: 0,
            thin: 1,
            n_samples: 1,
            ..Default::default()
        };
        let (_, draws) = run_analog_chain_counted(&m, &s, &cfg, 0).unwrap();
        assert_eq!(draws.gaussian, 2 * 7);
        let (_, draws) = run_analog_chain_counted(
            &m,
            &s,
            &AnalogConfig {
                noise_density: 1,
                ..cfg
            },
            0,
        )
        .unwrap();
        assert_eq!(draws.gaussian, 7 * 14);
    }

    #[test]
    fn analog_chain_reproducible() {
        let m = RbmModel::random(6, 3, 0.5, 0.2, 1).unwrap();
        let s = ChainSettings {
            burn_in: 10,
            thin: 2,
            n_samples: 20,
            ..Default::default()
        };
        let cfg = AnalogConfig::default();
        assert_eq!(
            run_analog_chain(&m, &s, &cfg, 5).unwrap(),
            run_analog_chain(&m, &s, &cfg, 5).unwrap()
        );
    }

    #[test]
    fn validation() {
        assert!(AnalogConfig::default().validate().is_ok());
        assert!(AnalogConfig {
            dt: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(AnalogConfig {
            threshold: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(AnalogConfig {
            window: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(AnalogConfig {
            noise_density: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
