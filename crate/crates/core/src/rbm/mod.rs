//! Binary restricted Boltzmann machines.
//!
//! The joint distribution over visible `v` and hidden `h` is
//! `p(v, h) ∝ exp(-E(v, h))` with `E(v, h) = -vᵀWh - b_vᵀv - b_hᵀh`.

mod exact;
mod gibbs;
mod train;

pub use exact::{exact_visible_marginal, log_partition_exact, ENUMERATION_LIMIT};
pub use gibbs::{
    gibbs_step, run_chain, run_sampler_chain, run_sampler_chain_counted, sigmoid_prob, DrawCounts, IdealSampler,
    LayerSampler,
};
pub use train::{cd1_train, initial_model, TrainOutcome, TrainParams};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::rng;

/// RBM parameters. `weights` is stored row-major, `visible × hidden`.
#[derive(Clone, Debug, PartialEq)]
pub struct RbmModel {
    visible: usize,
    hidden: usize,
    weights: Vec<f64>,
    visible_bias: Vec<f64>,
    hidden_bias: Vec<f64>,
}

impl RbmModel {
    pub fn new(
        visible: usize,
        hidden: usize,
        weights: Vec<f64>,
        visible_bias: Vec<f64>,
        hidden_bias: Vec<f64>,
    ) -> Result<Self> {
        Error::check_dim("weight count", visible * hidden, weights.len())?;
        Error::check_dim("visible bias length", visible, visible_bias.len())?;
        Error::check_dim("hidden bias length", hidden, hidden_bias.len())?;
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite("weights"));
        }
        if !visible_bias.iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite("visible bias"));
        }
        if !hidden_bias.iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite("hidden bias"));
        }
        Ok(RbmModel {
            visible,
            hidden,
            weights,
            visible_bias,
            hidden_bias,
        })
    }

    pub fn zeros(visible: usize, hidden: usize) -> Self {
        RbmModel {
            visible,
            hidden,
            weights: vec![0.0; visible * hidden],
            visible_bias: vec![0.0; visible],
            hidden_bias: vec![0.0; hidden],
        }
    }

    /// Gaussian weights and biases, seeded.
    pub fn random(visible: usize, hidden: usize, weight_std: f64, bias_std: f64, seed: u64) -> Result<Self> {
        let wdist = Normal::new(0.0, weight_std).map_err(|e| Error::invalid(e.to_string()))?;
        let bdist = Normal::new(0.0, bias_std).map_err(|e| Error::invalid(e.to_string()))?;
        let mut rng = rng::substream(seed, &[0x5e_ed0f_4b3d]);
        let weights = (0..visible * hidden).map(|_| wdist.sample(&mut rng)).collect();
        let visible_bias = (0..visible).map(|_| bdist.sample(&mut rng)).collect();
        let hidden_bias = (0..hidden).map(|_| bdist.sample(&mut rng)).collect();
        RbmModel::new(visible, hidden, weights, visible_bias, hidden_bias)
    }

    pub fn visible(&self) -> usize {
        self.visible
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.hidden + j]
    }

    pub fn visible_bias(&self) -> &[f64] {
        &self.visible_bias
    }

    pub fn hidden_bias(&self) -> &[f64] {
        &self.hidden_bias
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [f64], &mut [f64], &mut [f64]) {
        (&mut self.weights, &mut self.visible_bias, &mut self.hidden_bias)
    }

    /// `Wᵀv + b_h`.
    pub fn hidden_net(&self, v: &[bool], out: &mut [f64]) {
        out.copy_from_slice(&self.hidden_bias);
        for (i, _) in v.iter().enumerate().filter(|(_, &on)| on) {
            let row = &self.weights[i * self.hidden..(i + 1) * self.hidden];
            for (o, w) in out.iter_mut().zip(row) {
                *o += w;
            }
        }
    }

    /// `Wh + b_v`.
    pub fn visible_net(&self, h: &[bool], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.weights[i * self.hidden..(i + 1) * self.hidden];
            *o = self.visible_bias[i] + row.iter().zip(h).filter(|(_, &on)| on).map(|(w, _)| w).sum::<f64>();
        }
    }

    /// Energy of a joint configuration.
    pub fn energy(&self, state: &GibbsState) -> Result<f64> {
        state.check(self)?;
        let mut interaction = 0.0;
        for (i, _) in state.v.iter().enumerate().filter(|(_, &on)| on) {
            for (j, _) in state.h.iter().enumerate().filter(|(_, &on)| on) {
                interaction += self.weight(i, j);
            }
        }
        let bv: f64 = dot_bits(&self.visible_bias, &state.v);
        let bh: f64 = dot_bits(&self.hidden_bias, &state.h);
        Ok(-interaction - bv - bh)
    }
}

fn dot_bits(x: &[f64], bits: &[bool]) -> f64 {
    x.iter().zip(bits).filter(|(_, &on)| on).map(|(a, _)| a).sum()
}

/// Free function form of [`RbmModel::energy`].
pub fn energy(model: &RbmModel, state: &GibbsState) -> Result<f64> {
    model.energy(state)
}

/// Joint visible/hidden configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GibbsState {
    pub v: Vec<bool>,
    pub h: Vec<bool>,
}

impl GibbsState {
    pub fn zeros(model: &RbmModel) -> Self {
        GibbsState {
            v: vec![false; model.visible()],
            h: vec![false; model.hidden()],
        }
    }

    pub fn check(&self, model: &RbmModel) -> Result<()> {
        Error::check_dim("visible state length", model.visible(), self.v.len())?;
        Error::check_dim("hidden state length", model.hidden(), self.h.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "bits")]
pub enum ChainInit {
    #[default]
    RandomUniform,
    /// Visible vector as a `0`/`1` string.
    GivenVector(String),
}

/// Burn-in, thinning and length of a recorded chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainSettings {
    pub burn_in: usize,
    pub thin: usize,
    pub n_samples: usize,
    pub init: ChainInit,
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings {
            burn_in: 1000,
            thin: 10,
            n_samples: 50,
            init: ChainInit::RandomUniform,
        }
    }
}

impl ChainSettings {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::invalid("thin must be at least 1"));
        }
        if self.n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        if let ChainInit::GivenVector(bits) = &self.init {
            if !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::invalid("initial vector must be a 0/1 string"));
            }
        }
        Ok(())
    }

    /// Total Gibbs sweeps the chain performs.
    pub fn total_steps(&self) -> usize {
        self.burn_in + self.n_samples * self.thin
    }

    pub(crate) fn initial_visible(&self, visible: usize, rng: &mut impl Rng) -> Result<Vec<bool>> {
        match &self.init {
            ChainInit::RandomUniform => Ok((0..visible).map(|_| rng.random::<bool>()).collect()),
            ChainInit::GivenVector(bits) => {
                Error::check_dim("initial vector length", visible, bits.len())?;
                Ok(bits.bytes().map(|b| b == b'1').collect())
            }
        }
    }
}

/// `n` visible-layer samples with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub samples: BitMatrix,
    pub sampler_id: String,
    pub seed: u64,
    pub settings: ChainSettings,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.samples.cols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(v: &[u8], h: &[u8]) -> GibbsState {
        GibbsState {
            v: v.iter().map(|&b| b == 1).collect(),
            h: h.iter().map(|&b| b == 1).collect(),
        }
    }

    #[test]
    fn energy_of_zero_model_vanishes() {
        let m = RbmModel::zeros(3, 2);
        assert_eq!(m.energy(&state(&[1, 0, 1], &[1, 1])).unwrap(), 0.0);
    }

    #[test]
    fn energy_hand_evaluated() {
        let m = RbmModel::new(1, 1, vec![2.0], vec![1.0], vec![-1.0]).unwrap();
        assert_eq!(m.energy(&state(&[1], &[1])).unwrap(), -2.0);
    }

    #[test]
    fn energy_of_zero_state_vanishes() {
        let m = RbmModel::random(5, 4, 1.0, 1.0, 3).unwrap();
        assert_eq!(m.energy(&GibbsState::zeros(&m)).unwrap(), 0.0);
    }

    #[test]
    fn energy_rejects_mismatched_state() {
        let m = RbmModel::zeros(3, 2);
        assert!(matches!(
            m.energy(&state(&[1, 0], &[1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn energy_interaction_term_is_linear_in_weights() {
        // Second evaluation: vᵀWh as a matrix-vector product.
        let m = RbmModel::random(6, 4, 0.7, 0.3, 11).unwrap();
        let s = state(&[1, 0, 1, 1, 0, 1], &[0, 1, 1, 1]);
        let mut wh = vec![0.0; 6];
        let zero_bias = RbmModel::new(6, 4, m.weights().to_vec(), vec![0.0; 6], vec![0.0; 4]).unwrap();
        zero_bias.visible_net(&s.h, &mut wh);
        let vwh: f64 = wh.iter().zip(&s.v).filter(|(_, &b)| b).map(|(x, _)| x).sum();
        let bias_part = dot_bits(m.visible_bias(), &s.v) + dot_bits(m.hidden_bias(), &s.h);
        for c in [0.0, 0.5, 2.0, -3.0] {
            let scaled = RbmModel::new(
                6,
                4,
                m.weights().iter().map(|w| w * c).collect(),
                m.visible_bias().to_vec(),
                m.hidden_bias().to_vec(),
            )
            .unwrap();
            let e = scaled.energy(&s).unwrap();
            assert!((e - (-c * vwh - bias_part)).abs() < 1e-12);
        }
    }

    #[test]
    fn constructor_validates() {
        assert!(RbmModel::new(2, 2, vec![0.0; 3], vec![0.0; 2], vec![0.0; 2]).is_err());
        assert!(RbmModel::new(1, 1, vec![f64::NAN], vec![0.0], vec![0.0]).is_err());
        assert!(RbmModel::new(1, 1, vec![0.0], vec![f64::INFINITY], vec![0.0]).is_err());
    }

    #[test]
    fn settings_validation() {
        let mut s = ChainSettings::default();
        assert!(s.validate().is_ok());
        s.thin = 0;
        assert!(s.validate().is_err());
        s.thin = 1;
        s.n_samples = 0;
        assert!(s.validate().is_err());
    }
}
