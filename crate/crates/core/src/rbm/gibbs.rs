//! Block Gibbs sampling: all hidden units given `v`, then all visible units
//! given the new `h`.

use rand::Rng;

use super::{ChainSettings, GibbsState, RbmModel, SampleBatch};
use crate::bits::BitMatrix;
use crate::error::Result;
use crate::rng::{self, StreamRng};

/// Logistic function, evaluated on the branch that avoids cancellation.
pub fn sigmoid_prob(net_input: f64) -> f64 {
    let p = if net_input >= 0.0 {
        1.0 / (1.0 + (-net_input).exp())
    } else {
        let e = net_input.exp();
        e / (1.0 + e)
    };
    p.clamp(0.0, 1.0)
}

/// Number of random draws of each kind consumed by a sampler.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DrawCounts {
    pub uniform: u64,
    pub leak: u64,
    pub threshold: u64,
    pub gaussian: u64,
}

impl std::ops::AddAssign for DrawCounts {
    fn add_assign(&mut self, o: Self) {
        self.uniform += o.uniform;
        self.leak += o.leak;
        self.threshold += o.threshold;
        self.gaussian += o.gaussian;
    }
}

/// Turns a layer's net inputs into a binary sample.
///
/// Implementations must draw randomness only from `rng` so that a chain is a
/// pure function of its seed.
pub trait LayerSampler: Sync {
    fn sample_layer(&self, net: &[f64], out: &mut [bool], rng: &mut StreamRng, draws: &mut DrawCounts);

    /// Label recorded in [`SampleBatch::sampler_id`].
    fn id(&self) -> String;
}

/// Software sampler: `P(x = 1) = sigmoid(net)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdealSampler;

impl LayerSampler for IdealSampler {
    fn sample_layer(&self, net: &[f64], out: &mut [bool], rng: &mut StreamRng, draws: &mut DrawCounts) {
        for (o, &x) in out.iter_mut().zip(net) {
            *o = rng.random::<f64>() < sigmoid_prob(x);
        }
        draws.uniform += net.len() as u64;
    }

    fn id(&self) -> String {
        "ideal".to_string()
    }
}

struct Scratch {
    hidden_net: Vec<f64>,
    visible_net: Vec<f64>,
}

impl Scratch {
    fn new(model: &RbmModel) -> Self {
        Scratch {
            hidden_net: vec![0.0; model.hidden()],
            visible_net: vec![0.0; model.visible()],
        }
    }
}

fn block_step<S: LayerSampler + ?Sized>(
    model: &RbmModel,
    state: &mut GibbsState,
    sampler: &S,
    rng: &mut StreamRng,
    draws: &mut DrawCounts,
    scratch: &mut Scratch,
) {
    model.hidden_net(&state.v, &mut scratch.hidden_net);
    sampler.sample_layer(&scratch.hidden_net, &mut state.h, rng, draws);
    model.visible_net(&state.h, &mut scratch.visible_net);
    sampler.sample_layer(&scratch.visible_net, &mut state.v, rng, draws);
}

/// One ideal block Gibbs sweep.
pub fn gibbs_step(model: &RbmModel, state: &GibbsState, rng: &mut StreamRng) -> Result<GibbsState> {
    state.check(model)?;
    let mut next = state.clone();
    block_step(
        model,
        &mut next,
        &IdealSampler,
        rng,
        &mut DrawCounts::default(),
        &mut Scratch::new(model),
    );
    Ok(next)
}

/// Ideal-sampler chain.
pub fn run_chain(model: &RbmModel, settings: &ChainSettings, seed: u64) -> Result<SampleBatch> {
    run_sampler_chain(model, settings, &IdealSampler, seed)
}

pub fn run_sampler_chain<S: LayerSampler + ?Sized>(
    model: &RbmModel,
    settings: &ChainSettings,
    sampler: &S,
    seed: u64,
) -> Result<SampleBatch> {
    run_sampler_chain_counted(model, settings, sampler, seed).map(|(batch, _)| batch)
}

/// Runs `burn_in` sweeps, then records the visible vector after every
/// `thin`-th sweep until `n_samples` rows are collected.
pub fn run_sampler_chain_counted<S: LayerSampler + ?Sized>(
    model: &RbmModel,
    settings: &ChainSettings,
    sampler: &S,
    seed: u64,
) -> Result<(SampleBatch, DrawCounts)> {
    settings.validate()?;
    let mut rng = rng::stream(seed);
    let mut state = GibbsState {
        v: settings.initial_visible(model.visible(), &mut rng)?,
        h: vec![false; model.hidden()],
    };
    let mut scratch = Scratch::new(model);
    let mut draws = DrawCounts::default();
    for _ in 0..settings.burn_in {
        block_step(model, &mut state, sampler, &mut rng, &mut draws, &mut scratch);
    }
    let mut samples = BitMatrix::with_cols(model.visible());
    for _ in 0..settings.n_samples {
        for _ in 0..settings.thin {
            block_step(model, &mut state, sampler, &mut rng, &mut draws, &mut scratch);
        }
        samples.push_bools(&state.v)?;
    }
    Ok((
        SampleBatch {
            samples,
            sampler_id: sampler.id(),
            seed,
            settings: settings.clone(),
        },
        draws,
    ))
}
