//! One-step contrastive divergence (CD-1) training.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{sigmoid_prob, RbmModel};
use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Standard deviation of the initial Gaussian weights.
    pub init_std: f64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            learning_rate: 0.1,
            epochs: 50,
            batch_size: 10,
            init_std: 0.01,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: RbmModel,
    /// Mean squared reconstruction error per epoch.
    pub reconstruction_error: Vec<f64>,
}

/// The model CD-1 starts from: small Gaussian weights, zero biases.
pub fn initial_model(visible: usize, hidden: usize, params: &TrainParams, seed: u64) -> Result<RbmModel> {
    let dist = Normal::new(0.0, params.init_std).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = rng::substream(seed, &[0]);
    let weights = (0..visible * hidden).map(|_| dist.sample(&mut rng)).collect();
    RbmModel::new(visible, hidden, weights, vec![0.0; visible], vec![0.0; hidden])
}

pub fn cd1_train(
    data: &BitMatrix,
    visible: usize,
    hidden: usize,
    params: &TrainParams,
    seed: u64,
) -> Result<TrainOutcome> {
    if data.rows() == 0 {
        return Err(Error::Empty("training data"));
    }
    Error::check_dim("training row length", visible, data.cols())?;
    if !(params.learning_rate >= 0.0 && params.learning_rate.is_finite()) {
        return Err(Error::invalid("learning rate must be finite and non-negative"));
    }
    if params.epochs == 0 || params.batch_size == 0 {
        return Err(Error::invalid("epochs and batch size must be positive"));
    }

    let mut model = initial_model(visible, hidden, params, seed)?;
    let mut rng = rng::substream(seed, &[1]);
    let mut order: Vec<usize> = (0..data.rows()).collect();
    let rows: Vec<Vec<bool>> = (0..data.rows()).map(|r| data.row_bools(r)).collect();

    let mut grad_w = vec![0.0; visible * hidden];
    let mut grad_bv = vec![0.0; visible];
    let mut grad_bh = vec![0.0; hidden];
    let mut ph0 = vec![0.0; hidden];
    let mut ph1 = vec![0.0; hidden];
    let mut h0 = vec![false; hidden];
    let mut pv1 = vec![0.0; visible];
    let mut v1 = vec![false; visible];
    let mut errors = Vec::with_capacity(params.epochs);

    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut sq_err = 0.0;
        for batch in order.chunks(params.batch_size) {
            grad_w.fill(0.0);
            grad_bv.fill(0.0);
            grad_bh.fill(0.0);
            for &idx in batch {
                let v0 = &rows[idx];
                model.hidden_net(v0, &mut ph0);
                for (p, h) in ph0.iter_mut().zip(h0.iter_mut()) {
                    *p = sigmoid_prob(*p);
                    *h = rng.random::<f64>() < *p;
                }
                model.visible_net(&h0, &mut pv1);
                for (p, v) in pv1.iter_mut().zip(v1.iter_mut()) {
                    *p = sigmoid_prob(*p);
                    *v = rng.random::<f64>() < *p;
                }
                model.hidden_net(&v1, &mut ph1);
                ph1.iter_mut().for_each(|p| *p = sigmoid_prob(*p));

                for i in 0..visible {
                    let (a, b) = (v0[i] as u8 as f64, v1[i] as u8 as f64);
                    sq_err += (a - pv1[i]).powi(2);
                    grad_bv[i] += a - b;
                    let row = &mut grad_w[i * hidden..(i + 1) * hidden];
                    for j in 0..hidden {
                        row[j] += a * ph0[j] - b * ph1[j];
                    }
                }
                for j in 0..hidden {
                    grad_bh[j] += ph0[j] - ph1[j];
                }
            }
            let step = params.learning_rate / batch.len() as f64;
            let (w, bv, bh) = model.params_mut();
            w.iter_mut().zip(&grad_w).for_each(|(x, g)| *x += step * g);
            bv.iter_mut().zip(&grad_bv).for_each(|(x, g)| *x += step * g);
            bh.iter_mut().zip(&grad_bh).for_each(|(x, g)| *x += step * g);
        }
        errors.push(sq_err / (data.rows() * visible) as f64);
    }

    Ok(TrainOutcome {
        model,
        reconstruction_error: errors,
    })
}
