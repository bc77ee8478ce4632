//! Exact enumeration for small models.
//!
//! Sums over one layer are done in closed form: for fixed `v`,
//! `Σ_h exp(-E(v,h)) = exp(b_vᵀv) · Π_j (1 + exp(net_j(v)))`.
//! Only the other layer is enumerated.

use super::RbmModel;
use crate::error::{Error, Result};

/// Maximum `visible + hidden` accepted by the enumeration routines.
pub const ENUMERATION_LIMIT: usize = 24;

fn guard(model: &RbmModel) -> Result<()> {
    let units = model.visible() + model.hidden();
    if units > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            units,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// `log(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn bits_of(code: usize, len: usize) -> Vec<bool> {
    (0..len).map(|i| (code >> i) & 1 == 1).collect()
}

/// `log Σ_h exp(-E(v, h))` for each visible configuration, index bit `i` = `v_i`.
fn visible_log_weights(model: &RbmModel) -> Vec<f64> {
    let mut net = vec![0.0; model.hidden()];
    (0..1usize << model.visible())
        .map(|code| {
            let v = bits_of(code, model.visible());
            model.hidden_net(&v, &mut net);
            let bias: f64 = model
                .visible_bias()
                .iter()
                .zip(&v)
                .filter(|(_, &on)| on)
                .map(|(b, _)| b)
                .sum();
            bias + net.iter().map(|&x| softplus(x)).sum::<f64>()
        })
        .collect()
}

/// Same as [`visible_log_weights`] with the roles of the layers swapped.
fn hidden_log_weights(model: &RbmModel) -> Vec<f64> {
    let mut net = vec![0.0; model.visible()];
    (0..1usize << model.hidden())
        .map(|code| {
            let h = bits_of(code, model.hidden());
            model.visible_net(&h, &mut net);
            let bias: f64 = model
                .hidden_bias()
                .iter()
                .zip(&h)
                .filter(|(_, &on)| on)
                .map(|(b, _)| b)
                .sum();
            bias + net.iter().map(|&x| softplus(x)).sum::<f64>()
        })
        .collect()
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Log partition function, enumerating the smaller layer.
pub fn log_partition_exact(model: &RbmModel) -> Result<f64> {
    guard(model)?;
    let logs = if model.visible() <= model.hidden() {
        visible_log_weights(model)
    } else {
        hidden_log_weights(model)
    };
    Ok(log_sum_exp(&logs))
}

/// `p(v)` for all `2^visible` configurations; entry `k` has `v_i = (k >> i) & 1`.
pub fn exact_visible_marginal(model: &RbmModel) -> Result<Vec<f64>> {
    guard(model)?;
    let logs = visible_log_weights(model);
    let log_z = log_sum_exp(&logs);
    let mut p: Vec<f64> = logs.iter().map(|l| (l - log_z).exp()).collect();
    // Remove the residual rounding so the table sums to one.
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}
