//! Crossbar resource accounting for the digital sampler.
//!
//! Each RBM unit needs one data neuron; every `l_d` data neurons share one
//! leak neuron. Neurons are packed onto cores of `core_size`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CORE_SIZE: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub data_neurons: usize,
    pub leak_neurons: usize,
    pub total_neurons: usize,
    pub cores: usize,
    /// Data neurons over provisioned neuron slots.
    pub utilization: f64,
}

pub fn resource_estimate(num_units: usize, leak_density: usize, core_size: usize) -> Result<ResourceEstimate> {
    if num_units == 0 {
        return Err(Error::invalid("resource estimate needs at least one unit"));
    }
    if leak_density == 0 || core_size == 0 {
        return Err(Error::invalid("leak density and core size must be positive"));
    }
    let leak_neurons = num_units.div_ceil(leak_density);
    let total_neurons = num_units + leak_neurons;
    let cores = total_neurons.div_ceil(core_size);
    Ok(ResourceEstimate {
        data_neurons: num_units,
        leak_neurons,
        total_neurons,
        cores,
        utilization: num_units as f64 / (cores * core_size) as f64,
    })
}
