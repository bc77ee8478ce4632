//! Energy model and Energy Performance Efficiency (mean p-value per unit energy).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuro::{ResourceEstimate, DEFAULT_CORE_SIZE};
use crate::rbm::ChainSettings;

/// Linear energy model in arbitrary units: a per-neuron and a per-core cost per tick.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyModel {
    pub e_active: f64,
    pub e_core_static: f64,
    pub core_size: usize,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            e_active: 1.0,
            e_core_static: 10.0,
            core_size: DEFAULT_CORE_SIZE,
        }
    }
}

impl EnergyModel {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.e_active) || !positive(self.e_core_static) || self.core_size == 0 {
            return Err(Error::invalid("energy coefficients and core size must be positive"));
        }
        Ok(())
    }
}

pub fn energy_estimate(resources: &ResourceEstimate, ticks: u64, em: &EnergyModel) -> Result<f64> {
    if ticks == 0 {
        return Err(Error::invalid("energy estimate needs at least one tick"));
    }
    em.validate()?;
    let t = ticks as f64;
    Ok(resources.total_neurons as f64 * t * em.e_active + resources.cores as f64 * t * em.e_core_static)
}

pub fn epeff(mean_p: f64, energy: f64) -> Result<f64> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::invalid(format!("energy must be positive, got {energy}")));
    }
    Ok(mean_p / energy)
}

/// Hardware ticks one chain spends: every sweep updates two layers for `tw` ticks each.
pub fn chain_ticks(settings: &ChainSettings, n_samples: usize, tw: u32) -> u64 {
    (settings.burn_in + n_samples * settings.thin) as u64 * 2 * tw as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpeffReport {
    pub label: String,
    pub mean_p: f64,
    pub energy: f64,
    pub epeff: f64,
    pub ticks: u64,
    pub resources: ResourceEstimate,
}

impl EpeffReport {
    pub fn new(label: String, mean_p: f64, resources: ResourceEstimate, ticks: u64, em: &EnergyModel) -> Result<Self> {
        let energy = energy_estimate(&resources, ticks, em)?;
        Ok(EpeffReport {
            label,
            mean_p,
            energy,
            epeff: epeff(mean_p, energy)?,
            ticks,
            resources,
        })
    }
}

/// Index of the maximum of `values` when it is strictly inside the sequence.
pub fn interior_maximum(values: &[f64]) -> Option<usize> {
    let (idx, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    (idx > 0 && idx + 1 < values.len()).then_some(idx)
}
