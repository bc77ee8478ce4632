use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{chain_ticks, run_trials, EnergyModel, EpeffReport, SamplerSide, SamplerSpec, TrialPlan};
use crate::crossmatch::MatchingChoice;
use crate::error::{Error, Result};
use crate::neuro::{resource_estimate, DigitalSamplerConfig};
use crate::rbm::{ChainSettings, RbmModel};

/// Trial-plan fields shared by every configuration of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlanTemplate {
    pub settings: ChainSettings,
    pub n_per_trial: usize,
    pub num_trials: usize,
    pub base_seed: u64,
    pub matching: MatchingChoice,
}

impl Default for PlanTemplate {
    fn default() -> Self {
        PlanTemplate {
            settings: ChainSettings::default(),
            n_per_trial: 50,
            num_trials: 2000,
            base_seed: 0,
            matching: MatchingChoice::Auto,
        }
    }
}

impl PlanTemplate {
    pub fn plan(&self, model: &Arc<RbmModel>, a: SamplerSpec, b: SamplerSpec) -> TrialPlan {
        TrialPlan {
            side_a: SamplerSide::new(a, model.clone(), self.settings.clone()),
            side_b: SamplerSide::new(b, model.clone(), self.settings.clone()),
            n_per_trial: self.n_per_trial,
            num_trials: self.num_trials,
            base_seed: self.base_seed,
            matching: self.matching,
        }
    }

    fn digital_ticks(&self, cfg: &DigitalSamplerConfig) -> u64 {
        chain_ticks(&self.settings, self.n_per_trial, cfg.tw)
    }
}

/// Ideal sampler against each digital configuration; reports sorted by EPEff, best first.
pub fn parameter_sweep(
    model: &Arc<RbmModel>,
    configs: &[(String, DigitalSamplerConfig)],
    template: &PlanTemplate,
    em: &EnergyModel,
) -> Result<Vec<EpeffReport>> {
    if configs.is_empty() {
        return Err(Error::Empty("sampler configurations"));
    }
    let units = model.visible() + model.hidden();
    let mut reports = configs
        .iter()
        .map(|(label, cfg)| {
            let stats = run_trials(&template.plan(model, SamplerSpec::Ideal, SamplerSpec::Digital(cfg.clone())))?;
            let resources = resource_estimate(units, cfg.leak_density, em.core_size)?;
            EpeffReport::new(label.clone(), stats.mean_p, resources, template.digital_ticks(cfg), em)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| b.epeff.total_cmp(&a.epeff));
    Ok(reports)
}

/// `cfg` at leak density 1 against `cfg` at each density; reports in input order.
pub fn leak_density_sweep(
    model: &Arc<RbmModel>,
    cfg: &DigitalSamplerConfig,
    densities: &[usize],
    template: &PlanTemplate,
    em: &EnergyModel,
) -> Result<Vec<EpeffReport>> {
    if densities.is_empty() {
        return Err(Error::Empty("leak densities"));
    }
    let units = model.visible() + model.hidden();
    let reference = SamplerSpec::Digital(cfg.clone().with_leak_density(1));
    densities
        .iter()
        .map(|&ld| {
            let shared = cfg.clone().with_leak_density(ld);
            let stats = run_trials(&template.plan(model, reference.clone(), SamplerSpec::Digital(shared.clone())))?;
            let resources = resource_estimate(units, ld, em.core_size)?;
            EpeffReport::new(
                format!("ld={ld}"),
                stats.mean_p,
                resources,
                template.digital_ticks(&shared),
                em,
            )
        })
        .collect()
}
