//! Simulated neuromorphic samplers and their resource model.

mod analog;
mod digital;
mod resources;

pub use analog::{
    analog_lif_sample, calibrated_analog_config, gaussian_noise, run_analog_chain, run_analog_chain_counted,
    AnalogConfig, AnalogSampler,
};
pub use digital::{
    calibrated_digital_config, digital_gibbs_step, digital_gibbs_step_counted, digital_neuron_sample,
    digital_spike_prob_exact, preset_config, preset_configs, run_digital_chain, run_digital_chain_counted,
    DigitalSampler, DigitalSamplerConfig, LeakGrouping, EXACT_WINDOW_LIMIT,
};
pub use resources::{resource_estimate, ResourceEstimate, DEFAULT_CORE_SIZE};
