//! Files in and out: models, sample dumps, IDX images, synthetic data, run
//! configuration and reports.

mod config;
mod dump;
mod idx;
mod model_file;
mod report;
mod synth;

pub use config::{DataSource, ModelSource, RunConfig, SamplerEntry, SamplerEntrySpec};
pub use dump::{batch_from_str, batch_to_string, load_batch, save_batch, DUMP_MAGIC};
pub use idx::{encode_idx_images, load_idx_images, parse_idx_images, DEFAULT_THRESHOLD, IDX3_MAGIC};
pub use model_file::{load_model, model_from_str, model_to_string, save_model, MODEL_MAGIC};
pub use report::{
    bar_chart_svg, epeff_csv, line_chart_svg, parse_epeff_csv, parse_trials_csv, to_json, trials_csv, write_file,
    EpeffRow, NullCheckSummary, TrialRow, EPEFF_COLUMNS, TRIAL_COLUMNS,
};
pub use synth::{synth_dataset, SynthKind};
