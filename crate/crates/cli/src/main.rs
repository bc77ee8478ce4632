use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use neurogibbs::crossmatch::{crossmatch_test, MatchingMethod};
use neurogibbs::harness::{
    interior_maximum, leak_density_sweep, parameter_sweep, run_trial_outcomes, PValueStats, PlanTemplate, SamplerSide,
    SamplerSpec, TrialPlan,
};
use neurogibbs::io::{
    bar_chart_svg, epeff_csv, line_chart_svg, load_batch, load_idx_images, load_model, save_batch, save_model,
    synth_dataset, to_json, trials_csv, write_file, ModelSource, NullCheckSummary, RunConfig, SamplerEntry, SynthKind,
};
use neurogibbs::neuro::{preset_config, preset_configs, DigitalSamplerConfig};
use neurogibbs::rbm::{cd1_train, RbmModel, TrainParams};
use neurogibbs::{harness, rng};

#[derive(Parser)]
#[command(
    name = "neurogibbs",
    version,
    about = "Crossmatch evaluation of neuromorphic RBM samplers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every random choice the command makes.
    #[arg(long)]
    seed: u64,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config; default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["optimal", "greedy"])]
    matching: Option<String>,
    /// Number of Crossmatch trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Samples per group in each trial.
    #[arg(long)]
    n_per_trial: Option<usize>,
    /// Model file (overrides the config's model source).
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train an RBM with CD-1 and write a model file.
    Train {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: TrainArgs,
    },
    /// Draw a sample dump from one sampler.
    Sample {
        #[command(flatten)]
        common: Common,
        /// `ideal`, `G1`…`G7`, or a sampler label from the config.
        #[arg(long, default_value = "ideal")]
        sampler: String,
        /// Number of samples (default: the plan's n_per_trial).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Crossmatch test between two sample dumps.
    Test {
        #[command(flatten)]
        common: Common,
        x: PathBuf,
        y: PathBuf,
    },
    /// Ideal sampler against each digital configuration, ranked by EPEff.
    SweepParams {
        #[command(flatten)]
        common: Common,
    },
    /// One digital configuration at several leak densities.
    SweepLeak {
        #[command(flatten)]
        common: Common,
        /// Digital sampler to sweep (default: the first digital sampler in the config, else G2).
        #[arg(long)]
        sampler: Option<String>,
        /// Comma-separated leak densities.
        #[arg(long, value_delimiter = ',')]
        densities: Option<Vec<usize>>,
    },
    /// A sampler against itself: p-values should look uniform.
    NullCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "ideal")]
        sampler: String,
    },
}

#[derive(Args)]
struct TrainArgs {
    /// IDX3 image file to train on.
    #[arg(long, conflicts_with = "synth")]
    idx: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Use at most this many images.
    #[arg(long)]
    limit: Option<usize>,
    /// Synthetic dataset: two-cluster or bars.
    #[arg(long)]
    synth: Option<SynthKind>,
    #[arg(long, default_value_t = 16)]
    visible: usize,
    #[arg(long, default_value_t = 500)]
    count: usize,
    /// Bit-flip probability for synthetic rows.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 8)]
    hidden: usize,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
}

/// Config, plan template and output directory shared by all subcommands.
struct Run {
    seed: u64,
    config: RunConfig,
    base: PathBuf,
    plan: PlanTemplate,
    out: PathBuf,
    model_override: Option<PathBuf>,
}

impl Run {
    fn new(c: &Common) -> Result<Self> {
        let (config, base) = match &c.config {
            Some(p) => (
                RunConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
            ),
            None => (RunConfig::default(), PathBuf::from(".")),
        };
        let mut plan = config.plan.clone();
        plan.base_seed = c.seed;
        if let Some(t) = c.trials {
            plan.num_trials = t;
        }
        if let Some(n) = c.n_per_trial {
            plan.n_per_trial = n;
        }
        if let Some(m) = &c.matching {
            plan.matching = m.parse::<MatchingMethod>()?.into();
        }
        let out = c
            .out
            .clone()
            .or_else(|| config.out.as_ref().map(|o| base.join(o)))
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok(Run {
            seed: c.seed,
            config,
            base,
            plan,
            out,
            model_override: c.model.clone(),
        })
    }

    fn model(&self) -> Result<Arc<RbmModel>> {
        let m = match &self.model_override {
            Some(p) => load_model(p).with_context(|| format!("loading model {}", p.display()))?,
            None => self.config.model.build(&self.base, rng::derive_seed(self.seed, &[1]))?,
        };
        Ok(Arc::new(m))
    }

    /// Looks a sampler up by name: `ideal`, a table label, or a config label.
    fn sampler(&self, name: &str) -> Result<SamplerSpec> {
        if let Some(e) = self.config.samplers.iter().find(|e| e.label == name) {
            return Ok(e.resolve()?);
        }
        if name == "ideal" {
            return Ok(SamplerSpec::Ideal);
        }
        if let Some(c) = preset_config(name) {
            return Ok(SamplerSpec::Digital(c));
        }
        bail!("unknown sampler '{name}' (use ideal, G1..G7 or a label from the config)")
    }

    fn digital_configs(&self) -> Result<Vec<(String, DigitalSamplerConfig)>> {
        if self.config.samplers.is_empty() {
            return Ok(preset_configs());
        }
        self.config
            .samplers
            .iter()
            .map(|e: &SamplerEntry| Ok((e.label.clone(), e.digital()?)))
            .collect()
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        write_file(&self.out, name, contents).with_context(|| format!("writing {}", self.out.join(name).display()))
    }
}

fn train(common: &Common, a: &TrainArgs) -> Result<()> {
    let ctx = Run::new(common)?;
    let data_seed = rng::derive_seed(ctx.seed, &[2]);
    let (data, hidden, mut params) = match (&a.idx, a.synth, &ctx.config.model) {
        (Some(p), _, _) => {
            let mut d = load_idx_images(p, a.threshold).with_context(|| format!("reading {}", p.display()))?;
            if let Some(k) = a.limit.filter(|&k| k < d.rows()) {
                d = d.permuted(&(0..k).collect::<Vec<_>>());
            }
            (d, a.hidden, TrainParams::default())
        }
        (None, Some(kind), _) => (
            synth_dataset(kind, a.visible, a.count, a.noise, data_seed)?,
            a.hidden,
            TrainParams::default(),
        ),
        (None, None, ModelSource::Train { data, hidden, params }) => {
            (data.load(&ctx.base, data_seed)?, *hidden, params.clone())
        }
        _ => bail!("train needs --idx, --synth, or a config whose model kind is \"train\""),
    };
    if let Some(e) = a.epochs {
        params.epochs = e;
    }
    if let Some(lr) = a.learning_rate {
        params.learning_rate = lr;
    }
    let outcome = cd1_train(&data, data.cols(), hidden, &params, rng::derive_seed(ctx.seed, &[3]))?;
    std::fs::create_dir_all(&ctx.out)?;
    save_model(&outcome.model, ctx.out.join("model.txt"))?;
    ctx.write("training.json", &to_json(&outcome.reconstruction_error)?)?;
    eprintln!(
        "trained {}x{} on {} rows; final reconstruction error {:.4}",
        data.cols(),
        hidden,
        data.rows(),
        outcome.reconstruction_error.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn sample(common: &Common, sampler: &str, n: Option<usize>) -> Result<()> {
    let ctx = Run::new(common)?;
    let side = SamplerSide::new(ctx.sampler(sampler)?, ctx.model()?, ctx.plan.settings.clone());
    let batch = side.generate(n.unwrap_or(ctx.plan.n_per_trial), ctx.seed)?;
    std::fs::create_dir_all(&ctx.out)?;
    save_batch(&batch, ctx.out.join("samples.txt"))?;
    Ok(())
}

fn test(common: &Common, x: &Path, y: &Path) -> Result<()> {
    let ctx = Run::new(common)?;
    let xb = load_batch(x).with_context(|| format!("reading {}", x.display()))?;
    let yb = load_batch(y).with_context(|| format!("reading {}", y.display()))?;
    let outcome = crossmatch_test(&xb, &yb, ctx.plan.matching, ctx.seed)?;
    let json = to_json(&outcome)?;
    ctx.write("crossmatch.json", &json)?;
    print!("{json}");
    Ok(())
}

fn labels(reports: &[harness::EpeffReport]) -> Vec<String> {
    reports.iter().map(|r| r.label.clone()).collect()
}

fn sweep_params(common: &Common) -> Result<()> {
    let ctx = Run::new(common)?;
    let model = ctx.model()?;
    let reports = parameter_sweep(&model, &ctx.digital_configs()?, &ctx.plan, &ctx.config.energy)?;
    ctx.write("sweep_params.csv", &epeff_csv(&reports)?)?;
    ctx.write("sweep_params.json", &to_json(&reports)?)?;
    let epeffs: Vec<f64> = reports.iter().map(|r| r.epeff).collect();
    ctx.write(
        "sweep_params.svg",
        &bar_chart_svg("EPEff by sampler configuration", "EPEff", &labels(&reports), &epeffs)?,
    )?;
    print!("{}", epeff_csv(&reports)?);
    Ok(())
}

fn sweep_leak(common: &Common, sampler: Option<&str>, densities: Option<Vec<usize>>) -> Result<()> {
    let ctx = Run::new(common)?;
    let model = ctx.model()?;
    let cfg = match sampler {
        Some(name) => match ctx.sampler(name)? {
            SamplerSpec::Digital(c) => c,
            _ => bail!("sampler '{name}' is not digital"),
        },
        None => match ctx.config.samplers.iter().find_map(|e| e.digital().ok()) {
            Some(c) => c,
            None => preset_config("G2").expect("G2 is a preset"),
        },
    };
    let densities = densities.unwrap_or_else(|| ctx.config.densities_for(&model));
    let reports = leak_density_sweep(&model, &cfg, &densities, &ctx.plan, &ctx.config.energy)?;
    ctx.write("sweep_leak.csv", &epeff_csv(&reports)?)?;
    ctx.write("sweep_leak.json", &to_json(&reports)?)?;
    let l = labels(&reports);
    let mean_p: Vec<f64> = reports.iter().map(|r| r.mean_p).collect();
    let epeffs: Vec<f64> = reports.iter().map(|r| r.epeff).collect();
    ctx.write(
        "sweep_leak_mean_p.svg",
        &line_chart_svg("Mean p-value by leak density", "mean p", &l, &mean_p)?,
    )?;
    ctx.write(
        "sweep_leak_epeff.svg",
        &line_chart_svg("EPEff by leak density", "EPEff", &l, &epeffs)?,
    )?;
    print!("{}", epeff_csv(&reports)?);
    match interior_maximum(&epeffs) {
        Some(k) => eprintln!("EPEff peaks inside the sweep at {}", reports[k].label),
        None => eprintln!("EPEff has no interior maximum over this sweep"),
    }
    Ok(())
}

fn null_check(common: &Common, sampler: &str) -> Result<()> {
    let ctx = Run::new(common)?;
    let model = ctx.model()?;
    let spec = ctx.sampler(sampler)?;
    let plan: TrialPlan = ctx.plan.plan(&model, spec.clone(), spec);
    let outcomes = run_trial_outcomes(&plan)?;
    let p: Vec<f64> = outcomes.iter().map(|o| o.p_value).collect();
    let stats: PValueStats = harness::pvalue_stats(&p)?;
    let summary = NullCheckSummary::new(sampler.to_string(), plan.n_per_trial, &stats);
    ctx.write("null_check.csv", &trials_csv(&outcomes)?)?;
    ctx.write("null_check.json", &to_json(&summary)?)?;
    print!("{}", to_json(&summary)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { common, args } => train(&common, &args),
        Command::Sample { common, sampler, n } => sample(&common, &sampler, n),
        Command::Test { common, x, y } => test(&common, &x, &y),
        Command::SweepParams { common } => sweep_params(&common),
        Command::SweepLeak {
            common,
            sampler,
            densities,
        } => sweep_leak(&common, sampler.as_deref(), densities),
        Command::NullCheck { common, sampler } => null_check(&common, &sampler),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            for cause in e.chain().skip(1) {
                eprintln!("  caused by: {cause}");
            }
            ExitCode::FAILURE
        }
    }
}
