//! twincalib: calibrate a desk-scale cellular simulator against measured
//! KPI series and benchmark the search methods against each other.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliConfig, ConfigError};
use twincalib::dataset::{cell_sim_rng, gen_field_dataset, FieldDataset};
use twincalib::experiment::{
    compare_methods, render_curves_csv, render_method_table_csv, render_per_kpi_table_csv,
    run_experiment, ExperimentConfig, ExperimentReport, SimContext,
};
use twincalib::netsim::{simulate_constant, SimParams};
use twincalib::objective::PreferenceVector;
use twincalib::optim::Method;

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Data(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Data(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<twincalib::DatasetError> for CliError {
    fn from(e: twincalib::DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<twincalib::ExperimentError> for CliError {
    fn from(e: twincalib::ExperimentError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "twincalib",
    version,
    about = "Simulator calibration against measured network KPIs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (TOML). Missing sections fall back to built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed. Falls back to TWINCALIB_SEED, then the config file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic field dataset from hidden ground-truth parameters.
    GenField {
        #[command(flatten)]
        common: CommonArgs,
        /// Output CSV path (metadata sidecar and config snapshot are written next to it).
        #[arg(long)]
        out: PathBuf,
    },
    /// Forward-simulate one parameter point and write its KPI series.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameters as packet_kb,interarrival_ms,ues (defaults to the config's hidden params).
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrate one method against a dataset and write a report.
    Calibrate {
        #[command(flatten)]
        common: CommonArgs,
        /// Dataset CSV.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value = "mvpso-fair")]
        method: Method,
        /// Fairness exponent.
        #[arg(long)]
        alpha: Option<f64>,
        /// Preference weights as a,b,c (defaults to uniform).
        #[arg(long)]
        preference: Option<String>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        particles: Option<usize>,
        #[arg(long)]
        parallel: Option<usize>,
        /// Report JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every configured method over seeds and preferences; write report,
    /// comparison tables and convergence curves.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        data: Option<PathBuf>,
        /// Comma-separated method list (default from config).
        #[arg(long)]
        methods: Option<String>,
        /// Seeds as a comma list (1,2,3) or inclusive range (1..10).
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        particles: Option<usize>,
        #[arg(long)]
        parallel: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-emit convergence curves (and KPI overlays when a dataset is given)
    /// from an existing report for external plotting.
    PlotData {
        /// Report JSON produced by calibrate or compare.
        #[arg(long)]
        report: PathBuf,
        /// Dataset CSV for simulated-vs-target overlays.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twincalib: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenField { common, out } => gen_field_cmd(&common, &out),
        Command::Simulate {
            common,
            params,
            out,
        } => simulate_cmd(&common, params.as_deref(), &out),
        Command::Calibrate {
            common,
            data,
            method,
            alpha,
            preference,
            iters,
            particles,
            parallel,
            out,
        } => {
            let mut cfg = load_config(&common)?;
            cfg.experiment.methods = vec![method.name().to_owned()];
            cfg.experiment.preferences = vec![match preference.as_deref() {
                Some(text) => parse_weights(text)?,
                None => PreferenceVector::uniform().weights().to_vec(),
            }];
            cfg.experiment.seeds = vec![cfg.run.seed];
            apply_experiment_flags(&mut cfg, alpha, iters, particles, parallel);
            if let Some(data) = data {
                cfg.run.data = Some(data);
            }
            experiment_cmd(cfg, &out, false)
        }
        Command::Compare {
            common,
            data,
            methods,
            seeds,
            alpha,
            iters,
            particles,
            parallel,
            out,
        } => {
            let mut cfg = load_config(&common)?;
            if let Some(methods) = methods {
                cfg.experiment.methods =
                    methods.split(',').map(|m| m.trim().to_owned()).collect();
            }
            if let Some(seeds) = seeds {
                cfg.experiment.seeds = parse_seeds(&seeds)?;
            }
            apply_experiment_flags(&mut cfg, alpha, iters, particles, parallel);
            if let Some(data) = data {
                cfg.run.data = Some(data);
            }
            experiment_cmd(cfg, &out, true)
        }
        Command::PlotData { report, data, out } => plot_data_cmd(&report, data.as_deref(), &out),
    }
}

fn load_config(common: &CommonArgs) -> Result<CliConfig, CliError> {
    let mut cfg = CliConfig::load(common.config.as_deref())?;
    let env_seed = std::env::var("TWINCALIB_SEED")
        .ok()
        .map(|v| {
            v.parse::<u64>().map_err(|_| {
                CliError::Usage(format!("TWINCALIB_SEED must be an integer, got {v:?}"))
            })
        })
        .transpose()?;
    if let Some(seed) = common.seed.or(env_seed) {
        cfg.run.seed = seed;
    }
    let context = common
        .config
        .as_deref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "<defaults>".to_owned());
    cfg.validate(&context)?;
    Ok(cfg)
}

fn apply_experiment_flags(
    cfg: &mut CliConfig,
    alpha: Option<f64>,
    iters: Option<usize>,
    particles: Option<usize>,
    parallel: Option<usize>,
) {
    if let Some(alpha) = alpha {
        cfg.experiment.alpha = alpha;
    }
    if let Some(iters) = iters {
        cfg.experiment.iterations = iters;
        cfg.experiment.pso.iterations = iters;
    }
    if let Some(particles) = particles {
        cfg.experiment.pso.num_particles = particles;
    }
    if let Some(parallel) = parallel {
        cfg.run.parallel = Some(parallel);
    }
}

fn parse_weights(text: &str) -> Result<Vec<f64>, CliError> {
    let weights = text
        .split(',')
        .map(|w| w.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("invalid --preference {text:?}: {e}")))?;
    PreferenceVector::new(weights.clone())
        .map_err(|e| CliError::Config(format!("invalid --preference {text:?}: {e}")))?;
    Ok(weights)
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |detail: &dyn std::fmt::Display| {
        CliError::Usage(format!("invalid --seeds {text:?}: {detail}"))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|e| bad(&e))?;
        let hi: u64 = hi.trim().parse().map_err(|e| bad(&e))?;
        if lo > hi {
            return Err(bad(&"range start exceeds end"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|e| bad(&e)))
        .collect()
}

fn gen_field_cmd(common: &CommonArgs, out: &Path) -> Result<(), CliError> {
    let cfg = load_config(common)?;
    let space = cfg.space("gen-field")?;
    let dataset = gen_field_dataset(&cfg.layout, &cfg.sim, &cfg.gen, &space, cfg.run.seed)?;
    dataset.write_csv(out)?;
    dataset.write_meta(out)?;
    let snapshot = cfg
        .write_snapshot(out, false)
        .map_err(|e| io_err(out, e))?;
    println!(
        "wrote {} rows to {} (metadata {}, config snapshot {})",
        dataset.rows().len(),
        out.display(),
        FieldDataset::meta_path(out).display(),
        snapshot.display()
    );
    Ok(())
}

fn simulate_cmd(common: &CommonArgs, params: Option<&str>, out: &Path) -> Result<(), CliError> {
    let cfg = load_config(common)?;
    let space = cfg.space("simulate")?;
    let params = match params {
        Some(text) => {
            let values = text
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("invalid --params {text:?}: {e}")))?;
            let clamped = space
                .clamp(&values.into())
                .map_err(|e| CliError::Config(format!("invalid --params {text:?}: {e}")))?;
            SimParams::from_vector(&clamped)
                .map_err(|e| CliError::Config(format!("invalid --params {text:?}: {e}")))?
        }
        None => cfg.gen.hidden_params,
    };

    let mut cells = std::collections::BTreeMap::new();
    for band in &cfg.layout.bands {
        let series = simulate_constant(
            &cfg.layout,
            band,
            params,
            &cfg.sim,
            &cell_sim_rng(cfg.run.seed, &band.label),
        )
        .map_err(|e| CliError::Data(e.to_string()))?;
        cells.insert(("sim".to_owned(), band.label.clone()), series);
    }
    let dataset = FieldDataset {
        meta: twincalib::dataset::DatasetMeta {
            interval_minutes: cfg.sim.interval_minutes,
            intervals: cfg.sim.intervals,
            seed: cfg.run.seed,
            observation_noise: 0.0,
            hidden_params: Vec::new(),
        },
        cells,
    };
    dataset.write_csv(out)?;
    cfg.write_snapshot(out, false).map_err(|e| io_err(out, e))?;
    println!("simulated {params:?} -> {}", out.display());
    Ok(())
}

fn build_context(cfg: &CliConfig, dataset: &FieldDataset) -> Result<SimContext, CliError> {
    Ok(SimContext {
        layout: cfg.layout.clone(),
        sim: cfg.sim.clone(),
        space: cfg.space("experiment")?,
        sim_seed: cfg.run.sim_seed.unwrap_or(dataset.meta.seed),
    })
}

fn experiment_cmd(cfg: CliConfig, out: &Path, compare: bool) -> Result<(), CliError> {
    let data_path = cfg.run.data.clone().ok_or_else(|| {
        CliError::Usage("--data is required (or set run.data in the config)".into())
    })?;
    let dataset = FieldDataset::read_csv(&data_path)?;
    let experiment: ExperimentConfig = cfg.experiment.resolve("experiment")?;
    let ctx = build_context(&cfg, &dataset)?;

    let started = std::time::Instant::now();
    let report = run_experiment(&experiment, &ctx, &dataset, cfg.run.parallel)?;
    let elapsed = started.elapsed().as_secs_f64();

    if compare {
        std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
        let tables = compare_methods(&report)?;
        write_report(&report, &out.join("report.json"))?;
        write_text(
            &out.join("mape_by_method.csv"),
            &render_method_table_csv(&tables.by_method),
        )?;
        write_text(
            &out.join("mape_per_kpi.csv"),
            &render_per_kpi_table_csv(&tables.per_kpi),
        )?;
        write_text(&out.join("curves.csv"), &render_curves_csv(&tables.curves))?;
        cfg.write_snapshot(out, true).map_err(|e| io_err(out, e))?;
        print_summary(&report);
        println!(
            "{} runs in {elapsed:.1} s -> {}",
            report.runs.len(),
            out.display()
        );
    } else {
        write_report(&report, out)?;
        cfg.write_snapshot(out, false).map_err(|e| io_err(out, e))?;
        for run in &report.runs {
            println!(
                "{} ({}, {}) seed {}: mean MAPE {:.2}% per-KPI [{:.2}, {:.2}, {:.2}]%, Jain {:.3}, converged at iteration {}",
                run.method,
                run.site,
                run.band,
                run.seed,
                run.mean_mape,
                run.per_kpi_mape[0],
                run.per_kpi_mape[1],
                run.per_kpi_mape[2],
                run.jains_index,
                run.convergence_iteration
            );
        }
        println!("report -> {}", out.display());
    }
    Ok(())
}

fn print_summary(report: &ExperimentReport) {
    println!("method        runs  MAPE mean+-std      Jain mean+-std    conv median");
    for row in &report.aggregates.by_method {
        println!(
            "{:<13} {:>4}  {:>7.2} +- {:<7.2}  {:.3} +- {:.3}    {:>6.1}",
            row.method.to_string(),
            row.runs,
            row.mean_mape,
            row.std_mape,
            row.mean_jain,
            row.std_jain,
            row.median_convergence_iteration
        );
    }
}

fn write_report(report: &ExperimentReport, path: &Path) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Data(format!("serializing report: {e}")))?;
    write_text(path, &json)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn plot_data_cmd(report_path: &Path, data: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(report_path).map_err(|e| io_err(report_path, e))?;
    let report: ExperimentReport = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", report_path.display())))?;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;

    let curves = twincalib::experiment::curve_rows(&report.runs);
    write_text(&out.join("curves.csv"), &render_curves_csv(&curves))?;

    if let Some(data_path) = data {
        let dataset = FieldDataset::read_csv(data_path)?;
        let mut overlay =
            String::from("site,band,method,preference,seed,interval,kpi,target,simulated\n");
        for run in &report.runs {
            let target = dataset.cell(&run.site, &run.band).ok_or_else(|| {
                CliError::Data(format!("dataset has no cell ({}, {})", run.site, run.band))
            })?;
            let band = report
                .context
                .layout
                .band(&run.band)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let params = SimParams::from_vector(&run.best_params.clone().into())
                .map_err(|e| CliError::Data(e.to_string()))?;
            let sim = simulate_constant(
                &report.context.layout,
                band,
                params,
                &report.context.sim,
                &cell_sim_rng(report.context.sim_seed, &run.band),
            )
            .map_err(|e| CliError::Data(e.to_string()))?;
            let pref = twincalib::experiment::preference_label(&run.preference);
            for (k, name) in twincalib::objective::KPI_NAMES.iter().enumerate() {
                for i in 0..sim.intervals() {
                    overlay.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        run.site,
                        run.band,
                        run.method,
                        pref,
                        run.seed,
                        i,
                        name,
                        target.kpi(k)[i],
                        sim.kpi(k)[i]
                    ));
                }
            }
        }
        write_text(&out.join("kpi_overlay.csv"), &overlay)?;
    }
    println!("plot data -> {}", out.display());
    Ok(())
}
