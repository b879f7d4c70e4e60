//! End-to-end experiment harness: runs every configured method over seeds,
//! preference vectors and dataset cells, scores each run's best solution on
//! accuracy and fairness, and assembles comparison tables and convergence
//! curves.
//!
//! Runs are independent and execute in parallel; each derives its own
//! random stream from its coordinates, and results are reduced in a fixed
//! order, so reports are bit-identical regardless of thread count.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{cell_sim_rng, DatasetError, FieldDataset};
use crate::netsim::{simulate_constant, NetworkLayout, SimConfig, SimError, SimParams};
use crate::objective::{
    fairness_objective, jains_index, kpi_error_vector, scalarized_objective, FairnessConfig,
    KpiSeries, ObjectiveError, PreferenceVector, KPI_COUNT, KPI_NAMES,
};
use crate::optim::{run, EvalError, Method, OptimizationTrace, RunConfig};
use crate::rng::{label_hash, SeededRng};
use crate::space::{DimKind, MixedVector, SearchSpace};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("calibration space must be (continuous packet size, continuous inter-arrival mean, discrete UE count); got {0}")]
    IncompatibleSpace(String),
    #[error("dataset cell ({site}, {band}): target KPI {kpi} has no entries above the magnitude floor")]
    DegenerateTarget {
        site: String,
        band: String,
        kpi: String,
    },
    #[error("comparison needs at least two methods, report has {0}")]
    TooFewMethods(usize),
}

/// What to run: methods x preferences x dataset cells x seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub preferences: Vec<PreferenceVector>,
    pub alpha: f64,
    pub epsilon_floor: f64,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub convergence_tol: f64,
    pub pso: crate::optim::PsoConfig,
    pub bo: crate::optim::BoConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            preferences: vec![
                PreferenceVector::new(vec![0.8, 0.1, 0.1]).expect("static weights"),
                PreferenceVector::new(vec![0.1, 0.8, 0.1]).expect("static weights"),
                PreferenceVector::new(vec![0.1, 0.1, 0.8]).expect("static weights"),
            ],
            alpha: 1.0,
            epsilon_floor: crate::objective::DEFAULT_EPSILON_FLOOR,
            seeds: vec![1, 2, 3, 4, 5],
            iterations: 50,
            convergence_tol: 0.05,
            pso: crate::optim::PsoConfig::default(),
            bo: crate::optim::BoConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.methods.is_empty() {
            return Err(ExperimentError::InvalidConfig("no methods selected".into()));
        }
        if self.preferences.is_empty() {
            return Err(ExperimentError::InvalidConfig(
                "no preference vectors".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(ExperimentError::InvalidConfig("no seeds".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(ExperimentError::InvalidConfig(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(ExperimentError::InvalidConfig(
                "convergence_tol must be > 0".into(),
            ));
        }
        self.pso
            .validate()
            .map_err(ExperimentError::InvalidConfig)?;
        Ok(())
    }
}

/// Everything needed to re-run the forward model of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimContext {
    pub layout: NetworkLayout,
    pub sim: SimConfig,
    pub space: SearchSpace,
    /// Environment seed shared by dataset generation and calibration.
    pub sim_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub evaluations: usize,
    pub best_objective: f64,
}

/// One (method, preference, site, band, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: Method,
    pub preference: Vec<f64>,
    pub site: String,
    pub band: String,
    pub seed: u64,
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    pub per_kpi_mape: Vec<f64>,
    pub mean_mape: f64,
    pub jains_index: f64,
    pub convergence_iteration: usize,
    pub evaluations: usize,
    pub eval_failures: usize,
    pub trace: Vec<TracePoint>,
    /// Not serialized: wall time differs between reruns of the same seed,
    /// and report files must be bit-identical.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub runs: usize,
    pub mean_mape: f64,
    pub std_mape: f64,
    pub mean_jain: f64,
    pub std_jain: f64,
    pub mean_convergence_iteration: f64,
    pub median_convergence_iteration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceKpiSummary {
    pub preference: Vec<f64>,
    pub method: Method,
    pub mean_per_kpi_mape: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub by_method: Vec<MethodSummary>,
    pub per_kpi: Vec<PreferenceKpiSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub context: SimContext,
    pub alpha: f64,
    pub convergence_tol: f64,
    pub runs: Vec<RunRecord>,
    pub aggregates: Aggregates,
}

/// First iteration whose incumbent is within `tau` of the trace's total
/// improvement: smallest `t` with
/// `best(t) - best(T) <= tau * (best(0) - best(T))`. A flat trace converges
/// at iteration 0.
pub fn convergence_iteration(trace: &OptimizationTrace, tau: f64) -> usize {
    let first = trace.records.first().expect("trace is never empty");
    let last = trace.final_record();
    let gap = first.best_value - last.best_value;
    if !(gap > 0.0) {
        return 0;
    }
    let threshold = last.best_value + tau * gap;
    trace
        .records
        .iter()
        .position(|r| r.best_value <= threshold)
        .unwrap_or(trace.records.len() - 1)
}

fn validate_targets(dataset: &FieldDataset, floor: f64) -> Result<(), ExperimentError> {
    for ((site, band), series) in &dataset.cells {
        for (k, name) in KPI_NAMES.iter().enumerate() {
            if series.kpi(k).iter().all(|v| v.abs() < floor) {
                return Err(ExperimentError::DegenerateTarget {
                    site: site.clone(),
                    band: band.clone(),
                    kpi: (*name).to_owned(),
                });
            }
        }
    }
    Ok(())
}

fn validate_space(space: &SearchSpace) -> Result<(), ExperimentError> {
    let kinds: Vec<DimKind> = space.dims().iter().map(|d| d.kind).collect();
    if kinds != [DimKind::Continuous, DimKind::Continuous, DimKind::Discrete] {
        return Err(ExperimentError::IncompatibleSpace(format!("{kinds:?}")));
    }
    Ok(())
}

struct RunSpec<'a> {
    method: Method,
    preference: &'a PreferenceVector,
    pref_index: usize,
    site: &'a str,
    band: &'a str,
    seed: u64,
    target: &'a KpiSeries,
}

/// Stream for one run. Methods share it on purpose: matched seeds then start
/// swarm methods from identical initial designs, which tightens paired
/// comparisons.
fn run_stream(spec: &RunSpec<'_>) -> u64 {
    label_hash(&format!(
        "run/{}/{}/{}",
        spec.pref_index, spec.site, spec.band
    ))
}

/// Calibrate every (method, preference, site, band, seed) combination
/// against the dataset. `threads` limits the worker pool (`None` uses the
/// rayon default); the report does not depend on it.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    ctx: &SimContext,
    dataset: &FieldDataset,
    threads: Option<usize>,
) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    ctx.layout.validate()?;
    ctx.sim.validate()?;
    validate_space(&ctx.space)?;
    validate_targets(dataset, cfg.epsilon_floor)?;
    for (_, band) in dataset.cells.keys() {
        ctx.layout.band(band)?;
    }

    let mut specs = Vec::new();
    for method in &cfg.methods {
        for (pref_index, preference) in cfg.preferences.iter().enumerate() {
            for ((site, band), target) in &dataset.cells {
                for &seed in &cfg.seeds {
                    specs.push(RunSpec {
                        method: *method,
                        preference,
                        pref_index,
                        site,
                        band,
                        seed,
                        target,
                    });
                }
            }
        }
    }

    let runs: Result<Vec<RunRecord>, ExperimentError> = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?
            .install(|| specs.par_iter().map(|s| execute_run(cfg, ctx, s)).collect()),
        None => specs.par_iter().map(|s| execute_run(cfg, ctx, s)).collect(),
    };
    let runs = runs?;

    let aggregates = aggregate(&runs);
    Ok(ExperimentReport {
        context: ctx.clone(),
        alpha: cfg.alpha,
        convergence_tol: cfg.convergence_tol,
        runs,
        aggregates,
    })
}

fn execute_run(
    cfg: &ExperimentConfig,
    ctx: &SimContext,
    spec: &RunSpec<'_>,
) -> Result<RunRecord, ExperimentError> {
    let started = Instant::now();
    let band = ctx.layout.band(spec.band)?;
    let fairness = FairnessConfig {
        alpha: cfg.alpha,
        epsilon_floor: cfg.epsilon_floor,
    };
    let sim_rng = cell_sim_rng(ctx.sim_seed, spec.band);
    let floor = cfg.epsilon_floor;

    let forward = |x: &MixedVector| -> Result<crate::objective::ErrorVector, EvalError> {
        let params = SimParams::from_vector(x).map_err(|e| EvalError::new(e.to_string()))?;
        let sim = simulate_constant(&ctx.layout, band, params, &ctx.sim, &sim_rng)
            .map_err(|e| EvalError::new(e.to_string()))?;
        kpi_error_vector(&sim, spec.target, floor).map_err(|e| EvalError::new(e.to_string()))
    };
    let objective = |x: &MixedVector| -> Result<f64, EvalError> {
        let errors = forward(x)?;
        Ok(if spec.method.uses_fairness() {
            fairness_objective(&fairness, spec.preference, &errors)
        } else {
            scalarized_objective(spec.preference, &errors)
        })
    };

    let run_cfg = RunConfig {
        iterations: cfg.iterations,
        pso: cfg.pso,
        bo: cfg.bo,
    };
    let rng = SeededRng::new(spec.seed, run_stream(spec));
    let outcome = run(spec.method, &ctx.space, objective, &run_cfg, &rng);

    let errors = forward(&outcome.best_position).map_err(|e| {
        ExperimentError::InvalidConfig(format!(
            "re-simulating the best solution failed: {}",
            e.message
        ))
    })?;
    let record = RunRecord {
        method: spec.method,
        preference: spec.preference.weights().to_vec(),
        site: spec.site.to_owned(),
        band: spec.band.to_owned(),
        seed: spec.seed,
        best_params: outcome.best_position.values().to_vec(),
        best_objective: outcome.best_value,
        per_kpi_mape: errors.per_kpi().to_vec(),
        mean_mape: errors.mean(),
        // Fairness between the KPIs at the solution: Jain over the per-KPI
        // errors themselves (the weighted variant is preference-dominated
        // and says little about KPI balance).
        jains_index: jains_index(errors.per_kpi()),
        convergence_iteration: convergence_iteration(&outcome.trace, cfg.convergence_tol),
        evaluations: outcome.evaluations,
        eval_failures: outcome.failures.len(),
        trace: outcome
            .trace
            .records
            .iter()
            .map(|r| TracePoint {
                iteration: r.iteration,
                evaluations: r.evaluations,
                best_objective: r.best_value,
            })
            .collect(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(record)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn aggregate(runs: &[RunRecord]) -> Aggregates {
    let mut methods: Vec<Method> = runs.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();

    let by_method = methods
        .iter()
        .map(|&method| {
            let rows: Vec<&RunRecord> = runs.iter().filter(|r| r.method == method).collect();
            let mapes: Vec<f64> = rows.iter().map(|r| r.mean_mape).collect();
            let jains: Vec<f64> = rows.iter().map(|r| r.jains_index).collect();
            let mut convs: Vec<f64> = rows
                .iter()
                .map(|r| r.convergence_iteration as f64)
                .collect();
            MethodSummary {
                method,
                runs: rows.len(),
                mean_mape: mean(&mapes),
                std_mape: sample_std(&mapes),
                mean_jain: mean(&jains),
                std_jain: sample_std(&jains),
                mean_convergence_iteration: mean(&convs),
                median_convergence_iteration: median(&mut convs),
            }
        })
        .collect();

    let mut preferences: Vec<Vec<f64>> = Vec::new();
    for r in runs {
        if !preferences.contains(&r.preference) {
            preferences.push(r.preference.clone());
        }
    }
    let mut per_kpi = Vec::new();
    for preference in &preferences {
        for &method in &methods {
            let rows: Vec<&RunRecord> = runs
                .iter()
                .filter(|r| r.method == method && &r.preference == preference)
                .collect();
            if rows.is_empty() {
                continue;
            }
            let mean_per_kpi = (0..KPI_COUNT)
                .map(|k| mean(&rows.iter().map(|r| r.per_kpi_mape[k]).collect::<Vec<_>>()))
                .collect();
            per_kpi.push(PreferenceKpiSummary {
                preference: preference.clone(),
                method,
                mean_per_kpi_mape: mean_per_kpi,
            });
        }
    }

    Aggregates { by_method, per_kpi }
}

/// One row of the convergence-curve table. When a dataset has several cells
/// the objective is averaged across them, so every (method, preference,
/// seed) triple contributes `iterations + 1` rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub method: Method,
    pub preference: String,
    pub seed: u64,
    pub iteration: usize,
    pub evaluations: usize,
    pub best_objective: f64,
}

/// Comparison tables in the shape of the report's aggregate sections plus
/// per-iteration convergence curves.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTables {
    pub by_method: Vec<MethodSummary>,
    pub per_kpi: Vec<PreferenceKpiSummary>,
    pub curves: Vec<CurveRow>,
}

pub fn compare_methods(report: &ExperimentReport) -> Result<ComparisonTables, ExperimentError> {
    let methods = report.aggregates.by_method.len();
    if methods < 2 {
        return Err(ExperimentError::TooFewMethods(methods));
    }
    Ok(ComparisonTables {
        by_method: report.aggregates.by_method.clone(),
        per_kpi: report.aggregates.per_kpi.clone(),
        curves: curve_rows(&report.runs),
    })
}

/// Convergence curves straight from the per-run traces, cell-averaged.
pub fn curve_rows(runs: &[RunRecord]) -> Vec<CurveRow> {
    let mut grouped: BTreeMap<(Method, String, u64), Vec<&RunRecord>> = BTreeMap::new();
    for run in runs {
        let label = preference_label(&run.preference);
        grouped
            .entry((run.method, label, run.seed))
            .or_default()
            .push(run);
    }
    let mut rows = Vec::new();
    for ((method, preference, seed), members) in grouped {
        let points = members[0].trace.len();
        for i in 0..points {
            let best = mean(
                &members
                    .iter()
                    .map(|r| r.trace[i].best_objective)
                    .collect::<Vec<_>>(),
            );
            rows.push(CurveRow {
                method,
                preference: preference.clone(),
                seed,
                iteration: members[0].trace[i].iteration,
                evaluations: members[0].trace[i].evaluations,
                best_objective: best,
            });
        }
    }
    rows
}

pub fn preference_label(weights: &[f64]) -> String {
    weights
        .iter()
        .map(|w| format!("{w}"))
        .collect::<Vec<_>>()
        .join(":")
}

/// `method,mape_mean,mape_std,jain_mean,jain_std,conv_mean,conv_median,runs`
pub fn render_method_table_csv(rows: &[MethodSummary]) -> String {
    let mut out =
        String::from("method,mape_mean,mape_std,jain_mean,jain_std,conv_mean,conv_median,runs\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.method,
            r.mean_mape,
            r.std_mape,
            r.mean_jain,
            r.std_jain,
            r.mean_convergence_iteration,
            r.median_convergence_iteration,
            r.runs
        ));
    }
    out
}

/// `preference,method,active_ues_mape,cell_load_mape,dl_volume_mape`
pub fn render_per_kpi_table_csv(rows: &[PreferenceKpiSummary]) -> String {
    let mut out = String::from("preference,method,active_ues_mape,cell_load_mape,dl_volume_mape\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            preference_label(&r.preference),
            r.method,
            r.mean_per_kpi_mape[0],
            r.mean_per_kpi_mape[1],
            r.mean_per_kpi_mape[2]
        ));
    }
    out
}

/// `method,preference,seed,iteration,evaluations,best_objective`
pub fn render_curves_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("method,preference,seed,iteration,evaluations,best_objective\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.method, r.preference, r.seed, r.iteration, r.evaluations, r.best_objective
        ));
    }
    out
}
