//! Black-box search strategies behind one budgeted runner: random search,
//! Bayesian optimization, standard PSO with round-off, and mixed-variable
//! PSO with a dedicated discrete reproduction rule.

pub mod bo;
pub mod pso;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeededRng;
use crate::space::{MixedVector, SearchSpace};

pub use bo::{bo_suggest, expected_improvement, GpModel};
pub use pso::{
    discrete_reproduce, discrete_reproduce_with, mvpso_step, position_update, standard_pso_step,
    velocity_update, velocity_update_with, Particle, Swarm,
};

/// Search strategies compared by the harness. `mvpso-fair` is the
/// mixed-variable swarm; the fairness transform is applied by whoever
/// builds its objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Random,
    Bo,
    Pso,
    MvpsoFair,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Random, Method::Bo, Method::Pso, Method::MvpsoFair];

    pub fn name(self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::Bo => "bo",
            Method::Pso => "pso",
            Method::MvpsoFair => "mvpso-fair",
        }
    }

    /// Whether the harness wraps this method's objective in the
    /// alpha-fairness transform.
    pub fn uses_fairness(self) -> bool {
        matches!(self, Method::MvpsoFair)
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Method::Random),
            "bo" => Ok(Method::Bo),
            "pso" => Ok(Method::Pso),
            "mvpso-fair" => Ok(Method::MvpsoFair),
            other => Err(format!(
                "unknown method {other:?} (expected one of: random, bo, pso, mvpso-fair)"
            )),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An objective evaluation that the black box refused.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("objective evaluation failed: {message}")]
pub struct EvalError {
    pub message: String,
}

impl EvalError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

/// Swarm hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub num_particles: usize,
    pub iterations: usize,
    /// Inertia weight `w`.
    pub inertia: f64,
    /// Cognitive coefficient `c1` (pull toward the personal best).
    pub cognitive: f64,
    /// Social coefficient `c2` (pull toward the global best).
    pub social: f64,
    /// Per-dimension speed limit as a fraction of the dimension's range.
    pub v_max_fraction: f64,
    /// Probability that a discrete entry mutates to a uniform feasible value
    /// during mixed-variable reproduction.
    pub mutation_rate: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            num_particles: 5,
            iterations: 50,
            inertia: 1.1,
            cognitive: 1.1,
            social: 0.8,
            v_max_fraction: 0.2,
            mutation_rate: 0.1,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.num_particles < 1 {
            return Err("num_particles must be >= 1".into());
        }
        if self.inertia < 0.0 || self.cognitive < 0.0 || self.social < 0.0 {
            return Err("inertia, cognitive and social coefficients must be >= 0".into());
        }
        if !(self.v_max_fraction > 0.0 && self.v_max_fraction <= 1.0) {
            return Err("v_max_fraction must lie in (0, 1]".into());
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err("mutation_rate must lie in [0, 1]".into());
        }
        Ok(())
    }
}

/// Gaussian-process surrogate settings for the Bayesian baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoConfig {
    /// Uniform samples before the surrogate takes over.
    pub init_design: usize,
    /// Uniform candidates scored by expected improvement per suggestion.
    pub candidates: usize,
    /// Squared-exponential length scale on the unit cube.
    pub length_scale: f64,
    /// Diagonal jitter added to the kernel matrix.
    pub jitter: f64,
    /// Jitter escalation ceiling before falling back to a random suggestion.
    pub max_jitter: f64,
}

impl Default for BoConfig {
    fn default() -> Self {
        Self {
            init_design: 5,
            candidates: 1024,
            length_scale: 0.2,
            jitter: 1e-6,
            max_jitter: 1e-2,
        }
    }
}

/// Budget shared by all methods: random search and BO evaluate one point per
/// iteration, swarm methods evaluate `num_particles`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub iterations: usize,
    pub pso: PsoConfig,
    pub bo: BoConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            iterations: 50,
            pso: PsoConfig::default(),
            bo: BoConfig::default(),
        }
    }
}

/// One row of a run's history: the incumbent after a given iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub evaluations: usize,
    pub best_value: f64,
    pub best_position: MixedVector,
}

/// Per-iteration incumbent history; `records[0]` is the initial design and
/// `best_value` never increases along the records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptimizationTrace {
    pub records: Vec<TraceRecord>,
}

impl OptimizationTrace {
    pub fn push(&mut self, record: TraceRecord) {
        if let Some(last) = self.records.last() {
            debug_assert!(
                record.best_value <= last.best_value,
                "incumbent worsened: {} -> {}",
                last.best_value,
                record.best_value
            );
        }
        self.records.push(record);
    }

    pub fn final_record(&self) -> &TraceRecord {
        self.records.last().expect("trace is never empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalFailure {
    pub iteration: usize,
    pub detail: String,
}

/// Result of one budgeted run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub method: Method,
    pub trace: OptimizationTrace,
    pub best_position: MixedVector,
    pub best_value: f64,
    pub evaluations: usize,
    pub failures: Vec<EvalFailure>,
}

/// Run `method` for `cfg.iterations` iterations. The trace always holds
/// `iterations + 1` records (the initial design plus one per iteration) and
/// reruns with the same `rng` are bit-identical.
pub fn run<F>(
    method: Method,
    space: &SearchSpace,
    objective: F,
    cfg: &RunConfig,
    rng: &SeededRng,
) -> RunOutcome
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    match method {
        Method::Random | Method::Bo => run_sampling(method, space, objective, cfg, rng),
        Method::Pso | Method::MvpsoFair => run_swarm(method, space, objective, cfg, rng),
    }
}

/// Random-search proposal: an independent uniform draw over the space.
pub fn random_search_suggest(space: &SearchSpace, rng: &mut SeededRng) -> MixedVector {
    space.sample_uniform(rng)
}

fn run_sampling<F>(
    method: Method,
    space: &SearchSpace,
    objective: F,
    cfg: &RunConfig,
    rng: &SeededRng,
) -> RunOutcome
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    let suggest_root = rng.derive_label("suggest");
    let mut history: Vec<(MixedVector, f64)> = Vec::with_capacity(cfg.iterations + 1);
    let mut failures = Vec::new();
    let mut trace = OptimizationTrace::default();
    let mut best: Option<(MixedVector, f64)> = None;
    let mut evaluations = 0usize;

    for iteration in 0..=cfg.iterations {
        let mut step_rng = suggest_root.derive(iteration as u64);
        let candidate = match method {
            Method::Random => random_search_suggest(space, &mut step_rng),
            Method::Bo => bo::bo_suggest(&history, space, &mut step_rng, &cfg.bo),
            _ => unreachable!("sampling runner only handles random/bo"),
        };
        evaluations += 1;
        match objective(&candidate) {
            Ok(value) => {
                let better = best.as_ref().is_none_or(|(_, b)| value < *b);
                if better {
                    best = Some((candidate.clone(), value));
                }
                history.push((candidate, value));
            }
            Err(err) => {
                failures.push(EvalFailure {
                    iteration,
                    detail: err.message,
                });
                if best.is_none() {
                    best = Some((candidate, f64::INFINITY));
                }
            }
        }
        let (pos, val) = best.clone().expect("set on every path above");
        trace.push(TraceRecord {
            iteration,
            evaluations,
            best_value: val,
            best_position: pos,
        });
    }

    let last = trace.final_record().clone();
    RunOutcome {
        method,
        trace,
        best_position: last.best_position,
        best_value: last.best_value,
        evaluations,
        failures,
    }
}

fn run_swarm<F>(
    method: Method,
    space: &SearchSpace,
    objective: F,
    cfg: &RunConfig,
    rng: &SeededRng,
) -> RunOutcome
where
    F: Fn(&MixedVector) -> Result<f64, EvalError>,
{
    let mixed = matches!(method, Method::MvpsoFair);
    let mut failures = Vec::new();
    let mut swarm = Swarm::init(space, &cfg.pso, &objective, rng, mixed, &mut failures);
    let mut evaluations = cfg.pso.num_particles;
    let mut trace = OptimizationTrace::default();
    trace.push(TraceRecord {
        iteration: 0,
        evaluations,
        best_value: swarm.best_value,
        best_position: swarm.best_position.clone(),
    });

    for iteration in 1..=cfg.iterations {
        let step_evals = if mixed {
            mvpso_step(&cfg.pso, space, &mut swarm, &objective, iteration, &mut failures)
        } else {
            standard_pso_step(&cfg.pso, space, &mut swarm, &objective, iteration, &mut failures)
        };
        evaluations += step_evals;
        trace.push(TraceRecord {
            iteration,
            evaluations,
            best_value: swarm.best_value,
            best_position: swarm.best_position.clone(),
        });
    }

    RunOutcome {
        method,
        trace,
        best_position: swarm.best_position.clone(),
        best_value: swarm.best_value,
        evaluations,
        failures,
    }
}
