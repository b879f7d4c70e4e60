// Validation code negates comparisons on purpose: `!(x > 0.0)` rejects NaN
// where `x <= 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Simulator calibration toolkit for cellular-network digital twins.
//!
//! The toolkit replicates measured KPI time series (active UEs, cell load,
//! downlink volume) by searching the mixed continuous/discrete traffic
//! parameters of an embedded desk-scale cell simulator. The flagship search
//! is a mixed-variable particle swarm whose objective can be wrapped in an
//! alpha-fairness transform so no single KPI dominates the fit; random
//! search, Gaussian-process Bayesian optimization and standard PSO with
//! round-off serve as baselines. An experiment harness runs all of them
//! over seeds and preference vectors and emits comparison tables and
//! convergence curves.

pub mod dataset;
pub mod experiment;
pub mod netsim;
pub mod objective;
pub mod optim;
pub mod rng;
pub mod space;

pub use dataset::{cell_sim_rng, gen_field_dataset, DatasetError, FieldDataset, GenConfig};
pub use experiment::{
    compare_methods, convergence_iteration, run_experiment, ExperimentConfig, ExperimentError,
    ExperimentReport, SimContext,
};
pub use netsim::{NetworkLayout, SimConfig, SimError, SimParams};
pub use objective::{
    alpha_utility, fairness_objective, jains_index, kpi_error_vector, mape, scalarized_objective,
    weighted_errors, ErrorVector, FairnessConfig, KpiSeries, ObjectiveError, PreferenceVector,
};
pub use optim::{BoConfig, EvalError, Method, PsoConfig, RunConfig, RunOutcome};
pub use rng::SeededRng;
pub use space::{DimKind, DimensionSpec, MixedVector, SearchSpace, SpaceError};
