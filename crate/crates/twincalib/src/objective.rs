//! Replication-error objectives: per-KPI percentage errors, preference
//! scalarization, alpha-fairness utilities, and Jain's fairness index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three KPIs tracked per cell, in encoding order.
pub const KPI_COUNT: usize = 3;
pub const KPI_NAMES: [&str; KPI_COUNT] = ["active_ues", "cell_load", "dl_volume_mb"];

/// Default magnitude floor used both to exclude near-zero targets from the
/// percentage error and to keep the log utility finite.
pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ObjectiveError {
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series must contain at least one interval")]
    Empty,
    #[error("all target entries are below the magnitude floor {floor:e}; percentage error is undefined")]
    UndefinedTarget { floor: f64 },
    #[error("preference weights must be positive and sum to 1 (got {detail})")]
    InvalidPreference { detail: String },
    #[error("invalid KPI series: {0}")]
    InvalidSeries(String),
    #[error("alpha must be >= 0 (got {0})")]
    InvalidAlpha(f64),
}

/// KPI time series for one (site, band) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiSeries {
    active_ues: Vec<f64>,
    cell_load: Vec<f64>,
    dl_volume_mb: Vec<f64>,
}

impl KpiSeries {
    pub fn new(
        active_ues: Vec<f64>,
        cell_load: Vec<f64>,
        dl_volume_mb: Vec<f64>,
    ) -> Result<Self, ObjectiveError> {
        if active_ues.len() != cell_load.len() || cell_load.len() != dl_volume_mb.len() {
            return Err(ObjectiveError::InvalidSeries(format!(
                "KPI arrays differ in length: {}/{}/{}",
                active_ues.len(),
                cell_load.len(),
                dl_volume_mb.len()
            )));
        }
        if active_ues.is_empty() {
            return Err(ObjectiveError::Empty);
        }
        if active_ues.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(ObjectiveError::InvalidSeries(
                "active_ues entries must be finite and >= 0".into(),
            ));
        }
        if cell_load
            .iter()
            .any(|&v| !(0.0..=1.0).contains(&v) || !v.is_finite())
        {
            return Err(ObjectiveError::InvalidSeries(
                "cell_load entries must lie in [0, 1]".into(),
            ));
        }
        if dl_volume_mb.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(ObjectiveError::InvalidSeries(
                "dl_volume_mb entries must be finite and >= 0".into(),
            ));
        }
        Ok(Self {
            active_ues,
            cell_load,
            dl_volume_mb,
        })
    }

    pub fn intervals(&self) -> usize {
        self.active_ues.len()
    }

    pub fn active_ues(&self) -> &[f64] {
        &self.active_ues
    }

    pub fn cell_load(&self) -> &[f64] {
        &self.cell_load
    }

    pub fn dl_volume_mb(&self) -> &[f64] {
        &self.dl_volume_mb
    }

    /// KPI column by index, in [`KPI_NAMES`] order.
    pub fn kpi(&self, index: usize) -> &[f64] {
        match index {
            0 => &self.active_ues,
            1 => &self.cell_load,
            2 => &self.dl_volume_mb,
            _ => panic!("KPI index {index} out of range"),
        }
    }
}

/// Positive weights over the KPIs, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PreferenceVector {
    weights: Vec<f64>,
}

impl PreferenceVector {
    pub fn new(weights: Vec<f64>) -> Result<Self, ObjectiveError> {
        if weights.len() != KPI_COUNT {
            return Err(ObjectiveError::InvalidPreference {
                detail: format!("expected {KPI_COUNT} weights, got {}", weights.len()),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(ObjectiveError::InvalidPreference {
                detail: format!("non-positive weight in {weights:?}"),
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(ObjectiveError::InvalidPreference {
                detail: format!("sum {sum}"),
            });
        }
        Ok(Self { weights })
    }

    pub fn uniform() -> Self {
        Self {
            weights: vec![1.0 / KPI_COUNT as f64; KPI_COUNT],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Compact label like `0.8:0.1:0.1`, safe to embed in CSV cells.
    pub fn label(&self) -> String {
        self.weights
            .iter()
            .map(|w| format!("{w}"))
            .collect::<Vec<_>>()
            .join(":")
    }
}

impl TryFrom<Vec<f64>> for PreferenceVector {
    type Error = ObjectiveError;
    fn try_from(weights: Vec<f64>) -> Result<Self, ObjectiveError> {
        Self::new(weights)
    }
}

impl From<PreferenceVector> for Vec<f64> {
    fn from(p: PreferenceVector) -> Self {
        p.weights
    }
}

/// Alpha-fairness settings. `alpha = 0` reduces to the plain weighted sum,
/// `alpha = 1` gives proportional fairness via the log utility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessConfig {
    pub alpha: f64,
    pub epsilon_floor: f64,
}

impl Default for FairnessConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            epsilon_floor: DEFAULT_EPSILON_FLOOR,
        }
    }
}

impl FairnessConfig {
    pub fn new(alpha: f64, epsilon_floor: f64) -> Result<Self, ObjectiveError> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(ObjectiveError::InvalidAlpha(alpha));
        }
        Ok(Self {
            alpha,
            epsilon_floor: epsilon_floor.max(f64::MIN_POSITIVE),
        })
    }
}

/// Per-KPI mean absolute percentage errors, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorVector {
    per_kpi_mape: Vec<f64>,
}

impl ErrorVector {
    pub fn new(per_kpi_mape: Vec<f64>) -> Result<Self, ObjectiveError> {
        if per_kpi_mape.is_empty() {
            return Err(ObjectiveError::Empty);
        }
        if per_kpi_mape.iter().any(|&e| e < 0.0 || !e.is_finite()) {
            return Err(ObjectiveError::InvalidSeries(
                "error entries must be finite and >= 0".into(),
            ));
        }
        Ok(Self { per_kpi_mape })
    }

    pub fn per_kpi(&self) -> &[f64] {
        &self.per_kpi_mape
    }

    pub fn mean(&self) -> f64 {
        self.per_kpi_mape.iter().sum::<f64>() / self.per_kpi_mape.len() as f64
    }
}

/// Mean absolute percentage error over the intervals whose target magnitude
/// is at least `floor`; near-zero targets are excluded rather than divided by.
pub fn mape(sim: &[f64], target: &[f64], floor: f64) -> Result<f64, ObjectiveError> {
    if sim.len() != target.len() {
        return Err(ObjectiveError::LengthMismatch {
            left: sim.len(),
            right: target.len(),
        });
    }
    if sim.is_empty() {
        return Err(ObjectiveError::Empty);
    }
    let mut sum = 0.0;
    let mut included = 0usize;
    for (&s, &y) in sim.iter().zip(target) {
        if y.abs() < floor {
            continue;
        }
        sum += ((s - y) / y).abs();
        included += 1;
    }
    if included == 0 {
        return Err(ObjectiveError::UndefinedTarget { floor });
    }
    Ok(100.0 * sum / included as f64)
}

/// Per-KPI MAPE between a simulated and a target series.
pub fn kpi_error_vector(
    sim: &KpiSeries,
    target: &KpiSeries,
    floor: f64,
) -> Result<ErrorVector, ObjectiveError> {
    if sim.intervals() != target.intervals() {
        return Err(ObjectiveError::LengthMismatch {
            left: sim.intervals(),
            right: target.intervals(),
        });
    }
    let per_kpi_mape = (0..KPI_COUNT)
        .map(|k| mape(sim.kpi(k), target.kpi(k), floor))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ErrorVector { per_kpi_mape })
}

/// Elementwise weighted errors `T_i = p_i * g_i`.
pub fn weighted_errors(p: &PreferenceVector, g: &ErrorVector) -> Vec<f64> {
    p.weights()
        .iter()
        .zip(g.per_kpi())
        .map(|(w, e)| w * e)
        .collect()
}

/// Weighted-sum scalarization of the error vector.
pub fn scalarized_objective(p: &PreferenceVector, g: &ErrorVector) -> f64 {
    weighted_errors(p, g).iter().sum()
}

/// Alpha-fairness utility of a single weighted error, floored so the
/// log branch stays finite when an error hits zero.
pub fn alpha_utility(cfg: &FairnessConfig, t: f64) -> f64 {
    let t = t.max(cfg.epsilon_floor);
    if cfg.alpha == 1.0 {
        t.ln()
    } else {
        t.powf(1.0 - cfg.alpha) / (1.0 - cfg.alpha)
    }
}

/// Sum of alpha-fairness utilities over the weighted errors. For `alpha = 0`
/// this equals [`scalarized_objective`] whenever every weighted error is
/// above the floor.
pub fn fairness_objective(cfg: &FairnessConfig, p: &PreferenceVector, g: &ErrorVector) -> f64 {
    weighted_errors(p, g)
        .into_iter()
        .map(|t| alpha_utility(cfg, t))
        .sum()
}

/// Jain's fairness index `(sum T)^2 / (n * sum T^2)` in `[1/n, 1]`.
/// An all-zero vector counts as perfectly fair and returns 1.
pub fn jains_index(t: &[f64]) -> f64 {
    assert!(!t.is_empty(), "Jain's index needs at least one entry");
    let sum: f64 = t.iter().sum();
    let sum_sq: f64 = t.iter().map(|x| x * x).sum();
    if sum_sq == 0.0 {
        return 1.0;
    }
    sum * sum / (t.len() as f64 * sum_sq)
}
