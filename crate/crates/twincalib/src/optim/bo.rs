//! Bayesian-optimization baseline: a Gaussian-process surrogate with a
//! squared-exponential kernel on unit-cube inputs and standardized outputs,
//! scored by expected improvement over a fixed set of uniform candidates.
//!
//! The surrogate is deliberately simple: fixed length scale, no
//! marginal-likelihood fitting. At the budgets used here (tens of points)
//! hyperparameter optimization is noisier than it is worth.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use statrs::function::erf::erf;

use crate::rng::SeededRng;
use crate::space::{MixedVector, SearchSpace};

use super::BoConfig;

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn rbf_kernel(a: &[f64], b: &[f64], length_scale: f64) -> f64 {
    (-squared_distance(a, b) / (2.0 * length_scale * length_scale)).exp()
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Expected improvement below `fmin` for a Gaussian posterior. Zero
/// predictive spread means zero expected improvement.
pub fn expected_improvement(mean: f64, stddev: f64, fmin: f64) -> f64 {
    if stddev <= 1e-12 {
        return 0.0;
    }
    let z = (fmin - mean) / stddev;
    ((fmin - mean) * normal_cdf(z) + stddev * normal_pdf(z)).max(0.0)
}

/// Gaussian-process posterior over standardized objective values.
pub struct GpModel {
    inputs: Vec<Vec<f64>>,
    alpha: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    length_scale: f64,
    y_mean: f64,
    y_std: f64,
    /// Best (lowest) standardized observation, the EI reference level.
    pub fmin_std: f64,
    /// Diagonal jitter that produced a successful factorization.
    pub jitter_used: f64,
}

impl GpModel {
    /// Fit on unit-cube inputs. Escalates the diagonal jitter by x10 up to
    /// `cfg.max_jitter` if the kernel matrix resists factorization; returns
    /// `None` if it never succeeds or the data is degenerate.
    pub fn fit(inputs: Vec<Vec<f64>>, values: &[f64], cfg: &BoConfig) -> Option<GpModel> {
        let n = inputs.len();
        if n == 0 || values.len() != n || values.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let y_mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - y_mean) * (v - y_mean)).sum::<f64>() / n as f64;
        let y_std = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
        let y_standardized: Vec<f64> = values.iter().map(|v| (v - y_mean) / y_std).collect();

        let base = DMatrix::from_fn(n, n, |i, j| {
            rbf_kernel(&inputs[i], &inputs[j], cfg.length_scale)
        });
        let mut jitter = cfg.jitter;
        loop {
            let mut k = base.clone();
            for i in 0..n {
                k[(i, i)] += jitter;
            }
            if let Some(chol) = k.cholesky() {
                let y = DVector::from_vec(y_standardized.clone());
                let alpha = chol.solve(&y);
                let fmin_std = y_standardized.iter().copied().fold(f64::INFINITY, f64::min);
                return Some(GpModel {
                    inputs,
                    alpha,
                    chol,
                    length_scale: cfg.length_scale,
                    y_mean,
                    y_std,
                    fmin_std,
                    jitter_used: jitter,
                });
            }
            jitter *= 10.0;
            if jitter > cfg.max_jitter {
                return None;
            }
        }
    }

    /// Posterior mean and standard deviation in standardized units.
    pub fn predict_standardized(&self, x: &[f64]) -> (f64, f64) {
        let k_star = DVector::from_iterator(
            self.inputs.len(),
            self.inputs
                .iter()
                .map(|xi| rbf_kernel(xi, x, self.length_scale)),
        );
        let mean = k_star.dot(&self.alpha);
        let solved = self.chol.solve(&k_star);
        let variance = (1.0 - k_star.dot(&solved)).max(0.0);
        (mean, variance.sqrt())
    }

    /// Posterior mean in original objective units.
    pub fn predict_mean(&self, x: &[f64]) -> f64 {
        self.predict_standardized(x).0 * self.y_std + self.y_mean
    }

    /// Expected improvement of a unit-cube point below the incumbent.
    pub fn expected_improvement_at(&self, x: &[f64]) -> f64 {
        let (mean, stddev) = self.predict_standardized(x);
        expected_improvement(mean, stddev, self.fmin_std)
    }
}

/// Suggest the next point to evaluate. Before `cfg.init_design` observations
/// exist this is a uniform sample; afterwards a GP is fitted and the best of
/// `cfg.candidates` uniform candidates by expected improvement is returned
/// (ties keep the earliest candidate). If the surrogate cannot be fitted the
/// suggestion falls back to a uniform sample.
pub fn bo_suggest(
    history: &[(MixedVector, f64)],
    space: &SearchSpace,
    rng: &mut SeededRng,
    cfg: &BoConfig,
) -> MixedVector {
    if history.len() < cfg.init_design {
        return space.sample_uniform(rng);
    }
    let inputs: Vec<Vec<f64>> = history
        .iter()
        .map(|(x, _)| space.normalize(x).expect("history points share the space"))
        .collect();
    let values: Vec<f64> = history.iter().map(|(_, v)| *v).collect();
    let Some(gp) = GpModel::fit(inputs, &values, cfg) else {
        return space.sample_uniform(rng);
    };

    let mut best: Option<(MixedVector, f64)> = None;
    for _ in 0..cfg.candidates {
        let candidate = space.sample_uniform(rng);
        let unit = space
            .normalize(&candidate)
            .expect("sampled candidate shares the space");
        let ei = gp.expected_improvement_at(&unit);
        if best.as_ref().is_none_or(|(_, b)| ei > *b) {
            best = Some((candidate, ei));
        }
    }
    best.expect("candidate count is positive").0
}
