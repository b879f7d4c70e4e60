//! Mixed continuous/discrete search spaces and candidate points.
//!
//! A [`SearchSpace`] holds the continuous dimensions first and the discrete
//! ones after them, so a candidate [`MixedVector`] always has the layout
//! `(x_1 .. x_Z, x_{Z+1} .. x_{Z+L})`. Optimizers rely on that ordering to
//! split a candidate into its continuous and discrete segments.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeededRng;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("dimension {index} ({name}): {reason}")]
    InvalidDimension {
        index: usize,
        name: String,
        reason: String,
    },
    #[error("dimension {index} is continuous but follows a discrete dimension; continuous dimensions must come first")]
    ContinuousAfterDiscrete { index: usize },
    #[error("search space must have at least one dimension")]
    Empty,
    #[error("expected a vector of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    Continuous,
    Discrete,
}

/// One search dimension: bounds are inclusive; discrete bounds are integers
/// and the dimension takes values in `{lower, lower+1, ..., upper}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSpec {
    pub name: String,
    pub kind: DimKind,
    pub lower: f64,
    pub upper: f64,
    #[serde(default)]
    pub unit: String,
}

impl DimensionSpec {
    pub fn continuous(name: &str, lower: f64, upper: f64, unit: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind: DimKind::Continuous,
            lower,
            upper,
            unit: unit.to_owned(),
        }
    }

    pub fn discrete(name: &str, lower: i64, upper: i64, unit: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind: DimKind::Discrete,
            lower: lower as f64,
            upper: upper as f64,
            unit: unit.to_owned(),
        }
    }

    pub fn range(&self) -> f64 {
        self.upper - self.lower
    }

    fn validate(&self, index: usize) -> Result<(), SpaceError> {
        let fail = |reason: String| SpaceError::InvalidDimension {
            index,
            name: self.name.clone(),
            reason,
        };
        if !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(fail("bounds must be finite".into()));
        }
        if self.lower > self.upper {
            return Err(fail(format!(
                "lower bound {} exceeds upper bound {}",
                self.lower, self.upper
            )));
        }
        if self.kind == DimKind::Discrete
            && (self.lower.fract() != 0.0 || self.upper.fract() != 0.0)
        {
            return Err(fail("discrete bounds must be integers".into()));
        }
        Ok(())
    }

    /// Round toward the nearest integer (half away from zero) and clip.
    fn clamp_value(&self, v: f64) -> f64 {
        let v = if v.is_nan() { self.lower } else { v };
        match self.kind {
            DimKind::Continuous => v.clamp(self.lower, self.upper),
            DimKind::Discrete => v.round().clamp(self.lower, self.upper),
        }
    }
}

/// A candidate parameter point: `Z` continuous values followed by `L`
/// discrete (integer-valued) entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedVector {
    values: Vec<f64>,
}

impl MixedVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl From<Vec<f64>> for MixedVector {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

impl std::ops::Index<usize> for MixedVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Ordered dimensions with the continuous block first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DimensionSpec>", into = "Vec<DimensionSpec>")]
pub struct SearchSpace {
    dims: Vec<DimensionSpec>,
    num_continuous: usize,
    num_discrete: usize,
}

impl TryFrom<Vec<DimensionSpec>> for SearchSpace {
    type Error = SpaceError;
    fn try_from(dims: Vec<DimensionSpec>) -> Result<Self, SpaceError> {
        SearchSpace::new(dims)
    }
}

impl From<SearchSpace> for Vec<DimensionSpec> {
    fn from(space: SearchSpace) -> Self {
        space.dims
    }
}

impl SearchSpace {
    pub fn new(dims: Vec<DimensionSpec>) -> Result<Self, SpaceError> {
        if dims.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut seen_discrete = false;
        let mut num_continuous = 0;
        let mut num_discrete = 0;
        for (index, dim) in dims.iter().enumerate() {
            dim.validate(index)?;
            match dim.kind {
                DimKind::Continuous => {
                    if seen_discrete {
                        return Err(SpaceError::ContinuousAfterDiscrete { index });
                    }
                    num_continuous += 1;
                }
                DimKind::Discrete => {
                    seen_discrete = true;
                    num_discrete += 1;
                }
            }
        }
        Ok(Self {
            dims,
            num_continuous,
            num_discrete,
        })
    }

    pub fn dims(&self) -> &[DimensionSpec] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Number of continuous dimensions (the leading block).
    pub fn num_continuous(&self) -> usize {
        self.num_continuous
    }

    /// Number of discrete dimensions (the trailing block).
    pub fn num_discrete(&self) -> usize {
        self.num_discrete
    }

    fn check_len(&self, len: usize) -> Result<(), SpaceError> {
        if len != self.dims.len() {
            return Err(SpaceError::LengthMismatch {
                expected: self.dims.len(),
                actual: len,
            });
        }
        Ok(())
    }

    /// Draw a uniform feasible point: continuous entries uniform over their
    /// interval, discrete entries uniform over their integer range.
    pub fn sample_uniform(&self, rng: &mut SeededRng) -> MixedVector {
        let values = self
            .dims
            .iter()
            .map(|d| match d.kind {
                DimKind::Continuous => {
                    if d.lower == d.upper {
                        d.lower
                    } else {
                        rng.gen_range(d.lower..=d.upper)
                    }
                }
                DimKind::Discrete => rng.gen_range(d.lower as i64..=d.upper as i64) as f64,
            })
            .collect();
        MixedVector::new(values)
    }

    /// Project a vector into the feasible set: continuous entries are
    /// clipped, discrete entries are rounded half-away-from-zero and then
    /// clipped.
    pub fn clamp(&self, v: &MixedVector) -> Result<MixedVector, SpaceError> {
        self.check_len(v.len())?;
        let values = self
            .dims
            .iter()
            .zip(v.values())
            .map(|(d, &x)| d.clamp_value(x))
            .collect();
        Ok(MixedVector::new(values))
    }

    pub fn contains(&self, v: &MixedVector) -> bool {
        v.len() == self.dims.len()
            && self.dims.iter().zip(v.values()).all(|(d, &x)| {
                x >= d.lower
                    && x <= d.upper
                    && (d.kind == DimKind::Continuous || x.fract() == 0.0)
            })
    }

    /// Affine map onto the unit cube. Zero-width dimensions map to 0.5.
    pub fn normalize(&self, v: &MixedVector) -> Result<Vec<f64>, SpaceError> {
        self.check_len(v.len())?;
        Ok(self
            .dims
            .iter()
            .zip(v.values())
            .map(|(d, &x)| {
                if d.range() == 0.0 {
                    0.5
                } else {
                    (x - d.lower) / d.range()
                }
            })
            .collect())
    }

    /// Inverse of [`normalize`](Self::normalize); discrete entries are
    /// re-rounded onto the integer lattice.
    pub fn denormalize(&self, unit: &[f64]) -> Result<MixedVector, SpaceError> {
        self.check_len(unit.len())?;
        let raw: Vec<f64> = self
            .dims
            .iter()
            .zip(unit)
            .map(|(d, &u)| d.lower + u * d.range())
            .collect();
        self.clamp(&MixedVector::new(raw))
    }
}
