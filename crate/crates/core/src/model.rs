//! Physical configuration of the well-plus-barrier potential and its
//! dimensionless parameterization.
//!
//! Natural units with ħ = 1 throughout. The potential is zero for `r < a`,
//! `V0` for `a < r < b` and zero again beyond `b`. Everything downstream works
//! in the scaled variables
//!
//! * `σ = a·k` (wave number),
//! * `t̃ = t / (2·m·a²)` (time),
//! * `u = 2·m·a²·V0` (barrier strength),
//! * `w = (b − a) / a` (barrier width).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Physical inputs of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig<T> {
    /// Particle mass.
    pub m: T,
    /// Inner well radius.
    pub a: T,
    /// Outer barrier radius.
    pub b: T,
    /// Barrier height.
    #[serde(rename = "v0")]
    pub v0: T,
}

/// Dimensionless parameters derived from a [`PhysicalConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Barrier strength `2·m·a²·V0`.
    pub u: T,
    /// Barrier width `(b − a)/a`.
    pub w: T,
    /// Conversion factor `2·m·a²` between `t̃` and physical time.
    pub time_scale: T,
}

/// Outcome of [`validate`]: the list of violated constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(self.violations))
        }
    }
}

/// Checks every admissibility constraint and reports all violations at once.
pub fn validate<T: Real>(config: &PhysicalConfig<T>) -> ValidationReport {
    let mut violations = Vec::new();
    let finite = [config.m, config.a, config.b, config.v0].iter().all(|x| x.is_finite());
    if !finite {
        violations.push("all parameters must be finite".to_string());
    }
    if !(config.m > T::zero()) {
        violations.push("m must be positive".to_string());
    }
    if !(config.a > T::zero()) {
        violations.push("a must be positive".to_string());
    }
    if !(config.b > config.a) {
        violations.push("b must exceed a".to_string());
    }
    if !(config.v0 > T::zero()) {
        violations.push("V0 must be positive".to_string());
    }
    ValidationReport { violations }
}

/// Maps a physical configuration onto `(u, w, time_scale)`.
pub fn to_dimensionless<T: Real>(config: &PhysicalConfig<T>) -> Result<ModelParams<T>> {
    validate(config).into_result()?;
    let two_ma2 = lit::<T>(2.0) * config.m * config.a * config.a;
    Ok(ModelParams { u: two_ma2 * config.v0, w: (config.b - config.a) / config.a, time_scale: two_ma2 })
}

impl<T: Real> PhysicalConfig<T> {
    pub fn new(m: T, a: T, b: T, v0: T) -> Self {
        Self { m, a, b, v0 }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn to_dimensionless(&self) -> Result<ModelParams<T>> {
        to_dimensionless(self)
    }

    /// Same well (`m`, `a`) with the barrier width replaced.
    pub fn with_width(&self, w: T) -> Self {
        Self { b: self.a * (T::one() + w), ..*self }
    }

    /// Same geometry with the barrier height replaced.
    pub fn with_v0(&self, v0: T) -> Self {
        Self { v0, ..*self }
    }
}

impl<T: Real> ModelParams<T> {
    /// Builds dimensionless parameters directly; `time_scale` defaults to the
    /// `m = 1/2, a = 1` convention where `t̃ = t`.
    pub fn new(u: T, w: T) -> Result<Self> {
        let mut bad = Vec::new();
        if !(u > T::zero() && u.is_finite()) {
            bad.push("u must be positive".to_string());
        }
        if !(w > T::zero() && w.is_finite()) {
            bad.push("w must be positive".to_string());
        }
        if !bad.is_empty() {
            return Err(Error::InvalidConfig(bad));
        }
        Ok(Self { u, w, time_scale: T::one() })
    }

    /// `√u`, the upper end of the sub-barrier wave-number range.
    pub fn sqrt_u(&self) -> T {
        self.u.sqrt()
    }

    /// Reconstructs the physical configuration given the mass and inner radius.
    pub fn to_physical(&self, m: T, a: T) -> PhysicalConfig<T> {
        let two_ma2 = lit::<T>(2.0) * m * a * a;
        PhysicalConfig { m, a, b: a * (T::one() + self.w), v0: self.u / two_ma2 }
    }

    /// Converts a dimensionless time to physical units.
    pub fn physical_time(&self, t_tilde: T) -> T {
        t_tilde * self.time_scale
    }
}
