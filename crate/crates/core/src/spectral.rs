//! Local structure of `f(σ)` around a quasi-level: the Breit-Wigner constants
//! `K`, `ε`, `γ` and the Taylor coefficients up to fourth order.

use serde::Serialize;

use crate::continuum::denominator_about_level;
#[cfg(test)]
use crate::continuum::scaled_denominator;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::ModelParams;
use crate::quasibound::QuasiLevel;
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralShape<T> {
    pub sigma0: T,
    /// Quadratic prefactor `K`; may be `inf` in narrow types, see `log_k`.
    pub k: T,
    pub log_k: T,
    pub epsilon: T,
    pub gamma: T,
}

/// Taylor coefficients of `f` about `σ₀`, stored divided by `c₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorCoeffs<T> {
    pub sigma0: T,
    pub order: usize,
    /// `c_j / c₂` for `j = 0..=4` (zero above `order`).
    pub normalized: [T; 5],
    /// `ln c₂`.
    pub log_c2: T,
}

impl<T: Real> TaylorCoeffs<T> {
    /// Absolute coefficient `c_j` (overflows for very wide barriers).
    pub fn coeff(&self, j: usize) -> T {
        self.normalized[j] * self.log_c2.exp()
    }

    /// Evaluates the truncated polynomial at `Δσ`, divided by `c₂`.
    pub fn eval_normalized(&self, delta: T) -> T {
        self.normalized.iter().rev().fold(T::zero(), |acc, &c| acc * delta + c)
    }

    /// The quadratic `K[(Δσ)² − εΔσ + γ²]` built from closed-form constants.
    pub fn from_shape(shape: &SpectralShape<T>) -> Self {
        Self {
            sigma0: shape.sigma0,
            order: 2,
            normalized: [shape.gamma * shape.gamma, -shape.epsilon, T::one(), T::zero(), T::zero()],
            log_c2: shape.log_k,
        }
    }
}

fn ensure_deep<T: Real>(level: &QuasiLevel<T>) -> Result<()> {
    if level.is_shallow() {
        Err(Error::ShallowLevel { index: level.index, arho0: to_f64(level.arho0) })
    } else {
        Ok(())
    }
}

/// Closed-form `K`, `ε`, `γ`; shallow levels are rejected.
pub fn shape_constants<T: Real>(params: &ModelParams<T>, level: &QuasiLevel<T>) -> Result<SpectralShape<T>> {
    ensure_deep(level)?;
    Ok(shape_constants_unchecked(params, level))
}

/// [`shape_constants`] without the shallow-level check.
pub fn shape_constants_unchecked<T: Real>(params: &ModelParams<T>, level: &QuasiLevel<T>) -> SpectralShape<T> {
    let two = lit::<T>(2.0);
    let (s0, ar, u) = (level.sigma0, level.arho0, params.u);
    let opr = T::one() + ar;
    let exponent = two * ar * params.w;
    let log_k = exponent + two * (opr * u).ln() - two * s0.ln() - lit::<T>(4.0) * ar.ln();
    let damp = (-exponent).exp();
    // γ is written in its cancelled form, finite at σ₀ = aρ₀.
    let gamma = damp * two * s0 * ar * ar / (opr * u);
    let epsilon = gamma * two * (s0 * s0 - ar * ar) / u;
    SpectralShape { sigma0: s0, k: log_k.exp(), log_k, epsilon, gamma }
}

/// Degree-`order` Taylor polynomial of `f` at `σ₀` via jet arithmetic.
pub fn taylor_expand<T: Real>(params: &ModelParams<T>, level: &QuasiLevel<T>, order: usize) -> Result<TaylorCoeffs<T>> {
    ensure_deep(level)?;
    taylor_expand_unchecked(params, level, order)
}

/// [`taylor_expand`] without the shallow-level check.
pub fn taylor_expand_unchecked<T: Real>(
    params: &ModelParams<T>,
    level: &QuasiLevel<T>,
    order: usize,
) -> Result<TaylorCoeffs<T>> {
    if order != 2 && order != 4 {
        return Err(Error::Domain { quantity: "order", value: order as f64, reason: "expansion order must be 2 or 4" });
    }
    let shift = lit::<T>(2.0) * level.arho0 * params.w;
    let jet: Jet<T, 5> = denominator_about_level(params.u, params.w, level.sigma0, Jet::variable(T::zero()), shift);
    normalize(jet.into_coeffs(), level.sigma0, order, shift)
}

/// Taylor coefficients of `f` at an arbitrary `σ`, scaled by `exp(2·aρ_ref·w)`.
#[cfg(test)]
pub(crate) fn taylor_at<T: Real>(
    params: &ModelParams<T>,
    sigma: T,
    arho_ref: T,
    order: usize,
) -> Result<TaylorCoeffs<T>> {
    let shift = lit::<T>(2.0) * arho_ref * params.w;
    let jet: Jet<T, 5> = scaled_denominator(params.u, params.w, Jet::variable(sigma), shift);
    normalize(jet.into_coeffs(), sigma, order, shift)
}

fn normalize<T: Real>(c: [T; 5], sigma: T, order: usize, shift: T) -> Result<TaylorCoeffs<T>> {
    if !(c[2] > T::zero()) || c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!(
            "Taylor expansion at sigma = {} has non-positive curvature",
            to_f64(sigma)
        )));
    }
    let mut normalized = [T::zero(); 5];
    for j in 0..=order {
        normalized[j] = c[j] / c[2];
    }
    Ok(TaylorCoeffs { sigma0: sigma, order, normalized, log_c2: shift + c[2].ln() })
}
