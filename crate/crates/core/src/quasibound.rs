//! Quasi-stationary levels: bound states of the well with a semi-infinite
//! barrier, i.e. the roots of `g(σ) = aρ·sin σ + σ·cos σ` on `(0, √u)`.

use serde::Serialize;

use crate::model::ModelParams;
use crate::scalar::{lit, Real};

/// Levels with `aρ₀` below this are flagged shallow.
pub const SHALLOW_ARHO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiLevel<T> {
    /// Ordinal `n ≥ 1`; the root lies in `((2n−1)π/2, nπ)`.
    pub index: usize,
    pub sigma0: T,
    pub ak0: T,
    pub arho0: T,
    pub e0_over_v0: T,
    /// `a·|c₁|²`.
    pub c1_sq: T,
}

impl<T: Real> QuasiLevel<T> {
    /// Builds the level record from a root of the level equation.
    pub fn from_root(u: T, index: usize, sigma0: T) -> Self {
        let arho0 = (u - sigma0 * sigma0).sqrt();
        Self { index, sigma0, ak0: sigma0, arho0, e0_over_v0: sigma0 * sigma0 / u, c1_sq: level_norm_of(arho0) }
    }

    pub fn is_shallow(&self) -> bool {
        self.arho0 < lit(SHALLOW_ARHO)
    }

    /// `u = σ₀² + (aρ₀)²`.
    pub fn u(&self) -> T {
        self.sigma0 * self.sigma0 + self.arho0 * self.arho0
    }
}

/// The level function `g(σ) = √(u−σ²)·sin σ + σ·cos σ`.
pub fn level_function<T: Real>(u: T, sigma: T) -> T {
    let rho = (u - sigma * sigma).max(T::zero()).sqrt();
    rho * sigma.sin() + sigma * sigma.cos()
}

fn level_derivative<T: Real>(u: T, sigma: T) -> T {
    let rho = (u - sigma * sigma).sqrt();
    let (s, c) = sigma.sin_cos();
    -sigma / rho * s + rho * c + c - sigma * s
}

/// Brackets each root in `((2n−1)π/2, min(nπ, √u))`, bisects, then applies
/// safeguarded Newton steps.
fn solve_bracket<T: Real>(u: T, mut lo: T, mut hi: T) -> T {
    let g_lo = level_function(u, lo);
    let tol = lit::<T>(1e-13);
    for _ in 0..200 {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = lo + (hi - lo) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = level_function(u, mid);
        if g_mid == T::zero() {
            return mid;
        }
        if (g_mid > T::zero()) == (g_lo > T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = lo + (hi - lo) / lit(2.0);
    for _ in 0..4 {
        let g = level_function(u, x);
        let d = level_derivative(u, x);
        if g == T::zero() || d == T::zero() {
            break;
        }
        let next = x - g / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        if level_function(u, next).abs() > g.abs() {
            break;
        }
        x = next;
    }
    x
}

/// All quasi-levels in ascending order (possibly none).
pub fn find_levels<T: Real>(params: &ModelParams<T>) -> Vec<QuasiLevel<T>> {
    let u = params.u;
    let su = u.sqrt();
    let half_pi = T::FRAC_PI_2();
    let mut levels = Vec::new();
    let mut n = 1usize;
    loop {
        let nf = T::from_usize(n).unwrap();
        let lo = (lit::<T>(2.0) * nf - T::one()) * half_pi;
        if lo >= su {
            break;
        }
        let hi = (nf * T::PI()).min(su);
        let (g_lo, g_hi) = (level_function(u, lo), level_function(u, hi));
        if g_lo != T::zero() && (g_lo > T::zero()) != (g_hi > T::zero()) {
            let sigma0 = solve_bracket(u, lo, hi);
            if sigma0 < su && sigma0 > T::zero() && u - sigma0 * sigma0 > T::zero() {
                levels.push(QuasiLevel::from_root(u, n, sigma0));
            }
        }
        n += 1;
    }
    levels
}

fn level_norm_of<T: Real>(arho0: T) -> T {
    lit::<T>(2.0) * arho0 / (T::one() + arho0)
}

/// Bound-state normalization `a·|c₁|² = 2aρ₀/(1 + aρ₀)`.
pub fn level_norm<T: Real>(level: &QuasiLevel<T>) -> T {
    level_norm_of(level.arho0)
}

/// Bound-state wavefunction `u₀` at `x = r/a` in units where `a = 1`
/// (`c₁ > 0`).
pub fn bound_wavefunction_at<T: Real>(level: &QuasiLevel<T>, r_over_a: T) -> T {
    let c1 = level_norm(level).sqrt();
    if r_over_a <= T::one() {
        c1 * (level.sigma0 * r_over_a).sin()
    } else {
        c1 * level.sigma0.sin() * (-level.arho0 * (r_over_a - T::one())).exp()
    }
}
