//! Complex zeros of the truncated spectral denominator and the survival-law
//! parameters derived from them.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{quartic_roots, residual};
use crate::quasibound::QuasiLevel;
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{SpectralShape, TaylorCoeffs};

/// Upper-half-plane representative `x + iy` of a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Pole<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn as_complex(&self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }

    /// Decay rate product `x·y`.
    pub fn xy(&self) -> T {
        self.x * self.y
    }

    /// `|self − other| / |other|`.
    pub fn relative_distance(&self, other: &Pole<T>) -> T {
        (self.as_complex() - other.as_complex()).norm() / other.as_complex().norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleSet<T> {
    /// Narrow pole (smaller `y`).
    pub z1: Pole<T>,
    /// Broad pole.
    pub z2: Pole<T>,
    /// `|f⁽⁴⁾(z)|/c₂` at each root.
    pub residual1: T,
    pub residual2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalParams<T> {
    pub x1: T,
    pub y1: T,
    pub x2: T,
    pub y2: T,
    /// Principal value in `(−π, π]`.
    pub alpha: T,
    pub cos_alpha: T,
    pub sin_alpha: T,
    pub beta: T,
    pub n: T,
    pub tau1_tilde: T,
    pub tau2_tilde: T,
    pub tau0_exact: T,
    pub tau0_approx: T,
}

impl<T: Real> SurvivalParams<T> {
    /// `y₁/y₂`.
    pub fn ratio(&self) -> T {
        self.y1 / self.y2
    }

    pub fn z1(&self) -> Pole<T> {
        Pole::new(self.x1, self.y1)
    }

    pub fn z2(&self) -> Pole<T> {
        Pole::new(self.x2, self.y2)
    }
}

/// Zero of the quadratic truncation.
pub fn pole2<T: Real>(shape: &SpectralShape<T>, level: &QuasiLevel<T>) -> Pole<T> {
    let (k2, r2) = (level.ak0 * level.ak0, level.arho0 * level.arho0);
    let u = k2 + r2;
    Pole { x: shape.sigma0 + shape.gamma * (k2 - r2) / u, y: shape.gamma * lit::<T>(2.0) * level.ak0 * level.arho0 / u }
}

/// The four roots of the normalized quartic in `Δσ = σ − σ₀`.
pub fn quartic_poles<T: Real>(taylor: &TaylorCoeffs<T>) -> Result<[Complex<T>; 4]> {
    quartic_roots(taylor.normalized)
}

/// Narrow pair of the quartic: the upper root closest to `σ₀`. Exists even
/// when the broad roots are real.
pub fn narrow_pole<T: Real>(taylor: &TaylorCoeffs<T>) -> Result<Pole<T>> {
    let roots = quartic_poles(taylor)?;
    roots
        .iter()
        .filter(|z| z.im > T::zero())
        .min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
        .map(|z| Pole::new(taylor.sigma0 + z.re, z.im))
        .ok_or_else(|| Error::Classification("quartic has no complex root".into()))
}

/// Two-pole decomposition of the quartic truncation.
pub fn pole4<T: Real>(taylor: &TaylorCoeffs<T>, level: &QuasiLevel<T>) -> Result<PoleSet<T>> {
    debug_assert!((taylor.sigma0 - level.sigma0).abs() <= T::epsilon() * level.sigma0);
    if taylor.order != 4 {
        return Err(Error::Domain {
            quantity: "order",
            value: taylor.order as f64,
            reason: "pole4 needs a fourth-order expansion",
        });
    }
    let c4 = taylor.normalized[4];
    if !(c4 > T::zero()) {
        return Err(Error::OutsideValidatedRegime(format!("quartic does not open upward (c4/c2 = {:e})", to_f64(c4))));
    }
    let roots = quartic_poles(taylor)?;
    let mut upper: Vec<Complex<T>> = roots.iter().copied().filter(|z| z.im > T::zero()).collect();
    if upper.len() != 2 {
        return Err(Error::OutsideValidatedRegime(format!(
            "quartic has {} real roots, expected two conjugate pairs",
            4 - 2 * upper.len()
        )));
    }
    upper.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal));
    let shift = |z: Complex<T>| Pole::new(taylor.sigma0 + z.re, z.im);
    Ok(PoleSet {
        z1: shift(upper[0]),
        z2: shift(upper[1]),
        residual1: residual(&taylor.normalized, upper[0]),
        residual2: residual(&taylor.normalized, upper[1]),
    })
}

/// Breit-Wigner lifetimes in `t̃` units: `1/(4x₀y₀)` and the
/// exponential-dominated closed form.
pub fn tau0_closed_form<T: Real>(shape: &SpectralShape<T>, level: &QuasiLevel<T>) -> (T, T) {
    let z0 = pole2(shape, level);
    let exact = T::one() / (lit::<T>(4.0) * z0.x * z0.y);
    let (s0, ar) = (level.sigma0, level.arho0);
    let u = level.u();
    let log_approx = lit::<T>(2.0) * u.ln() + (T::one() + ar).ln() + (shape.log_k - log_k_prefactor(level))
        - lit::<T>(16.0).ln()
        - lit::<T>(3.0) * (s0 * ar).ln();
    (exact, log_approx.exp())
}

/// `ln K − 2aρ₀w`, so the exponential factor can be recovered from `log_k`.
fn log_k_prefactor<T: Real>(level: &QuasiLevel<T>) -> T {
    let two = lit::<T>(2.0);
    two * ((T::one() + level.arho0) * level.u()).ln() - two * level.sigma0.ln() - lit::<T>(4.0) * level.arho0.ln()
}

/// `α`, `β`, `N` and the lifetimes for a classified pole pair.
pub fn survival_params<T: Real>(
    ps: &PoleSet<T>,
    shape: &SpectralShape<T>,
    level: &QuasiLevel<T>,
) -> Result<SurvivalParams<T>> {
    let (x1, y1, x2, y2) = (ps.z1.x, ps.z1.y, ps.z2.x, ps.z2.y);
    if !(x1 * y1 > T::zero()) || !(x2 * y2 > T::zero()) {
        return Err(Error::Classification(format!(
            "non-positive decay product (x1*y1 = {:e}, x2*y2 = {:e})",
            to_f64(x1 * y1),
            to_f64(x2 * y2)
        )));
    }
    let (cos_alpha, sin_alpha) = alpha_of(ps.z1, ps.z2);
    let alpha = sin_alpha.atan2(cos_alpha);
    // atan2 returns −π for a negative zero sine; fold onto the half-open branch.
    let alpha = if alpha <= -T::PI() { T::PI() } else { alpha };
    let r = y1 / y2;
    let n = T::one() / (T::one() + r * r + lit::<T>(2.0) * r * cos_alpha);
    let four = lit::<T>(4.0);
    let (tau0_exact, tau0_approx) = tau0_closed_form(shape, level);
    Ok(SurvivalParams {
        x1,
        y1,
        x2,
        y2,
        alpha,
        cos_alpha,
        sin_alpha,
        beta: x1 * x1 - x2 * x2 + y2 * y2 - y1 * y1,
        n,
        tau1_tilde: T::one() / (four * x1 * y1),
        tau2_tilde: T::one() / (four * x2 * y2),
        tau0_exact,
        tau0_approx,
    })
}

/// `(cos α, sin α)` from `e^{iα} = (z₁* − z₂)/(z₁ − z₂*)`.
///
/// The numerator is `d − ie` with `d = x₁ − x₂`, `e = y₁ + y₂`, and the
/// denominator is its conjugate, so `e^{iα} = (d − ie)²/(d² + e²)`.
pub fn alpha_of<T: Real>(z1: Pole<T>, z2: Pole<T>) -> (T, T) {
    let d = z1.x - z2.x;
    let e = z1.y + z2.y;
    let h = d.hypot(e);
    let (dn, en) = (d / h, e / h);
    (dn * dn - en * en, -lit::<T>(2.0) * dn * en)
}
