//! Stationary continuum solutions below the barrier top.
//!
//! All lengths are measured in units of the inner radius `a`, so the regions
//! are `0 < x < 1`, `1 < x < 1 + w` and `x > 1 + w` with `x = r/a`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::jet::Elementary;
use crate::model::ModelParams;
use crate::quasibound::QuasiLevel;
use crate::scalar::{lit, to_f64, Real};

/// Relative guard below `√u`: `σ` is rejected once `u − σ² < GUARD·u`.
pub const SIGMA_GUARD: f64 = 1e-12;

/// Dimensionless wave numbers at one continuum energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers<T> {
    pub sigma: T,
    pub ak: T,
    pub arho: T,
}

impl<T: Real> WaveNumbers<T> {
    pub fn new(params: &ModelParams<T>, sigma: T) -> Result<Self> {
        check_sigma(params.u, sigma)?;
        Ok(Self { sigma, ak: sigma, arho: (params.u - sigma * sigma).sqrt() })
    }
}

/// Amplitudes of `u_E` in the three regions.
///
/// With `a = 1` units the region-3 normalization reads
/// `|C3|² = mass_scale / (2πσ)` where `mass_scale = m·a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet<T> {
    pub c1: Complex<T>,
    pub c2: Complex<T>,
    pub d2: Complex<T>,
    pub c3: Complex<T>,
    pub d3: Complex<T>,
    pub alpha_plus: T,
    pub alpha_minus: T,
    /// Outer radius `b/a = 1 + w`.
    pub outer: T,
}

fn check_sigma<T: Real>(u: T, sigma: T) -> Result<()> {
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::Domain { quantity: "sigma", value: to_f64(sigma), reason: "must be positive" });
    }
    if !(u - sigma * sigma >= lit::<T>(SIGMA_GUARD) * u) {
        return Err(Error::Domain {
            quantity: "sigma",
            value: to_f64(sigma),
            reason: "must lie below sqrt(u) by the guard margin",
        });
    }
    Ok(())
}

/// `α± = sin σ ± (σ/aρ) cos σ`.
pub fn alphas<T: Real>(wn: &WaveNumbers<T>) -> (T, T) {
    let (s, c) = wn.sigma.sin_cos();
    let q = wn.sigma * c / wn.arho;
    (s + q, s - q)
}

/// Solves the two interface matching conditions for `C1 = 1`, then fixes
/// `C1 > 0` from the region-3 normalization.
pub fn match_coefficients<T: Real>(
    params: &ModelParams<T>,
    wn: &WaveNumbers<T>,
    mass_scale: T,
) -> Result<CoefficientSet<T>> {
    check_sigma(params.u, wn.sigma)?;
    let half = lit::<T>(0.5);
    let (k, rho) = (wn.sigma, wn.arho);
    let outer = T::one() + params.w;
    let (ap, am) = alphas(wn);

    // Region 2 from region 1 at x = 1 (inverse of the exp/ρ matrix).
    let (s, c) = k.sin_cos();
    let c2 = half * (-rho).exp() * (s + k * c / rho);
    let d2 = half * rho.exp() * (s - k * c / rho);

    // Region 3 from region 2 at x = 1 + w.
    let grow = c2 * (rho * outer).exp();
    let decay = d2 * (-rho * outer).exp();
    let value = grow + decay;
    let slope = rho * (grow - decay);
    let phase = Complex::from_polar(T::one(), -k * outer);
    let c3 = phase * Complex::new(value, -slope / k) * half;
    let d3 = phase.conj() * Complex::new(value, slope / k) * half;

    let target = (mass_scale / (lit::<T>(2.0) * T::PI() * k)).sqrt();
    let c1 = target / c3.norm();
    let scale = |z: Complex<T>| z * c1;
    Ok(CoefficientSet {
        c1: Complex::new(c1, T::zero()),
        c2: Complex::new(c2 * c1, T::zero()),
        d2: Complex::new(d2 * c1, T::zero()),
        c3: scale(c3),
        d3: scale(d3),
        alpha_plus: ap,
        alpha_minus: am,
        outer,
    })
}

/// Continuum wavefunction `u_E` at `x = r/a` (`x ≥ 0`).
pub fn wavefunction_at<T: Real>(coeffs: &CoefficientSet<T>, wn: &WaveNumbers<T>, r_over_a: T) -> Complex<T> {
    let x = r_over_a;
    if x <= T::one() {
        coeffs.c1 * (wn.sigma * x).sin()
    } else if x <= coeffs.outer {
        coeffs.c2 * (wn.arho * x).exp() + coeffs.d2 * (-wn.arho * x).exp()
    } else {
        let e = Complex::from_polar(T::one(), wn.sigma * x);
        coeffs.c3 * e + coeffs.d3 * e.conj()
    }
}

/// Derivative `du_E/dx` at `x = r/a`.
pub fn wavefunction_slope_at<T: Real>(coeffs: &CoefficientSet<T>, wn: &WaveNumbers<T>, r_over_a: T) -> Complex<T> {
    let x = r_over_a;
    if x <= T::one() {
        coeffs.c1 * (wn.sigma * (wn.sigma * x).cos())
    } else if x <= coeffs.outer {
        (coeffs.c2 * (wn.arho * x).exp() - coeffs.d2 * (-wn.arho * x).exp()) * wn.arho
    } else {
        let e = Complex::from_polar(T::one(), wn.sigma * x);
        (coeffs.c3 * e - coeffs.d3 * e.conj()) * Complex::new(T::zero(), wn.sigma)
    }
}

/// `e^{-shift}·f(σ)` evaluated on any [`Elementary`] argument.
///
/// Passing `shift = 2·aρ₀·w` keeps the expansion around a quasi-level free of
/// overflow; `shift = 0` gives `f` itself.
pub fn scaled_denominator<T: Real, E: Elementary<T>>(u: T, w: T, sigma: E, shift: T) -> E {
    let two = lit::<T>(2.0);
    let rho = (E::constant(u) - sigma * sigma).sqrt();
    let (s, c) = (sigma.sin(), sigma.cos());
    let q = sigma * c / rho;
    let ap = s + q;
    let am = s - q;
    let wr = E::constant(two * w) * rho;
    let grow = (wr - E::constant(shift)).exp();
    let decay = (-wr - E::constant(shift)).exp();
    let sigma2 = sigma * sigma;
    let cross = ap * am * (sigma2 - rho * rho) * E::constant(two * (-shift).exp());
    ((grow * ap * ap + decay * am * am) * E::constant(u) + cross) / sigma2
}

/// The spectral denominator `f(σ)`.
pub fn spectral_denominator<T: Real>(params: &ModelParams<T>, sigma: T) -> Result<T> {
    check_sigma(params.u, sigma)?;
    Ok(scaled_denominator(params.u, params.w, sigma, T::zero()))
}

/// `e^{-shift}·f(σ₀ + t)` expanded about the exact root `σ₀` of the level
/// equation, for any [`Elementary`] offset `t`.
///
/// With `θ(σ) = σ + atan2(σ, aρ)` the level function is
/// `aρ·sin σ + σ·cos σ = √u·sin θ`, and `sin(θ(σ₀ + t) − θ(σ₀))` follows from
/// the angle-difference identities without cancellation. Only the residual
/// of the computed root is discarded; `σ₀` enters every other factor
/// smoothly. This keeps `f` accurate to working precision in `t` even when
/// the resonance half-width is far below the spacing of floats near `σ₀`.
pub fn denominator_about_level<T: Real, E: Elementary<T>>(u: T, w: T, sigma0: T, t: E, shift: T) -> E {
    let two = lit::<T>(2.0);
    let k = E::constant;
    let sigma = k(sigma0) + t;
    let rho0 = (u - sigma0 * sigma0).sqrt();
    let rho = (k(u) - sigma * sigma).sqrt();
    // ρ₀ − ρ, σρ₀ − σ₀ρ and ρρ₀ + σσ₀.
    let drho = t * (k(two * sigma0) + t) / (k(rho0) + rho);
    let sin_part = t * k(rho0) + k(sigma0) * drho;
    let cos_part = rho * k(rho0) + sigma * k(sigma0);
    let sin_phase = (t.sin() * cos_part + t.cos() * sin_part) / k(u);
    let h0 = rho0 * sigma0.cos() - sigma0 * sigma0.sin();
    let ap = sin_phase * k(h0) / rho;
    let am = sigma.sin() - sigma * sigma.cos() / rho;
    let wr = k(two * w) * rho;
    let sigma2 = sigma * sigma;
    let grow = (wr - k(shift)).exp();
    let decay = (-wr - k(shift)).exp();
    let cross = ap * am * (sigma2 - rho * rho) * k(two * (-shift).exp());
    ((grow * ap * ap + decay * am * am) * k(u) + cross) / sigma2
}

/// `f(σ₀ + Δ)` about a quasi-level; see [`denominator_about_level`].
pub fn denominator_near_level<T: Real>(u: T, w: T, sigma0: T, delta: T) -> T {
    denominator_about_level(u, w, sigma0, delta, T::zero())
}

/// Peak amplitude factor `4(1 + aρ₀)/(π·aρ₀)`.
pub fn weight_prefactor<T: Real>(level: &QuasiLevel<T>) -> T {
    lit::<T>(4.0) * (T::one() + level.arho0) / (T::PI() * level.arho0)
}

/// Density in `σ` whose Fourier transform (in `σ²`) is the non-decay amplitude;
/// `∫ weight dσ ≈ 1` for a peaked spectrum.
pub fn spectral_weight<T: Real>(params: &ModelParams<T>, level: &QuasiLevel<T>, sigma: T) -> Result<T> {
    Ok(weight_prefactor(level) / spectral_denominator(params, sigma)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasibound::find_levels;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(u: f64, w: f64) -> ModelParams<f64> {
        ModelParams::new(u, w).unwrap()
    }

    /// Independent transcription of the closed form for `|C1|²` with `a = 1`.
    fn c1_sq_closed(u: f64, w: f64, sigma: f64, mass_scale: f64) -> f64 {
        let rho = (u - sigma * sigma).sqrt();
        let ap = sigma.sin() + sigma / rho * sigma.cos();
        let am = sigma.sin() - sigma / rho * sigma.cos();
        let braces = ((2.0 * rho * w).exp() * ap * ap + (-2.0 * rho * w).exp() * am * am) * (sigma * sigma + rho * rho)
            + 2.0 * ap * am * (sigma * sigma - rho * rho);
        8.0 * mass_scale * sigma / PI / braces
    }

    #[test]
    fn outgoing_and_incoming_moduli_agree() {
        let p = params(4.0 * PI * PI, 1.0);
        for &s in &[0.3, 2.0, 4.5, 6.2] {
            let wn = WaveNumbers::new(&p, s).unwrap();
            let c = match_coefficients(&p, &wn, 1.0).unwrap();
            assert_relative_eq!(c.c3.norm(), c.d3.norm(), max_relative = 1e-13);
        }
    }

    #[test]
    fn region_three_normalization() {
        let p = params(4.0 * PI * PI, 1.0);
        let wn = WaveNumbers::new(&p, 2.0).unwrap();
        for &m in &[1.0, 0.5, 3.0] {
            let c = match_coefficients(&p, &wn, m).unwrap();
            assert_relative_eq!(c.c3.norm_sqr() * 2.0 * PI * 2.0 / m, 1.0, max_relative = 1e-12);
            assert!(c.c1.re > 0.0 && c.c1.im == 0.0);
        }
    }

    #[test]
    fn c1_matches_closed_form() {
        let p = params(4.0 * PI * PI, 1.0);
        let wn = WaveNumbers::new(&p, 2.0).unwrap();
        let c = match_coefficients(&p, &wn, 1.0).unwrap();
        assert_relative_eq!(c.c1.norm_sqr(), c1_sq_closed(p.u, 1.0, 2.0, 1.0), max_relative = 1e-12);
    }

    #[test]
    fn wavefunction_vanishes_at_origin_and_is_continuous() {
        let p = params(9.0 * PI * PI, 0.7);
        let wn = WaveNumbers::new(&p, 5.1).unwrap();
        let c = match_coefficients(&p, &wn, 1.0).unwrap();
        assert_eq!(wavefunction_at(&c, &wn, 0.0).norm(), 0.0);
        for x in [1.0, 1.7] {
            let h = 1e-13 * x;
            let (l, r) = (x - h, x + h);
            let scale = wavefunction_at(&c, &wn, x).norm().max(1e-300);
            let dv = (wavefunction_at(&c, &wn, l) - wavefunction_at(&c, &wn, r)).norm();
            assert!(dv / scale < 1e-10, "value jump {dv} at {x}");
            let ds = (wavefunction_slope_at(&c, &wn, l) - wavefunction_slope_at(&c, &wn, r)).norm();
            let sscale = wavefunction_slope_at(&c, &wn, x).norm().max(scale);
            assert!(ds / sscale < 1e-10, "slope jump {ds} at {x}");
        }
    }

    #[test]
    fn denominator_is_sixteen_times_amplitude_ratio() {
        for &(u, w) in &[(4.0 * PI * PI, 1.0), (16.0 * PI * PI, 0.6), (5.0, 2.5)] {
            let p = params(u, w);
            for i in 1..40 {
                let s = u.sqrt() * i as f64 / 40.0;
                let wn = WaveNumbers::new(&p, s).unwrap();
                let c = match_coefficients(&p, &wn, 1.0).unwrap();
                let ratio = 16.0 * c.c3.norm_sqr() / c.c1.norm_sqr();
                let f = spectral_denominator(&p, s).unwrap();
                assert_relative_eq!(f, ratio, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn denominator_matches_literal_transcription() {
        let u = 4.0 * PI * PI;
        let s = PI / 2.0;
        let r = (u - s * s).sqrt();
        let ap = s.sin() + s * s.cos() / r;
        let am = s.sin() - s * s.cos() / r;
        let want = ((2.0 * r).exp() * ap * ap + (-2.0 * r).exp() * am * am) * u / (s * s)
            + 2.0 * ap * am * (s * s - r * r) / (s * s);
        assert_relative_eq!(spectral_denominator(&params(u, 1.0), s).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn denominator_positive_on_scans() {
        for n in 1..=5 {
            for &w in &[0.3, 1.0, 3.0] {
                let p = params((n as f64 * PI).powi(2), w);
                let su = p.u.sqrt();
                for i in 0..1000 {
                    let s = su * (0.01 + 0.98 * i as f64 / 999.0);
                    let f = spectral_denominator(&p, s).unwrap();
                    assert!(f > 0.0 && f.is_finite(), "f({s}) = {f}");
                }
            }
        }
    }

    #[test]
    fn guard_rejects_barrier_top() {
        let p = params(4.0, 1.0);
        assert!(spectral_denominator(&p, 2.0).is_err());
        assert!(spectral_denominator(&p, 2.0 * (1.0 - 1e-14)).is_err());
        assert!(spectral_denominator(&p, 0.0).is_err());
        assert!(spectral_denominator(&p, 1.999).is_ok());
    }

    #[test]
    fn offset_form_agrees_with_direct_evaluation() {
        for n in 2..=4 {
            let p = params((n as f64 * PI).powi(2), 0.9);
            for l in find_levels(&p) {
                for &d in &[-0.3, -1e-2, 1e-2, 0.2] {
                    let s = l.sigma0 + d;
                    if s <= 0.0 || s * s >= p.u {
                        continue;
                    }
                    let direct = spectral_denominator(&p, s).unwrap();
                    let near = denominator_near_level(p.u, p.w, l.sigma0, d);
                    assert_relative_eq!(near, direct, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn offset_form_is_smooth_through_the_peak() {
        // Second differences of a locally quadratic function are constant;
        // cancellation noise in α₊ would show up as scatter.
        let p = params(9.0 * PI * PI, 1.5);
        let l = find_levels(&p)[0];
        let h = 1e-9;
        let f = |k: f64| denominator_near_level(p.u, p.w, l.sigma0, k * h);
        let dd: Vec<f64> = (-5..5).map(|k| f(k as f64 + 1.0) - 2.0 * f(k as f64) + f(k as f64 - 1.0)).collect();
        let mean = dd.iter().sum::<f64>() / dd.len() as f64;
        for v in dd {
            assert_relative_eq!(v, mean, max_relative = 1e-4);
        }
    }

    #[test]
    fn weight_peaks_at_level() {
        let p = params(9.0 * PI * PI, 1.5);
        for level in find_levels(&p).into_iter().filter(|l| !l.is_shallow()) {
            let shape = crate::spectral::shape_constants(&p, &level).unwrap();
            let step = shape.gamma / 5.0;
            let (best, _) = (-50..=50)
                .map(|i| {
                    let s = level.sigma0 + step * i as f64;
                    let v = spectral_weight(&p, &level, s).unwrap();
                    assert!(v >= 0.0);
                    (s, v)
                })
                .fold((0.0, f64::MIN), |acc, sv| if sv.1 > acc.1 { sv } else { acc });
            let centre = level.sigma0 + shape.epsilon / 2.0;
            assert!((best - centre).abs() <= step, "peak at {best}, expected near {centre}");
            // Lorentzian shape: weight(σ₀)/weight(x₀) = (y₀/γ)² = (2σ₀aρ₀/u)².
            let at_sigma0 = spectral_weight(&p, &level, level.sigma0).unwrap();
            let at_centre = spectral_weight(&p, &level, centre).unwrap();
            let want = (2.0 * level.sigma0 * level.arho0 / p.u).powi(2);
            assert_relative_eq!(at_sigma0 / at_centre, want, max_relative = 1e-3);
        }
    }

    proptest::proptest! {
        #[test]
        fn c3_d3_symmetry_everywhere(n in 1u32..6, w in 0.1f64..3.0, frac in 0.001f64..0.999) {
            let p = params((n as f64 * PI).powi(2), w);
            let wn = WaveNumbers::new(&p, p.u.sqrt() * frac).unwrap();
            let c = match_coefficients(&p, &wn, 1.0).unwrap();
            proptest::prop_assert!((c.c3.norm() / c.d3.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn denominator_positive(n in 1u32..6, w in 0.1f64..4.0, frac in 0.01f64..0.99) {
            let p = params((n as f64 * PI).powi(2), w);
            let f = spectral_denominator(&p, p.u.sqrt() * frac).unwrap();
            proptest::prop_assert!(f > 0.0);
        }
    }
}
