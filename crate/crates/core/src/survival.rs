//! Survival probability: Breit-Wigner, two-pole, and the direct spectral
//! integral.

use serde::Serialize;

use crate::continuum::{denominator_near_level, weight_prefactor};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::poles::{Pole, SurvivalParams};
use crate::quadrature::{FilonRule, QuadratureOptions};
use crate::quasibound::{find_levels, QuasiLevel};
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::shape_constants_unchecked;

/// Dimensionless times with their conversion factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid<T> {
    pub t_tilde_values: Vec<T>,
    pub time_scale: T,
}

impl<T: Real> TimeGrid<T> {
    /// `samples` equally spaced points on `[0, t_max]`.
    pub fn uniform(t_max: T, samples: usize, time_scale: T) -> Result<Self> {
        if samples < 2 || !(t_max > T::zero()) {
            return Err(Error::InvalidConfig(vec!["time grid needs t_max > 0 and at least two samples".into()]));
        }
        let last = T::from_usize(samples - 1).unwrap();
        let t_tilde_values = (0..samples).map(|i| t_max * T::from_usize(i).unwrap() / last).collect();
        Ok(Self { t_tilde_values, time_scale })
    }

    pub fn physical(&self) -> impl Iterator<Item = T> + '_ {
        self.t_tilde_values.iter().map(move |&t| t * self.time_scale)
    }
}

/// `exp(−4·x₀·y₀·t̃)`.
pub fn p2<T: Real>(t_tilde: T, z0: &Pole<T>) -> T {
    (-lit::<T>(4.0) * z0.x * z0.y * t_tilde).exp()
}

/// Full two-pole survival law.
pub fn p4<T: Real>(t_tilde: T, sp: &SurvivalParams<T>) -> T {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let r = sp.ratio();
    let (a, b) = (sp.x1 * sp.y1, sp.x2 * sp.y2);
    sp.n * ((-four * a * t_tilde).exp()
        + r * r * (-four * b * t_tilde).exp()
        + two * r * (-two * (a + b) * t_tilde).exp() * (sp.alpha + sp.beta * t_tilde).cos())
}

/// First-order expansion of [`p4`] in `y₁/y₂`.
pub fn p4_approx<T: Real>(t_tilde: T, sp: &SurvivalParams<T>) -> T {
    let two = lit::<T>(2.0);
    let lead = (-lit::<T>(4.0) * sp.x1 * sp.y1 * t_tilde).exp();
    let phi = (-two * sp.x2 * sp.y2 * t_tilde).exp() * (sp.alpha + sp.beta * t_tilde).cos() - sp.cos_alpha;
    lead * (T::one() + two * sp.ratio() * phi)
}

/// `1 − p4(t̃)` without cancellation at short times.
pub fn survival_deficit<T: Real>(t_tilde: T, sp: &SurvivalParams<T>) -> T {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let r = sp.ratio();
    let (a, b) = (sp.x1 * sp.y1, sp.x2 * sp.y2);
    let phase = sp.alpha + sp.beta * t_tilde;
    // e^{−λt}cos(α+βt) − cos α, with the cosine difference as a sine product.
    let cross = (-two * (a + b) * t_tilde).exp_m1() * phase.cos()
        - two * (sp.alpha + sp.beta * t_tilde / two).sin() * (sp.beta * t_tilde / two).sin();
    -sp.n * ((-four * a * t_tilde).exp_m1() + r * r * (-four * b * t_tilde).exp_m1() + two * r * cross)
}

/// `p4(t̃) / exp(−4x₁y₁t̃)` without forming either factor separately.
pub fn p4_over_p2<T: Real>(t_tilde: T, sp: &SurvivalParams<T>) -> T {
    let two = lit::<T>(2.0);
    let r = sp.ratio();
    let gap = sp.x2 * sp.y2 - sp.x1 * sp.y1;
    sp.n * (T::one()
        + r * r * (-lit::<T>(4.0) * gap * t_tilde).exp()
        + two * r * (-two * gap * t_tilde).exp() * (sp.alpha + sp.beta * t_tilde).cos())
}

/// Coefficients of `p4(t̃) = 1 + a1·t̃ + a2·t̃² + O(t̃³)`.
pub fn short_time_coefficients<T: Real>(sp: &SurvivalParams<T>) -> (T, T) {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let eight = lit::<T>(8.0);
    let r = sp.ratio();
    let (a, b) = (sp.x1 * sp.y1, sp.x2 * sp.y2);
    let lambda = two * (a + b);
    let (c, s, beta) = (sp.cos_alpha, sp.sin_alpha, sp.beta);
    let a1 = sp.n * (-four * a - four * r * r * b - two * r * (lambda * c + beta * s));
    let a2 = sp.n
        * (eight * a * a + eight * r * r * b * b + r * ((lambda * lambda - beta * beta) * c + two * lambda * beta * s));
    (a1, a2)
}

/// Zeno time `1/√(−a2)` (in `t̃` units) when the onset is quadratic.
pub fn zeno_time<T: Real>(sp: &SurvivalParams<T>) -> Option<T> {
    let (_, a2) = short_time_coefficients(sp);
    (a2 < T::zero()).then(|| T::one() / (-a2).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleValue<T> {
    /// `|∫ weight·e^{−iσ²t̃} dσ|²`.
    pub raw: T,
    /// `raw / raw(t̃ = 0)`.
    pub renormalized: T,
}

/// Direct evaluation of the spectral survival integral for one level.
///
/// The weight `1/f` peaks at every quasi-level, but the spectral density is
/// only valid around the chosen one. The integral therefore runs over the
/// level's own cell in `σ²`: from the midpoint with the level below (or
/// `σ_min²`) to the midpoint with the level above (or `σ_max²`). Near the peak
/// the variable is the offset `σ² − σ₀²`, with break points doubling away from
/// it and `f` evaluated by [`denominator_near_level`]. For the lowest level the
/// range below `σ₀²/2` is integrated in `σ²` itself, graded geometrically
/// towards the integrable `1/√s` edge. The overall phase `e^{−iσ₀²t̃}` is
/// dropped.
#[derive(Debug, Clone)]
pub struct SurvivalOracle<T> {
    rules: Vec<FilonRule<T>>,
    norm: T,
}

impl<T: Real> SurvivalOracle<T> {
    pub fn new(params: &ModelParams<T>, level: &QuasiLevel<T>, opts: &QuadratureOptions) -> Result<Self> {
        let two = lit::<T>(2.0);
        let su = params.sqrt_u();
        let sigma0 = level.sigma0;
        let s0 = sigma0 * sigma0;
        let s_min = (lit::<T>(1e-6) * su).powi(2);
        let s_max = (su * (T::one() - lit::<T>(1e-9))).powi(2);
        let sorted = |mut v: Vec<T>| {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            v.dedup();
            v
        };

        let others: Vec<T> = find_levels(params)
            .into_iter()
            .map(|l| l.sigma0 * l.sigma0)
            .filter(|&s| (s - s0).abs() > lit::<T>(1e-9) * s0)
            .collect();
        let below =
            others.iter().copied().filter(|&s| s < s0).fold(None, |m: Option<T>, s| Some(m.map_or(s, |m| m.max(s))));
        let above =
            others.iter().copied().filter(|&s| s > s0).fold(None, |m: Option<T>, s| Some(m.map_or(s, |m| m.min(s))));

        let pref = weight_prefactor(level);
        let (u, w) = (params.u, params.w);
        let part_opts = QuadratureOptions { abs_tol: opts.abs_tol / 2.0, ..*opts };
        let mut rules = Vec::with_capacity(2);

        let lo = match below {
            Some(s) => (s + s0) / two - s0,
            None => {
                let s_split = s0 / two;
                let mut low_breaks = vec![s_min, s_split];
                let mut e = s_min * lit(4.0);
                while e < s_split {
                    low_breaks.push(e);
                    e = e * lit(4.0);
                }
                rules.push(FilonRule::build(
                    |s: T| {
                        let sigma = s.sqrt();
                        pref / (denominator_near_level(u, w, sigma0, sigma - sigma0) * two * sigma)
                    },
                    &sorted(low_breaks),
                    s0,
                    &part_opts,
                )?);
                s_split - s0
            }
        };
        let hi = above.map_or(s_max, |s| (s + s0) / two) - s0;

        let width = two * sigma0 * shape_constants_unchecked(params, level).gamma;
        let mut breaks = vec![lo, T::zero(), hi];
        let mut d = width;
        while d < -lo || d < hi {
            for x in [-d, d] {
                if x > lo && x < hi {
                    breaks.push(x);
                }
            }
            d = d * two;
        }
        rules.push(FilonRule::build(
            |ds: T| {
                let sigma = (s0 + ds).sqrt();
                pref / (denominator_near_level(u, w, sigma0, ds / (sigma + sigma0)) * two * sigma)
            },
            &sorted(breaks),
            T::zero(),
            &part_opts,
        )?);

        let mut oracle = Self { rules, norm: T::one() };
        let norm = oracle.amplitude(T::zero()).norm_sqr();
        if !(norm > T::zero()) {
            return Err(Error::Numerical("oracle normalization vanished".into()));
        }
        oracle.norm = norm;
        Ok(oracle)
    }

    fn amplitude(&self, t_tilde: T) -> num_complex::Complex<T> {
        self.rules.iter().fold(num_complex::Complex::new(T::zero(), T::zero()), |acc, r| acc + r.transform(t_tilde))
    }

    pub fn panel_count(&self) -> usize {
        self.rules.iter().map(FilonRule::panel_count).sum()
    }

    /// Estimated absolute error on the amplitude.
    pub fn estimated_error(&self) -> T {
        self.rules.iter().fold(T::zero(), |a, r| a + r.estimated_error())
    }

    /// Accepts negative `t̃`.
    pub fn eval(&self, t_tilde: T) -> OracleValue<T> {
        let raw = self.amplitude(t_tilde).norm_sqr();
        OracleValue { raw, renormalized: raw / self.norm }
    }
}

/// One-shot oracle evaluation; build a [`SurvivalOracle`] to reuse the
/// partition over many times.
pub fn p_oracle<T: Real>(
    t_tilde: T,
    params: &ModelParams<T>,
    level: &QuasiLevel<T>,
    opts: &QuadratureOptions,
) -> Result<OracleValue<T>> {
    Ok(SurvivalOracle::new(params, level, opts)?.eval(t_tilde))
}

/// `max |p4 − p_oracle_renormalized|` over a uniform grid on `[0, t_max]`.
pub fn oracle_deviation<T: Real>(
    oracle: &SurvivalOracle<T>,
    sp: &SurvivalParams<T>,
    t_max: T,
    samples: usize,
) -> Result<T> {
    let grid = TimeGrid::uniform(t_max, samples, T::one())?;
    let worst =
        grid.t_tilde_values.iter().map(|&t| (p4(t, sp) - oracle.eval(t).renormalized).abs()).fold(T::zero(), T::max);
    if !worst.is_finite() {
        return Err(Error::Numerical(format!("oracle deviation not finite ({})", to_f64(worst))));
    }
    Ok(worst)
}
