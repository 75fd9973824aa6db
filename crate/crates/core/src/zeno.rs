//! Inverse-Zeno crossover and the τ₂ parameter sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhysicalConfig};
use crate::pipeline::analyze_level;
use crate::poles::SurvivalParams;
use crate::quasibound::{find_levels, QuasiLevel};
use crate::scalar::{lit, to_f64, Real};
use crate::survival::p4_over_p2;

/// `φ(t̃) = exp(−2x₂y₂t̃)·cos(α + βt̃) − cos α`, so that
/// `p4_approx/p2 = 1 + 2(y₁/y₂)φ`.
pub fn phi<T: Real>(t_tilde: T, sp: &SurvivalParams<T>) -> T {
    (-lit::<T>(2.0) * sp.x2 * sp.y2 * t_tilde).exp() * (sp.alpha + sp.beta * t_tilde).cos() - sp.cos_alpha
}

/// `φ′(0) = −2x₂y₂·cos α − β·sin α`.
pub fn phi_slope_at_zero<T: Real>(sp: &SurvivalParams<T>) -> T {
    -lit::<T>(2.0) * sp.x2 * sp.y2 * sp.cos_alpha - sp.beta * sp.sin_alpha
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverResult<T> {
    pub exists: bool,
    pub t_star_tilde: Option<T>,
    /// `2x₂y₂`.
    pub lhs: T,
    /// `−β·tan α` (infinite when `cos α = 0`).
    pub rhs: T,
    pub phi_residual: Option<T>,
    /// First positive root of `p4/p2 − 1` using the full two-pole law.
    pub t_star_exact_tilde: Option<T>,
}

/// `2x₂y₂ < −β tan α`, evaluated as `2x₂y₂·cos α` against `−β·sin α` with
/// the inequality flipped for negative `cos α`.
pub fn crossover_criterion<T: Real>(sp: &SurvivalParams<T>) -> bool {
    if sp.sin_alpha == T::zero() {
        return false;
    }
    let left = lit::<T>(2.0) * sp.x2 * sp.y2 * sp.cos_alpha;
    let right = -sp.beta * sp.sin_alpha;
    if sp.cos_alpha >= T::zero() {
        left < right
    } else {
        left > right
    }
}

/// Finds the first sign change of `g` after `t_min` relative to `dir`, then
/// bisects until `|g| ≤ tol` or the bracket collapses, returning the
/// evaluated point with the smallest `|g|`.
fn first_root<T: Real, G: Fn(T) -> T>(g: G, dir: T, t_min: T, step: T, t_end: T, tol: T) -> Option<T> {
    let mut lo = t_min;
    let mut k = 1usize;
    let hi = loop {
        let t = t_min + step * T::from_usize(k).unwrap();
        if t > t_end {
            return None;
        }
        let v = g(t);
        if v * dir <= T::zero() {
            break t;
        }
        lo = t;
        k += 1;
    };
    let (mut lo, mut hi) = (lo, hi);
    let mut best = (hi, g(hi).abs());
    for _ in 0..300 {
        let mid = lo + (hi - lo) / lit(2.0);
        if !(mid > lo && mid < hi) {
            break;
        }
        let v = g(mid);
        if v.abs() < best.1 {
            best = (mid, v.abs());
        }
        if v.abs() <= tol {
            break;
        }
        if v * dir > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(best.0)
}

/// Locates the first non-trivial zero of [`phi`].
pub fn crossover<T: Real>(sp: &SurvivalParams<T>) -> Result<CrossoverResult<T>> {
    let two = lit::<T>(2.0);
    let lhs = two * sp.x2 * sp.y2;
    let rhs = -sp.beta * sp.sin_alpha / sp.cos_alpha;
    let mut result =
        CrossoverResult { exists: false, t_star_tilde: None, lhs, rhs, phi_residual: None, t_star_exact_tilde: None };
    if !crossover_criterion(sp) {
        return Ok(result);
    }
    let scale = (T::one() / lhs).min(T::PI() / sp.beta.abs());
    let step = scale / lit(64.0);
    let t_min = lit::<T>(1e-9) * scale;
    let t_end = lit::<T>(100.0) / lhs;
    let tol = T::epsilon() * (T::one() + sp.cos_alpha.abs());
    let dir = phi_slope_at_zero(sp).signum();
    let t_star = first_root(|t| phi(t, sp), dir, t_min, step, t_end, tol).ok_or_else(|| {
        Error::Numerical(format!("crossover criterion holds but phi keeps its sign for {} envelope e-folds", 100))
    })?;
    result.exists = true;
    result.t_star_tilde = Some(t_star);
    result.phi_residual = Some(phi(t_star, sp).abs());

    let gap = sp.x2 * sp.y2 - sp.x1 * sp.y1;
    if gap > T::zero() {
        let g = |t: T| p4_over_p2(t, sp) - T::one();
        let r = sp.ratio();
        let slope =
            sp.n * (-lit::<T>(4.0) * gap * r * r + two * r * (-two * gap * sp.cos_alpha - sp.beta * sp.sin_alpha));
        if slope != T::zero() {
            let exact_scale = (T::one() / (two * gap)).min(T::PI() / sp.beta.abs());
            result.t_star_exact_tilde = first_root(
                g,
                slope.signum(),
                lit::<T>(1e-9) * exact_scale,
                exact_scale / lit(64.0),
                lit::<T>(100.0) / (two * gap),
                lit::<T>(1e-13),
            );
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub n: usize,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Option<LinearFit<T>> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = T::from_usize(n).unwrap();
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / nf;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / nf;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
        syy = syy + (y - my) * (y - my);
    }
    if !(sxx > T::zero()) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = xs.iter().zip(ys).fold(T::zero(), |a, (&x, &y)| a + (y - slope * x - intercept).powi(2));
    let r_squared = if syy > T::zero() { T::one() - ss_res / syy } else { T::one() };
    Some(LinearFit { slope, intercept, r_squared, n })
}

/// `m(b − a)/√(2m(V₀ − E₀))` in physical time units.
pub fn tau2_phenomenological<T: Real>(config: &PhysicalConfig<T>, level: &QuasiLevel<T>) -> T {
    let gap = config.v0 * (T::one() - level.e0_over_v0);
    config.m * (config.b - config.a) / (lit::<T>(2.0) * config.m * gap).sqrt()
}

/// Same estimate in `t̃` units: `w/(2aρ₀)`.
pub fn tau2_phenomenological_tilde<T: Real>(params: &ModelParams<T>, level: &QuasiLevel<T>) -> T {
    params.w / (lit::<T>(2.0) * level.arho0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow<T> {
    /// Swept value: `w`, or `[2m(V₀−E₀)]^{−1/2}` for gap sweeps.
    pub param: T,
    pub w: T,
    pub v0: T,
    pub level_index: usize,
    pub sigma0: T,
    pub arho0: T,
    pub x1: T,
    pub y1: T,
    pub x2: T,
    pub y2: T,
    pub tau1_tilde: T,
    pub tau2_tilde: T,
    pub tau1: T,
    pub tau2: T,
    pub tau2_phenomenological: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<T> {
    pub rows: Vec<SweepRow<T>>,
    /// Fit of `tau2` (physical) against `param`.
    pub fit: Option<LinearFit<T>>,
    /// Points dropped from the sweep, with the reason.
    pub warnings: Vec<String>,
}

fn ensure_ascending<T: Real>(values: &[T], what: &str) -> Result<()> {
    if values.is_empty() || values.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidConfig(vec![format!("{what} values must be non-empty and strictly ascending")]));
    }
    Ok(())
}

fn nearest_level<T: Real>(levels: &[QuasiLevel<T>], sigma: T) -> Option<QuasiLevel<T>> {
    levels
        .iter()
        .min_by(|a, b| {
            (a.sigma0 - sigma).abs().partial_cmp(&(b.sigma0 - sigma).abs()).unwrap_or(std::cmp::Ordering::Equal)
        })
        .copied()
}

type Tracked<T> = (ModelParams<T>, QuasiLevel<T>);
type Spectrum<T> = (ModelParams<T>, Vec<QuasiLevel<T>>);

/// Tracks one level across a family of configurations by nearest-`σ₀`
/// continuation, starting from the `level_index`-th level of the first.
fn track_level<T: Real>(
    configs: &[PhysicalConfig<T>],
    level_index: usize,
    warnings: &mut Vec<String>,
) -> Result<Vec<Option<Tracked<T>>>> {
    let spectra: Vec<Result<Spectrum<T>>> = configs
        .par_iter()
        .map(|c| {
            let p = c.to_dimensionless()?;
            Ok((p, find_levels(&p)))
        })
        .collect();
    let mut prev: Option<T> = None;
    let mut out = Vec::with_capacity(configs.len());
    for spec in spectra {
        let (p, levels) = spec?;
        let chosen = match prev {
            None => levels.iter().find(|l| l.index == level_index).copied(),
            Some(s) => nearest_level(&levels, s),
        };
        match chosen {
            Some(l) => {
                prev = Some(l.sigma0);
                out.push(Some((p, l)));
            }
            None => {
                warnings.push(format!("u = {:.6}: level {level_index} not present", to_f64(p.u)));
                out.push(None);
            }
        }
    }
    Ok(out)
}

fn make_row<T: Real>(
    config: &PhysicalConfig<T>,
    params: &ModelParams<T>,
    level: &QuasiLevel<T>,
    include_shallow: bool,
    gap_param: bool,
) -> Result<SweepRow<T>> {
    let an = analyze_level(params, level, include_shallow)?;
    let sp = an.survival?;
    let proxy = config.a / level.arho0;
    Ok(SweepRow {
        param: if gap_param { proxy } else { params.w },
        w: params.w,
        v0: config.v0,
        level_index: level.index,
        sigma0: level.sigma0,
        arho0: level.arho0,
        x1: sp.x1,
        y1: sp.y1,
        x2: sp.x2,
        y2: sp.y2,
        tau1_tilde: sp.tau1_tilde,
        tau2_tilde: sp.tau2_tilde,
        tau1: sp.tau1_tilde * params.time_scale,
        tau2: sp.tau2_tilde * params.time_scale,
        tau2_phenomenological: tau2_phenomenological(config, level),
    })
}

/// Rejects a sweep in which the narrow and broad poles trade places between
/// neighbouring points.
fn check_continuity<T: Real>(rows: &[SweepRow<T>]) -> Result<()> {
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.level_index != b.level_index {
            continue;
        }
        let d = |x1: T, y1: T, x2: T, y2: T| (x1 - x2).hypot(y1 - y2);
        let stay = d(b.x1, b.y1, a.x1, a.y1) + d(b.x2, b.y2, a.x2, a.y2);
        let swap = d(b.x1, b.y1, a.x2, a.y2) + d(b.x2, b.y2, a.x1, a.y1);
        if swap < stay {
            return Err(Error::Classification(format!(
                "narrow and broad poles swap between param {:.6} and {:.6}",
                to_f64(a.param),
                to_f64(b.param)
            )));
        }
    }
    Ok(())
}

fn finish<T: Real>(mut rows: Vec<SweepRow<T>>, warnings: Vec<String>) -> Result<SweepResult<T>> {
    rows.sort_by(|a, b| {
        a.param.partial_cmp(&b.param).unwrap_or(std::cmp::Ordering::Equal).then(a.level_index.cmp(&b.level_index))
    });
    let xs: Vec<T> = rows.iter().map(|r| r.param).collect();
    let ys: Vec<T> = rows.iter().map(|r| r.tau2).collect();
    let fit = linear_fit(&xs, &ys);
    Ok(SweepResult { rows, fit, warnings })
}

fn collect_rows<T: Real>(
    jobs: Vec<(PhysicalConfig<T>, ModelParams<T>, QuasiLevel<T>)>,
    include_shallow: bool,
    gap_param: bool,
    warnings: &mut Vec<String>,
) -> Result<Vec<SweepRow<T>>> {
    let results: Vec<Result<SweepRow<T>>> =
        jobs.par_iter().map(|(c, p, l)| make_row(c, p, l, include_shallow, gap_param)).collect();
    let mut rows = Vec::new();
    for ((c, p, l), r) in jobs.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) if e.is_numerical() && !matches!(e, Error::Classification(_)) => return Err(e),
            Err(e) => {
                warnings.push(format!("w = {:.6}, V0 = {:.6}, level {}: {e}", to_f64(p.w), to_f64(c.v0), l.index))
            }
        }
    }
    Ok(rows)
}

/// τ₂ of one level across barrier widths (same `m`, `a`, `V₀` as `base`).
pub fn sweep_tau2_vs_w<T: Real>(
    base: &PhysicalConfig<T>,
    level_index: usize,
    w_values: &[T],
    include_shallow: bool,
) -> Result<SweepResult<T>> {
    ensure_ascending(w_values, "w")?;
    let configs: Vec<PhysicalConfig<T>> = w_values.iter().map(|&w| base.with_width(w)).collect();
    let mut warnings = Vec::new();
    let tracked = track_level(&configs, level_index, &mut warnings)?;
    let jobs = configs.iter().zip(tracked).filter_map(|(c, t)| t.map(|(p, l)| (*c, p, l))).collect();
    let rows = collect_rows(jobs, include_shallow, false, &mut warnings)?;
    check_continuity(&rows)?;
    finish(rows, warnings)
}

/// τ₂ against `[2m(V₀ − E₀)]^{−1/2}` across barrier heights at fixed width.
/// With `level = None` every (non-shallow) level of every height contributes;
/// otherwise the given level is followed by continuation.
pub fn sweep_tau2_vs_gap<T: Real>(
    base: &PhysicalConfig<T>,
    v0_values: &[T],
    level: Option<usize>,
    include_shallow: bool,
) -> Result<SweepResult<T>> {
    ensure_ascending(v0_values, "V0")?;
    let configs: Vec<PhysicalConfig<T>> = v0_values.iter().map(|&v| base.with_v0(v)).collect();
    let mut warnings = Vec::new();
    let jobs: Vec<_> = match level {
        Some(idx) => configs
            .iter()
            .zip(track_level(&configs, idx, &mut warnings)?)
            .filter_map(|(c, t)| t.map(|(p, l)| (*c, p, l)))
            .collect(),
        None => {
            let mut jobs = Vec::new();
            for c in &configs {
                let p = c.to_dimensionless()?;
                for l in find_levels(&p) {
                    if include_shallow || !l.is_shallow() {
                        jobs.push((*c, p, l));
                    }
                }
            }
            jobs
        }
    };
    let rows = collect_rows(jobs, include_shallow, true, &mut warnings)?;
    if level.is_some() {
        let mut by_v0 = rows.clone();
        by_v0.sort_by(|a, b| a.v0.partial_cmp(&b.v0).unwrap_or(std::cmp::Ordering::Equal));
        check_continuity(&by_v0)?;
    }
    finish(rows, warnings)
}
