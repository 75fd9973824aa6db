//! Acceptance criteria 1–12. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use zenolab::poles::PoleSet;
use zenolab::quasibound::level_function;
use zenolab::survival::SurvivalOracle;
use zenolab::zeno::crossover_criterion;
use zenolab::{
    analyze_level, crossover, find_levels, oracle_deviation, short_time_coefficients, survival_params,
    sweep_tau2_vs_gap, sweep_tau2_vs_w, tau0_closed_form, taylor_expand, LevelAnalysisF64, ModelParamsF64,
    PhysicalConfigF64, Pole, SweepResultF64, Tolerances,
};

const GRID_SQRT_U: [f64; 3] = [2.0, 3.0, 4.0];
const GRID_W: [f64; 3] = [0.6, 1.0, 1.4];
/// Barrier heights of the gap sweep: `√u = (2 + k/2)π`, `k = 0..8`.
const GAP_STEPS: usize = 9;
const GAP_WIDTH: f64 = 1.0;

type Criterion = (&'static str, f64, fn(&Tolerances) -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `m = 1/2`, `a = 1`, so that `u = V0` and `t̃ = t`.
fn config(sqrt_u: f64, w: f64) -> PhysicalConfigF64 {
    PhysicalConfigF64::new(0.5, 1.0, 1.0 + w, sqrt_u * sqrt_u)
}

struct GridLevel {
    label: String,
    params: ModelParamsF64,
    an: LevelAnalysisF64,
}

/// Every non-shallow level of the 3×3 reference grid.
fn grid() -> Vec<GridLevel> {
    let mut out = Vec::new();
    for &n in &GRID_SQRT_U {
        for &w in &GRID_W {
            let params = config(n * PI, w).to_dimensionless().unwrap();
            for l in find_levels(&params) {
                if l.is_shallow() {
                    continue;
                }
                let an = analyze_level(&params, &l, false).unwrap();
                out.push(GridLevel { label: format!("sqrt(u)={n}pi w={w} L{}", l.index), params, an });
            }
        }
    }
    out
}

fn validated(g: &[GridLevel]) -> Vec<&GridLevel> {
    g.iter().filter(|x| x.an.validated()).collect()
}

fn worst<'a>(items: impl Iterator<Item = (f64, &'a str)>) -> (f64, &'a str) {
    items.fold((0.0, "-"), |acc, (v, l)| if v > acc.0 || v.is_nan() { (v, l) } else { acc })
}

fn c1(tol: &Tolerances) -> Outcome {
    let mut ok = true;
    let mut max_res: f64 = 0.0;
    let mut counts = Vec::new();
    for n in 1..=5 {
        let p = config(n as f64 * PI, 1.0).to_dimensionless().unwrap();
        let levels = find_levels(&p);
        counts.push(levels.len());
        ok &= levels.len() == n;
        for l in &levels {
            max_res = max_res.max(level_function(p.u, l.sigma0).abs());
        }
    }
    ok &= max_res <= tol.level_residual;
    outcome(
        ok,
        format!("counts {counts:?} for N = 1..5, max |g(sigma0)| = {max_res:.2e} (tol {:.0e})", tol.level_residual),
    )
}

fn c2(tol: &Tolerances) -> Outcome {
    let g = grid();
    let errs: Vec<(f64, String)> = g
        .iter()
        .map(|x| {
            let t = taylor_expand(&x.params, &x.an.level, 2).unwrap();
            let eps = -t.normalized[1];
            let gam = t.normalized[0].sqrt();
            let s = &x.an.shape;
            let e = ((eps - s.epsilon) / s.epsilon).abs().max(((gam - s.gamma) / s.gamma).abs());
            (e, x.label.clone())
        })
        .collect();
    let (w, at) = worst(errs.iter().map(|(e, l)| (*e, l.as_str())));
    let fails = errs.iter().filter(|(e, _)| !(*e <= tol.expansion_rel)).count();
    outcome(
        fails == 0,
        format!(
            "{} levels, max rel err of (eps, gamma) = {w:.2e} at {at}, {fails} above tol {:.0e}",
            errs.len(),
            tol.expansion_rel
        ),
    )
}

fn c3(tol: &Tolerances) -> Outcome {
    let g = grid();
    let mut errs = Vec::new();
    let mut missing = Vec::new();
    for x in &g {
        match &x.an.narrow {
            Ok(z1) => errs.push((z1.relative_distance(&x.an.z0), x.label.as_str())),
            Err(e) => missing.push(format!("{}: {e}", x.label)),
        }
    }
    let (w, at) = worst(errs.iter().copied());
    let pass = missing.is_empty() && w <= tol.pole_match;
    outcome(
        pass,
        format!(
            "{} levels, max |z1-z0|/|z0| = {w:.2e} at {at} (tol {:.0e}), {} without narrow root",
            g.len(),
            tol.pole_match,
            missing.len()
        ),
    )
}

fn c4(tol: &Tolerances) -> Outcome {
    let g = grid();
    let v = validated(&g);
    let ratios: Vec<(f64, &str)> = v
        .iter()
        .map(|x| {
            let (a1, a2) = short_time_coefficients(x.an.survival.as_ref().unwrap());
            ((a1 / a2).abs(), x.label.as_str())
        })
        .collect();
    let (w, at) = worst(ratios.iter().copied());
    outcome(
        !v.is_empty() && w <= tol.linear_term,
        format!(
            "{} validated of {} levels, max |a1|/|a2| = {w:.2e} at {at} (tol {:.0e})",
            v.len(),
            g.len(),
            tol.linear_term
        ),
    )
}

fn c5(tol: &Tolerances) -> Outcome {
    let g = grid();
    let chosen: Vec<&GridLevel> = validated(&g).into_iter().filter(|x| x.an.shape.gamma < 1e-3).collect();
    let mut devs = Vec::new();
    for x in &chosen {
        let sp = x.an.survival.as_ref().unwrap();
        let dev = SurvivalOracle::new(&x.params, &x.an.level, &tol.quadrature)
            .and_then(|o| oracle_deviation(&o, sp, 3.0 * sp.tau1_tilde, 200));
        devs.push((dev.unwrap_or(f64::NAN), x.label.as_str()));
    }
    let (w, at) = worst(devs.iter().copied());
    let fails = devs.iter().filter(|(d, _)| !(*d <= tol.oracle_abs)).count();
    outcome(
        !devs.is_empty() && fails == 0,
        format!(
            "{} levels with gamma < 1e-3, max |p4 - p_oracle| = {w:.2e} at {at}, {fails} above tol {:.0e}",
            devs.len(),
            tol.oracle_abs
        ),
    )
}

fn c6(tol: &Tolerances) -> Outcome {
    let params = config(3.0 * PI, 1.0).to_dimensionless().unwrap();
    let mut worst_diff: f64 = 0.0;
    let mut n = 0;
    for l in find_levels(&params).iter().filter(|l| !l.is_shallow()) {
        let an = analyze_level(&params, l, false).unwrap();
        let span = an.survival.as_ref().map_or(1.0, |s| 3.0 * s.tau1_tilde);
        let oracle = match SurvivalOracle::new(&params, l, &tol.quadrature) {
            Ok(o) => o,
            Err(e) => return outcome(false, format!("oracle for level {}: {e}", l.index)),
        };
        for k in 1..=20 {
            let t = span * k as f64 / 20.0;
            worst_diff = worst_diff.max((oracle.eval(t).raw - oracle.eval(-t).raw).abs());
        }
        n += 1;
    }
    outcome(
        n > 0 && worst_diff <= 1e-9,
        format!("{n} levels at sqrt(u)=3pi w=1, 20 times each, max |P(t) - P(-t)| = {worst_diff:.2e} (tol 1e-9)"),
    )
}

fn c7(tol: &Tolerances) -> Outcome {
    let g = grid();
    let v = validated(&g);
    let mut bad = Vec::new();
    let mut max_res: f64 = 0.0;
    for x in &v {
        let sp = x.an.survival.as_ref().unwrap();
        match crossover(sp) {
            Ok(c) if c.exists && crossover_criterion(sp) => {
                let r = c.phi_residual.unwrap_or(f64::INFINITY);
                max_res = max_res.max(r);
                if !(r <= tol.phi_residual) || !(c.t_star_tilde.unwrap_or(-1.0) > 0.0) {
                    bad.push(x.label.clone());
                }
            }
            Ok(_) => bad.push(format!("{} (criterion false)", x.label)),
            Err(e) => bad.push(format!("{}: {e}", x.label)),
        }
    }
    // Synthetic pair with equal real parts built on a real level.
    let x = v.first().map(|x| &x.an).unwrap_or(&g[0].an);
    let z1 = Pole::new(x.level.sigma0, 1e-4);
    let z2 = Pole::new(x.level.sigma0, 0.5);
    let ps = PoleSet { z1, z2, residual1: 0.0, residual2: 0.0 };
    let trivial = survival_params(&ps, &x.shape, &x.level).and_then(|sp| crossover(&sp));
    let trivial_ok = matches!(trivial, Ok(ref c) if !c.exists);
    outcome(
        !v.is_empty() && bad.is_empty() && trivial_ok,
        format!(
            "{} of {} non-shallow levels validated, crossover found for {}, max |phi(t*)| = {max_res:.2e} (tol {:.0e}); x1 = x2 gives exists = {}",
            v.len(),
            g.len(),
            v.len() - bad.len(),
            tol.phi_residual,
            trivial.map(|c| c.exists.to_string()).unwrap_or_else(|e| e.to_string())
        ),
    )
}

fn width_sweep() -> zenolab::Result<SweepResultF64> {
    let ws: Vec<f64> = (0..11).map(|i| 0.5 + 0.1 * i as f64).collect();
    sweep_tau2_vs_w(&config(3.0 * PI, 1.0), 1, &ws, false)
}

fn gap_sweep(w: f64, level: Option<usize>) -> zenolab::Result<SweepResultF64> {
    let v0s: Vec<f64> = (0..GAP_STEPS).map(|k| ((2.0 + 0.5 * k as f64) * PI).powi(2)).collect();
    sweep_tau2_vs_gap(&config(1.0, w), &v0s, level, false)
}

fn describe_fit(r: &SweepResultF64) -> String {
    match r.fit {
        Some(f) => format!("n = {}, slope = {:.4}, R^2 = {:.5}", f.n, f.slope, f.r_squared),
        None => format!("no fit ({} rows)", r.rows.len()),
    }
}

fn c8(tol: &Tolerances) -> Outcome {
    match width_sweep() {
        Ok(r) => {
            let pass = r.rows.len() == 11 && r.fit.is_some_and(|f| f.r_squared >= tol.tau2_width_r2 && f.slope > 0.0);
            outcome(
                pass,
                format!(
                    "{} of 11 widths analyzable, {} (need 11 points, R^2 >= {}, slope > 0)",
                    r.rows.len(),
                    describe_fit(&r),
                    tol.tau2_width_r2
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn c9(tol: &Tolerances) -> Outcome {
    match gap_sweep(GAP_WIDTH, None) {
        Ok(r) => {
            let pass = r.rows.len() >= 8 && r.fit.is_some_and(|f| f.r_squared >= tol.tau2_gap_r2);
            let mut detail = format!(
                "all levels of {GAP_STEPS} heights at w = {GAP_WIDTH}: {} (need >= 8 points, R^2 >= {})",
                describe_fit(&r),
                tol.tau2_gap_r2
            );
            for (w, lv) in [(3.0, None), (8.0, None), (3.0, Some(1)), (3.0, Some(2))] {
                if let Ok(s) = gap_sweep(w, lv) {
                    let which = lv.map_or("all levels".to_string(), |l| format!("level {l}"));
                    detail.push_str(&format!("\n        [info] w = {w}, {which}: {}", describe_fit(&s)));
                }
            }
            outcome(pass, detail)
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn c10(tol: &Tolerances) -> Outcome {
    let g = grid();
    let mut ratios = Vec::new();
    for x in &g {
        if x.an.shape.epsilon.abs() < 1e-3 * x.an.level.sigma0 {
            let (exact, approx) = tau0_closed_form(&x.an.shape, &x.an.level);
            ratios.push((approx / exact, x.label.as_str()));
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, r| (a.0.min(r.0), a.1.max(r.0)));
    let band = (1.0 - tol.tau0_ratio, 1.0 + tol.tau0_ratio);
    outcome(
        !ratios.is_empty() && lo >= band.0 && hi <= band.1,
        format!("{} levels, ratio in [{lo:.4}, {hi:.4}] (band [{}, {}])", ratios.len(), band.0, band.1),
    )
}

fn c11(tol: &Tolerances) -> Outcome {
    let mut ratios = Vec::new();
    for (name, r) in [("width sweep", width_sweep()), ("gap sweep", gap_sweep(GAP_WIDTH, None))] {
        match r {
            Ok(r) => ratios.extend(r.rows.iter().map(|x| (x.tau2 / x.tau2_phenomenological, name))),
            Err(e) => return outcome(false, format!("{name}: {e}")),
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, r| (a.0.min(r.0), a.1.max(r.0)));
    let (b0, b1) = tol.pheno_band;
    let outside = ratios.iter().filter(|r| r.0 < b0 || r.0 > b1).count();
    outcome(
        !ratios.is_empty() && outside == 0,
        format!("{} sweep rows, tau2/pheno in [{lo:.3}, {hi:.3}], {outside} outside band [{b0}, {b1}]", ratios.len()),
    )
}

fn c12(_tol: &Tolerances) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_zenolab");
    let v0 = format!("{}", (2.0 * PI).powi(2));
    let run = |format: &str| {
        Command::new(bin)
            .args(["report", "--m", "0.5", "--a", "1", "--b", "2", "--v0", &v0, "--format", format])
            .output()
            .expect("spawn zenolab")
    };
    let mut same = true;
    let mut sizes = Vec::new();
    for f in ["csv", "json"] {
        let (a, b) = (run(f), run(f));
        same &= a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
        sizes.push(a.stdout.len());
    }
    outcome(
        same,
        format!("report twice per format on a 2-level config, bytes csv/json = {sizes:?}, identical = {same}"),
    )
}

fn main() -> ExitCode {
    let tol = Tolerances::from_env();
    println!("acceptance (tolerance profile: {})", tol.profile);
    let criteria: [Criterion; 12] = [
        ("level counting", 1.0, c1),
        ("expansion consistency", 1.0, c2),
        ("pole coincidence", 5.0, c3),
        ("zero linear term", 5.0, c4),
        ("oracle equivalence", 60.0, c5),
        ("oracle evenness", 10.0, c6),
        ("crossover universality", 5.0, c7),
        ("tau2 linear in w", 10.0, c8),
        ("tau2 gap scaling", 10.0, c9),
        ("tau0 approximation", 1.0, c10),
        ("phenomenological tau2", 10.0, c11),
        ("determinism", f64::INFINITY, c12),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check(&tol);
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < *budget;
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let timing =
            if budget.is_finite() { format!("{secs:.2} s, budget {budget} s") } else { format!("{secs:.2} s") };
        println!("C{:<2} {} {name}: {} [{timing}]", i + 1, if pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
