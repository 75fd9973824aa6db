use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use zenolab::{
    analyze_level, crossover, find_levels, p4, p4_approx, short_time_coefficients, survival_deficit, sweep_tau2_vs_w,
    ModelParams, PhysicalConfig, SurvivalOracle, Tolerances,
};

/// Roots of `√(u−σ²) sin σ + σ cos σ` by a dense sign scan and bisection.
fn scan_roots(u: f64) -> Vec<f64> {
    let g = |s: f64| (u - s * s).sqrt() * s.sin() + s * s.cos();
    let su = u.sqrt();
    let n = 200_000;
    let mut roots = Vec::new();
    let mut prev = (1e-9, g(1e-9));
    for i in 1..n {
        let s = su * i as f64 / n as f64;
        let v = g(s);
        if v.signum() != prev.1.signum() {
            let (mut lo, mut hi) = (prev.0, s);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid).signum() == g(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (s, v);
    }
    roots
}

#[test]
fn levels_match_independent_scan() {
    for &su in &[2.3 * PI, 3.0 * PI, 4.7 * PI] {
        let p = ModelParams::new(su * su, 1.0).unwrap();
        let found: Vec<f64> = find_levels(&p).iter().map(|l| l.sigma0).collect();
        let scanned = scan_roots(su * su);
        assert_eq!(found.len(), scanned.len());
        for (a, b) in found.iter().zip(&scanned) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let p64 = PhysicalConfig::new(0.5, 1.0, 2.0, (3.0 * PI).powi(2)).to_dimensionless().unwrap();
    let p32 = PhysicalConfig::new(0.5f32, 1.0, 2.0, (3.0 * std::f32::consts::PI).powi(2)).to_dimensionless().unwrap();
    let (l64, l32) = (find_levels(&p64), find_levels(&p32));
    assert_eq!(l64.len(), l32.len());
    for (a, b) in l64.iter().zip(&l32) {
        assert_relative_eq!(a.sigma0, b.sigma0 as f64, max_relative = 1e-5);
    }
    let s64 = analyze_level(&p64, &l64[0], false).unwrap().survival.unwrap();
    let s32 = analyze_level(&p32, &l32[0], false).unwrap().survival.unwrap();
    assert_relative_eq!(s64.tau2_tilde, s32.tau2_tilde as f64, max_relative = 1e-3);
}

#[test]
fn oracle_starts_at_unit_probability() {
    let p = ModelParams::new((3.0 * PI).powi(2), 1.5).unwrap();
    let l = find_levels(&p)[0];
    let an = analyze_level(&p, &l, false).unwrap();
    let sp = an.survival.unwrap();
    let oracle = SurvivalOracle::new(&p, &l, &Tolerances::DEFAULT.quadrature).unwrap();
    let v = oracle.eval(0.0);
    assert_eq!(v.renormalized, 1.0);
    assert!((v.raw - 1.0).abs() < 10.0 * sp.ratio().max(1e-6), "raw P(0) = {}", v.raw);
    for &t in &[0.1 * sp.tau1_tilde, sp.tau1_tilde] {
        assert!((oracle.eval(t).renormalized - p4(t, &sp)).abs() < 5e-3);
    }
}

#[test]
fn broad_pole_time_grows_with_width() {
    let base = PhysicalConfig::new(0.5, 1.0, 3.0, (3.0 * PI).powi(2));
    let ws: Vec<f64> = (0..6).map(|i| 2.0 + 0.4 * i as f64).collect();
    let r = sweep_tau2_vs_w(&base, 1, &ws, false).unwrap();
    assert_eq!(r.rows.len(), ws.len());
    assert!(r.rows.windows(2).all(|p| p[1].tau2 > p[0].tau2));
    assert!(r.fit.unwrap().r_squared > 0.999);
}

fn validated_levels(su: f64, w: f64) -> Vec<(zenolab::QuasiLevelF64, zenolab::SurvivalParamsF64)> {
    let p = ModelParams::new(su * su, w).unwrap();
    find_levels(&p)
        .into_iter()
        .filter(|l| !l.is_shallow())
        .filter_map(|l| analyze_level(&p, &l, false).ok().and_then(|a| a.survival.ok()).map(|s| (l, s)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn results_depend_only_on_u_and_w(
        su in 2.2f64..4.8,
        w in 1.0f64..3.0,
        m in 0.1f64..5.0,
        a in 0.2f64..4.0,
    ) {
        let u = (su * PI).powi(2);
        let reference = PhysicalConfig::new(0.5, 1.0, 1.0 + w, u);
        let scaled = PhysicalConfig::new(m, a, a * (1.0 + w), u / (2.0 * m * a * a));
        let (p0, p1) = (reference.to_dimensionless().unwrap(), scaled.to_dimensionless().unwrap());
        let (l0, l1) = (find_levels(&p0), find_levels(&p1));
        prop_assert_eq!(l0.len(), l1.len());
        for (x, y) in l0.iter().zip(&l1) {
            prop_assert!((x.sigma0 - y.sigma0).abs() <= 1e-12 * x.sigma0);
            let (a0, a1) = (analyze_level(&p0, x, false), analyze_level(&p1, y, false));
            if let (Ok(Ok(s0)), Ok(Ok(s1))) = (a0.map(|a| a.survival), a1.map(|a| a.survival)) {
                prop_assert!((s0.tau1_tilde - s1.tau1_tilde).abs() <= 1e-9 * s0.tau1_tilde);
                let t1 = p1.physical_time(s1.tau1_tilde);
                prop_assert!((t1 - s0.tau1_tilde * 2.0 * m * a * a).abs() <= 1e-9 * t1);
            }
        }
    }

    #[test]
    fn two_pole_law_invariants(su in 2.0f64..5.0, w in 1.0f64..3.0, frac in 0.0f64..3.0) {
        for (_, sp) in validated_levels(su * PI, w) {
            let (a1, a2) = short_time_coefficients(&sp);
            prop_assert!(a1.abs() <= 1e-12 * a2.abs());
            prop_assert!(a2 < 0.0);
            let r = sp.ratio();
            prop_assert!((sp.n * (1.0 + r * r + 2.0 * r * sp.cos_alpha) - 1.0).abs() < 1e-12);
            prop_assert!(sp.tau2_tilde < sp.tau1_tilde);
            let t = frac * sp.tau1_tilde;
            let direct = 1.0 - p4(t, &sp);
            prop_assert!((survival_deficit(t, &sp) - direct).abs() < 1e-12);
            prop_assert!((p4_approx(t, &sp) - p4(t, &sp)).abs() < 1e-3);
            let c = crossover(&sp).unwrap();
            if c.exists {
                let ts = c.t_star_tilde.unwrap();
                prop_assert!(ts > 0.0 && c.phi_residual.unwrap() <= 1e-10);
            }
        }
    }
}
