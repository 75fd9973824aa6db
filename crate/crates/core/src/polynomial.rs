//! Roots of real quartics by Aberth–Ehrlich simultaneous iteration.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

const MAX_ITERATIONS: usize = 200;

/// Evaluates `Σ c_j z^j` together with its derivative.
fn horner<T: Real>(c: &[T; 5], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::new(c[4], T::zero());
    let mut dp = Complex::new(T::zero(), T::zero());
    for &cj in c[..4].iter().rev() {
        dp = dp * z + p;
        p = p * z + cj;
    }
    (p, dp)
}

/// `a / b` by Smith's scaling, which avoids the under- and overflow of
/// `a·b̄ / |b|²` when the roots span hundreds of decades.
fn cdiv<T: Real>(a: Complex<T>, b: Complex<T>) -> Complex<T> {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        Complex::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        Complex::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}

/// Rounding-error scale `Σ |c_j| |z|^j` of a Horner evaluation.
fn magnitude<T: Real>(c: &[T; 5], z: Complex<T>) -> T {
    let r = z.norm();
    c.iter().rev().fold(T::zero(), |acc, &cj| acc * r + cj.abs())
}

/// Residual `|Σ c_j z^j|`.
pub fn residual<T: Real>(c: &[T; 5], z: Complex<T>) -> T {
    horner(c, z).0.norm()
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(j, ln|c_j|)`.
fn initial_guesses<T: Real>(c: &[T; 5]) -> [Complex<T>; 4] {
    let pts: Vec<(usize, f64)> = (0..5).filter(|&j| c[j] != T::zero()).map(|j| (j, to_f64(c[j].abs()).ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut radii = Vec::with_capacity(4);
    let lowest = hull[0].0;
    let first_radius =
        if hull.len() > 1 { ((hull[0].1 - hull[1].1) / (hull[1].0 - hull[0].0) as f64).exp() } else { 1.0 };
    radii.extend(std::iter::repeat_n(first_radius * 1e-3, lowest));
    for seg in hull.windows(2) {
        let span = seg[1].0 - seg[0].0;
        let r = ((seg[0].1 - seg[1].1) / span as f64).exp();
        radii.extend(std::iter::repeat_n(r, span));
    }
    let mut out = [Complex::new(T::zero(), T::zero()); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / 4.0 + 0.4;
        let z = Complex::from_polar(radii[k], angle);
        *slot = Complex::new(lit(z.re), lit(z.im));
    }
    out
}

/// Splits roots into real ones and averaged conjugate pairs.
fn enforce_conjugates<T: Real>(roots: [Complex<T>; 4]) -> Result<[Complex<T>; 4]> {
    let two = lit::<T>(2.0);
    let mut is_real = [false; 4];
    for i in 0..4 {
        let mirror = roots[i].conj();
        let nearest = (0..4).filter(|&j| j != i).map(|j| (roots[j] - mirror).norm()).fold(T::infinity(), T::min);
        is_real[i] = two * roots[i].im.abs() < nearest;
    }
    let mut out = Vec::with_capacity(4);
    let mut used = [false; 4];
    for i in 0..4 {
        if is_real[i] {
            out.push(Complex::new(roots[i].re, T::zero()));
            used[i] = true;
        }
    }
    for i in 0..4 {
        if used[i] || roots[i].im < T::zero() {
            continue;
        }
        let mirror = roots[i].conj();
        let partner = (0..4)
            .filter(|&j| !used[j] && j != i && !is_real[j] && roots[j].im <= T::zero())
            .min_by(|&a, &b| {
                (roots[a] - mirror).norm().partial_cmp(&(roots[b] - mirror).norm()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or_else(|| Error::Classification("complex root without conjugate partner".into()))?;
        used[i] = true;
        used[partner] = true;
        let avg = (roots[i] + roots[partner].conj()) / two;
        out.push(avg);
        out.push(avg.conj());
    }
    if out.len() != 4 {
        return Err(Error::Classification("roots do not close under conjugation".into()));
    }
    out.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok([out[0], out[1], out[2], out[3]])
}

/// The four complex roots of `c0 + c1 z + … + c4 z⁴` (real coefficients),
/// returned as exact conjugate pairs and sorted by real then imaginary part.
pub fn quartic_roots<T: Real>(coeffs: [T; 5]) -> Result<[Complex<T>; 4]> {
    if coeffs[4] == T::zero() || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain {
            quantity: "c4",
            value: to_f64(coeffs[4]),
            reason: "quartic needs finite coefficients and a non-zero leading term",
        });
    }
    let lead = coeffs[4];
    let c: [T; 5] = coeffs.map(|x| x / lead);
    let kappa = lit::<T>(16.0) * T::epsilon();
    let mut z = initial_guesses(&c);
    let mut done = [false; 4];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && !done.iter().all(|&d| d) {
        iterations += 1;
        for i in 0..4 {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(&c, z[i]);
            if p.norm() <= kappa * magnitude(&c, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = cdiv(p, dp);
            let mut sum = Complex::new(T::zero(), T::zero());
            for j in 0..4 {
                if j != i {
                    sum = sum + cdiv(Complex::new(T::one(), T::zero()), z[i] - z[j]);
                }
            }
            let step = cdiv(ratio, Complex::new(T::one(), T::zero()) - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] = z[i] - step;
        }
    }
    if !done.iter().all(|&d| d) {
        let worst = z.iter().map(|&zi| to_f64(residual(&c, zi) / magnitude(&c, zi))).fold(0.0, f64::max);
        return Err(Error::NoConvergence { operation: "quartic_roots", iterations, achieved: worst });
    }
    for zi in z.iter_mut() {
        let (p, dp) = horner(&c, *zi);
        if dp.norm() > T::zero() {
            let cand = *zi - cdiv(p, dp);
            if residual(&c, cand) < p.norm() {
                *zi = cand;
            }
        }
    }
    let roots = enforce_conjugates(z)?;
    let bound = lit::<T>(1e-10);
    for r in &roots {
        let scale = r.norm().max(T::one()).powi(4);
        let res = residual(&coeffs, *r);
        if res > bound * lead.abs() * scale && res > kappa * magnitude(&coeffs, *r) {
            return Err(Error::NoConvergence {
                operation: "quartic_roots",
                iterations,
                achieved: to_f64(res / (lead.abs() * scale)),
            });
        }
    }
    Ok(roots)
}

/// Coefficients `c0..c4` of `Π (z − r_j)` for real-closed root sets.
pub fn from_roots<T: Real>(roots: [Complex<T>; 4]) -> [T; 5] {
    let mut c = [Complex::new(T::zero(), T::zero()); 5];
    c[0] = Complex::new(T::one(), T::zero());
    for (deg, r) in roots.iter().enumerate() {
        for k in (1..=deg + 1).rev() {
            c[k] = c[k - 1] - c[k] * r;
        }
        c[0] = -c[0] * r;
    }
    c.map(|x| x.re)
}
