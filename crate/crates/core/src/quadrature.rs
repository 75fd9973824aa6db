//! Adaptive Legendre–Filon quadrature for Fourier-type integrals
//! `I(t) = ∫ h(s) e^{−ist} ds`.
//!
//! The smooth factor `h` is approximated once by piecewise Legendre series on
//! an adaptively refined partition. Each panel's Fourier integral is then exact:
//! `∫₋₁¹ P_k(x) e^{−iθx} dx = 2(−i)^k j_k(θ)`, so the same partition serves
//! every `t` and the error bound does not depend on `t`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Gauss–Legendre nodes per panel (series degree + 1).
    pub nodes: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_subdivisions: 4000, nodes: 24 }
    }
}

#[derive(Debug, Clone)]
struct Panel<T> {
    lo: T,
    hi: T,
    coeffs: Vec<T>,
    error: T,
}

/// Piecewise Legendre representation of `h` on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct FilonRule<T> {
    /// Phase origin: `I(t)` is returned multiplied by `e^{i·origin·t}`.
    origin: T,
    panels: Vec<Panel<T>>,
    error: T,
}

struct Basis<T> {
    nodes: Vec<T>,
    /// `projector[k][i] = (2k+1)/2 · w_i · P_k(x_i)`.
    projector: Vec<Vec<T>>,
}

impl<T: Real> Basis<T> {
    fn new(n: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(n.max(2)).unwrap());
        let (nodes, weights): (Vec<T>, Vec<T>) =
            rule.as_node_weight_pairs().iter().map(|&(x, w)| (lit::<T>(x), lit::<T>(w))).unzip();
        let n = nodes.len();
        let mut projector = vec![vec![T::zero(); n]; n];
        for (i, &x) in nodes.iter().enumerate() {
            let (mut p_prev, mut p) = (T::zero(), T::one());
            for (k, row) in projector.iter_mut().enumerate() {
                let kf = T::from_usize(k).unwrap();
                row[i] = (lit::<T>(2.0) * kf + T::one()) / lit(2.0) * weights[i] * p;
                let next = ((lit::<T>(2.0) * kf + T::one()) * x * p - kf * p_prev) / (kf + T::one());
                p_prev = p;
                p = next;
            }
        }
        Self { nodes, projector }
    }

    fn fit<F: Fn(T) -> T>(&self, h: &F, lo: T, hi: T) -> Result<Panel<T>> {
        let half = (hi - lo) / lit(2.0);
        let mid = lo + half;
        let values: Vec<T> = self.nodes.iter().map(|&x| h(mid + half * x)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("integrand not finite on [{:e}, {:e}]", to_f64(lo), to_f64(hi))));
        }
        let coeffs: Vec<T> = self
            .projector
            .iter()
            .map(|row| row.iter().zip(&values).fold(T::zero(), |acc, (&p, &v)| acc + p * v))
            .collect();
        let n = coeffs.len();
        let error = lit::<T>(2.0) * half * (coeffs[n - 1].abs() + coeffs[n - 2].abs());
        Ok(Panel { lo, hi, coeffs, error })
    }
}

struct ByError<T>(T, usize);

impl<T: Real> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for ByError<T> {}
impl<T: Real> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal).then(other.1.cmp(&self.1))
    }
}

impl<T: Real> FilonRule<T> {
    /// Builds the partition by bisecting the worst panel until the summed
    /// tail estimates fall below `opts.abs_tol`. `breaks` must be ascending and
    /// contain at least the two end points.
    pub fn build<F: Fn(T) -> T>(h: F, breaks: &[T], origin: T, opts: &QuadratureOptions) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::Numerical("quadrature needs two break points".into()));
        }
        let basis = Basis::<T>::new(opts.nodes);
        let mut panels = Vec::new();
        for pair in breaks.windows(2) {
            if pair[1] > pair[0] {
                panels.push(basis.fit(&h, pair[0], pair[1])?);
            }
        }
        let tol = lit::<T>(opts.abs_tol);
        let mut heap: BinaryHeap<ByError<T>> = panels.iter().enumerate().map(|(i, p)| ByError(p.error, i)).collect();
        let mut total = panels.iter().fold(T::zero(), |a, p| a + p.error);
        let mut frozen = T::zero();
        while total > tol && panels.len() < opts.max_subdivisions {
            let Some(ByError(_, idx)) = heap.pop() else { break };
            let (lo, hi) = (panels[idx].lo, panels[idx].hi);
            let mid = lo + (hi - lo) / lit(2.0);
            if !(mid > lo && mid < hi) {
                frozen = frozen + panels[idx].error;
                continue;
            }
            let left = basis.fit(&h, lo, mid)?;
            let right = basis.fit(&h, mid, hi)?;
            total = total - panels[idx].error + left.error + right.error;
            heap.push(ByError(left.error, idx));
            heap.push(ByError(right.error, panels.len()));
            panels[idx] = left;
            panels.push(right);
            if panels.len() % 256 == 0 {
                total = panels.iter().fold(T::zero(), |a, p| a + p.error);
            }
        }
        total = panels.iter().fold(T::zero(), |a, p| a + p.error);
        if total > tol {
            return Err(Error::Quadrature {
                requested: opts.abs_tol,
                achieved: to_f64(total.max(frozen)),
                subdivisions: panels.len(),
            });
        }
        panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
        Ok(Self { origin, panels, error: total })
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    pub fn estimated_error(&self) -> T {
        self.error
    }

    /// `e^{i·origin·t} ∫ h(s) e^{−ist} ds`.
    pub fn transform(&self, t: T) -> Complex<T> {
        let n = self.panels.first().map_or(0, |p| p.coeffs.len());
        let mut j = vec![T::zero(); n];
        let mut acc = Complex::new(T::zero(), T::zero());
        let two = lit::<T>(2.0);
        for p in &self.panels {
            let half = (p.hi - p.lo) / two;
            let offset = (p.lo - self.origin) + half;
            let theta = half * t;
            spherical_bessel_j(theta.abs(), &mut j);
            let flip = theta < T::zero();
            // Σ a_k (−i)^k j_k(θ), with j_k(−θ) = (−1)^k j_k(θ).
            let (mut re, mut im) = (T::zero(), T::zero());
            for (k, (&a, &jk)) in p.coeffs.iter().zip(&j).enumerate() {
                let v = if flip && k % 2 == 1 { -a * jk } else { a * jk };
                match k % 4 {
                    0 => re = re + v,
                    1 => im = im - v,
                    2 => re = re - v,
                    _ => im = im + v,
                }
            }
            let phase = Complex::from_polar(T::one(), -(offset * t));
            acc = acc + phase * Complex::new(re, im) * (two * half);
        }
        acc
    }
}

/// Spherical Bessel functions `j_0(θ) … j_{n−1}(θ)` for `θ ≥ 0`.
pub fn spherical_bessel_j<T: Real>(theta: T, out: &mut [T]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    if theta <= T::one() {
        let x2 = -theta * theta / lit(2.0);
        let mut pre = T::one();
        for (k, slot) in out.iter_mut().enumerate() {
            let kf = T::from_usize(k).unwrap();
            if k > 0 {
                pre = pre * theta / (lit::<T>(2.0) * kf + T::one());
            }
            let mut term = T::one();
            let mut sum = T::one();
            for m in 1..40 {
                let mf = T::from_usize(m).unwrap();
                term = term * x2 / (mf * (lit::<T>(2.0) * (kf + mf) + T::one()));
                sum = sum + term;
                if term.abs() <= T::epsilon() * sum.abs() {
                    break;
                }
            }
            *slot = pre * sum;
        }
        return;
    }
    let (s, c) = theta.sin_cos();
    let j0 = s / theta;
    let j1 = s / (theta * theta) - c / theta;
    if theta >= T::from_usize(n).unwrap() {
        out[0] = j0;
        if n > 1 {
            out[1] = j1;
        }
        for k in 1..n.saturating_sub(1) {
            let kf = T::from_usize(k).unwrap();
            out[k + 1] = (lit::<T>(2.0) * kf + T::one()) / theta * out[k] - out[k - 1];
        }
        return;
    }
    // Miller's backward recurrence, normalized by Σ (2k+1) j_k² = 1.
    let start = n + 40 + to_f64(theta).ceil() as usize;
    let mut f = vec![T::zero(); start + 2];
    f[start] = lit(1e-30);
    let big = lit::<T>(1e150);
    for k in (1..=start).rev() {
        let kf = T::from_usize(k).unwrap();
        f[k - 1] = (lit::<T>(2.0) * kf + T::one()) / theta * f[k] - f[k + 1];
        if f[k - 1].abs() > big {
            for v in f[k - 1..].iter_mut() {
                *v = *v / big;
            }
        }
    }
    let norm =
        f.iter().enumerate().fold(T::zero(), |acc, (k, &v)| acc + T::from_usize(2 * k + 1).unwrap() * v * v).sqrt();
    let reference = if j0.abs() >= j1.abs() { (j0, f[0]) } else { (j1, f[1]) };
    let sign = if (reference.0 >= T::zero()) == (reference.1 >= T::zero()) { T::one() } else { -T::one() };
    for (slot, &v) in out.iter_mut().zip(&f) {
        *slot = sign * v / norm;
    }
}
