//! Truncated Taylor series ("jet") arithmetic.
//!
//! A `Jet<T, N>` carries the first `N` normalized Taylor coefficients
//! `c_j = g^{(j)}(x0) / j!` of some function `g` about an expansion point.
//! Arithmetic and the elementary functions propagate the coefficients exactly
//! (up to rounding), so evaluating an expression on `Jet::variable(x0)` yields
//! its Taylor polynomial at `x0` without any step-size tuning.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

/// Scalar-like values closed under the operations the spectral denominator
/// needs. Implemented for every [`Real`] and for [`Jet`].
pub trait Elementary<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(value: T) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    /// Value at the expansion point (the number itself for plain scalars).
    fn value(&self) -> T;
}

impl<T: Real> Elementary<T> for T {
    #[inline]
    fn constant(value: T) -> Self {
        value
    }
    #[inline]
    fn sin(self) -> Self {
        num_traits::Float::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        num_traits::Float::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        num_traits::Float::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        num_traits::Float::sqrt(self)
    }
    #[inline]
    fn value(&self) -> T {
        *self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T, const N: usize> {
    coeffs: [T; N],
}

impl<T: Real, const N: usize> Jet<T, N> {
    pub fn constant(value: T) -> Self {
        let mut coeffs = [T::zero(); N];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity function expanded about `x0`.
    pub fn variable(x0: T) -> Self {
        let mut coeffs = [T::zero(); N];
        coeffs[0] = x0;
        if N > 1 {
            coeffs[1] = T::one();
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: [T; N]) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T; N] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> [T; N] {
        self.coeffs
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Evaluates the truncated series at displacement `h` from the expansion point.
    pub fn eval(&self, h: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * h + c)
    }

    pub fn recip(self) -> Self {
        Self::constant(T::one()) / self
    }

    pub fn exp(self) -> Self {
        let a = &self.coeffs;
        let mut e = [T::zero(); N];
        e[0] = a[0].exp();
        for k in 1..N {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_usize(j).unwrap() * a[j] * e[k - j];
            }
            e[k] = acc / T::from_usize(k).unwrap();
        }
        Self { coeffs: e }
    }

    pub fn sqrt(self) -> Self {
        let a = &self.coeffs;
        let mut s = [T::zero(); N];
        s[0] = a[0].sqrt();
        let two_s0 = s[0] + s[0];
        for k in 1..N {
            let mut acc = a[k];
            for j in 1..k {
                acc = acc - s[j] * s[k - j];
            }
            s[k] = acc / two_s0;
        }
        Self { coeffs: s }
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let a = &self.coeffs;
        let mut s = [T::zero(); N];
        let mut c = [T::zero(); N];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..N {
            let mut acc_s = T::zero();
            let mut acc_c = T::zero();
            for j in 1..=k {
                let ja = T::from_usize(j).unwrap() * a[j];
                acc_s = acc_s + ja * c[k - j];
                acc_c = acc_c + ja * s[k - j];
            }
            let kk = T::from_usize(k).unwrap();
            s[k] = acc_s / kk;
            c[k] = -acc_c / kk;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }
}

impl<T: Real, const N: usize> Elementary<T> for Jet<T, N> {
    fn constant(value: T) -> Self {
        Jet::constant(value)
    }
    fn sin(self) -> Self {
        Jet::sin(self)
    }
    fn cos(self) -> Self {
        Jet::cos(self)
    }
    fn exp(self) -> Self {
        Jet::exp(self)
    }
    fn sqrt(self) -> Self {
        Jet::sqrt(self)
    }
    fn value(&self) -> T {
        self.coeffs[0]
    }
}

impl<T: Real, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a + b;
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a - b;
        }
        self
    }
}

impl<T: Real, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<T: Real, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [T::zero(); N];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            for i in 0..=k {
                acc = acc + self.coeffs[i] * rhs.coeffs[k - i];
            }
            *slot = acc;
        }
        Self { coeffs: out }
    }
}

impl<T: Real, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b = &rhs.coeffs;
        let mut q = [T::zero(); N];
        for k in 0..N {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc = acc - b[i] * q[k - i];
            }
            q[k] = acc / b[0];
        }
        Self { coeffs: q }
    }
}

impl<T: Real, const N: usize> Mul<T> for Jet<T, N> {
    type Output = Self;
    fn mul(mut self, rhs: T) -> Self {
        for a in self.coeffs.iter_mut() {
            *a = *a * rhs;
        }
        self
    }
}

impl<T: Real, const N: usize> Add<T> for Jet<T, N> {
    type Output = Self;
    fn add(mut self, rhs: T) -> Self {
        self.coeffs[0] = self.coeffs[0] + rhs;
        self
    }
}
