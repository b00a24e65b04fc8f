//! Dense complex polynomials in ascending-degree coefficient order.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A polynomial `c[0] + c[1] w + ... + c[n] w^n`.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial
/// has an empty coefficient vector and every other polynomial has a nonzero
/// leading coefficient.
#[derive(Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})w"),
                _ => format!("({c})w^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c w^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `w - r`
    pub fn linear_root(r: Complex64) -> Self {
        Self::new(vec![-r, ONE])
    }

    /// Monic polynomial with the given roots, repeated by multiplicity.
    pub fn from_roots(roots: &[(Complex64, usize)]) -> Self {
        let mut p = Self::one();
        for &(r, m) in roots {
            for _ in 0..m {
                p = &p * &Self::linear_root(r);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * w + c)
    }

    /// Value and first derivative by a single Horner sweep.
    pub fn eval_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * w + p;
            p = p * w + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |w|^k`, the natural scale for a backward-error test at `w`.
    pub fn eval_scale(&self, w: Complex64) -> f64 {
        let r = w.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Coefficients of `p(c + t)` as a polynomial in `t` (Taylor shift).
    pub fn taylor_shift(&self, c: Complex64) -> Self {
        let mut out = self.coeffs.clone();
        let n = out.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = out[j + 1];
                out[j] += c * hi;
            }
        }
        Self::new(out)
    }

    /// Polynomial with conjugated coefficients.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `w^n * conj(p(1 / conj(w)))` for `n >= degree`.
    pub fn reflect_with_degree(&self, n: usize) -> Self {
        let mut out = vec![ZERO; n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[n - k] = c.conj();
        }
        Self::new(out)
    }

    /// Multiply by `w^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; k];
        out.extend_from_slice(&self.coeffs);
        Self::new(out)
    }

    /// Number of vanishing low-order coefficients (multiplicity of the root at 0).
    pub fn low_order_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Divide by `w^k`, discarding the (assumed zero) low coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient by `(w - r)^k`, assuming `r` is a root of that multiplicity.
    /// Divides from the top when `|r| <= 1` and from the bottom otherwise,
    /// so that rounding errors are damped rather than amplified.
    pub fn deflate(&self, r: Complex64, k: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            let c = &out.coeffs;
            let n = c.len();
            if n <= 1 {
                return Self::zero();
            }
            let mut q = vec![ZERO; n - 1];
            if r.norm() <= 1.0 {
                q[n - 2] = c[n - 1];
                for j in (0..n - 2).rev() {
                    q[j] = c[j + 1] + r * q[j + 1];
                }
            } else {
                q[0] = -c[0] / r;
                for j in 1..n - 1 {
                    q[j] = (q[j - 1] - c[j]) / r;
                }
            }
            out = Self::new(q);
        }
        out
    }

    /// Drop leading coefficients below `rel * max_abs`; used to clean up
    /// cancellation noise after floating-point arithmetic.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Composition `p(q(w))` by Horner's scheme.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c);
        }
        acc
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        self.scale(-ONE)
    }
}
