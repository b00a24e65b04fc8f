//! Path integrals of rational functions along straight segments.

use super::rational::{PrincipalPart, RationalFn};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const GL_POINTS: usize = 16;
const MAX_DEPTH: usize = 40;
/// Residues below this fraction of the principal part's size are treated as zero.
const TOL_RESIDUE: f64 = 1e-9;

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

fn gl_panel(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    gauss_legendre().iter().map(|&(x, wt)| f(mid + half * x) * wt).sum::<Complex64>() * half
}

fn adaptive(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, whole: Complex64, tol: f64, depth: usize) -> Complex64 {
    let mid = (a + b) * 0.5;
    let left = gl_panel(f, a, mid);
    let right = gl_panel(f, mid, b);
    let both = left + right;
    if depth >= MAX_DEPTH || (both - whole).norm() <= tol {
        return both;
    }
    adaptive(f, a, mid, left, tol * 0.5, depth + 1) + adaptive(f, mid, b, right, tol * 0.5, depth + 1)
}

/// Adaptive Gauss–Legendre integral of `f` along the segment `[a, b]`.
pub fn segment_integral(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let whole = gl_panel(f, a, b);
    let tol = 1e-14 * (1.0 + whole.norm());
    adaptive(f, a, b, whole, tol, 0)
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn residue_is_zero(pp: &PrincipalPart) -> bool {
    let size = pp.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    pp.residue().norm() <= TOL_RESIDUE * size.max(1.0)
}

/// `∫ f(w) dw` along the segment from `basepoint` to `endpoint`.
///
/// Residue-free poles and the polynomial part are integrated in closed form;
/// simple-pole terms with a nonzero residue (allowed only outside the open
/// unit disc) are integrated by adaptive Gauss–Legendre panels.
pub fn antiderivative_eval(f: &RationalFn, endpoint: Complex64, basepoint: Complex64) -> Result<Complex64> {
    let (q, parts) = f.partial_fractions()?;
    for pp in &parts {
        if pp.pole.norm() < 1.0 && !residue_is_zero(pp) {
            return Err(Error::MultivaluedAntiderivative {
                pole: pp.pole,
                residue: pp.residue(),
            });
        }
        let gap = distance_to_segment(pp.pole, basepoint, endpoint);
        if gap <= 1e-10 * (1.0 + pp.pole.norm()) {
            return Err(Error::PathHitsPole(pp.pole));
        }
    }
    let poly_anti = |w: Complex64| -> Complex64 {
        q.coeffs()
            .iter()
            .enumerate()
            .rev()
            .fold(Complex64::default(), |acc, (k, &c)| acc * w + c / (k + 1) as f64)
            * w
    };
    let mut total = poly_anti(endpoint) - poly_anti(basepoint);
    for pp in &parts {
        for (idx, &c) in pp.coeffs.iter().enumerate().skip(1) {
            // c (w-p)^{-(j)} with j = idx+1 >= 2 integrates to c (w-p)^{1-j} / (1-j)
            let j = (idx + 1) as i32;
            let anti = |w: Complex64| c * (w - pp.pole).powi(1 - j) / (1 - j) as f64;
            total += anti(endpoint) - anti(basepoint);
        }
        if !residue_is_zero(pp) {
            let res = pp.residue();
            let pole = pp.pole;
            total += segment_integral(&|w| res / (w - pole), basepoint, endpoint);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcalc::ComplexPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // degree 2n-1 exactness on [0, 1]: ∫ x^31 = 1/32
        let v = gl_panel(&|x| x.powi(31), c(0.0, 0.0), c(1.0, 0.0));
        assert!((v - c(1.0 / 32.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integral_of_two_w() {
        let f = RationalFn::poly(ComplexPoly::from_real(&[0.0, 2.0]));
        let v = antiderivative_eval(&f, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residue_free_double_pole() {
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_roots(&[(c(2.0, 0.0), 2)])).unwrap();
        let v = antiderivative_eval(&f, c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        // -1/(w-2) evaluated between 0 and 0.5 gives 2/3 - 1/2 = +1/6
        assert!((v - c(1.0 / 6.0, 0.0)).norm() < 1e-14);
        let oracle = segment_integral(&|w| (w - c(2.0, 0.0)).powi(-2), c(0.0, 0.0), c(0.5, 0.0));
        assert!((v - oracle).norm() < 1e-14);
    }

    #[test]
    fn interior_residue_is_rejected() {
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
        assert!(matches!(
            antiderivative_eval(&f, c(0.5, 0.0), c(0.5, 0.0)),
            Err(Error::MultivaluedAntiderivative { .. })
        ));
    }

    #[test]
    fn exterior_log_term_by_quadrature() {
        // ∫_0^{0.5i} dw/(w-2) = log(1 - 0.25i)
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(c(2.0, 0.0))).unwrap();
        let v = antiderivative_eval(&f, c(0.0, 0.5), c(0.0, 0.0)).unwrap();
        assert!((v - (c(1.0, -0.25)).ln()).norm() < 1e-13);
    }

    #[test]
    fn path_through_pole() {
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_roots(&[(c(0.25, 0.0), 2)])).unwrap();
        assert!(matches!(
            antiderivative_eval(&f, c(0.5, 0.0), c(0.0, 0.0)),
            Err(Error::PathHitsPole(_))
        ));
    }
}
