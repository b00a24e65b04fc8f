//! Independent numeric checks: Poisson integrals, discrete Hardy projection,
//! finite differences, boundary area integrals and rational-fit certificates.
//!
//! Nothing here calls the kernel or decomposition code, so agreement with the
//! closed forms is real evidence.

use crate::decompose::BiRational;
use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::ratcalc::ComplexPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Values on a uniform grid `θ_k = 2πk/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySamples {
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    /// `N` must be a power of two, at least 64.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidRepresentation(format!("sample count {n} is not a power of two ≥ 64")));
        }
        let thetas: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        let values = thetas.iter().map(|&t| f(t)).collect();
        Ok(BoundarySamples { thetas, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Trapezoid-rule Poisson integral of the samples at `|v| < 1`.
pub fn poisson_disc(samples: &BoundarySamples, v: Complex64) -> Complex64 {
    let n = samples.len() as f64;
    let r2 = v.norm_sqr();
    samples
        .thetas
        .iter()
        .zip(&samples.values)
        .map(|(&t, &y)| y * ((1.0 - r2) / (Complex64::from_polar(1.0, t) - v).norm_sqr()))
        .sum::<Complex64>()
        / n
}

/// Boundary values `R(z, z̄)` at `z = f(e^{iθ})`, evaluated directly.
pub fn boundary_samples(dom: &QuadDomain, r: &BiRational, n: usize) -> Result<BoundarySamples> {
    BoundarySamples::from_fn(n, |t| r.eval_boundary(dom.eval_map(Complex64::from_polar(1.0, t))))
}

/// Harmonic extension of `R` evaluated at `f(v)` by the disc Poisson integral
/// of the pulled-back samples.
pub fn poisson_pullback(dom: &QuadDomain, r: &BiRational, v: Complex64, n: usize) -> Result<Complex64> {
    Ok(poisson_disc(&boundary_samples(dom, r, n)?, v))
}

fn fft(values: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    let mut buf = values.to_vec();
    plan.process(&mut buf);
    buf
}

/// Keep the Fourier modes `e^{ikθ}` with `0 ≤ k < N/2`.
pub fn hardy_project(samples: &BoundarySamples) -> BoundarySamples {
    let n = samples.len();
    let mut spec = fft(&samples.values, false);
    for c in spec.iter_mut().skip(n / 2) {
        *c = Complex64::new(0.0, 0.0);
    }
    let values = fft(&spec, true).into_iter().map(|c| c / n as f64).collect();
    BoundarySamples {
        thetas: samples.thetas.clone(),
        values,
    }
}

/// Outward normal derivative at `f(e^{iθ})` by a one-sided 3-point difference
/// along the inward normal. `u` is evaluated at physical points `z`.
pub fn fd_normal(dom: &QuadDomain, u: &dyn Fn(Complex64) -> Result<Complex64>, theta: f64, step: f64) -> Result<Complex64> {
    let w = Complex64::from_polar(1.0, theta);
    let z0 = dom.eval_map(w);
    let dz = fd_tangent(dom, theta);
    // outward normal = -i * tangent
    let n = -Complex64::i() * dz / dz.norm();
    let u0 = u(z0)?;
    let u1 = u(z0 - n * step)?;
    let u2 = u(z0 - n * (2.0 * step))?;
    Ok((u0 * 3.0 - u1 * 4.0 + u2) / (2.0 * step))
}

/// `dz/dθ` by a centred difference of the boundary curve.
fn fd_tangent(dom: &QuadDomain, theta: f64) -> Complex64 {
    let h = 1e-5;
    let a = dom.eval_map(Complex64::from_polar(1.0, theta + h));
    let b = dom.eval_map(Complex64::from_polar(1.0, theta - h));
    (a - b) / (2.0 * h)
}

/// 5-point Laplacian of `u` at `z`.
pub fn fd_laplacian(u: &dyn Fn(Complex64) -> Result<Complex64>, z: Complex64, h: f64) -> Result<Complex64> {
    let i = Complex64::i();
    Ok((u(z + h)? + u(z - h)? + u(z + i * h)? + u(z - i * h)? - u(z)? * 4.0) / (h * h))
}

/// `∫_Ω h dA = (1/2i) ∮ h(z) z̄ dz` with the trapezoid rule on `N = 1024`
/// points and `dz/dθ` from the spectral derivative of the boundary samples.
pub fn area_integral(dom: &QuadDomain, h: &ComplexPoly) -> Complex64 {
    area_integral_n(dom, h, 1024)
}

pub fn area_integral_n(dom: &QuadDomain, h: &ComplexPoly, n: usize) -> Complex64 {
    let z: Vec<Complex64> = (0..n)
        .map(|k| dom.eval_map(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)))
        .collect();
    let mut spec = fft(&z, false);
    for (k, c) in spec.iter_mut().enumerate() {
        let freq = if k < n / 2 {
            k as f64
        } else if k == n / 2 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex64::new(0.0, freq);
    }
    let dz: Vec<Complex64> = fft(&spec, true).into_iter().map(|c| c / n as f64).collect();
    let sum: Complex64 = z.iter().zip(&dz).map(|(&zk, &dk)| h.eval(zk) * zk.conj() * dk).sum();
    sum * (2.0 * PI / n as f64) / Complex64::new(0.0, 2.0)
}

/// Certificate that `values` at `points` come from a rational function of
/// type `(p, q)`: fits `N - y D = 0` by the SVD null vector and returns the
/// worst relative mismatch `|N/D - y| / (1 + max|y|)`.
pub fn rational_fit_residual(points: &[Complex64], values: &[Complex64], p: usize, q: usize) -> f64 {
    let m = points.len();
    let cols = p + q + 2;
    let scale_pt = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let a = DMatrix::from_fn(m, cols, |i, j| {
        let z = points[i] / scale_pt;
        if j <= p {
            z.powi(j as i32)
        } else {
            -values[i] * z.powi((j - p - 1) as i32)
        }
    });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best });
    let null: Vec<Complex64> = v_t.row(idx).iter().map(|c| c.conj()).collect();
    let size = values.iter().map(|y| y.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (i, &pt) in points.iter().enumerate() {
        let z = pt / scale_pt;
        let num: Complex64 = (0..=p).map(|j| null[j] * z.powi(j as i32)).sum();
        let den: Complex64 = (0..=q).map(|j| null[p + 1 + j] * z.powi(j as i32)).sum();
        worst = worst.max((num / den - values[i]).norm());
    }
    worst / (1.0 + size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcalc::RationalFn;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poisson_examples() {
        let one = BoundarySamples::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        assert!((poisson_disc(&one, c(0.3, 0.4)) - c(1.0, 0.0)).norm() < 1e-14);
        let cos = BoundarySamples::from_fn(64, |t| c(t.cos(), 0.0)).unwrap();
        assert!(poisson_disc(&cos, c(0.0, 0.0)).norm() < 1e-15);
        let re = BoundarySamples::from_fn(256, |t| c((Complex64::from_polar(1.0, t) - 2.0).inv().re, 0.0)).unwrap();
        assert!((poisson_disc(&re, c(0.0, 0.0)) - c(-0.5, 0.0)).norm() < 1e-14);
        assert!(BoundarySamples::from_fn(100, |_| c(0.0, 0.0)).is_err());
    }

    #[test]
    fn hardy_examples() {
        let e = |k: i32| BoundarySamples::from_fn(64, move |t| Complex64::from_polar(1.0, k as f64 * t)).unwrap();
        assert!(hardy_project(&e(-1)).values.iter().all(|x| x.norm() < 1e-14));
        let p = hardy_project(&e(2));
        assert!(p.values.iter().zip(&e(2).values).all(|(a, b)| (a - b).norm() < 1e-14));
        let cos2 = BoundarySamples::from_fn(64, |t| c(2.0 * t.cos(), 0.0)).unwrap();
        let p = hardy_project(&cos2);
        assert!(p.values.iter().zip(&e(1).values).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn fd_normal_examples() {
        let d = QuadDomain::disc();
        let lin = |z: Complex64| Ok(c(2.0 * z.re, 0.0));
        assert!((fd_normal(&d, &lin, 0.0, 1e-4).unwrap() - c(2.0, 0.0)).norm() < 1e-6);
        let cst = |_: Complex64| Ok(c(3.0, 0.0));
        assert!(fd_normal(&d, &cst, 1.0, 1e-4).unwrap().norm() < 1e-9);
        let sq = |z: Complex64| Ok(c(z.norm_sqr(), 0.0));
        assert!((fd_normal(&d, &sq, 2.3, 1e-4).unwrap() - c(2.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn area_examples() {
        let d = QuadDomain::disc();
        assert!((area_integral(&d, &ComplexPoly::one()) - c(PI, 0.0)).norm() < 1e-12);
        let a = QuadDomain::new(RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None).unwrap();
        assert!((area_integral(&a, &ComplexPoly::one()) - c(1.32 * PI, 0.0)).norm() < 1e-12);
        assert!((area_integral(&a, &ComplexPoly::from_real(&[0.0, 1.0])) - c(0.4 * PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rational_fit_detects_rationality() {
        let pts: Vec<Complex64> = (0..64).map(|k| crate::ratcalc::circle_point(k, 64)).collect();
        let f: Vec<Complex64> = pts.iter().map(|&w| (w + 0.5) / (w - 2.0) + 1.0 / w).collect();
        assert!(rational_fit_residual(&pts, &f, 2, 2) < 1e-12);
        let g: Vec<Complex64> = pts.iter().map(|&w| w.exp()).collect();
        assert!(rational_fit_residual(&pts, &g, 2, 2) > 1e-6);
    }
}
