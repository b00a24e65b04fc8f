use super::dirichlet::dirichlet_solve;
use super::harmonic::{HarmonicRep, Potential};
use crate::decompose::{pullback_boundary_data, BiRational, CHECK_SAMPLES};
use crate::io;
use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::ratcalc::{circle_point, ComplexPoly, RationalFn};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const TOL_SPLIT: f64 = 1e-8;
/// Round-trip tolerance for the inverse and the Neumann solver.
pub const TOL_INVERSE: f64 = 1e-7;
/// Relative size of `Θ₊(0)` (equivalently the boundary mean) treated as zero.
pub const TOL_MEAN: f64 = 1e-9;

/// Outward normal derivative `ψ(θ)` of a harmonic function `h + conj(H)`.
#[derive(Clone, Debug)]
pub struct DtnMap {
    /// `(h∘f)'` and `(H∘f)'` in the disc variable.
    pub h_prime: RationalFn,
    pub big_h_prime: RationalFn,
    /// Exact rational trace `ψ(w)`, available on double quadrature domains.
    pub trace: Option<RationalFn>,
}

impl DtnMap {
    /// `ψ` at `w = e^{iθ}`: `[w ĥ'(w) + conj(w Ĥ'(w))] / |f'(w)|`.
    pub fn eval(&self, dom: &QuadDomain, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, theta);
        let speed = dom.eval_derivative(w).norm();
        (w * self.h_prime.value(w) + (w * self.big_h_prime.value(w)).conj()) / speed
    }

    pub fn samples(&self, dom: &QuadDomain, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| self.eval(dom, 2.0 * PI * k as f64 / n as f64)).collect()
    }
}

/// D-to-N image of a harmonic representation.
pub fn dtn_of(dom: &QuadDomain, rep: &HarmonicRep) -> Result<DtnMap> {
    let h_prime = rep.h_hat.derivative()?;
    let big_h_prime = rep.big_h_hat.derivative()?;
    let trace = match (dom.witness(), dom.witness_reflect()) {
        (Some(q), Some(qr)) => {
            let w = RationalFn::identity();
            let num = w.mul(&h_prime)?.add(&w.mul(&big_h_prime)?.reflect())?;
            Some(num.div(&q.mul(qr)?)?)
        }
        _ => None,
    };
    Ok(DtnMap { h_prime, big_h_prime, trace })
}

/// Normal derivative of the harmonic extension of `R(z, z̄)`.
pub fn dtn_map(dom: &QuadDomain, a_param: Complex64, r: &BiRational) -> Result<DtnMap> {
    let rep = dirichlet_solve(dom, a_param, r)?;
    dtn_of(dom, &rep)
}

/// `κ₁∘f` and `κ₂∘f` with `ψ = κ₁T + conj(κ₂T)` on the boundary.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub kappa1_hat: RationalFn,
    pub kappa2_hat: RationalFn,
    pub residual: f64,
}

impl SplitPair {
    /// `κ₁T + conj(κ₂T)` at `w = e^{iθ}`.
    pub fn eval(&self, dom: &QuadDomain, theta: f64) -> Complex64 {
        let t = dom.boundary_frame(theta).tangent;
        let w = Complex64::from_polar(1.0, theta);
        self.kappa1_hat.value(w) * t + (self.kappa2_hat.value(w) * t).conj()
    }
}

/// `f - f(0)` with the constant numerator coefficient set exactly to zero.
fn drop_value_at_origin(f: &RationalFn) -> RationalFn {
    let c0 = f.value(Complex64::new(0.0, 0.0));
    let mut n = (f.numer() - &f.denom().scale(c0)).into_coeffs();
    if let Some(first) = n.first_mut() {
        *first = Complex64::new(0.0, 0.0);
    }
    RationalFn::from_coprime(ComplexPoly::new(n), f.denom().clone())
}

/// Tangential splitting of a rational boundary trace on a double quadrature domain.
pub fn tangential_split(dom: &QuadDomain, psi: &RationalFn) -> Result<SplitPair> {
    let (q, qr) = match (dom.witness(), dom.witness_reflect()) {
        (Some(q), Some(qr)) => (q, qr),
        _ => return Err(Error::NotDoubleQuadrature),
    };
    crate::decompose::check_trace(psi)?;
    let theta = psi.mul(q)?.mul(qr)?.scale(-Complex64::i());
    let (inner, outer) = theta.circle_split()?;
    let zero = Complex64::new(0.0, 0.0);
    let scale = (0..CHECK_SAMPLES)
        .map(|k| theta.value(circle_point(k, CHECK_SAMPLES)).norm())
        .fold(0.0, f64::max);
    let at0 = inner.value(zero);
    if at0.norm() > TOL_MEAN * (1.0 + scale) {
        // ∮ψ ds = 2π i Θ₊(0)
        return Err(Error::IncompatibleData(at0 * Complex64::new(0.0, 2.0 * PI)));
    }
    let inner = drop_value_at_origin(&inner);
    let wfp = RationalFn::identity().mul(dom.map_derivative())?;
    let kappa1_hat = inner.div(&wfp)?;
    let kappa2_hat = outer.reflect().div(&wfp)?.scale(Complex64::new(-1.0, 0.0));
    let mut pair = SplitPair {
        kappa1_hat,
        kappa2_hat,
        residual: 0.0,
    };
    let mut residual: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..CHECK_SAMPLES {
        let th = 2.0 * PI * k as f64 / CHECK_SAMPLES as f64;
        let target = psi.value(Complex64::from_polar(1.0, th));
        residual = residual.max((pair.eval(dom, th) - target).norm());
        size = size.max(target.norm());
    }
    let tol = TOL_SPLIT * (1.0 + size);
    if !(residual <= tol) {
        return Err(Error::SplitFailed { residual, tol });
    }
    pair.residual = residual;
    Ok(pair)
}

/// Harmonic function (gauge `h(f(0)) = H(f(0)) = 0`) whose normal derivative is `ψ`.
pub fn dtn_inverse(dom: &QuadDomain, psi: &RationalFn) -> Result<HarmonicRep> {
    let pair = tangential_split(dom, psi)?;
    let i = Complex64::i();
    let fp = dom.map_derivative();
    let h_prime = pair.kappa1_hat.mul(fp)?.scale(i);
    let big_h_prime = pair.kappa2_hat.mul(fp)?.scale(i);
    let rep = HarmonicRep {
        h_hat: Potential::from_derivative(h_prime)?,
        big_h_hat: Potential::from_derivative(big_h_prime)?,
        anchor: None,
        provenance: "dtn-inverse".into(),
    };
    let back = dtn_of(dom, &rep)?;
    let mut residual: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..CHECK_SAMPLES {
        let th = 2.0 * PI * k as f64 / CHECK_SAMPLES as f64;
        let target = psi.value(Complex64::from_polar(1.0, th));
        residual = residual.max((back.eval(dom, th) - target).norm());
        size = size.max(target.norm());
    }
    let tol = TOL_INVERSE * (1.0 + size);
    if !(residual <= tol) {
        return Err(Error::SolverResidual { residual, tol });
    }
    Ok(rep)
}

/// `∮ ψ ds` by the trapezoid rule in θ.
pub fn boundary_mean(dom: &QuadDomain, psi: &RationalFn, n: usize) -> Complex64 {
    (0..n)
        .map(|k| {
            let w = circle_point(k, n);
            psi.value(w) * dom.eval_derivative(w).norm()
        })
        .sum::<Complex64>()
        * (2.0 * PI / n as f64)
}

/// Neumann problem with data `ψ` (rational trace in the disc variable).
pub fn neumann_solve(dom: &QuadDomain, psi: &RationalFn) -> Result<HarmonicRep> {
    if !dom.is_double() {
        return Err(Error::NotDoubleQuadrature);
    }
    crate::decompose::check_trace(psi)?;
    let mean = boundary_mean(dom, psi, 1024);
    let scale = (0..CHECK_SAMPLES)
        .map(|k| {
            let w = circle_point(k, CHECK_SAMPLES);
            psi.value(w).norm() * dom.eval_derivative(w).norm()
        })
        .fold(0.0, f64::max);
    if mean.norm() > 1e-8 * (1.0 + scale) {
        return Err(Error::IncompatibleData(mean));
    }
    let mut rep = dtn_inverse(dom, psi)?;
    rep.provenance = "neumann".into();
    Ok(rep)
}

/// Neumann data from JSON: either boundary data `R(z, z̄)` (`numer_coeffs`,
/// `denom_coeffs`) or a trace in the disc variable (`trace_numer`,
/// optional `trace_denom`).
pub fn neumann_data_from_json_str(dom: &QuadDomain, text: &str) -> Result<RationalFn> {
    let obj = io::parse_object(text)?;
    if let Some(numer) = io::parse_coeffs(&obj, "trace_numer")? {
        let denom = io::parse_coeffs(&obj, "trace_denom")?.unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
        return RationalFn::new(ComplexPoly::new(numer), ComplexPoly::new(denom))
            .map_err(|_| Error::parse("trace_denom", None, "denominator is identically zero"));
    }
    pullback_boundary_data(dom, &BiRational::from_json_value(&obj)?)
}

/// `{"trace_numer": .., "trace_denom": ..}`.
pub fn trace_to_json(psi: &RationalFn) -> serde_json::Value {
    serde_json::json!({
        "trace_numer": io::coeffs_json(psi.numer().coeffs()),
        "trace_denom": io::coeffs_json(psi.denom().coeffs()),
    })
}
