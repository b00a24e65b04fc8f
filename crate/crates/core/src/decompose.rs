//! Boundary data `R(z, z̄)` and its splitting `S_a R = (Szegő span) + (Garabedian span)`.

use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::io;
use crate::kernels::{derivative_factor, kernel_element, KernelElement, KernelKind, SpanElement, ORDER_CAP};
use crate::ratcalc::{circle_point, ComplexPoly, PrincipalPart, RationalFn, TOL_CIRCLE};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::Path;

/// Relative tolerance on the boundary residual of a decomposition.
pub const TOL_DECOMP: f64 = 1e-8;
/// Boundary samples used for residual checks.
pub const CHECK_SAMPLES: usize = 256;

/// `R(z, s) = Σ n_ij z^i s^j / Σ d_ij z^i s^j`, with `s` standing for `z̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiRational {
    numer: Vec<Vec<Complex64>>,
    denom: Vec<Vec<Complex64>>,
}

impl BiRational {
    pub fn new(numer: Vec<Vec<Complex64>>, denom: Vec<Vec<Complex64>>) -> Result<Self> {
        if denom.iter().flatten().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroDivisor);
        }
        Ok(BiRational { numer, denom })
    }

    /// A polynomial in `z` and `s` (denominator 1).
    pub fn polynomial(numer: Vec<Vec<Complex64>>) -> Self {
        BiRational {
            numer,
            denom: vec![vec![Complex64::new(1.0, 0.0)]],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![vec![c]])
    }

    /// Single monomial `c z^i s^j`.
    pub fn monomial(c: Complex64, i: usize, j: usize) -> Self {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); j + 1]; i + 1];
        m[i][j] = c;
        Self::polynomial(m)
    }

    pub fn numer(&self) -> &[Vec<Complex64>] {
        &self.numer
    }

    pub fn denom(&self) -> &[Vec<Complex64>] {
        &self.denom
    }

    /// Direct evaluation at a point `z` with `s` supplied independently.
    pub fn eval(&self, z: Complex64, s: Complex64) -> Complex64 {
        horner2(&self.numer, z, s) / horner2(&self.denom, z, s)
    }

    /// `R(z, conj z)`.
    pub fn eval_boundary(&self, z: Complex64) -> Complex64 {
        self.eval(z, z.conj())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let obj = io::parse_object(text)?;
        Self::from_json_value(&obj)
    }

    pub(crate) fn from_json_value(obj: &Value) -> Result<Self> {
        let numer = io::parse_matrix(obj, "numer_coeffs")?
            .ok_or_else(|| Error::parse("numer_coeffs", None, "missing required field"))?;
        let denom = io::parse_matrix(obj, "denom_coeffs")?.unwrap_or_else(|| vec![vec![Complex64::new(1.0, 0.0)]]);
        Self::new(numer, denom).map_err(|_| Error::parse("denom_coeffs", None, "denominator is identically zero"))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&io::read_file(path)?)
    }

    pub fn to_json(&self) -> Value {
        let m = |x: &[Vec<Complex64>]| Value::Array(x.iter().map(|row| io::coeffs_json(row)).collect());
        json!({ "numer_coeffs": m(&self.numer), "denom_coeffs": m(&self.denom) })
    }
}

fn horner2(c: &[Vec<Complex64>], z: Complex64, s: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, row| {
        acc * z + row.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &x| a * s + x)
    })
}

fn degrees(c: &[Vec<Complex64>]) -> (usize, usize) {
    let mut di = 0;
    let mut dj = 0;
    for (i, row) in c.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.norm() != 0.0 {
                di = di.max(i);
                dj = dj.max(j);
            }
        }
    }
    (di, dj)
}

/// `Σ c_ij F^i Σ^j` scaled by `fd^I sd^J` to a polynomial.
fn substitute(c: &[Vec<Complex64>], fpows: &[ComplexPoly], fdpows: &[ComplexPoly], spows: &[ComplexPoly], sdpows: &[ComplexPoly]) -> ComplexPoly {
    let big_i = fpows.len() - 1;
    let big_j = spows.len() - 1;
    let mut acc = ComplexPoly::zero();
    for (i, row) in c.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x.norm() == 0.0 {
                continue;
            }
            let t = &(&fpows[i] * &fdpows[big_i - i]) * &(&spows[j] * &sdpows[big_j - j]);
            acc = &acc + &t.scale(x);
        }
    }
    acc
}

fn powers(p: &ComplexPoly, n: usize) -> Vec<ComplexPoly> {
    let mut out = vec![ComplexPoly::one()];
    for k in 0..n {
        out.push(&out[k] * p);
    }
    out
}

/// `ρ(w) = R(f(w), σ(w))`, equal to `R(z, z̄)` at `z = f(w)` on `|w| = 1`.
pub fn pullback_boundary_data(dom: &QuadDomain, r: &BiRational) -> Result<RationalFn> {
    let (ni, nj) = degrees(&r.numer);
    let (di, dj) = degrees(&r.denom);
    let (bi, bj) = (ni.max(di), nj.max(dj));
    let f = dom.map();
    let sigma = dom.schwarz_pullback();
    let fp = powers(f.numer(), bi);
    let fdp = powers(f.denom(), bi);
    let sp = powers(sigma.numer(), bj);
    let sdp = powers(sigma.denom(), bj);
    let n = substitute(&r.numer, &fp, &fdp, &sp, &sdp);
    let d = substitute(&r.denom, &fp, &fdp, &sp, &sdp);
    let rho = RationalFn::new(n.trim_relative(1e-15), d.trim_relative(1e-15)).map_err(|e| match e {
        Error::ZeroDivisor => Error::InvalidRepresentation("boundary data denominator vanishes identically on the boundary".into()),
        other => other,
    })?;
    check_trace(&rho)?;
    Ok(rho)
}

pub(crate) fn check_trace(rho: &RationalFn) -> Result<()> {
    if let Some(&(p, _)) = rho.poles()?.iter().find(|(p, _)| (p.norm() - 1.0).abs() <= TOL_CIRCLE) {
        return Err(Error::SingularBoundaryData(p));
    }
    Ok(())
}

/// `S_a R` written as `szego_terms + garabedian_terms` on the boundary.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub a_param: Complex64,
    pub szego_terms: SpanElement,
    pub garabedian_terms: SpanElement,
    pub residual: f64,
    /// Pulled-back boundary data `ρ`.
    pub trace: RationalFn,
}

/// Coefficients `x_m` with `Σ_m x_m · pp(e_m) = pp` where `e_m` is the generator of
/// order `m` at the pole; `offset` is the number of leading (lowest-order)
/// entries that the generators never carry (1 for Λ, whose residue is zero).
pub(crate) fn match_principal_part(
    pp: &PrincipalPart,
    offset: usize,
    mut element: impl FnMut(usize) -> Result<KernelElement>,
) -> Result<Vec<(Complex64, KernelElement)>> {
    let k = pp.order();
    if k <= offset {
        return Ok(Vec::new());
    }
    let top = k - offset - 1;
    if top > ORDER_CAP {
        return Err(Error::OrderCapExceeded { requested: top, cap: ORDER_CAP });
    }
    let elems: Vec<KernelElement> = (0..=top).map(&mut element).collect::<Result<_>>()?;
    let parts: Vec<PrincipalPart> = elems.iter().map(|e| e.principal_part().expect("pole kind")).collect();
    let mut x = vec![Complex64::new(0.0, 0.0); top + 1];
    for m in (0..=top).rev() {
        let idx = m + offset;
        let mut rhs = pp.coeffs[idx];
        for (mm, xm) in x.iter().enumerate().skip(m + 1) {
            rhs -= xm * parts[mm].coeffs[idx];
        }
        x[m] = rhs / parts[m].coeffs[idx];
    }
    Ok(x.into_iter().zip(elems).collect())
}

/// Span of Garabedian generators carrying the principal parts of `g` inside the disc.
fn garabedian_match(dom: &QuadDomain, g: &RationalFn) -> Result<SpanElement> {
    let (_, parts) = g.partial_fractions()?;
    let mut span = SpanElement::new();
    for pp in parts.iter().filter(|pp| pp.pole.norm() < 1.0) {
        for (c, e) in match_principal_part(pp, 0, |m| kernel_element(dom, KernelKind::Garabedian, pp.pole, m))? {
            span.push(c, e);
        }
    }
    Ok(span)
}

fn prune(span: SpanElement) -> SpanElement {
    let scale = span.terms.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max);
    span.pruned(1e-13 * scale)
}

/// Swap each Garabedian generator for the Szegő generator at the same point and
/// order, conjugating its coefficient.
fn conjugate_partners(dom: &QuadDomain, span: &SpanElement) -> Result<SpanElement> {
    let mut out = SpanElement::new();
    for (c, e) in &span.terms {
        out.push(c.conj(), e.partner(dom)?);
    }
    Ok(out)
}

/// Decomposition of `S_a R` from the pulled-back trace `ρ` of `R`.
pub fn decompose_trace(dom: &QuadDomain, a_param: Complex64, rho: &RationalFn) -> Result<Decomposition> {
    check_trace(rho)?;
    let s_a = kernel_element(dom, KernelKind::Szego, a_param, 0)?;
    let l_a = kernel_element(dom, KernelKind::Garabedian, a_param, 0)?;
    let g = s_a.reduced().mul(rho)?;
    let garabedian_terms = prune(garabedian_match(dom, &g)?);
    let g2 = l_a.reduced().mul(&rho.reflect())?;
    let szego_terms = prune(conjugate_partners(dom, &garabedian_match(dom, &g2)?)?);

    let mut residual: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..CHECK_SAMPLES {
        let w = circle_point(k, CHECK_SAMPLES);
        let lhs = s_a.eval_reduced(w)? * rho.value(w) * derivative_factor(dom, -0.5, w);
        let rhs = szego_terms.eval(dom, w)? + garabedian_terms.eval(dom, w)?;
        residual = residual.max((lhs - rhs).norm());
        size = size.max(lhs.norm());
    }
    let tol = TOL_DECOMP * (1.0 + size);
    if !(residual <= tol) {
        return Err(Error::DecompositionFailed { residual, tol });
    }
    Ok(Decomposition {
        a_param,
        szego_terms,
        garabedian_terms,
        residual,
        trace: rho.clone(),
    })
}

pub fn basic_decomposition(dom: &QuadDomain, a_param: Complex64, r: &BiRational) -> Result<Decomposition> {
    let rho = pullback_boundary_data(dom, r)?;
    decompose_trace(dom, a_param, &rho)
}

/// Szegő projection of `S_a R`.
pub fn szego_project(dom: &QuadDomain, a_param: Complex64, r: &BiRational) -> Result<SpanElement> {
    Ok(basic_decomposition(dom, a_param, r)?.szego_terms)
}

/// Szegő projection of `R` itself on a double quadrature domain, where the
/// boundary trace of `S_a` is rational and can be divided out.
pub fn szego_project_direct(dom: &QuadDomain, a_param: Complex64, r: &BiRational) -> Result<SpanElement> {
    let q = dom.witness().ok_or(Error::NotDoubleQuadrature)?;
    let rho = pullback_boundary_data(dom, r)?;
    let s_a = kernel_element(dom, KernelKind::Szego, a_param, 0)?;
    // f'^{1/2} = eps * q on the disc, eps = ±1
    let zero = Complex64::new(0.0, 0.0);
    let eps = if (dom.sqrt_derivative(zero) - q.value(zero)).norm() <= (dom.sqrt_derivative(zero) + q.value(zero)).norm() {
        1.0
    } else {
        -1.0
    };
    let rho_over_s = rho.mul(&q.scale(Complex64::new(eps, 0.0)))?.div(s_a.reduced())?;
    Ok(decompose_trace(dom, a_param, &rho_over_s)?.szego_terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> Complex64 {
        c(1.0, 0.0)
    }

    fn zero() -> Complex64 {
        c(0.0, 0.0)
    }

    fn s_over_z_minus_2() -> BiRational {
        BiRational::new(vec![vec![zero(), one()]], vec![vec![c(-2.0, 0.0)], vec![one()]]).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let d = QuadDomain::disc();
        let rho = pullback_boundary_data(&d, &BiRational::monomial(one(), 1, 1)).unwrap();
        assert_eq!(rho, RationalFn::one());
        let rho = pullback_boundary_data(&d, &s_over_z_minus_2()).unwrap();
        for k in 0..64 {
            let w = circle_point(k, 64);
            assert!((rho.value(w) - (w * (w - 2.0)).inv()).norm() < 1e-14);
            assert!((rho.value(w) - s_over_z_minus_2().eval_boundary(w)).norm() < 1e-14);
        }
        let a = QuadDomain::new(RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None).unwrap();
        let rho = pullback_boundary_data(&a, &BiRational::monomial(one(), 0, 1)).unwrap();
        for k in 0..64 {
            let w = circle_point(k, 64);
            assert!((rho.value(w) - a.schwarz_pullback().value(w)).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_data_rejected() {
        let d = QuadDomain::disc();
        // 1 / (z - 1) has a pole on the circle
        let r = BiRational::new(vec![vec![one()]], vec![vec![-one()], vec![one()]]).unwrap();
        assert!(matches!(pullback_boundary_data(&d, &r), Err(Error::SingularBoundaryData(_))));
    }

    #[test]
    fn disc_conjugate_data() {
        let d = QuadDomain::disc();
        let dec = basic_decomposition(&d, zero(), &BiRational::monomial(one(), 0, 1)).unwrap();
        assert!(dec.szego_terms.is_empty());
        assert_eq!(dec.garabedian_terms.len(), 1);
        let (coef, e) = &dec.garabedian_terms.terms[0];
        assert_eq!((e.kind, e.order), (KernelKind::Garabedian, 0));
        assert!((coef - one()).norm() < 1e-14);
        assert!(dec.residual <= 1e-12);
    }

    #[test]
    fn disc_holomorphic_data() {
        let d = QuadDomain::disc();
        let dec = basic_decomposition(&d, zero(), &BiRational::monomial(one(), 1, 0)).unwrap();
        assert!(dec.garabedian_terms.is_empty());
        assert_eq!(dec.szego_terms.len(), 1);
        let (coef, e) = &dec.szego_terms.terms[0];
        assert_eq!((e.kind, e.order), (KernelKind::Szego, 1));
        assert!((coef - one()).norm() < 1e-14);
    }

    #[test]
    fn constant_data_gives_anchor_kernel() {
        let a = QuadDomain::new(RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None).unwrap();
        let v = c(0.2, -0.3);
        let dec = basic_decomposition(&a, v, &BiRational::constant(c(2.0, 1.0))).unwrap();
        assert!(dec.garabedian_terms.is_empty());
        assert_eq!(dec.szego_terms.len(), 1);
        let (coef, e) = &dec.szego_terms.terms[0];
        assert_eq!((e.kind, e.order, e.param), (KernelKind::Szego, 0, v));
        assert!((coef - c(2.0, 1.0)).norm() < 1e-12);
        assert!(dec.residual <= 1e-12);
    }

    #[test]
    fn direct_projection_on_disc() {
        let d = QuadDomain::disc();
        let p = szego_project_direct(&d, zero(), &BiRational::monomial(one(), 0, 1)).unwrap();
        assert!(p.is_empty());
        let r = BiRational::polynomial(vec![vec![zero(), one()], vec![zero()], vec![one()]]);
        let p = szego_project_direct(&d, zero(), &r).unwrap();
        for k in 0..16 {
            let w = circle_point(k, 16) * 0.7;
            assert!((p.eval(&d, w).unwrap() - w * w).norm() < 1e-12);
        }
        let a = QuadDomain::new(RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None).unwrap();
        assert!(matches!(szego_project_direct(&a, zero(), &r), Err(Error::NotDoubleQuadrature)));
    }

    #[test]
    fn boundary_file_roundtrip_and_errors() {
        let r = s_over_z_minus_2();
        let back = BiRational::from_json_str(&r.to_json().to_string()).unwrap();
        assert_eq!(back, r);
        let bad = r#"{"numer_coeffs": [[[1, 0]], [[0, 0], [2]]]}"#;
        match BiRational::from_json_str(bad) {
            Err(Error::Parse { field, index, .. }) => {
                assert_eq!(field, "numer_coeffs[1]");
                assert_eq!(index, Some(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
