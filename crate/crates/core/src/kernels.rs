//! Szegő, Garabedian, Bergman and Λ kernels of a quadrature domain, with
//! their parameter derivatives, pulled back to the disc.
//!
//! With `z = f(w)` and `a = f(v)` every generator has the form
//! `reduced(w) · f'(w)^power`, where `reduced` is an explicit rational
//! function of `w` whose coefficients absorb all dependence on `v`.

use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::ratcalc::{circle_point, ComplexPoly, PrincipalPart, RationalFn, Series};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Highest parameter-derivative order accepted by [`kernel_element`].
pub const ORDER_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    Szego,
    Garabedian,
    Bergman,
    Lambda,
}

impl KernelKind {
    /// Exponent of `f'(w)` multiplying the reduced part.
    pub fn power(self) -> f64 {
        match self {
            KernelKind::Szego | KernelKind::Garabedian => -0.5,
            KernelKind::Bergman | KernelKind::Lambda => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            KernelKind::Szego => "S",
            KernelKind::Garabedian => "L",
            KernelKind::Bergman => "B",
            KernelKind::Lambda => "Λ",
        }
    }

    /// Kinds whose parameter enters antiholomorphically (differentiated in `ā`).
    pub fn is_conjugate(self) -> bool {
        matches!(self, KernelKind::Szego | KernelKind::Bergman)
    }
}

/// One span generator: `S_a^m`, `L_a^m`, `B_a^m` or `Λ_a^m` with `a = f(param)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub kind: KernelKind,
    pub order: usize,
    pub param: Complex64,
    pub power: f64,
    reduced: RationalFn,
    /// `coeffs[k]` multiplies the k-th disc building block (see `block`).
    coeffs: Vec<Complex64>,
}

impl KernelElement {
    pub fn reduced(&self) -> &RationalFn {
        &self.reduced
    }

    /// Value of the reduced part at `w`, summed from its building blocks.
    pub fn eval_reduced(&self, w: Complex64) -> Result<Complex64> {
        let v = self.param;
        let one = Complex64::new(1.0, 0.0);
        let base = match self.kind {
            KernelKind::Szego | KernelKind::Bergman => one - w * v.conj(),
            KernelKind::Garabedian | KernelKind::Lambda => w - v,
        };
        if base.norm() == 0.0 {
            return Err(Error::EvaluationAtPole(w));
        }
        let inv = base.inv();
        let lead = match self.kind {
            KernelKind::Szego | KernelKind::Garabedian => inv,
            KernelKind::Bergman | KernelKind::Lambda => inv * inv,
        };
        let step = match self.kind {
            KernelKind::Szego | KernelKind::Bergman => w * inv,
            KernelKind::Garabedian | KernelKind::Lambda => inv,
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = lead;
        for &c in &self.coeffs {
            acc += c * pw;
            pw *= step;
        }
        Ok(acc)
    }

    /// Principal part at `param` of a Garabedian or Λ reduced part.
    pub fn principal_part(&self) -> Option<PrincipalPart> {
        match self.kind {
            KernelKind::Garabedian => Some(PrincipalPart {
                pole: self.param,
                coeffs: self.coeffs.clone(),
            }),
            KernelKind::Lambda => {
                let mut coeffs = vec![Complex64::new(0.0, 0.0)];
                coeffs.extend_from_slice(&self.coeffs);
                Some(PrincipalPart { pole: self.param, coeffs })
            }
            _ => None,
        }
    }

    /// The generator of the same order and parameter with the conjugate
    /// kernel kind (Szegő↔Garabedian, Bergman↔Λ).
    pub fn partner(&self, dom: &QuadDomain) -> Result<KernelElement> {
        let kind = match self.kind {
            KernelKind::Szego => KernelKind::Garabedian,
            KernelKind::Garabedian => KernelKind::Szego,
            KernelKind::Bergman => KernelKind::Lambda,
            KernelKind::Lambda => KernelKind::Bergman,
        };
        kernel_element(dom, kind, self.param, self.order)
    }
}

/// `β_{m,k}(v)` with `𝒟^m (F u) = Σ_k β_{m,k} u^(k)`, where `𝒟 = f'(v)^{-1} d/dv`
/// and `F = f'^power`.
fn derivative_weights(dom: &QuadDomain, v: Complex64, power: f64, m: usize) -> Vec<Complex64> {
    let len = m + 1;
    let recip = dom.derivative_power_series(v, -1.0, len);
    let mut beta: Vec<Series> = vec![dom.derivative_power_series(v, power, len)];
    for _ in 0..m {
        let mut next = Vec::with_capacity(beta.len() + 1);
        for k in 0..=beta.len() {
            let mut s = if k < beta.len() { beta[k].derivative() } else { Series::zeros(len) };
            if k > 0 {
                s = s.add(&beta[k - 1]);
            }
            next.push(recip.mul(&s));
        }
        beta = next;
    }
    beta.iter().map(|s| s.coeff(0)).collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Build the generator of `kind` at disc parameter `v` with `m` parameter derivatives.
pub fn kernel_element(dom: &QuadDomain, kind: KernelKind, v: Complex64, m: usize) -> Result<KernelElement> {
    if m > ORDER_CAP {
        return Err(Error::OrderCapExceeded { requested: m, cap: ORDER_CAP });
    }
    if !(v.norm() < 1.0) {
        return Err(Error::ParameterOutsideDisc(v));
    }
    let power = kind.power();
    let beta = derivative_weights(dom, v, power, m);
    let coeffs: Vec<Complex64> = beta
        .iter()
        .enumerate()
        .map(|(k, &b)| match kind {
            KernelKind::Szego => b.conj() * factorial(k) / (2.0 * PI),
            KernelKind::Garabedian => b * factorial(k) / (2.0 * PI),
            KernelKind::Bergman => b.conj() * factorial(k + 1) / PI,
            KernelKind::Lambda => b * factorial(k + 1) / PI,
        })
        .collect();
    let reduced = match kind {
        KernelKind::Szego | KernelKind::Bergman => {
            let extra = if kind == KernelKind::Bergman { 2 } else { 1 };
            let base = ComplexPoly::new(vec![Complex64::new(1.0, 0.0), -v.conj()]);
            let top = m + extra;
            let mut numer = ComplexPoly::zero();
            for (k, &c) in coeffs.iter().enumerate() {
                // c w^k / base^(k+extra) over base^top
                numer = &numer + &(&ComplexPoly::monomial(c, k) * &base.pow(top - k - extra));
            }
            RationalFn::from_coprime(numer, base.pow(top))
        }
        KernelKind::Garabedian | KernelKind::Lambda => {
            let pp = KernelElement {
                kind,
                order: m,
                param: v,
                power,
                reduced: RationalFn::zero(),
                coeffs: coeffs.clone(),
            }
            .principal_part()
            .expect("pole kinds carry a principal part");
            pp.to_rational()
        }
    };
    Ok(KernelElement {
        kind,
        order: m,
        param: v,
        power,
        reduced,
        coeffs,
    })
}

/// `reduced(w) · f'(w)^power`, the kernel value at `z = f(w)`.
pub fn eval_element(e: &KernelElement, dom: &QuadDomain, w: Complex64) -> Result<Complex64> {
    let r = e.eval_reduced(w)?;
    Ok(r * derivative_factor(dom, e.power, w))
}

pub(crate) fn derivative_factor(dom: &QuadDomain, power: f64, w: Complex64) -> Complex64 {
    if power == -1.0 {
        dom.eval_derivative(w).inv()
    } else {
        dom.sqrt_derivative(w).inv()
    }
}

/// A finite linear combination of kernel generators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpanElement {
    pub terms: Vec<(Complex64, KernelElement)>,
}

impl SpanElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Add `coeff · e`, merging with an existing generator of the same
    /// (kind, param, order).
    pub fn push(&mut self, coeff: Complex64, e: KernelElement) {
        if let Some(slot) = self
            .terms
            .iter_mut()
            .find(|(_, x)| x.kind == e.kind && x.order == e.order && x.param == e.param)
        {
            slot.0 += coeff;
        } else {
            self.terms.push((coeff, e));
        }
    }

    pub fn eval(&self, dom: &QuadDomain, w: Complex64) -> Result<Complex64> {
        self.terms
            .iter()
            .map(|(c, e)| eval_element(e, dom, w).map(|x| c * x))
            .sum()
    }

    /// Sum of `coeff · reduced` (all terms must share one power of `f'`).
    pub fn eval_reduced(&self, w: Complex64) -> Result<Complex64> {
        self.terms.iter().map(|(c, e)| e.eval_reduced(w).map(|x| c * x)).sum()
    }

    /// Terms sorted by (kind, param, order) so equal spans compare equal.
    pub fn canonical(&self) -> SpanElement {
        let mut terms = self.terms.clone();
        terms.sort_by(|(_, a), (_, b)| {
            (a.kind, a.param.re, a.param.im, a.order)
                .partial_cmp(&(b.kind, b.param.re, b.param.im, b.order))
                .expect("finite parameters")
        });
        SpanElement { terms }
    }

    /// Drop terms whose coefficient is at most `tol`.
    pub fn pruned(&self, tol: f64) -> SpanElement {
        SpanElement {
            terms: self.terms.iter().filter(|(c, _)| c.norm() > tol).cloned().collect(),
        }
    }
}

/// The boundary identities linking the kernel pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelIdentity {
    /// `conj(S_a) = (1/i) L_a T`
    SL,
    /// `conj(S_a^m) = (1/i) L_a^m T`
    SL2,
    /// `B(·,a) T = -conj(Λ(·,a) T)`
    BL,
    /// `B^m(·,a) T = -conj(Λ^m(·,a) T)`
    BL2,
}

/// Maximum boundary mismatch of an identity over `samples` uniform points.
/// `SL` and `BL` use order 0; the differentiated forms use order `m`.
pub fn identity_residual(dom: &QuadDomain, which: KernelIdentity, v: Complex64, m: usize, samples: usize) -> Result<f64> {
    let m = match which {
        KernelIdentity::SL | KernelIdentity::BL => 0,
        KernelIdentity::SL2 | KernelIdentity::BL2 => m,
    };
    let (left, right) = match which {
        KernelIdentity::SL | KernelIdentity::SL2 => (KernelKind::Szego, KernelKind::Garabedian),
        KernelIdentity::BL | KernelIdentity::BL2 => (KernelKind::Bergman, KernelKind::Lambda),
    };
    let a = kernel_element(dom, left, v, m)?;
    let b = kernel_element(dom, right, v, m)?;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let w = circle_point(k, samples);
        let t = dom.boundary_frame(2.0 * PI * k as f64 / samples as f64).tangent;
        let x = eval_element(&a, dom, w)?;
        let y = eval_element(&b, dom, w)?;
        let r = match left {
            KernelKind::Szego => x.conj() + Complex64::i() * y * t,
            _ => x * t + (y * t).conj(),
        };
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cardioidish() -> QuadDomain {
        QuadDomain::new(RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None).unwrap()
    }

    #[test]
    fn disc_closed_forms() {
        let d = QuadDomain::disc();
        let s = kernel_element(&d, KernelKind::Szego, c(0.0, 0.0), 0).unwrap();
        assert!((eval_element(&s, &d, c(0.0, 0.0)).unwrap() - c(0.5 / PI, 0.0)).norm() < 1e-15);
        let l = kernel_element(&d, KernelKind::Garabedian, c(0.0, 0.0), 0).unwrap();
        let z = c(1e-7, 0.0);
        assert!((z * eval_element(&l, &d, z).unwrap() - c(0.5 / PI, 0.0)).norm() < 1e-15);
        let lam = kernel_element(&d, KernelKind::Lambda, c(0.0, 0.0), 0).unwrap();
        assert!((eval_element(&lam, &d, c(0.5, 0.0)).unwrap() - c(4.0 / PI, 0.0)).norm() < 1e-14);
        let b = kernel_element(&d, KernelKind::Bergman, c(0.0, 0.0), 0).unwrap();
        assert!((eval_element(&b, &d, c(0.0, 0.0)).unwrap() - c(1.0 / PI, 0.0)).norm() < 1e-15);
        // S^1(z,0) = z / 2π
        let s1 = kernel_element(&d, KernelKind::Szego, c(0.0, 0.0), 1).unwrap();
        let w = c(0.3, -0.2);
        assert!((eval_element(&s1, &d, w).unwrap() - w / (2.0 * PI)).norm() < 1e-15);
    }

    #[test]
    fn reduced_matches_blocks() {
        let dom = cardioidish();
        for kind in [KernelKind::Szego, KernelKind::Garabedian, KernelKind::Bergman, KernelKind::Lambda] {
            let e = kernel_element(&dom, kind, c(0.2, -0.1), 3).unwrap();
            let w = c(-0.4, 0.5);
            let a = e.reduced().eval(w).unwrap();
            let b = e.eval_reduced(w).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{kind:?}");
        }
    }

    #[test]
    fn garabedian_residue() {
        let dom = cardioidish();
        let v = c(0.3, 0.2);
        let l = kernel_element(&dom, KernelKind::Garabedian, v, 0).unwrap();
        // residue in z at a: L ~ (1/2π) / (z - a)
        let eps = c(1e-6, 1e-6);
        let w = v + eps;
        let z = dom.eval_map(w) - dom.eval_map(v);
        let val = eval_element(&l, &dom, w).unwrap() * z;
        assert!((val - c(0.5 / PI, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn parameter_derivative_matches_finite_difference() {
        // S^1(z, a) = ∂S/∂ā, checked by a difference quotient in v
        let dom = cardioidish();
        let v = c(0.2, 0.1);
        let w = c(0.1, -0.5);
        let h = 1e-5;
        let s = |v: Complex64| eval_element(&kernel_element(&dom, KernelKind::Szego, v, 0).unwrap(), &dom, w).unwrap();
        let fp = dom.eval_derivative(v);
        // ∂/∂v̄ via conj-direction differences, scaled by conj(f'(v))^{-1}
        let dvbar = (s(v + c(h, 0.0)) - s(v - c(h, 0.0))) / (4.0 * h) + (s(v + c(0.0, h)) - s(v - c(0.0, h))) / (c(0.0, -4.0 * h));
        let fd = dvbar / fp.conj();
        let exact = eval_element(&kernel_element(&dom, KernelKind::Szego, v, 1).unwrap(), &dom, w).unwrap();
        assert!((fd - exact).norm() < 1e-8);
    }

    #[test]
    fn identity_examples() {
        let d = QuadDomain::disc();
        assert!(identity_residual(&d, KernelIdentity::SL, c(0.0, 0.0), 0, 256).unwrap() <= 1e-12);
        assert!(identity_residual(&d, KernelIdentity::BL, c(0.0, 0.0), 0, 256).unwrap() <= 1e-12);
        let a = cardioidish();
        assert!(identity_residual(&a, KernelIdentity::SL2, c(0.2, 0.0), 1, 256).unwrap() <= 1e-8);
        assert!(identity_residual(&a, KernelIdentity::BL2, c(0.1, 0.3), 2, 256).unwrap() <= 1e-8);
    }

    #[test]
    fn order_cap_and_parameter_checks() {
        let d = QuadDomain::disc();
        assert!(matches!(
            kernel_element(&d, KernelKind::Szego, c(0.0, 0.0), 13),
            Err(Error::OrderCapExceeded { requested: 13, cap: 12 })
        ));
        assert!(kernel_element(&d, KernelKind::Szego, c(0.0, 0.0), 12).is_ok());
        assert!(matches!(
            kernel_element(&d, KernelKind::Szego, c(1.0, 0.0), 0),
            Err(Error::ParameterOutsideDisc(_))
        ));
    }

    #[test]
    fn span_merges_like_terms() {
        let d = QuadDomain::disc();
        let e = kernel_element(&d, KernelKind::Szego, c(0.0, 0.0), 0).unwrap();
        let mut s = SpanElement::new();
        s.push(c(1.0, 0.0), e.clone());
        s.push(c(0.5, 1.0), e);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms[0].0, c(1.5, 1.0));
    }
}
