use crate::decompose::match_principal_part;
use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::kernels::{kernel_element, KernelKind, SpanElement};
use crate::ratcalc::{PrincipalPart, RationalFn};
use num_complex::Complex64;

pub const TOL_BERGMAN: f64 = 1e-8;

/// `r = κ + λ` with `κ` in the Bergman span and `λ` in the Λ span.
#[derive(Clone, Debug)]
pub struct BergmanSplit {
    pub kappa: SpanElement,
    pub lambda: SpanElement,
    pub residual: f64,
}

fn lambda_match(dom: &QuadDomain, g: &RationalFn) -> Result<SpanElement> {
    let (_, parts) = g.partial_fractions()?;
    let mut span = SpanElement::new();
    for pp in parts.iter().filter(|pp| pp.pole.norm() < 1.0) {
        check_residue(pp)?;
        for (c, e) in match_principal_part(pp, 1, |m| kernel_element(dom, KernelKind::Lambda, pp.pole, m))? {
            span.push(c, e);
        }
    }
    let top = span.terms.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max);
    Ok(span.pruned(1e-13 * top))
}

fn check_residue(pp: &PrincipalPart) -> Result<()> {
    let size = pp.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if pp.residue().norm() > 1e-9 * size.max(1.0) {
        return Err(Error::NotADerivative {
            pole: pp.pole,
            residue: pp.residue(),
        });
    }
    Ok(())
}

/// Split the pulled-back 1-form `r_in = (r∘f)·f'` into Bergman and Λ spans.
pub fn bergman_decompose(dom: &QuadDomain, r_in: &RationalFn) -> Result<BergmanSplit> {
    let grid = interior_grid();
    let scale = grid.iter().map(|&w| r_in.value(w).norm()).fold(0.0, f64::max);
    let lambda = lambda_match(dom, r_in)?;
    let w2 = RationalFn::poly(crate::ratcalc::ComplexPoly::monomial(Complex64::new(1.0, 0.0), 2));
    let g2 = r_in.reflect().div(&w2)?;
    let mirrored = lambda_match(dom, &g2)?;
    let mut kappa = SpanElement::new();
    for (c, e) in &mirrored.terms {
        kappa.push(c.conj(), e.partner(dom)?);
    }
    let mut residual: f64 = 0.0;
    for &w in &grid {
        let lhs = r_in.eval(w)?;
        let rhs = kappa.eval_reduced(w)? + lambda.eval_reduced(w)?;
        residual = residual.max((lhs - rhs).norm());
    }
    let tol = TOL_BERGMAN * (1.0 + scale);
    if !(residual <= tol) {
        return Err(Error::SolverResidual { residual, tol });
    }
    Ok(BergmanSplit { kappa, lambda, residual })
}

/// Polar grid used for interior residual checks (off the usual pole locations).
pub(crate) fn interior_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..5 {
        let r = 0.15 + 0.17 * i as f64;
        for j in 0..12 {
            out.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / 12.0));
        }
    }
    out
}

/// Conjugate every coefficient and swap Bergman and Λ generators.
pub fn complementary_function(dom: &QuadDomain, s: &SpanElement) -> Result<SpanElement> {
    let mut out = SpanElement::new();
    for (c, e) in &s.terms {
        match e.kind {
            KernelKind::Bergman | KernelKind::Lambda => out.push(c.conj(), e.partner(dom)?),
            other => {
                return Err(Error::InvalidRepresentation(format!(
                    "complementary function takes Bergman or Λ generators, found {other:?}"
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcalc::ComplexPoly;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_examples() {
        let d = QuadDomain::disc();
        let r = RationalFn::new(ComplexPoly::from_real(&[-1.0]), ComplexPoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let s = bergman_decompose(&d, &r).unwrap();
        assert!(s.kappa.is_empty());
        assert_eq!(s.lambda.len(), 1);
        let (coef, e) = &s.lambda.terms[0];
        assert_eq!((e.kind, e.order, e.param), (KernelKind::Lambda, 0, c(0.0, 0.0)));
        assert!((coef - c(-PI, 0.0)).norm() < 1e-13);

        let r = RationalFn::poly(ComplexPoly::from_real(&[0.0, 2.0]));
        let s = bergman_decompose(&d, &r).unwrap();
        assert!(s.lambda.is_empty());
        assert_eq!(s.kappa.len(), 1);
        let (coef, e) = &s.kappa.terms[0];
        assert_eq!((e.kind, e.order), (KernelKind::Bergman, 1));
        assert!((coef - c(PI, 0.0)).norm() < 1e-13);

        let r = RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(c(0.2, 0.0))).unwrap();
        assert!(matches!(bergman_decompose(&d, &r), Err(Error::NotADerivative { .. })));
    }

    #[test]
    fn complementary_fixture() {
        let d = QuadDomain::disc();
        let mut s = SpanElement::new();
        s.push(c(2.0, 1.0), kernel_element(&d, KernelKind::Lambda, c(0.1, 0.2), 0).unwrap());
        let g = complementary_function(&d, &s).unwrap();
        let (coef, e) = &g.terms[0];
        assert_eq!(e.kind, KernelKind::Bergman);
        assert_eq!(*coef, c(2.0, -1.0));
        let back = complementary_function(&d, &g).unwrap();
        assert_eq!(back, s);
    }
}
