use super::harmonic::{HarmonicRep, Potential};
use crate::decompose::{basic_decomposition, decompose_trace, BiRational, Decomposition, CHECK_SAMPLES};
use crate::domain::QuadDomain;
use crate::error::{Error, Result};
use crate::kernels::{kernel_element, KernelKind};
use crate::ratcalc::{circle_point, RationalFn};
use num_complex::Complex64;

pub const TOL_DIRICHLET: f64 = 1e-8;

fn span_reduced_sum(span: &crate::kernels::SpanElement) -> Result<RationalFn> {
    let mut acc = RationalFn::zero();
    for (c, e) in &span.terms {
        acc = acc.add(&e.reduced().scale(*c))?;
    }
    Ok(acc)
}

/// `h = (Szegő part)/S_a` and `H = (conjugated Garabedian part)/L_a`, with
/// all `f'` factors cancelled.
pub fn harmonic_from_decomposition(dom: &QuadDomain, dec: &Decomposition) -> Result<HarmonicRep> {
    let a = dec.a_param;
    let s_a = kernel_element(dom, KernelKind::Szego, a, 0)?;
    let l_a = kernel_element(dom, KernelKind::Garabedian, a, 0)?;
    let h_hat = span_reduced_sum(&dec.szego_terms)?.div(s_a.reduced())?;
    let mut mirrored = RationalFn::zero();
    for (c, e) in &dec.garabedian_terms.terms {
        let s = e.partner(dom)?;
        mirrored = mirrored.add(&s.reduced().scale(c.conj()))?;
    }
    let big_h_hat = mirrored.div(l_a.reduced())?;
    Ok(HarmonicRep {
        h_hat: Potential::Rational(h_hat),
        big_h_hat: Potential::Rational(big_h_hat),
        anchor: Some(a),
        provenance: "dirichlet".into(),
    })
}

/// Harmonic extension of the boundary trace `ρ`.
pub fn dirichlet_solve_trace(dom: &QuadDomain, a_param: Complex64, rho: &RationalFn) -> Result<HarmonicRep> {
    let dec = decompose_trace(dom, a_param, rho)?;
    finish(dom, &dec)
}

/// Harmonic function on the domain with boundary values `R(z, z̄)`.
pub fn dirichlet_solve(dom: &QuadDomain, a_param: Complex64, r: &BiRational) -> Result<HarmonicRep> {
    let dec = basic_decomposition(dom, a_param, r)?;
    finish(dom, &dec)
}

fn finish(dom: &QuadDomain, dec: &Decomposition) -> Result<HarmonicRep> {
    let rep = harmonic_from_decomposition(dom, dec)?;
    let mut residual: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..CHECK_SAMPLES {
        let w = circle_point(k, CHECK_SAMPLES);
        let target = dec.trace.value(w);
        residual = residual.max((rep.eval(w)? - target).norm());
        size = size.max(target.norm());
    }
    let tol = TOL_DIRICHLET * (1.0 + size);
    if !(residual <= tol) {
        return Err(Error::SolverResidual { residual, tol });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::harmonic_eval;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_fixture_value_at_centre() {
        let d = QuadDomain::disc();
        let r = BiRational::new(
            vec![vec![c(0.0, 0.0), c(1.0, 0.0)]],
            vec![vec![c(-2.0, 0.0)], vec![c(1.0, 0.0)]],
        )
        .unwrap();
        let rep = dirichlet_solve(&d, c(0.0, 0.0), &r).unwrap();
        assert!((harmonic_eval(&rep, c(0.0, 0.0)).unwrap() - c(-0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_and_antiholomorphic_data() {
        let d = QuadDomain::disc();
        let rep = dirichlet_solve(&d, c(0.0, 0.0), &BiRational::monomial(c(1.0, 0.0), 1, 1)).unwrap();
        for v in [c(0.0, 0.0), c(0.3, -0.5), c(-0.7, 0.1)] {
            assert!((harmonic_eval(&rep, v).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        }
        let rep = dirichlet_solve(&d, c(0.0, 0.0), &BiRational::monomial(c(1.0, 0.0), 0, 2)).unwrap();
        assert!((harmonic_eval(&rep, c(0.0, 0.5)).unwrap() - c(-0.25, 0.0)).norm() < 1e-13);
    }
}
