use crate::error::{Error, Result};
use crate::ratcalc::{antiderivative_eval, ComplexPoly, PrincipalPart, RationalFn};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

/// An analytic function on the disc given either in closed form or as the
/// path integral `∫_0^v derivative` (used when the derivative carries
/// logarithmic terms from exterior residues).
pub enum Potential {
    Rational(RationalFn),
    Integral {
        derivative: RationalFn,
        cache: RwLock<HashMap<(u64, u64), Complex64>>,
    },
}

impl Potential {
    pub fn integral(derivative: RationalFn) -> Self {
        Potential::Integral {
            derivative,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Closed-form antiderivative vanishing at 0 when every residue is zero,
    /// otherwise a cached path integral.
    pub fn from_derivative(derivative: RationalFn) -> Result<Self> {
        let (q, parts) = derivative.partial_fractions()?;
        let scale = parts
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .map(|c| c.norm())
            .fold(q.max_abs(), f64::max);
        for pp in &parts {
            if pp.pole.norm() < 1.0 && pp.residue().norm() > 1e-9 * scale.max(1.0) {
                return Err(Error::NotInDtnRange(format!(
                    "derivative has residue {} at interior pole {}",
                    pp.residue(),
                    pp.pole
                )));
            }
        }
        if parts.iter().all(|pp| pp.residue().norm() <= 1e-12 * scale.max(1.0)) {
            return Ok(Potential::Rational(closed_antiderivative(&q, &parts)));
        }
        Ok(Self::integral(derivative))
    }

    pub fn value(&self, v: Complex64) -> Result<Complex64> {
        match self {
            Potential::Rational(r) => r.eval(v).map_err(|_| Error::InvalidRepresentation(format!("pole of the representation at {v}"))),
            Potential::Integral { derivative, cache } => {
                let key = (v.re.to_bits(), v.im.to_bits());
                if let Some(x) = cache.read().expect("cache lock").get(&key) {
                    return Ok(*x);
                }
                let x = antiderivative_eval(derivative, v, Complex64::new(0.0, 0.0))?;
                cache.write().expect("cache lock").insert(key, x);
                Ok(x)
            }
        }
    }

    pub fn derivative(&self) -> Result<RationalFn> {
        match self {
            Potential::Rational(r) => r.derivative(),
            Potential::Integral { derivative, .. } => Ok(derivative.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match self {
            Potential::Rational(r) => Some(r),
            Potential::Integral { .. } => None,
        }
    }
}

fn closed_antiderivative(q: &ComplexPoly, parts: &[PrincipalPart]) -> RationalFn {
    let mut poly = vec![Complex64::new(0.0, 0.0)];
    poly.extend(q.coeffs().iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
    let mut out = RationalFn::poly(ComplexPoly::new(poly));
    for pp in parts {
        // c (w-p)^{-j}  ->  c (w-p)^{1-j} / (1-j)
        let coeffs: Vec<Complex64> = (1..pp.order())
            .map(|j| pp.coeffs[j] / (-(j as f64)))
            .collect();
        let anti = PrincipalPart { pole: pp.pole, coeffs }.to_rational();
        let at0 = anti.value(Complex64::new(0.0, 0.0));
        out = out
            .add(&anti)
            .and_then(|r| r.sub(&RationalFn::constant(at0)))
            .expect("sum of principal parts is finite");
    }
    out
}

impl Clone for Potential {
    fn clone(&self) -> Self {
        match self {
            Potential::Rational(r) => Potential::Rational(r.clone()),
            Potential::Integral { derivative, .. } => Self::integral(derivative.clone()),
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Rational(r) => f.debug_tuple("Rational").field(r).finish(),
            Potential::Integral { derivative, .. } => f.debug_struct("Integral").field("derivative", derivative).finish(),
        }
    }
}

/// `u = h + conj(H)` with `h∘f` and `H∘f` held in the disc variable.
#[derive(Clone, Debug)]
pub struct HarmonicRep {
    pub h_hat: Potential,
    pub big_h_hat: Potential,
    pub anchor: Option<Complex64>,
    pub provenance: String,
}

impl HarmonicRep {
    pub fn constant(c: Complex64) -> Self {
        HarmonicRep {
            h_hat: Potential::Rational(RationalFn::constant(c)),
            big_h_hat: Potential::Rational(RationalFn::zero()),
            anchor: None,
            provenance: "constant".into(),
        }
    }

    /// `u(f(v))`.
    pub fn eval(&self, v: Complex64) -> Result<Complex64> {
        Ok(self.h_hat.value(v)? + self.big_h_hat.value(v)?.conj())
    }
}

/// `h∘f(v) + conj(H∘f(v))` for `|v| ≤ 1`.
pub fn harmonic_eval(rep: &HarmonicRep, v: Complex64) -> Result<Complex64> {
    if v.norm() > 1.0 + 1e-12 {
        return Err(Error::ParameterOutsideDisc(v));
    }
    rep.eval(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_when_residue_free() {
        // d/dw [w^2 + 1/(w-2)^2] = 2w - 2/(w-2)^3
        let p = ComplexPoly::from_roots(&[(c(2.0, 0.0), 3)]);
        let d = RationalFn::poly(ComplexPoly::from_real(&[0.0, 2.0]))
            .add(&RationalFn::new(ComplexPoly::from_real(&[-2.0]), p).unwrap())
            .unwrap();
        let pot = Potential::from_derivative(d).unwrap();
        assert!(pot.as_rational().is_some());
        let w = c(0.3, 0.4);
        let expect = w * w + (w - 2.0).powi(-2) - 0.25;
        assert!((pot.value(w).unwrap() - expect).norm() < 1e-13);
    }

    #[test]
    fn logarithm_by_integral() {
        let d = RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(c(2.0, 0.0))).unwrap();
        let pot = Potential::from_derivative(d).unwrap();
        assert!(pot.as_rational().is_none());
        let w = c(0.0, 0.5);
        assert!((pot.value(w).unwrap() - c(1.0, -0.25).ln()).norm() < 1e-13);
        // cached second read
        assert!((pot.value(w).unwrap() - c(1.0, -0.25).ln()).norm() < 1e-13);
    }
}
