//! Univariate rational functions over the complex numbers.

use super::poly::ComplexPoly;
use super::roots::{poly_roots, Root, TOL_CLUSTER};
use super::series::Series;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Exclusion band around `|w| = 1` for poles that must be split across the circle.
pub const TOL_CIRCLE: f64 = 1e-6;
/// A numerator Taylor coefficient at a pole below this (relative) counts as zero
/// when cancelling common factors.
const TOL_CANCEL: f64 = 1e-9;
/// Cancellation noise trimmed from leading coefficients after add/sub.
const TRIM_REL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `numer / denom` with a monic denominator.
///
/// Values produced by the public constructors and by arithmetic are reduced:
/// numerator and denominator share no root (up to clustering tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    numer: ComplexPoly,
    denom: ComplexPoly,
}

/// `sum_{j=1..k} c_j (w - pole)^(-j)`; `coeffs[j-1]` holds `c_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalPart {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl PrincipalPart {
    pub fn empty(pole: Complex64) -> Self {
        PrincipalPart { pole, coeffs: Vec::new() }
    }

    /// Exact pole order (0 for an empty part).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn residue(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        let inv = (w - self.pole).inv();
        let mut acc = ZERO;
        let mut pw = inv;
        for &c in &self.coeffs {
            acc += c * pw;
            pw *= inv;
        }
        acc
    }

    /// `(numerator, (w - pole)^k)` with the numerator of degree < k.
    pub fn to_fraction(&self) -> (ComplexPoly, ComplexPoly) {
        let k = self.order();
        let lin = ComplexPoly::linear_root(self.pole);
        let mut numer = ComplexPoly::zero();
        for (j, &c) in self.coeffs.iter().enumerate() {
            // c_{j+1} (w-p)^{k-j-1}
            numer = &numer + &lin.pow(k - j - 1).scale(c);
        }
        (numer, lin.pow(k))
    }

    pub fn to_rational(&self) -> RationalFn {
        if self.is_empty() {
            return RationalFn::zero();
        }
        let (n, d) = self.to_fraction();
        RationalFn::from_coprime(n, d)
    }
}

impl RationalFn {
    /// Reduced `numer / denom`.
    pub fn new(numer: ComplexPoly, denom: ComplexPoly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        RationalFn { numer, denom }.reduce()
    }

    /// For operands known to be coprime (no root search performed).
    pub fn from_coprime(numer: ComplexPoly, denom: ComplexPoly) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        RationalFn { numer, denom }.strip_origin().normalized()
    }

    pub fn poly(p: ComplexPoly) -> Self {
        RationalFn { numer: p, denom: ComplexPoly::one() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::poly(ComplexPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::poly(ComplexPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The identity `w`.
    pub fn identity() -> Self {
        Self::poly(ComplexPoly::monomial(ONE, 1))
    }

    pub fn numer(&self) -> &ComplexPoly {
        &self.numer
    }

    pub fn denom(&self) -> &ComplexPoly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.degree() == Some(0)
    }

    fn normalized(mut self) -> Self {
        if self.numer.is_zero() {
            return Self::zero();
        }
        // high-order denominator terms this small only encode poles pushed
        // to infinity by rounding (typically reflected near-origin poles)
        self.denom = self.denom.trim_relative(TRIM_REL);
        let lead = self.denom.leading();
        if lead != ONE {
            let s = lead.inv();
            self.numer = self.numer.scale(s);
            self.denom = self.denom.scale(s);
        }
        self
    }

    fn strip_origin(self) -> Self {
        let k = self.numer.low_order_zeros().min(self.denom.low_order_zeros());
        if k == 0 {
            return self;
        }
        RationalFn {
            numer: self.numer.shift_down(k),
            denom: self.denom.shift_down(k),
        }
    }

    /// Cancel common roots detected by evaluating the numerator's Taylor
    /// coefficients at each root of the denominator.
    pub fn reduce(self) -> Result<Self> {
        if self.numer.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = self.strip_origin();
        if out.denom.degree().unwrap_or(0) == 0 || out.numer.degree().unwrap_or(0) == 0 {
            return Ok(out.normalized());
        }
        for (r, m) in poly_roots(&out.denom)? {
            let shifted = out.numer.taylor_shift(r);
            let abs = ComplexPoly::new(out.numer.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect());
            let scale = abs.taylor_shift(Complex64::new(r.norm(), 0.0));
            let common = (0..m)
                .take_while(|&j| shifted.coeff(j).norm() <= TOL_CANCEL * scale.coeff(j).re.max(f64::MIN_POSITIVE))
                .count();
            if common > 0 {
                out.numer = out.numer.deflate(r, common);
                out.denom = out.denom.deflate(r, common);
                if out.numer.is_zero() {
                    return Ok(Self::zero());
                }
            }
        }
        Ok(out.normalized())
    }

    /// Value at `w`; fails when `w` is (numerically) a pole.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let d = self.denom.eval(w);
        if d.norm() <= 1e-15 * self.denom.eval_scale(w) {
            return Err(Error::EvaluationAtPole(w));
        }
        Ok(self.numer.eval(w) / d)
    }

    /// Value at `w` without the pole check (may be infinite).
    pub fn value(&self, w: Complex64) -> Complex64 {
        self.numer.eval(w) / self.denom.eval(w)
    }

    pub fn add(&self, g: &Self) -> Result<Self> {
        if self.denom == g.denom {
            let numer = (&self.numer + &g.numer).trim_relative(TRIM_REL);
            return RationalFn { numer, denom: self.denom.clone() }.reduce();
        }
        let numer = (&(&self.numer * &g.denom) + &(&g.numer * &self.denom)).trim_relative(TRIM_REL);
        Self::new(numer, &self.denom * &g.denom)
    }

    pub fn sub(&self, g: &Self) -> Result<Self> {
        self.add(&g.scale(-ONE))
    }

    pub fn mul(&self, g: &Self) -> Result<Self> {
        Self::new(&self.numer * &g.numer, &self.denom * &g.denom)
    }

    pub fn div(&self, g: &Self) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Self::new(&self.numer * &g.denom, &self.denom * &g.numer)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == ZERO {
            return Self::zero();
        }
        RationalFn { numer: self.numer.scale(s), denom: self.denom.clone() }
    }

    /// Multiply by a polynomial known to share no root with the denominator.
    pub fn mul_poly_coprime(&self, p: &ComplexPoly) -> Self {
        RationalFn { numer: &self.numer * p, denom: self.denom.clone() }.normalized()
    }

    /// `self(g(w))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let m = self.numer.degree().unwrap_or(0).max(self.denom.degree().unwrap_or(0));
        let homog = |p: &ComplexPoly| {
            let mut acc = ComplexPoly::zero();
            for (i, &c) in p.coeffs().iter().enumerate() {
                let term = &g.numer.pow(i) * &g.denom.pow(m - i);
                acc = &acc + &term.scale(c);
            }
            acc
        };
        Self::new(homog(&self.numer), homog(&self.denom))
    }

    /// Formal derivative `(N'D - ND') / D^2`.
    pub fn derivative(&self) -> Result<Self> {
        let n = &(&self.numer.derivative() * &self.denom) - &(&self.numer * &self.denom.derivative());
        Self::new(n.trim_relative(TRIM_REL), &self.denom * &self.denom)
    }

    /// Circle reflection `w -> conj(f(1 / conj(w)))`, which agrees with
    /// `conj(f(w))` on the unit circle.
    pub fn reflect(&self) -> Self {
        let n = self.numer.degree().unwrap_or(0).max(self.denom.degree().unwrap_or(0));
        RationalFn {
            numer: self.numer.reflect_with_degree(n),
            denom: self.denom.reflect_with_degree(n),
        }
        .strip_origin()
        .normalized()
    }

    /// Poles with multiplicities.
    pub fn poles(&self) -> Result<Vec<Root>> {
        if self.denom.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        poly_roots(&self.denom)
    }

    /// Taylor coefficients of `f(c + t)` up to `t^(len-1)`; `c` must not be a pole.
    pub fn taylor(&self, c: Complex64, len: usize) -> Series {
        let n = Series::from_slice(self.numer.taylor_shift(c).coeffs(), len);
        let d = Series::from_slice(self.denom.taylor_shift(c).coeffs(), len);
        n.div(&d)
    }

    /// Polynomial part and the principal part at every pole.
    pub fn partial_fractions(&self) -> Result<(ComplexPoly, Vec<PrincipalPart>)> {
        let (q, _) = self.numer.div_rem(&self.denom);
        let poles = self.poles()?;
        let parts = poles
            .iter()
            .enumerate()
            .map(|(i, &(p, k))| self.principal_part_from_roots(&poles, i, p, k))
            .collect();
        Ok((q, parts))
    }

    fn principal_part_from_roots(&self, poles: &[Root], idx: usize, p: Complex64, k: usize) -> PrincipalPart {
        let mut rest = Series::from_slice(&[self.denom.leading()], k);
        for (j, &(r, m)) in poles.iter().enumerate() {
            if j == idx {
                continue;
            }
            let lin = Series::from_slice(&[p - r, ONE], k);
            for _ in 0..m {
                rest = rest.mul(&lin);
            }
        }
        let numer = Series::from_slice(self.numer.taylor_shift(p).coeffs(), k);
        let local = numer.div(&rest);
        // c_j = [t^{k-j}] local
        let coeffs = (1..=k).map(|j| local.coeff(k - j)).collect();
        PrincipalPart { pole: p, coeffs }
    }

    /// Principal part at the computed pole nearest `p`; empty if `p` is not a pole.
    pub fn principal_part_at(&self, p: Complex64) -> Result<PrincipalPart> {
        let poles = self.poles()?;
        let radius = 1e-6 * (1.0 + p.norm());
        let near: Vec<usize> = (0..poles.len()).filter(|&i| (poles[i].0 - p).norm() <= radius).collect();
        match near.as_slice() {
            [] => Ok(PrincipalPart::empty(p)),
            [i] => Ok(self.principal_part_from_roots(&poles, *i, poles[*i].0, poles[*i].1)),
            _ => {
                let tight = near
                    .iter()
                    .any(|&i| near.iter().any(|&j| j != i && (poles[i].0 - poles[j].0).norm() <= TOL_CLUSTER.max(radius)));
                debug_assert!(tight);
                Err(Error::AmbiguousPoleCluster(p))
            }
        }
    }

    /// Split `f = inner + outer` across the unit circle: `inner` carries the
    /// polynomial part and the poles outside the closed disc, `outer` the poles
    /// inside the open disc and vanishes at infinity.
    pub fn circle_split(&self) -> Result<(RationalFn, RationalFn)> {
        let (q, parts) = self.partial_fractions()?;
        if let Some(pp) = parts.iter().find(|pp| (pp.pole.norm() - 1.0).abs() <= TOL_CIRCLE) {
            return Err(Error::BoundaryPole(pp.pole));
        }
        let (ins, outs): (Vec<_>, Vec<_>) = parts.into_iter().partition(|pp| pp.pole.norm() > 1.0);
        let inner = sum_principal_parts(&q, &ins);
        let outer = sum_principal_parts(&ComplexPoly::zero(), &outs);
        Ok((inner, outer))
    }
}

/// `q + sum of principal parts` over distinct poles, as one reduced fraction.
pub fn sum_principal_parts(q: &ComplexPoly, parts: &[PrincipalPart]) -> RationalFn {
    let parts: Vec<&PrincipalPart> = parts.iter().filter(|p| !p.is_empty()).collect();
    let fracs: Vec<(ComplexPoly, ComplexPoly)> = parts.iter().map(|p| p.to_fraction()).collect();
    let mut denom = ComplexPoly::one();
    for (_, d) in &fracs {
        denom = &denom * d;
    }
    let mut numer = q * &denom;
    for (i, (n, _)) in fracs.iter().enumerate() {
        let mut term = n.clone();
        for (j, (_, d)) in fracs.iter().enumerate() {
            if i != j {
                term = &term * d;
            }
        }
        numer = &numer + &term;
    }
    RationalFn::from_coprime(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w() -> RationalFn {
        RationalFn::identity()
    }

    fn recip_lin(a: Complex64) -> RationalFn {
        RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(a)).unwrap()
    }

    #[test]
    fn derivative_of_reciprocal() {
        let f = recip_lin(c(0.0, 0.0));
        let d = f.derivative().unwrap();
        // -1/w^2
        assert_eq!(d.denom(), &ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        assert!((d.numer().coeff(0) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(d.numer().degree(), Some(0));
    }

    #[test]
    fn compose_geometric_with_square() {
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_real(&[1.0, -1.0])).unwrap();
        let g = RationalFn::poly(ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        let h = f.compose(&g).unwrap();
        let expect = RationalFn::new(ComplexPoly::one(), ComplexPoly::from_real(&[1.0, 0.0, -1.0])).unwrap();
        assert_eq!(h, expect);
    }

    #[test]
    fn add_by_cross_multiplication() {
        // oracle: 1/(w-2) + 1/w = (w + (w-2)) / (w(w-2)) = (2w-2)/(w^2-2w)
        let s = recip_lin(c(2.0, 0.0)).add(&recip_lin(c(0.0, 0.0))).unwrap();
        assert_eq!(s.numer(), &ComplexPoly::from_real(&[-2.0, 2.0]));
        assert_eq!(s.denom(), &ComplexPoly::from_real(&[0.0, -2.0, 1.0]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(w().div(&RationalFn::zero()), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let f = RationalFn::new(
            ComplexPoly::from_roots(&[(c(0.5, 0.5), 2), (c(3.0, 0.0), 1)]),
            ComplexPoly::from_roots(&[(c(0.5, 0.5), 1), (c(-2.0, 1.0), 1)]),
        )
        .unwrap();
        assert_eq!(f.denom().degree(), Some(1));
        assert!((f.denom().coeff(0) - c(2.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn principal_part_double_pole() {
        // oracle: 1/(w+2) = 1/2.5 - (w-0.5)/6.25 + ... at 0.5, so the part is
        // 0.4 (w-0.5)^-2 - 0.16 (w-0.5)^-1
        let f = RationalFn::new(
            ComplexPoly::one(),
            ComplexPoly::from_roots(&[(c(0.5, 0.0), 2), (c(-2.0, 0.0), 1)]),
        )
        .unwrap();
        let pp = f.principal_part_at(c(0.5, 0.0)).unwrap();
        assert_eq!(pp.order(), 2);
        assert!((pp.coeffs[1] - c(0.4, 0.0)).norm() < 1e-12);
        assert!((pp.coeffs[0] - c(-0.16, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn principal_part_simple_and_empty() {
        let pp = recip_lin(c(0.0, 0.0)).principal_part_at(c(0.0, 0.0)).unwrap();
        assert_eq!(pp.coeffs, vec![c(1.0, 0.0)]);
        let sq = RationalFn::poly(ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        assert!(sq.principal_part_at(c(1.0, 0.0)).unwrap().is_empty());
    }

    #[test]
    fn split_examples() {
        let f = recip_lin(c(2.0, 0.0)).add(&recip_lin(c(0.0, 0.0)).scale(c(3.0, 0.0))).unwrap();
        let (inner, outer) = f.circle_split().unwrap();
        assert_eq!(inner, recip_lin(c(2.0, 0.0)));
        assert_eq!(outer, recip_lin(c(0.0, 0.0)).scale(c(3.0, 0.0)));

        let p = RationalFn::poly(ComplexPoly::from_real(&[5.0, 0.0, 1.0]));
        let (inner, outer) = p.circle_split().unwrap();
        assert_eq!(inner, p);
        assert!(outer.is_zero());
    }

    #[test]
    fn split_recombines_on_the_circle() {
        let f = RationalFn::new(ComplexPoly::from_real(&[1.0, 0.0, 1.0]), ComplexPoly::from_real(&[0.0, -3.0, 1.0])).unwrap();
        let (inner, outer) = f.circle_split().unwrap();
        for k in 0..64 {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0);
            let lhs = inner.value(w) + outer.value(w);
            assert!((lhs - f.value(w)).norm() < 1e-12);
        }
        assert!(outer.numer().degree().unwrap() < outer.denom().degree().unwrap());
    }

    #[test]
    fn split_rejects_boundary_pole() {
        let f = recip_lin(c(0.0, 1.0));
        assert!(matches!(f.circle_split(), Err(Error::BoundaryPole(_))));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(w().reflect(), recip_lin(c(0.0, 0.0)));
        assert_eq!(RationalFn::constant(c(2.0, 3.0)).reflect(), RationalFn::constant(c(2.0, -3.0)));
        let f = RationalFn::new(ComplexPoly::constant(c(0.0, 1.0)), ComplexPoly::linear_root(c(0.0, 2.0))).unwrap();
        let g = f.reflect();
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0);
            assert!((g.value(z) - f.value(z).conj()).norm() < 1e-14);
        }
    }
}
