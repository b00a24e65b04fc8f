//! Simply connected quadrature domains as rational univalent images of the disc.

use crate::error::{Error, Result};
use crate::io;
use crate::ratcalc::{circle_point, poly_roots, ComplexPoly, RationalFn, Root, Series, TOL_CIRCLE};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::path::Path;

/// Probe points (4 radii × 8 angles) for the argument-principle check.
const WINDING_PROBES: usize = 32;
const WINDING_SAMPLES: usize = 2048;
/// Boundary polygon used for the self-intersection test.
const SIMPLE_SAMPLES: usize = 512;
/// Coefficient tolerance for `q^2 = f'`.
const TOL_WITNESS: f64 = 1e-10;

/// A domain `Ω = f(D)` with `f` rational, analytic and locally univalent on
/// the closed unit disc. An optional witness `q` with `q² = f'` marks a
/// double quadrature domain.
#[derive(Clone, Debug)]
pub struct QuadDomain {
    name: String,
    f: RationalFn,
    fprime: RationalFn,
    sigma: RationalFn,
    witness: Option<Witness>,
    fprime_zeros: Vec<Root>,
    fprime_poles: Vec<Root>,
    sqrt_fprime_at_origin: Complex64,
    tol: f64,
}

#[derive(Clone, Debug)]
struct Witness {
    q: RationalFn,
    q_reflect: RationalFn,
}

/// Geometry of the boundary at the parameter `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryFrame {
    pub theta: f64,
    pub w: Complex64,
    pub z: Complex64,
    /// Unit tangent for the counter-clockwise orientation.
    pub tangent: Complex64,
    /// `|f'(w)|`, the arc-length density `ds/dθ`.
    pub speed: f64,
}

/// One term `coeff · h^(order)(point)` of an area quadrature identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureNode {
    pub point: Complex64,
    pub order: usize,
    pub coeff: Complex64,
}

/// Nodes such that `∫_Ω h dA = Σ coeff · h^(order)(point)` for analytic `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureData {
    pub nodes: Vec<QuadratureNode>,
}

impl QuadratureData {
    /// Right-hand side of the quadrature identity for a polynomial `h`.
    pub fn apply(&self, h: &ComplexPoly) -> Complex64 {
        self.nodes
            .iter()
            .map(|n| {
                let mut d = h.clone();
                for _ in 0..n.order {
                    d = d.derivative();
                }
                n.coeff * d.eval(n.point)
            })
            .sum()
    }
}

impl QuadDomain {
    /// Validate `f` (and `q` when given) and build the domain.
    pub fn new(f: RationalFn, q: Option<RationalFn>) -> Result<Self> {
        Self::named("unnamed", f, q)
    }

    pub fn named(name: &str, f: RationalFn, q: Option<RationalFn>) -> Result<Self> {
        let f = f.reduce()?;
        if f.numer().degree().unwrap_or(0) == 0 && f.denom().degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantMap);
        }
        if let Some(&(p, _)) = f.poles()?.iter().find(|(p, _)| p.norm() <= 1.0 + TOL_CIRCLE) {
            return Err(Error::MapNotAnalytic(p));
        }
        let fprime = f.derivative()?;
        let fprime_zeros = if fprime.numer().degree().unwrap_or(0) == 0 {
            Vec::new()
        } else {
            poly_roots(fprime.numer())?
        };
        if let Some(&(z, _)) = fprime_zeros.iter().find(|(z, _)| z.norm() <= 1.0 + TOL_CIRCLE) {
            return Err(Error::CriticalPoint(z));
        }
        let fprime_poles = fprime.poles()?;
        let sqrt_fprime_at_origin = fprime.value(Complex64::new(0.0, 0.0)).sqrt();
        let sigma = f.reflect();
        let witness = match q {
            Some(q) => {
                let q = q.reduce()?;
                check_witness(&q, &fprime)?;
                let q_reflect = q.reflect();
                Some(Witness { q, q_reflect })
            }
            None => None,
        };
        let dom = QuadDomain {
            name: name.to_string(),
            f,
            fprime,
            sigma,
            witness,
            fprime_zeros,
            fprime_poles,
            sqrt_fprime_at_origin,
            tol: 1e-10,
        };
        dom.check_univalent()?;
        Ok(dom)
    }

    /// The unit disc, `f(w) = w`, with witness `q = 1`.
    pub fn disc() -> Self {
        Self::named("disc", RationalFn::identity(), Some(RationalFn::one())).expect("the unit disc is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn map(&self) -> &RationalFn {
        &self.f
    }

    pub fn map_derivative(&self) -> &RationalFn {
        &self.fprime
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn witness(&self) -> Option<&RationalFn> {
        self.witness.as_ref().map(|w| &w.q)
    }

    pub fn witness_reflect(&self) -> Option<&RationalFn> {
        self.witness.as_ref().map(|w| &w.q_reflect)
    }

    pub fn is_double(&self) -> bool {
        self.witness.is_some()
    }

    /// True when every zero and pole of `f'` has even multiplicity, the
    /// necessary condition for a rational square root of `f'`.
    pub fn double_witness_hint(&self) -> bool {
        self.fprime_zeros.iter().chain(&self.fprime_poles).all(|(_, m)| m % 2 == 0)
    }

    pub fn eval_map(&self, w: Complex64) -> Complex64 {
        self.f.value(w)
    }

    pub fn eval_derivative(&self, w: Complex64) -> Complex64 {
        self.fprime.value(w)
    }

    /// `f'(w)^(1/2)` on the branch that is the principal root at `w = 0`,
    /// continued through the closed disc (where `f'` never vanishes).
    pub fn sqrt_derivative(&self, w: Complex64) -> Complex64 {
        let principal = self.eval_derivative(w).sqrt();
        let mut branch = self.sqrt_fprime_at_origin;
        for &(z, m) in &self.fprime_zeros {
            branch *= (Complex64::new(1.0, 0.0) - w / z).powf(0.5 * m as f64);
        }
        for &(p, m) in &self.fprime_poles {
            branch *= (Complex64::new(1.0, 0.0) - w / p).powf(-0.5 * m as f64);
        }
        if (principal - branch).norm() <= (principal + branch).norm() {
            principal
        } else {
            -principal
        }
    }

    /// Taylor series of `f'(v + t)^alpha` in `t`, on the same branch as
    /// [`sqrt_derivative`](Self::sqrt_derivative) for `alpha = ±1/2`.
    pub(crate) fn derivative_power_series(&self, v: Complex64, alpha: f64, len: usize) -> Series {
        let fp = self.fprime.taylor(v, len);
        let leading = if alpha == alpha.round() {
            self.eval_derivative(v).powi(alpha as i32)
        } else {
            let half = self.sqrt_derivative(v);
            // alpha is an odd multiple of 1/2
            half.powi((2.0 * alpha).round() as i32)
        };
        fp.powf_with_leading(alpha, leading)
    }

    pub fn boundary_frame(&self, theta: f64) -> BoundaryFrame {
        let w = Complex64::from_polar(1.0, theta);
        let fp = self.eval_derivative(w);
        let speed = fp.norm();
        BoundaryFrame {
            theta,
            w,
            z: self.eval_map(w),
            tangent: Complex64::i() * w * fp / speed,
            speed,
        }
    }

    /// `σ = reflect(f)`, the Schwarz function pulled back to the disc.
    pub fn schwarz_pullback(&self) -> &RationalFn {
        &self.sigma
    }

    /// Area quadrature nodes from the residues of `h(f) σ f'` inside the disc.
    pub fn quadrature_data(&self) -> Result<QuadratureData> {
        let g = self.sigma.mul(&self.fprime)?;
        let (_, parts) = g.partial_fractions()?;
        let mut nodes = Vec::new();
        for pp in parts.iter().filter(|pp| pp.pole.norm() < 1.0) {
            let k = pp.order();
            let a = self.eval_map(pp.pole);
            let mut shifted = self.f.taylor(pp.pole, k);
            shifted.0[0] -= a;
            // powers (f(p+t) - a)^m / m!
            let mut power = Series::from_slice(&[Complex64::new(1.0, 0.0)], k);
            let mut factorial = 1.0;
            for m in 0..k {
                if m > 0 {
                    power = power.mul(&shifted);
                    factorial *= m as f64;
                }
                let res: Complex64 = (1..=k).map(|j| pp.coeffs[j - 1] * power.coeff(j - 1)).sum();
                let coeff = res * PI / factorial;
                if coeff.norm() > 1e-14 * (1.0 + res.norm()) {
                    nodes.push(QuadratureNode { point: a, order: m, coeff });
                }
            }
        }
        Ok(QuadratureData { nodes })
    }

    fn newton_preimage(&self, z: Complex64) -> Option<Complex64> {
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        for i in 0..64 {
            for j in 0..32 {
                let v = Complex64::from_polar((j as f64 + 0.5) / 32.0, 2.0 * PI * i as f64 / 64.0);
                let d = (self.eval_map(v) - z).norm();
                if d < best.0 {
                    best = (d, v);
                }
            }
        }
        let mut v = best.1;
        let scale = 1.0 + z.norm();
        for _ in 0..60 {
            let step = (self.eval_map(v) - z) / self.eval_derivative(v);
            v -= step;
            if !v.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + v.norm()) {
                break;
            }
        }
        ((self.eval_map(v) - z).norm() <= 1e-10 * scale).then_some(v)
    }

    /// Disc parameter `v` (|v| < 1) with `f(v) = z`.
    pub fn invert_map(&self, z: Complex64) -> Result<Complex64> {
        match self.newton_preimage(z) {
            Some(v) if v.norm() < 1.0 - 1e-9 => Ok(v),
            _ => Err(Error::PointNotInDomain(z)),
        }
    }

    /// Like [`invert_map`](Self::invert_map) but accepts boundary points.
    pub fn invert_map_closed(&self, z: Complex64) -> Result<Complex64> {
        match self.newton_preimage(z) {
            Some(v) if v.norm() <= 1.0 + 1e-9 => Ok(v),
            _ => Err(Error::PointNotInDomain(z)),
        }
    }

    fn check_univalent(&self) -> Result<()> {
        let boundary: Vec<Complex64> = (0..WINDING_SAMPLES)
            .map(|k| self.eval_map(circle_point(k, WINDING_SAMPLES)))
            .collect();
        let radii = [0.2, 0.45, 0.7, 0.9];
        for k in 0..WINDING_PROBES {
            let v = Complex64::from_polar(radii[k / 8], 2.0 * PI * (k % 8) as f64 / 8.0 + 0.1);
            let a = self.eval_map(v);
            let mut turn = 0.0;
            for i in 0..WINDING_SAMPLES {
                let z0 = boundary[i] - a;
                let z1 = boundary[(i + 1) % WINDING_SAMPLES] - a;
                turn += (z1 / z0).arg();
            }
            let winding = (turn / (2.0 * PI)).round() as i64;
            if winding != 1 {
                return Err(Error::NotUnivalent(format!(
                    "boundary winds {winding} times around f({v})"
                )));
            }
        }
        let poly: Vec<Complex64> = (0..SIMPLE_SAMPLES)
            .map(|k| self.eval_map(circle_point(k, SIMPLE_SAMPLES)))
            .collect();
        let n = poly.len();
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) {
                    return Err(Error::NotUnivalent(format!(
                        "boundary self-intersects near samples {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Read a domain file.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let obj = io::parse_object(text)?;
        let name = match obj.get("name") {
            None => "unnamed".to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::parse("name", None, "expected a string")),
        };
        let numer = io::parse_coeffs(&obj, "map_numer")?
            .ok_or_else(|| Error::parse("map_numer", None, "missing required field"))?;
        let denom = io::parse_coeffs(&obj, "map_denom")?.unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
        let f = RationalFn::new(ComplexPoly::new(numer), ComplexPoly::new(denom))
            .map_err(|e| match e {
                Error::ZeroDivisor => Error::parse("map_denom", None, "denominator is identically zero"),
                other => other,
            })?;
        let q = match io::parse_coeffs(&obj, "double_witness_numer")? {
            None => None,
            Some(qn) => {
                let qd = io::parse_coeffs(&obj, "double_witness_denom")?.unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
                Some(RationalFn::new(ComplexPoly::new(qn), ComplexPoly::new(qd)).map_err(|e| match e {
                    Error::ZeroDivisor => Error::parse("double_witness_denom", None, "denominator is identically zero"),
                    other => other,
                })?)
            }
        };
        Self::named(&name, f, q)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&io::read_file(path)?)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "map_numer": io::coeffs_json(self.f.numer().coeffs()),
            "map_denom": io::coeffs_json(self.f.denom().coeffs()),
        });
        if let Some(q) = self.witness() {
            v["double_witness_numer"] = io::coeffs_json(q.numer().coeffs());
            v["double_witness_denom"] = io::coeffs_json(q.denom().coeffs());
        }
        v
    }
}

fn check_witness(q: &RationalFn, fprime: &RationalFn) -> Result<()> {
    let lhs = &(q.numer() * q.numer()) * fprime.denom();
    let rhs = &(q.denom() * q.denom()) * fprime.numer();
    let diff = (&lhs - &rhs).max_abs();
    let scale = lhs.max_abs().max(rhs.max_abs()).max(f64::MIN_POSITIVE);
    if diff > TOL_WITNESS * scale {
        return Err(Error::InvalidDoubleWitness(diff / scale));
    }
    Ok(())
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
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

    fn double_fixture() -> QuadDomain {
        QuadDomain::new(
            RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.3, 0.03])),
            Some(RationalFn::poly(ComplexPoly::from_real(&[1.0, 0.3]))),
        )
        .unwrap()
    }

    #[test]
    fn valid_fixtures() {
        let d = QuadDomain::disc();
        assert!(d.is_double());
        let a = cardioidish();
        assert!(!a.is_double());
        assert!(!a.double_witness_hint());
        let b = double_fixture();
        assert!(b.is_double());
        assert!(b.double_witness_hint());
    }

    #[test]
    fn rejects_interior_pole() {
        let f = RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(c(0.5, 0.0))).unwrap();
        assert!(matches!(QuadDomain::new(f, None), Err(Error::MapNotAnalytic(_))));
    }

    #[test]
    fn rejects_cusp() {
        // f' = 1 + w vanishes at -1 on the circle
        let f = RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.5]));
        assert!(matches!(QuadDomain::new(f, None), Err(Error::CriticalPoint(_))));
    }

    #[test]
    fn rejects_non_univalent() {
        // f' = 1 + 0.6w^? ... w + 0.9 w^5 / 5 has f' = 1 + 0.9 w^4, zeros |w| = 0.9^-1/4 > 1,
        // yet the map folds: use w^2 + 3w shifted so f' has no zeros in the disc but wraps twice
        let f = RationalFn::poly(ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        assert!(QuadDomain::new(f, None).is_err());
        let g = RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3]));
        assert!(matches!(QuadDomain::new(g, None), Err(Error::NotUnivalent(_) | Error::CriticalPoint(_))));
    }

    #[test]
    fn rejects_bad_witness() {
        let f = RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.3, 0.03]));
        let q = RationalFn::poly(ComplexPoly::from_real(&[1.0, 0.31]));
        assert!(matches!(QuadDomain::new(f, Some(q)), Err(Error::InvalidDoubleWitness(_))));
    }

    #[test]
    fn rejects_constant() {
        assert!(matches!(QuadDomain::new(RationalFn::constant(c(2.0, 0.0)), None), Err(Error::ConstantMap)));
    }

    #[test]
    fn frames() {
        let d = QuadDomain::disc();
        let fr = d.boundary_frame(PI / 2.0);
        assert!((fr.z - c(0.0, 1.0)).norm() < 1e-15);
        assert!((fr.tangent - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((fr.speed - 1.0).abs() < 1e-15);
        let fr = d.boundary_frame(0.0);
        assert!((fr.tangent - c(0.0, 1.0)).norm() < 1e-15);
        let fr = cardioidish().boundary_frame(0.0);
        assert!((fr.z - c(1.4, 0.0)).norm() < 1e-15);
        assert!((fr.tangent - c(0.0, 1.0)).norm() < 1e-15);
        assert!((fr.speed - 1.8).abs() < 1e-15);
    }

    #[test]
    fn schwarz_pullback_examples() {
        let d = QuadDomain::disc();
        assert_eq!(d.schwarz_pullback(), &RationalFn::identity().reflect());
        let a = cardioidish();
        let sigma = a.schwarz_pullback();
        // (w + 0.4) / w^2
        assert_eq!(sigma.denom(), &ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        assert!((sigma.numer().coeff(0) - c(0.4, 0.0)).norm() < 1e-15);
        assert!((sigma.numer().coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        for k in 0..128 {
            let w = circle_point(k, 128);
            assert!((sigma.value(w) - a.eval_map(w).conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn quadrature_nodes_for_fixtures() {
        let q = QuadDomain::disc().quadrature_data().unwrap();
        assert_eq!(q.nodes.len(), 1);
        assert_eq!(q.nodes[0].order, 0);
        assert!((q.nodes[0].coeff - c(PI, 0.0)).norm() < 1e-14);

        let q = cardioidish().quadrature_data().unwrap();
        assert_eq!(q.nodes.len(), 2);
        let n0 = q.nodes.iter().find(|n| n.order == 0).unwrap();
        let n1 = q.nodes.iter().find(|n| n.order == 1).unwrap();
        assert!(n0.point.norm() < 1e-15 && n1.point.norm() < 1e-15);
        assert!((n0.coeff - c(1.32 * PI, 0.0)).norm() < 1e-13);
        assert!((n1.coeff - c(0.4 * PI, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn invert_map_examples() {
        let d = QuadDomain::disc();
        assert!((d.invert_map(c(0.3, 0.1)).unwrap() - c(0.3, 0.1)).norm() < 1e-14);
        let a = cardioidish();
        assert!(matches!(a.invert_map(c(1.4, 0.0)), Err(Error::PointNotInDomain(_))));
        assert!((a.invert_map(c(0.216, 0.0)).unwrap() - c(0.2, 0.0)).norm() < 1e-12);
        assert!(matches!(a.invert_map(c(3.0, 0.0)), Err(Error::PointNotInDomain(_))));
    }

    #[test]
    fn sqrt_branch_is_continuous_and_principal_at_origin() {
        let b = double_fixture();
        // f' = (1 + 0.3 w)^2 so the principal-at-0 branch is exactly 1 + 0.3 w
        for k in 0..64 {
            let w = circle_point(k, 64);
            assert!((b.sqrt_derivative(w) - (c(1.0, 0.0) + w * 0.3)).norm() < 1e-14);
        }
    }

    #[test]
    fn domain_file_roundtrip_and_errors() {
        let b = double_fixture();
        let text = b.to_json().to_string();
        let back = QuadDomain::from_json_str(&text).unwrap();
        assert_eq!(back.map(), b.map());
        assert!(back.is_double());

        let bad = r#"{"name": "x", "map_numer": [[0,0],[1,"a"]]}"#;
        match QuadDomain::from_json_str(bad) {
            Err(Error::Parse { field, index, .. }) => {
                assert_eq!(field, "map_numer");
                assert_eq!(index, Some(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            QuadDomain::from_json_str(r#"{"name": "x"}"#),
            Err(Error::Parse { .. })
        ));
    }
}
