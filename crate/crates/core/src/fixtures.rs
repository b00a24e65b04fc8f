//! Reference domains and seeded random data used by `verify` and the test suites.

use crate::decompose::{pullback_boundary_data, BiRational};
use crate::domain::QuadDomain;
use crate::ratcalc::{circle_point, ComplexPoly, RationalFn};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn disc() -> QuadDomain {
    QuadDomain::disc()
}

/// `f(w) = w + 0.4 w²`.
pub fn limacon() -> QuadDomain {
    QuadDomain::named("limacon", RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.4])), None)
        .expect("valid fixture")
}

/// `f(w) = w + 0.3 w² + 0.03 w³` with witness `q = 1 + 0.3 w`.
pub fn double_cubic() -> QuadDomain {
    QuadDomain::named(
        "double-cubic",
        RationalFn::poly(ComplexPoly::from_real(&[0.0, 1.0, 0.3, 0.03])),
        Some(RationalFn::poly(ComplexPoly::from_real(&[1.0, 0.3]))),
    )
    .expect("valid fixture")
}

pub fn all_domains() -> Vec<QuadDomain> {
    vec![disc(), limacon(), double_cubic()]
}

fn complex_in_disc(rng: &mut FixtureRng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn sup_map(dom: &QuadDomain) -> f64 {
    (0..256).map(|k| dom.eval_map(circle_point(k, 256)).norm()).fold(0.0, f64::max)
}

/// Random `R(z, z̄)`: numerator of bidegree ≤ 3 with coefficients of modulus
/// ≤ 2, denominator a product of up to two factors `z - c` (with `c` outside
/// the domain) or `z̄ - f(v)` (with `|v| ≤ 0.6`). Candidates whose trace has
/// a pole within 0.05 of the unit circle are redrawn.
pub fn random_birational(dom: &QuadDomain, rng: &mut FixtureRng) -> BiRational {
    random_birational_with_margin(dom, rng, 0.05)
}

/// As [`random_birational`] with a caller-chosen pole clearance `margin`.
pub fn random_birational_with_margin(dom: &QuadDomain, rng: &mut FixtureRng, margin: f64) -> BiRational {
    let zero = Complex64::new(0.0, 0.0);
    let reach = sup_map(dom) + 0.5;
    loop {
        let mut numer = vec![vec![zero; 3]; 3];
        for (i, row) in numer.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if i + j <= 3 && rng.gen_bool(0.6) {
                    *x = complex_in_disc(rng, 2.0);
                }
            }
        }
        let mut denom = vec![vec![Complex64::new(1.0, 0.0)]];
        for _ in 0..rng.gen_range(0..=2) {
            let factor = if rng.gen_bool(0.5) {
                let c = Complex64::from_polar(rng.gen_range(reach..reach + 1.5), rng.gen_range(0.0..std::f64::consts::TAU));
                vec![vec![-c], vec![Complex64::new(1.0, 0.0)]]
            } else {
                let c = dom.eval_map(complex_in_disc(rng, 0.6));
                vec![vec![-c, Complex64::new(1.0, 0.0)]]
            };
            denom = mul2(&denom, &factor);
        }
        let r = BiRational::new(numer, denom).expect("nonzero denominator");
        if let Ok(rho) = pullback_boundary_data(dom, &r) {
            let clear = rho
                .poles()
                .map(|ps| ps.iter().all(|(p, _)| (p.norm() - 1.0).abs() > margin))
                .unwrap_or(false);
            if clear && !rho.is_zero() {
                return r;
            }
        }
    }
}

fn mul2(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let rows = a.len() + b.len() - 1;
    let cols = a.iter().map(Vec::len).max().unwrap_or(1) + b.iter().map(Vec::len).max().unwrap_or(1) - 1;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); cols]; rows];
    for (i, ra) in a.iter().enumerate() {
        for (j, &x) in ra.iter().enumerate() {
            for (k, rb) in b.iter().enumerate() {
                for (l, &y) in rb.iter().enumerate() {
                    out[i + k][j + l] += x * y;
                }
            }
        }
    }
    out
}

/// Random rational function analytic on the closed disc: a quadratic over
/// a linear factor with its root at modulus in `[1.5, 3]`.
pub fn random_analytic(rng: &mut FixtureRng) -> RationalFn {
    let numer = ComplexPoly::new((0..3).map(|_| complex_in_disc(rng, 2.0)).collect());
    let c = Complex64::from_polar(rng.gen_range(1.5..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
    RationalFn::new(numer, ComplexPoly::linear_root(c)).expect("nonzero denominator")
}

/// Rational trace of `κ₁T + conj(κ₂T)` on a double quadrature domain.
pub fn synthesize_trace(dom: &QuadDomain, kappa1: &RationalFn, kappa2: &RationalFn) -> RationalFn {
    let q = dom.witness().expect("double quadrature domain");
    let qr = dom.witness_reflect().expect("double quadrature domain");
    let i = Complex64::i();
    let w = RationalFn::identity();
    // T = i w q / q*,  conj(T) = -i q* / (w q) on the circle
    let a = kappa1.mul(&w).and_then(|x| x.mul(q)).and_then(|x| x.div(qr)).expect("finite").scale(i);
    let b = kappa2
        .reflect()
        .mul(qr)
        .and_then(|x| x.div(&w.mul(q)?))
        .expect("finite")
        .scale(-i);
    a.add(&b).expect("finite")
}

/// Random `G′` where `G` is rational with residue-free poles inside the disc,
/// poles outside, and a polynomial part: the pullback of an `R′(Ω)` element.
pub fn random_derivative(rng: &mut FixtureRng) -> RationalFn {
    let mut g = RationalFn::poly(ComplexPoly::new((0..4).map(|_| complex_in_disc(rng, 2.0)).collect()));
    for _ in 0..rng.gen_range(1..=2) {
        let p = complex_in_disc(rng, 0.6);
        let k = rng.gen_range(1..=2);
        let term = RationalFn::new(ComplexPoly::constant(complex_in_disc(rng, 2.0)), ComplexPoly::from_roots(&[(p, k)])).expect("finite");
        g = g.add(&term).expect("finite");
    }
    let c = Complex64::from_polar(rng.gen_range(1.5..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let ext = RationalFn::new(ComplexPoly::constant(complex_in_disc(rng, 2.0)), ComplexPoly::linear_root(c)).expect("finite");
    g.add(&ext).and_then(|x| x.derivative()).expect("finite")
}
