//! Acceptance checks: each closed-form construction against its oracle, on
//! the reference domains and seeded random data.

use crate::decompose::{basic_decomposition, szego_project_direct, BiRational};
use crate::domain::QuadDomain;
use crate::error::Result;
use crate::fixtures::{self, FixtureRng};
use crate::kernels::{identity_residual, KernelIdentity, KernelKind};
use crate::oracle::{
    area_integral, boundary_samples, fd_laplacian, fd_normal, hardy_project, poisson_disc, rational_fit_residual,
};
use crate::ratcalc::{circle_point, ComplexPoly, RationalFn};
use crate::solvers::{
    bergman_decompose, dirichlet_solve, dtn_inverse, dtn_map, dtn_of, harmonic_eval, neumann_solve, tangential_split, HarmonicRep,
};
use crate::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Runs the command-line Neumann solver and returns its exit code.
pub type CliRunner = dyn Fn(&QuadDomain, &RationalFn) -> Option<i32>;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2}. {}: {}", self.id, self.name, self.detail)
    }
}

/// Largest metric seen, with a description of where it occurred.
#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
    failures: Vec<String>,
}

impl Worst {
    fn see(&mut self, value: f64, at: impl FnOnce() -> String) {
        if !(value <= self.value) {
            self.value = value;
            self.at = at();
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn finish(self, id: usize, name: &'static str, tol: f64, label: &str) -> Criterion {
        let passed = self.failures.is_empty() && self.value <= tol;
        let mut detail = format!("{label} {:.3e} (tol {tol:.0e})", self.value);
        if !self.at.is_empty() {
            detail.push_str(&format!(" at {}", self.at));
        }
        if let Some(first) = self.failures.first() {
            detail.push_str(&format!("; {} failure(s), first: {first}", self.failures.len()));
        }
        Criterion { id, name, passed, detail }
    }
}

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn interior_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(0.1 + 0.75 * ((k * 7) % n) as f64 / n as f64, 2.0 * PI * k as f64 / n as f64 + 0.2))
        .collect()
}

fn sup_on_circle(n: usize, g: impl Fn(Complex64) -> Complex64) -> f64 {
    (0..n).map(|k| g(circle_point(k, n)).norm()).fold(0.0, f64::max)
}

/// Richardson extrapolation of a second-order difference quotient taken at
/// steps `h` and `h/2`.
fn richardson(at: impl Fn(f64) -> Result<Complex64>, h: f64) -> Result<Complex64> {
    Ok((at(h / 2.0)? * 4.0 - at(h)?) / 3.0)
}

/// `u(z)` for a physical point `z` in the closed domain.
fn physical(dom: &QuadDomain, rep: &HarmonicRep, z: Complex64) -> Result<Complex64> {
    let v = dom.invert_map_closed(z)?;
    harmonic_eval(rep, if v.norm() > 1.0 { v / v.norm() } else { v })
}

pub fn kernel_identities() -> Criterion {
    let mut worst = Worst::default();
    let mut disc_worst = Worst::default();
    let mut rng = fixtures::rng(11);
    for dom in fixtures::all_domains() {
        let mut params = vec![ORIGIN, c(0.3, 0.2)];
        params.extend((0..2).map(|_| {
            use rand::Rng;
            Complex64::from_polar(0.6 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
        }));
        for which in [KernelIdentity::SL, KernelIdentity::SL2, KernelIdentity::BL, KernelIdentity::BL2] {
            for m in 0..=2 {
                for &v in &params {
                    match identity_residual(&dom, which, v, m, 256) {
                        Ok(r) => {
                            worst.see(r, || format!("{} {which:?} m={m} v={v}", dom.name()));
                            if dom.name() == "disc" && m == 0 {
                                disc_worst.see(r, || format!("disc {which:?} v={v}"));
                            }
                        }
                        Err(e) => worst.fail(format!("{} {which:?}: {e}", dom.name())),
                    }
                }
            }
        }
    }
    let mut out = worst.finish(1, "kernel identities SL/SL2/BL/BL2", 1e-8, "max residual");
    if disc_worst.value > 1e-12 {
        out.passed = false;
    }
    out.detail.push_str(&format!("; disc m=0 max {:.3e} (tol 1e-12)", disc_worst.value));
    out
}

/// `∮ g conj(h) ds` by the trapezoid rule on the boundary.
fn boundary_pairing(dom: &QuadDomain, g: impl Fn(Complex64) -> Result<Complex64>, h: impl Fn(Complex64) -> Complex64, n: usize) -> Result<Complex64> {
    let mut acc = ORIGIN;
    for k in 0..n {
        let w = circle_point(k, n);
        acc += g(w)? * h(dom.eval_map(w)).conj() * dom.eval_derivative(w).norm();
    }
    Ok(acc * (2.0 * PI / n as f64))
}

pub fn basic_decomposition_check() -> Criterion {
    let mut worst = Worst::default();
    let mut orth = Worst::default();
    for (di, dom) in fixtures::all_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(100 + di as u64);
        for t in 0..10 {
            let data = fixtures::random_birational(&dom, &mut rng);
            let sup = sup_on_circle(256, |w| data.eval_boundary(dom.eval_map(w)));
            match basic_decomposition(&dom, ORIGIN, &data) {
                Ok(dec) => {
                    worst.see(dec.residual / (1.0 + sup), || format!("{} fixture {t}", dom.name()));
                    let gsize = sup_on_circle(256, |w| dec.garabedian_terms.eval(&dom, w).unwrap_or_default());
                    for k in 0..3 {
                        let p = boundary_pairing(&dom, |w| dec.garabedian_terms.eval(&dom, w), |z| z.powi(k), 1024);
                        match p {
                            Ok(x) => orth.see(x.norm() / (1.0 + gsize), || format!("{} fixture {t} z^{k}", dom.name())),
                            Err(e) => orth.fail(e.to_string()),
                        }
                    }
                }
                Err(e) => worst.fail(format!("{} fixture {t}: {e}", dom.name())),
            }
        }
    }
    let mut out = worst.finish(2, "basic decomposition", 1e-8, "max residual/(1+sup|R|)");
    let o = orth.finish(2, "", 1e-8, "orthogonality");
    out.passed &= o.passed;
    out.detail.push_str(&format!("; Garabedian ⊥ {{1,z,z²}} {}", o.detail));
    out
}

fn disc_fixture_s_over_z_minus_2() -> BiRational {
    BiRational::new(vec![vec![ORIGIN, c(1.0, 0.0)]], vec![vec![c(-2.0, 0.0)], vec![c(1.0, 0.0)]]).expect("valid")
}

pub fn dirichlet_check() -> Criterion {
    let mut worst = Worst::default();
    let mut lap = Worst::default();
    for (di, dom) in fixtures::all_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(200 + di as u64);
        for t in 0..10 {
            let data = fixtures::random_birational(&dom, &mut rng);
            let scale = sup_on_circle(256, |w| data.eval_boundary(dom.eval_map(w))).max(1.0);
            let rep = match dirichlet_solve(&dom, ORIGIN, &data) {
                Ok(r) => r,
                Err(e) => {
                    worst.fail(format!("{} fixture {t}: {e}", dom.name()));
                    continue;
                }
            };
            let samples = boundary_samples(&dom, &data, 8192).expect("power of two");
            for v in interior_points(20) {
                match harmonic_eval(&rep, v) {
                    Ok(u) => worst.see((u - poisson_disc(&samples, v)).norm() / scale, || format!("{} fixture {t} v={v:.3}", dom.name())),
                    Err(e) => worst.fail(e.to_string()),
                }
            }
            for v in interior_points(10) {
                let z = dom.eval_map(v * 0.9);
                let u = |z: Complex64| physical(&dom, &rep, z);
                match richardson(|h| fd_laplacian(&u, z, h), 2e-3) {
                    Ok(l) => lap.see(l.norm() / scale, || format!("{} fixture {t}", dom.name())),
                    Err(e) => lap.fail(e.to_string()),
                }
            }
        }
    }
    let d = fixtures::disc();
    let mut fixture_ok = false;
    let mut u0 = ORIGIN;
    if let Ok(rep) = dirichlet_solve(&d, ORIGIN, &disc_fixture_s_over_z_minus_2()) {
        if let Ok(x) = harmonic_eval(&rep, ORIGIN) {
            u0 = x;
            fixture_ok = (x - c(-0.25, 0.0)).norm() <= 1e-12;
        }
    }
    let mut out = worst.finish(3, "Dirichlet vs Poisson oracle", 1e-8, "max |u - poisson|/max(1,sup|R|)");
    let l = lap.finish(3, "", 1e-6, "FD Laplacian");
    out.passed &= l.passed && fixture_ok;
    out.detail.push_str(&format!("; {}; disc z̄/(z-2): u(0) = {:.15}", l.detail, u0.re));
    out
}

pub fn szego_projection_check() -> Criterion {
    let d = fixtures::disc();
    let one = c(1.0, 0.0);
    let mut data = vec![
        BiRational::monomial(one, 0, 1),
        BiRational::polynomial(vec![vec![ORIGIN, one], vec![ORIGIN], vec![one]]),
    ];
    let mut rng = fixtures::rng(300);
    data.extend((0..8).map(|_| fixtures::random_birational(&d, &mut rng)));
    let mut worst = Worst::default();
    for (t, r) in data.iter().enumerate() {
        let span = match szego_project_direct(&d, ORIGIN, r) {
            Ok(s) => s,
            Err(e) => {
                worst.fail(format!("fixture {t}: {e}"));
                continue;
            }
        };
        let n = 4096;
        let samples = boundary_samples(&d, r, n).expect("power of two");
        let scale = samples.values.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let hardy = hardy_project(&samples);
        for k in (0..n).step_by(16) {
            match span.eval(&d, circle_point(k, n)) {
                Ok(x) => worst.see((x - hardy.values[k]).norm() / scale, || format!("fixture {t} θ index {k}")),
                Err(e) => worst.fail(e.to_string()),
            }
        }
    }
    worst.finish(4, "Szegő projection vs discrete Hardy projection (disc)", 1e-8, "max error/max(1,sup|R|)")
}

/// `z + z̄`.
fn linear_data() -> BiRational {
    BiRational::polynomial(vec![vec![ORIGIN, c(1.0, 0.0)], vec![c(1.0, 0.0)]])
}

pub fn dtn_check() -> Criterion {
    let mut worst = Worst::default();
    let mut cert = Worst::default();
    let mut split = Worst::default();
    for (di, dom) in fixtures::all_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(400 + di as u64);
        let mut data = vec![linear_data()];
        data.extend((0..2).map(|_| fixtures::random_birational_with_margin(&dom, &mut rng, 0.3)));
        for (t, r) in data.iter().enumerate() {
            let map = match dtn_map(&dom, ORIGIN, r) {
                Ok(m) => m,
                Err(e) => {
                    worst.fail(format!("{} fixture {t}: {e}", dom.name()));
                    continue;
                }
            };
            let samples = boundary_samples(&dom, r, 1 << 20).expect("power of two");
            let u = |z: Complex64| -> Result<Complex64> {
                let v = dom.invert_map_closed(z)?;
                if v.norm() >= 1.0 - 1e-12 {
                    Ok(r.eval_boundary(z))
                } else {
                    Ok(poisson_disc(&samples, v))
                }
            };
            let scale = (0..64).map(|k| map.eval(&dom, 2.0 * PI * k as f64 / 64.0).norm()).fold(1.0, f64::max);
            for k in 0..64 {
                let th = 2.0 * PI * k as f64 / 64.0;
                match richardson(|h| fd_normal(&dom, &u, th, h), 2e-4) {
                    Ok(fd) => worst.see((fd - map.eval(&dom, th)).norm() / scale, || format!("{} fixture {t} θ={th:.3}", dom.name())),
                    Err(e) => worst.fail(e.to_string()),
                }
            }
            if dom.is_double() {
                let Some(trace) = map.trace.as_ref() else {
                    cert.fail("double quadrature domain without a rational trace".into());
                    continue;
                };
                let pts: Vec<Complex64> = (0..256).map(|k| circle_point(k, 256)).collect();
                let vals = map.samples(&dom, 256);
                let p = trace.numer().degree().unwrap_or(0);
                let q = trace.denom().degree().unwrap_or(0);
                cert.see(rational_fit_residual(&pts, &vals, p, q), || format!("fixture {t} type ({p},{q})"));
                match tangential_split(&dom, trace) {
                    Ok(s) => split.see(s.residual / (1.0 + scale), || format!("fixture {t}")),
                    Err(e) => split.fail(format!("fixture {t}: {e}")),
                }
            }
        }
    }
    let mut out = worst.finish(5, "D-to-N vs FD normal derivative", 1e-6, "max rel error");
    let a = cert.finish(5, "", 1e-8, "rational certificate");
    let b = split.finish(5, "", 1e-8, "split residual");
    out.passed &= a.passed && b.passed;
    out.detail.push_str(&format!("; double QD {}; {}", a.detail, b.detail));
    out
}

fn taylor_gap(a: &RationalFn, b: &RationalFn) -> f64 {
    let ta = a.taylor(ORIGIN, 16);
    let tb = b.taylor(ORIGIN, 16);
    let size = (0..16).map(|k| ta.coeff(k).norm().max(tb.coeff(k).norm())).fold(1.0, f64::max);
    (0..16).map(|k| (ta.coeff(k) - tb.coeff(k)).norm()).fold(0.0, f64::max) / size
}

fn split_domains() -> Vec<QuadDomain> {
    vec![fixtures::disc(), fixtures::double_cubic()]
}

pub fn uniqueness_check() -> Criterion {
    let mut worst = Worst::default();
    let mut add = Worst::default();
    for (di, dom) in split_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(500 + di as u64);
        for t in 0..10 {
            let k1 = fixtures::random_analytic(&mut rng);
            let k2 = fixtures::random_analytic(&mut rng);
            let psi = fixtures::synthesize_trace(&dom, &k1, &k2);
            match tangential_split(&dom, &psi) {
                Ok(p) => {
                    let gap = taylor_gap(&p.kappa1_hat, &k1).max(taylor_gap(&p.kappa2_hat, &k2));
                    worst.see(gap, || format!("{} fixture {t}", dom.name()));
                }
                Err(e) => worst.fail(format!("{} fixture {t}: {e}", dom.name())),
            }
            let k3 = fixtures::random_analytic(&mut rng);
            let k4 = fixtures::random_analytic(&mut rng);
            let psi2 = fixtures::synthesize_trace(&dom, &k3, &k4);
            let sum = psi.add(&psi2).and_then(|s| tangential_split(&dom, &s));
            let parts = tangential_split(&dom, &psi).and_then(|a| Ok((a, tangential_split(&dom, &psi2)?)));
            match (sum, parts) {
                (Ok(s), Ok((a, b))) => {
                    let k1s = a.kappa1_hat.add(&b.kappa1_hat).expect("finite");
                    let k2s = a.kappa2_hat.add(&b.kappa2_hat).expect("finite");
                    let gap = taylor_gap(&s.kappa1_hat, &k1s).max(taylor_gap(&s.kappa2_hat, &k2s));
                    add.see(gap, || format!("{} fixture {t}", dom.name()));
                }
                (Err(e), _) | (_, Err(e)) => add.fail(e.to_string()),
            }
        }
    }
    let mut out = worst.finish(6, "tangential split uniqueness", 1e-8, "max coefficient gap");
    let a = add.finish(6, "", 1e-9, "additivity");
    out.passed &= a.passed;
    out.detail.push_str(&format!("; {}", a.detail));
    out
}

fn two_cos() -> RationalFn {
    RationalFn::new(ComplexPoly::from_real(&[1.0, 0.0, 1.0]), ComplexPoly::from_real(&[0.0, 1.0])).expect("valid")
}

fn roundtrip_error(dom: &QuadDomain, rep: &HarmonicRep, psi: &RationalFn) -> Result<f64> {
    let back = dtn_of(dom, rep)?;
    let mut worst: f64 = 0.0;
    let mut size: f64 = 0.0;
    for k in 0..256 {
        let th = 2.0 * PI * k as f64 / 256.0;
        let target = psi.value(Complex64::from_polar(1.0, th));
        worst = worst.max((back.eval(dom, th) - target).norm());
        size = size.max(target.norm());
    }
    Ok(worst / (1.0 + size))
}

pub fn inverse_check() -> Criterion {
    let mut worst = Worst::default();
    for (di, dom) in split_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(600 + di as u64);
        for t in 0..10 {
            let psi = fixtures::synthesize_trace(&dom, &fixtures::random_analytic(&mut rng), &fixtures::random_analytic(&mut rng));
            match dtn_inverse(&dom, &psi).and_then(|rep| roundtrip_error(&dom, &rep, &psi)) {
                Ok(e) => worst.see(e, || format!("{} fixture {t}", dom.name())),
                Err(e) => worst.fail(format!("{} fixture {t}: {e}", dom.name())),
            }
        }
    }
    let d = fixtures::disc();
    let mut chain = false;
    if let Ok(rep) = dtn_inverse(&d, &two_cos()) {
        let data_ok = interior_points(8)
            .into_iter()
            .chain((0..8).map(|k| circle_point(k, 8)))
            .all(|v| harmonic_eval(&rep, v).map(|u| (u - c(2.0 * v.re, 0.0)).norm() < 1e-12).unwrap_or(false));
        let back = roundtrip_error(&d, &rep, &two_cos()).map(|e| e < 1e-12).unwrap_or(false);
        chain = data_ok && back;
    }
    let mut out = worst.finish(7, "D-to-N ∘ inverse = identity", 1e-7, "max rel error");
    out.passed &= chain;
    out.detail.push_str(&format!("; disc 2cosθ → z+z̄ → 2cosθ: {}", if chain { "ok" } else { "mismatch" }));
    out
}

/// Boundary trace with `∮ψ ds = 1` on a double quadrature domain.
pub fn unit_mean_trace(dom: &QuadDomain) -> RationalFn {
    let q = dom.witness().expect("double quadrature domain");
    let qr = dom.witness_reflect().expect("double quadrature domain");
    RationalFn::constant(c(0.5 / PI, 0.0)).div(&q.mul(qr).expect("finite")).expect("finite")
}

pub fn neumann_check(cli: Option<&CliRunner>) -> Criterion {
    let mut worst = Worst::default();
    let mut fd = Worst::default();
    for (di, dom) in split_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(700 + di as u64);
        for t in 0..5 {
            let psi = fixtures::synthesize_trace(&dom, &fixtures::random_analytic(&mut rng), &fixtures::random_analytic(&mut rng));
            let rep = match neumann_solve(&dom, &psi) {
                Ok(r) => r,
                Err(e) => {
                    worst.fail(format!("{} fixture {t}: {e}", dom.name()));
                    continue;
                }
            };
            match roundtrip_error(&dom, &rep, &psi) {
                Ok(e) => worst.see(e, || format!("{} fixture {t}", dom.name())),
                Err(e) => worst.fail(e.to_string()),
            }
            let scale = sup_on_circle(64, |w| psi.value(w)).max(1.0);
            for k in 0..16 {
                let th = 2.0 * PI * k as f64 / 16.0;
                let u = |z: Complex64| physical(&dom, &rep, z);
                match richardson(|h| fd_normal(&dom, &u, th, h), 2e-4) {
                    Ok(x) => fd.see((x - psi.value(Complex64::from_polar(1.0, th))).norm() / scale, || format!("{} fixture {t}", dom.name())),
                    Err(e) => fd.fail(e.to_string()),
                }
            }
        }
        let unit = unit_mean_trace(&dom);
        match neumann_solve(&dom, &unit) {
            Err(Error::IncompatibleData(_)) => {}
            other => worst.fail(format!("{}: mean-one data not rejected ({other:?})", dom.name())),
        }
        if let Some(run) = cli {
            match run(&dom, &unit) {
                Some(5) => {}
                code => worst.fail(format!("{}: CLI exit {code:?} for mean-one data, expected 5", dom.name())),
            }
        }
    }
    let d = fixtures::disc();
    let u_half = neumann_solve(&d, &two_cos()).and_then(|rep| harmonic_eval(&rep, c(0.5, 0.0)));
    let fixture_ok = matches!(u_half, Ok(u) if (u - c(1.0, 0.0)).norm() < 1e-12);
    let mut out = worst.finish(8, "Neumann round trip and mean gate", 1e-7, "max rel D-to-N residual");
    let f = fd.finish(8, "", 1e-6, "FD normal");
    out.passed &= f.passed && fixture_ok;
    out.detail.push_str(&format!(
        "; {}; mean-one data rejected{}; disc ψ=2cosθ: u(0.5) = {}",
        f.detail,
        if cli.is_some() { " (library and CLI exit 5)" } else { "" },
        u_half.map(|u| format!("{:.15}", u.re)).unwrap_or_else(|e| e.to_string())
    ));
    out
}

pub fn bergman_check() -> Criterion {
    let mut worst = Worst::default();
    let d = fixtures::disc();
    let r = RationalFn::new(ComplexPoly::from_real(&[-1.0]), ComplexPoly::from_real(&[0.0, 0.0, 1.0])).expect("valid");
    let exact = match bergman_decompose(&d, &r) {
        Ok(s) => {
            s.kappa.is_empty()
                && s.lambda.len() == 1
                && s.lambda.terms[0].1.kind == KernelKind::Lambda
                && s.lambda.terms[0].1.order == 0
                && s.lambda.terms[0].1.param == ORIGIN
                && (s.lambda.terms[0].0 + c(PI, 0.0)).norm() < 1e-12
        }
        Err(_) => false,
    };
    let grid: Vec<Complex64> = interior_points(40);
    for (di, dom) in fixtures::all_domains().into_iter().enumerate() {
        let mut rng = fixtures::rng(800 + di as u64);
        for t in 0..10 {
            let r = fixtures::random_derivative(&mut rng);
            match bergman_decompose(&dom, &r) {
                Ok(s) => {
                    let scale = grid.iter().map(|&w| r.value(w).norm()).fold(1.0, f64::max);
                    for &w in &grid {
                        let lhs = r.value(w) / dom.eval_derivative(w);
                        let rhs = s.kappa.eval(&dom, w).unwrap_or_default() + s.lambda.eval(&dom, w).unwrap_or_default();
                        worst.see((lhs - rhs).norm() * dom.eval_derivative(w).norm() / scale, || format!("{} fixture {t}", dom.name()));
                    }
                    if s.lambda.terms.iter().any(|(_, e)| e.principal_part().map(|p| p.residue().norm() != 0.0).unwrap_or(true)) {
                        worst.fail(format!("{} fixture {t}: Λ term with a residue", dom.name()));
                    }
                }
                Err(e) => worst.fail(format!("{} fixture {t}: {e}", dom.name())),
            }
        }
    }
    let simple = RationalFn::new(ComplexPoly::one(), ComplexPoly::linear_root(c(0.2, 0.1))).expect("valid");
    let rejected = matches!(bergman_decompose(&d, &simple), Err(Error::NotADerivative { .. }));
    let mut out = worst.finish(9, "Bergman decomposition", 1e-8, "max rel grid error");
    out.passed &= exact && rejected;
    out.detail.push_str(&format!(
        "; disc -1/w² → -π·Λ(·,0): {}; residue input rejected: {}",
        if exact { "exact" } else { "mismatch" },
        if rejected { "yes" } else { "no" }
    ));
    out
}

pub fn quadrature_check() -> Criterion {
    let mut worst = Worst::default();
    for dom in fixtures::all_domains() {
        let data = match dom.quadrature_data() {
            Ok(q) => q,
            Err(e) => {
                worst.fail(format!("{}: {e}", dom.name()));
                continue;
            }
        };
        for k in 0..=4 {
            let h = ComplexPoly::monomial(c(1.0, 0.0), k);
            let lhs = area_integral(&dom, &h);
            let rhs = data.apply(&h);
            worst.see((lhs - rhs).norm() / (1.0 + lhs.norm()), || format!("{} h=z^{k}", dom.name()));
        }
    }
    let area = area_integral(&fixtures::limacon(), &ComplexPoly::one());
    let fixture_ok = (area - c(1.32 * PI, 0.0)).norm() < 1e-10;
    let mut out = worst.finish(10, "area quadrature identities", 1e-6, "max rel error");
    out.passed &= fixture_ok;
    out.detail.push_str(&format!("; area(w+0.4w²) = {:.10} (1.32π = {:.10})", area.re, 1.32 * PI));
    out
}

pub fn anchor_independence_check() -> Criterion {
    let mut worst = Worst::default();
    let other = c(0.3, 0.2);
    for (di, dom) in fixtures::all_domains().into_iter().enumerate() {
        let mut rng: FixtureRng = fixtures::rng(900 + di as u64);
        let mut data = vec![linear_data()];
        if dom.name() == "disc" {
            data.push(disc_fixture_s_over_z_minus_2());
        }
        data.extend((0..10).map(|_| fixtures::random_birational(&dom, &mut rng)));
        for (t, r) in data.iter().enumerate() {
            match (dirichlet_solve(&dom, ORIGIN, r), dirichlet_solve(&dom, other, r)) {
                (Ok(a), Ok(b)) => {
                    for v in interior_points(20) {
                        match (harmonic_eval(&a, v), harmonic_eval(&b, v)) {
                            (Ok(x), Ok(y)) => worst.see((x - y).norm(), || format!("{} fixture {t}", dom.name())),
                            (Err(e), _) | (_, Err(e)) => worst.fail(e.to_string()),
                        }
                    }
                }
                (Err(e), _) | (_, Err(e)) => worst.fail(format!("{} fixture {t}: {e}", dom.name())),
            }
        }
    }
    worst.finish(11, "anchor independence (v = 0 vs 0.3+0.2i)", 1e-7, "max pointwise gap")
}

/// Run every criterion. `cli` optionally runs the command-line Neumann solver
/// on mean-one data and returns its exit code.
pub fn run_all(cli: Option<&CliRunner>) -> Vec<Criterion> {
    vec![
        kernel_identities(),
        basic_decomposition_check(),
        dirichlet_check(),
        szego_projection_check(),
        dtn_check(),
        uniqueness_check(),
        inverse_check(),
        neumann_check(cli),
        bergman_check(),
        quadrature_check(),
        anchor_independence_check(),
    ]
}
