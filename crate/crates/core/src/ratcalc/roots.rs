//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity detection.

use super::poly::ComplexPoly;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Iteration cap for the Aberth–Ehrlich sweep.
pub const MAX_ITERATIONS: usize = 200;
/// Backward-error acceptance: `|p(r)| <= TOL_ROOT * sum |c_k| |r|^k`.
pub const TOL_ROOT: f64 = 1e-12;
/// Roots closer than this (relative) are always merged.
pub const TOL_CLUSTER: f64 = 1e-8;
/// Candidate radii for multiple-root clusters, widest first. An m-fold root
/// perturbed by rounding spreads over roughly `eps^(1/m)`, so high
/// multiplicities need the wide radii. A candidate group is merged only if
/// the Taylor coefficients at its centre certify the multiplicity; otherwise
/// its members are regrouped at the next radius.
const CLUSTER_CANDIDATES: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Relative size below which low-order Taylor coefficients count as zero.
const TOL_MULTIPLICITY: f64 = 1e-10;

/// A root together with its multiplicity.
pub type Root = (Complex64, usize);

/// All roots of `p` with multiplicities. Degree-zero input yields no roots.
///
/// Panics if `p` is identically zero.
pub fn poly_roots(p: &ComplexPoly) -> Result<Vec<Root>> {
    assert!(!p.is_zero(), "poly_roots of the zero polynomial");
    let zeros_at_origin = p.low_order_zeros();
    let rest = p.shift_down(zeros_at_origin);
    let mut roots = Vec::new();
    if zeros_at_origin > 0 {
        roots.push((Complex64::new(0.0, 0.0), zeros_at_origin));
    }
    let n = rest.degree().unwrap_or(0);
    if n == 0 {
        return Ok(roots);
    }
    let simple = if n == 1 {
        vec![-rest.coeff(0) / rest.coeff(1)]
    } else {
        aberth(&rest)?
    };
    roots.extend(cluster(&rest, simple));
    Ok(roots)
}

fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let n = p.degree().unwrap();
    let lead = p.leading().norm();
    // radius from the geometric mean of root moduli, kept away from zero
    let radius = (p.coeff(0).norm() / lead).powf(1.0 / n as f64).max(1e-3);
    (0..n)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn backward_error(p: &ComplexPoly, z: Complex64) -> f64 {
    let scale = p.eval_scale(z);
    if scale == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / scale
    }
}

fn aberth(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let mut z = initial_guesses(p);
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (val, der) = p.eval_with_derivative(z[k]);
            if val.norm() <= TOL_ROOT * 1e-3 * p.eval_scale(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // derivative vanished: nudge off the critical point
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += nudge;
                all_done = false;
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    let worst = z.iter().map(|&r| backward_error(p, r)).fold(0.0, f64::max);
    if worst > TOL_ROOT || z.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootsNotConverged {
            iterations: MAX_ITERATIONS,
            backward_error: worst,
            best: z,
        });
    }
    Ok(z)
}

/// Taylor coefficients of `p` at `c` and their natural magnitudes, measured
/// at radius `max(|c|, 1)` so that clusters near the origin are not judged
/// against the noise in the low-order coefficients.
fn taylor_with_scale(p: &ComplexPoly, c: Complex64) -> (Vec<Complex64>, Vec<f64>) {
    let shifted = p.taylor_shift(c);
    let abs = ComplexPoly::new(p.coeffs().iter().map(|x| Complex64::new(x.norm(), 0.0)).collect());
    let scale = abs.taylor_shift(Complex64::new(c.norm().max(1.0), 0.0));
    let n = p.coeffs().len();
    (
        (0..n).map(|k| shifted.coeff(k)).collect(),
        (0..n).map(|k| scale.coeff(k).re).collect(),
    )
}

fn certifies_multiplicity(p: &ComplexPoly, center: Complex64, mult: usize) -> bool {
    let (taylor, scale) = taylor_with_scale(p, center);
    (0..mult).all(|j| taylor[j].norm() <= TOL_MULTIPLICITY * scale[j].max(f64::MIN_POSITIVE))
}

fn single_linkage(points: &[Complex64], radius: impl Fn(Complex64) -> f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(group: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while group[r] != r {
            r = group[r];
        }
        group[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let r = radius(points[i]).max(radius(points[j]));
            if (points[i] - points[j]).norm() <= r {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a] = b;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut label: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut group, i);
        match label[r] {
            Some(g) => out[g].push(i),
            None => {
                label[r] = Some(out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

fn centroid(points: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| points[i]).sum::<Complex64>() / idx.len() as f64
}

/// Newton on `p^(k-1)`, which has a simple root at a k-fold root of `p`.
fn refine_multiple(p: &ComplexPoly, start: Complex64, k: usize, radius: f64) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..k {
        q = q.derivative();
    }
    let mut z = start;
    for _ in 0..30 {
        let (v, d) = q.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        z -= step;
        if step.norm() <= 2.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() <= radius * start.norm().max(1.0) {
        z
    } else {
        start
    }
}

fn cluster(p: &ComplexPoly, roots: Vec<Complex64>) -> Vec<Root> {
    cluster_at(p, &roots, 0)
}

fn cluster_at(p: &ComplexPoly, roots: &[Complex64], level: usize) -> Vec<Root> {
    let Some(&radius) = CLUSTER_CANDIDATES.get(level) else {
        // no certified multiple root: fall back to the tight clustering radius
        return single_linkage(roots, |r| TOL_CLUSTER * r.norm().max(1.0))
            .into_iter()
            .map(|g| (centroid(roots, &g), g.len()))
            .collect();
    };
    let mut out = Vec::new();
    for candidate in single_linkage(roots, |r| radius * r.norm().max(1.0)) {
        if candidate.len() == 1 {
            out.push((roots[candidate[0]], 1));
            continue;
        }
        let center = refine_multiple(p, centroid(roots, &candidate), candidate.len(), radius);
        if certifies_multiplicity(p, center, candidate.len()) {
            out.push((center, candidate.len()));
            continue;
        }
        let members: Vec<Complex64> = candidate.iter().map(|&i| roots[i]).collect();
        out.extend(cluster_at(p, &members, level + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut r: Vec<Root>) -> Vec<Root> {
        r.sort_by(|a, b| (a.0.re.round(), a.0.im).partial_cmp(&(b.0.re.round(), b.0.im)).unwrap());
        r
    }

    #[test]
    fn w_squared_plus_one() {
        let r = sorted(poly_roots(&ComplexPoly::from_real(&[1.0, 0.0, 1.0])).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - c(0.0, -1.0)).norm() < 1e-14 && r[0].1 == 1);
        assert!((r[1].0 - c(0.0, 1.0)).norm() < 1e-14 && r[1].1 == 1);
    }

    #[test]
    fn perfect_square() {
        let r = poly_roots(&ComplexPoly::from_real(&[1.0, -2.0, 1.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert!((r[0].0 - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cubic_w3_minus_w() {
        let p = ComplexPoly::from_real(&[0.0, -1.0, 0.0, 1.0]);
        let r = sorted(poly_roots(&p).unwrap());
        let expect = [-1.0, 0.0, 1.0];
        assert_eq!(r.len(), 3);
        for ((root, m), e) in r.iter().zip(expect) {
            assert_eq!(*m, 1);
            assert!((root - c(e, 0.0)).norm() < 1e-13);
            // evaluation oracle
            assert!(p.eval(*root).norm() <= TOL_ROOT * p.eval_scale(*root).max(1.0));
        }
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(poly_roots(&ComplexPoly::from_real(&[3.0])).unwrap().is_empty());
    }

    #[test]
    fn triple_complex_root_with_neighbour() {
        let a = c(0.4, -0.3);
        let p = ComplexPoly::from_roots(&[(a, 3), (c(-1.5, 0.2), 1), (c(2.0, 2.0), 2)]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        let triple = r.iter().find(|x| x.1 == 3).unwrap();
        assert!((triple.0 - a).norm() < 1e-9);
        assert!(r.iter().any(|x| x.1 == 2 && (x.0 - c(2.0, 2.0)).norm() < 1e-9));
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        let p = ComplexPoly::from_roots(&[(c(0.5, 0.0), 1), (c(0.5 + 1e-4, 0.0), 1)]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn roots_at_origin_are_exact() {
        let p = ComplexPoly::from_real(&[0.0, 0.0, 0.0, 0.03, 0.3, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert!(r.contains(&(c(0.0, 0.0), 3)));
    }

    #[test]
    fn noisy_high_multiplicity_root_is_recovered() {
        // w^8 (w - 2) with rounding-level noise in the low coefficients
        let mut p = ComplexPoly::from_roots(&[(c(0.0, 0.0), 8), (c(2.0, 0.0), 1)]).into_coeffs();
        p[0] += c(3e-19, -1e-19);
        p[3] += c(-2e-18, 4e-18);
        let r = poly_roots(&ComplexPoly::new(p)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        let zero = r.iter().find(|x| x.1 == 8).expect("eightfold root");
        assert!(zero.0.norm() < 1e-10);
    }
}
