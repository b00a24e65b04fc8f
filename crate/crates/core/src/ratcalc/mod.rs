//! Complex polynomial and rational-function algebra: roots, reduction,
//! partial fractions, circle splitting and path integration.

mod integrate;
mod poly;
mod rational;
mod roots;
mod series;

pub use integrate::{antiderivative_eval, segment_integral};
pub use poly::ComplexPoly;
pub use rational::{sum_principal_parts, PrincipalPart, RationalFn, TOL_CIRCLE};
pub use roots::{poly_roots, Root, MAX_ITERATIONS, TOL_CLUSTER, TOL_ROOT};
pub use series::Series;

use num_complex::Complex64;

/// `e^{iθ}` for `k` of `n` uniform samples.
pub fn circle_point(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}
