//! Closed-form potential theory on simply connected quadrature domains.
//!
//! A domain is the image of the unit disc under a rational univalent map
//! `f`. Every kernel, decomposition and solution is carried as rational
//! algebra in the disc variable `w`, and is checked against the independent
//! numeric routines in [`oracle`].

// `!(x <= tol)` is used on purpose so that NaN residuals fail checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decompose;
pub mod domain;
pub mod error;
pub mod fixtures;
mod io;
pub mod kernels;
pub mod oracle;
pub mod ratcalc;
pub mod solvers;
pub mod verify;

pub use domain::{BoundaryFrame, QuadDomain, QuadratureData, QuadratureNode};
pub use error::{Error, Result};
pub use num_complex::Complex64;
