//! Dirichlet, D-to-N and Neumann solvers, the tangential splitting and the
//! Bergman decomposition.

mod bergman;
mod dirichlet;
mod dtn;
mod harmonic;

pub use bergman::{bergman_decompose, complementary_function, BergmanSplit, TOL_BERGMAN};
pub use dirichlet::{dirichlet_solve, dirichlet_solve_trace, harmonic_from_decomposition, TOL_DIRICHLET};
pub use dtn::{
    boundary_mean, dtn_inverse, dtn_map, dtn_of, neumann_data_from_json_str, neumann_solve, tangential_split, DtnMap, SplitPair, TOL_INVERSE,
    TOL_MEAN, TOL_SPLIT, trace_to_json,
};
pub use harmonic::{harmonic_eval, HarmonicRep, Potential};
