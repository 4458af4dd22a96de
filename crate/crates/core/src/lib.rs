//! Exact symbolic computation for metaplectic ice.
//!
//! The crate covers the coefficient ring of Boltzmann weights (Laurent
//! polynomials in `v` and the spectral parameters `z_1..z_r`, extended by
//! formal Gauss sum symbols), six-vertex lattice models with charged
//! horizontal edges, the R-vertex and its Yang–Baxter equations, the
//! twisted super R-matrix, the combinatorics of metaplectic covers of
//! `GL_r`, and crystal / Gelfand–Tsetlin sums for Whittaker functions.

pub mod appendix;
pub mod crystal;
pub mod lattice;
pub mod metaplectic;
pub mod qgroup;
pub mod report;
pub mod rvertex;
pub mod scalar;
pub mod spin;

pub use scalar::{Frac, GaussExponent, Scalar};
pub use spin::Spin;
