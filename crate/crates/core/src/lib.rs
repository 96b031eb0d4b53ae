//! Numerical toolkit for p(x)-harmonic functions in the plane.
//!
//! The crate is `no_std` with `alloc`; all floating-point transcendental
//! functions go through [`num_traits::Float`] backed by `libm`. IO, file
//! formats and the command line live in the `pxharm` crate.
//!
//! Module map:
//!
//! * [`exponent`]: variable exponents, the modular and the Luxemburg norm.
//! * [`geometry`]: planar domains, corkscrew points, quasihyperbolic
//!   distance and Harnack chains.
//! * [`mesh`]: body-fitted triangulations and nodal scalar fields.
//! * [`solver`]: energy minimization for the Dirichlet problem, weak
//!   residuals, the normalized strong operator, relative capacity.
//! * [`barriers`]: radial barrier families and their admissibility thresholds.
//! * [`estimates`]: empirical Harnack, oscillation, Carleson and boundary
//!   Harnack constants on solved fields.
//! * [`measure`]: the Riesz measure of a zero-extended solution, growth and
//!   doubling checks.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is deliberate throughout: it rejects NaN along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// `Float` supplies f64 math without std; when std is linked (tests, std
// consumers) the inherent methods win and the import goes unused.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod barriers;
pub mod data;
pub mod error;
pub mod estimates;
pub mod exponent;
pub mod fit;
pub mod geometry;
pub mod measure;
pub mod mesh;
pub mod point;
pub mod solver;

pub use error::{Error, Result};
pub use point::Point;
