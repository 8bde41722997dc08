//! Numerical laboratory for planar viscous shocks of scalar conservation laws
//! on the slab ℝ × Tⁿ⁻¹.
//!
//! The crate constructs traveling-wave shock profiles, evolves large
//! perturbations in the moving frame together with a dynamically defined
//! shift X(t), and monitors the contraction, dissipation, and decay
//! functionals of the underlying stability theory at desk scale.
//!
//! Module map:
//! - [`flux`]: admissible fluxes, Rankine-Hugoniot speed, hypothesis gates.
//! - [`profile`]: shock profile ODE integration and tabulation.
//! - [`grid`]: truncated-slab discretization, quadrature, stencils.
//! - [`dynamics`]: coupled (u, X) time stepping.
//! - [`diagnostics`]: monitored functionals, decay fits, theorem checks.
//! - [`inequalities`]: standalone verifiers for the supporting lemmas.
//! - [`config`]: experiment configuration parsing and validation.
//! - [`runner`]: end-to-end experiment execution and reporting.
//! - [`persist`]: snapshots, diagnostics CSV, manifests, summaries.

// Negated comparisons like !(x > 0.0) are deliberate: they reject NaN along
// with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod flux;
pub mod grid;
pub mod inequalities;
pub mod persist;
pub mod profile;
pub mod runner;

pub use error::{Error, Result};
