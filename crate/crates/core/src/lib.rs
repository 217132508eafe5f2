//! Simulation and derivation auditing for quadratic Lagrangians
//! `L = a ẋ² + b x ẋ + c x² + d ẋ + f x + g` with time-dependent
//! coefficients.
//!
//! The crate is organized bottom-up:
//!
//! - [`expr`] parses and evaluates coefficient expressions in `t`.
//! - [`coefficients`] holds the six coefficients, presets and validation.
//! - [`assembly`] turns coefficient values into the terms of the evolution
//!   equation, in either the published or the re-derived sign convention.
//! - [`symbolic`] re-derives that equation exactly from the short-time
//!   kernel and compares it with a Weyl-quantized Hamiltonian.
//! - [`grid`] and [`evolve`] sample and propagate wavefunctions with
//!   Crank–Nicolson in 1D and isotropic 3D.
//! - [`oracle`] propagates Gaussians in closed form for cross-checks.
//! - [`scenario`] runs TOML-described experiments and writes CSV/JSON.

// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::result_large_err)]

pub mod assembly;
pub mod cli;
pub mod coefficients;
pub mod evolve;
pub mod expr;
pub mod grid;
pub mod oracle;
pub mod scenario;
pub mod symbolic;

pub use assembly::{assemble_1d, assemble_3d, EquationTerms, Variant};
pub use coefficients::{Case, Coeff, CoefficientSet};
pub use expr::{parse_expr, Expr};
pub use grid::{GaussianState, GridSpec1D, WaveState};
