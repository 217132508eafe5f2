//! Grid-free propagation of Gaussian states, used as reference solutions.
//!
//! Two independent routes are provided: a closed-form short-time
//! path-integral step ([`short_time_step`]) and the ODE flow of the
//! Gaussian parameters under an assembled equation ([`riccati_evolve`]).

mod compare;
mod riccati;
mod short_time;

use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::coefficients::CoefficientError;
use crate::evolve::EvolveError;
use crate::grid::GridError;

pub use compare::{
    cross_validate, eps_sweep, loglog_fit, parameter_distance, sample_unchecked, Checkpoint,
    CrossValidation, EpsSweep, SweepPoint, SWEEP_EPS, SWEEP_TOLERANCE,
};
pub use riccati::{free_closed_form, riccati_evolve, riccati_step, RiccatiFlow, DEFAULT_TOLERANCE};
pub use short_time::{compose_short_steps, short_time_step};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error("kernel integral diverges: quadratic coefficient {alpha} is real and non-negative")]
    NotIntegrable { alpha: Complex64 },
    #[error("Gaussian stopped being normalizable at t = {t} (Re A = {re_a})")]
    LostNormalizability { t: f64, re_a: f64 },
    #[error("non-finite Gaussian parameters at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
}
