//! Crank–Nicolson propagation of sampled wavefunctions.

pub mod cn;
pub mod three_d;
pub mod tridiag;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::{AssemblyError, Variant};
use crate::coefficients::Violation;
use crate::grid::{GridError, Observables, WaveState};

pub use cn::{cn_line, evolve_1d, step_1d, LineWorkspace};
pub use three_d::{evolve_3d_isotropic, step_3d, Observables3D, Trajectory3D, WaveState3D, MAX_3D_POINTS};

/// Default leak threshold relative to the peak amplitude.
pub const DEFAULT_LEAK_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("coefficients invalid on the evolution interval: {}", join(.0))]
    InvalidCoefficients(Vec<Violation>),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("singular tridiagonal system at row {row} (t = {t})")]
    Singular { row: usize, t: f64 },
    #[error("grid too small: wall amplitude reached {ratio:.3e} of the peak at t = {t} (limit {threshold:.0e})")]
    Leak { t: f64, ratio: f64, threshold: f64 },
    #[error("3D grid of {0}^3 points exceeds the {MAX_3D_POINTS}^3 limit")]
    TooLarge(usize),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    DirichletZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSampling {
    #[default]
    Midpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveParams {
    pub dt: f64,
    pub t_final: f64,
    pub variant: Variant,
    pub snapshot_every: usize,
    pub leak_threshold: f64,
    /// Keep full wavefunction snapshots alongside the observables.
    pub keep_snapshots: bool,
    pub boundary: Boundary,
    pub coefficient_sampling: CoefficientSampling,
}

impl EvolveParams {
    pub fn new(dt: f64, t_final: f64, variant: Variant) -> Self {
        EvolveParams {
            dt,
            t_final,
            variant,
            snapshot_every: 1,
            leak_threshold: DEFAULT_LEAK_THRESHOLD,
            keep_snapshots: false,
            boundary: Boundary::DirichletZero,
            coefficient_sampling: CoefficientSampling::Midpoint,
        }
    }

    pub fn with_snapshot_every(mut self, k: usize) -> Self {
        self.snapshot_every = k;
        self
    }

    pub fn keeping_snapshots(mut self) -> Self {
        self.keep_snapshots = true;
        self
    }

    pub fn with_leak_threshold(mut self, threshold: f64) -> Self {
        self.leak_threshold = threshold;
        self
    }

    pub(crate) fn check(&self, t0: f64) -> Result<(), EvolveError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(EvolveError::Params(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= t0) || !self.t_final.is_finite() {
            return Err(EvolveError::Params(format!(
                "t_final ({}) must not precede the start time ({t0})",
                self.t_final
            )));
        }
        if self.snapshot_every == 0 {
            return Err(EvolveError::Params("snapshot_every must be at least 1".into()));
        }
        if !(self.leak_threshold > 0.0) {
            return Err(EvolveError::Params("leak_threshold must be positive".into()));
        }
        Ok(())
    }

    /// Step boundaries `t0 = τ₀ < τ₁ < … = t_final`; all steps have
    /// length `dt` except possibly the last.
    pub fn schedule(&self, t0: f64) -> Vec<f64> {
        let span = self.t_final - t0;
        let steps = if span <= 0.0 {
            0
        } else {
            (span / self.dt - 1e-9).ceil().max(1.0) as usize
        };
        let mut ts: Vec<f64> = (0..=steps).map(|k| t0 + k as f64 * self.dt).collect();
        if let Some(last) = ts.last_mut() {
            *last = self.t_final;
        }
        if steps == 0 {
            ts.truncate(1);
            ts[0] = t0;
        }
        ts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub observables: Vec<Observables>,
    pub snapshots: Vec<WaveState>,
    pub final_state: WaveState,
    pub steps: usize,
    /// Largest `|‖ψ(t)‖ − ‖ψ(t₀)‖|` seen at any step.
    pub norm_drift: f64,
}

/// An evolution that stopped early; `partial` holds everything produced
/// up to the failing step.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{error}")]
pub struct EvolveFailure<T> {
    pub error: EvolveError,
    pub partial: Option<T>,
}

impl<T> From<EvolveError> for EvolveFailure<T> {
    fn from(error: EvolveError) -> Self {
        EvolveFailure {
            error,
            partial: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_hits_endpoint() {
        let p = EvolveParams::new(0.3, 1.0, Variant::Rederived);
        let ts = p.schedule(0.0);
        assert_eq!(ts.len(), 5);
        assert_eq!(ts[3], 0.8999999999999999);
        assert_eq!(*ts.last().unwrap(), 1.0);

        let p = EvolveParams::new(1e-3, 1.0, Variant::Rederived);
        let ts = p.schedule(0.0);
        assert_eq!(ts.len(), 1001);

        let p = EvolveParams::new(0.1, 0.0, Variant::Rederived);
        assert_eq!(p.schedule(0.0), vec![0.0]);
    }

    #[test]
    fn parameter_checks() {
        assert!(EvolveParams::new(0.0, 1.0, Variant::Rederived).check(0.0).is_err());
        assert!(EvolveParams::new(0.1, -1.0, Variant::Rederived).check(0.0).is_err());
        assert!(EvolveParams::new(0.1, 1.0, Variant::Rederived)
            .with_snapshot_every(0)
            .check(0.0)
            .is_err());
        assert!(EvolveParams::new(0.1, 1.0, Variant::Rederived).check(0.0).is_ok());
    }
}
