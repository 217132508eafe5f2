//! Isotropic 3D evolution by sweeps of 1D Crank–Nicolson steps.
//!
//! The per-axis operators act on disjoint coordinates and commute, so the
//! sweeps can run in any order and the step stays second order. On a
//! product state the result is exactly the product of three 1D CN runs.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble_3d, EquationTerms, Variant};
use crate::coefficients::CoefficientSet;
use crate::grid::{GridSpec1D, WaveState};

use super::cn::{cn_line, LineWorkspace};
use super::{EvolveError, EvolveFailure, EvolveParams};

/// Largest supported points per axis.
pub const MAX_3D_POINTS: usize = 128;

/// Amplitudes on the cube `grid × grid × grid`, index `(i·n + j)·n + k`
/// for `(x_i, y_j, z_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState3D {
    pub grid: GridSpec1D,
    pub amp: Vec<Complex64>,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables3D {
    pub t: f64,
    pub norm: f64,
    pub mean: [f64; 3],
    pub mean_sq: [f64; 3],
}

impl WaveState3D {
    pub fn product(x: &WaveState, y: &WaveState, z: &WaveState) -> Result<Self, EvolveError> {
        if x.grid != y.grid || x.grid != z.grid {
            return Err(crate::grid::GridError::MismatchedGrids.into());
        }
        let n = x.grid.n;
        if n > MAX_3D_POINTS {
            return Err(EvolveError::TooLarge(n));
        }
        let mut amp = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let xy = x.amp[i] * y.amp[j];
                amp.extend(z.amp.iter().map(|&zk| xy * zk));
            }
        }
        Ok(WaveState3D {
            grid: x.grid,
            amp,
            time: x.time,
        })
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.grid.n;
        (i * n + j) * n + k
    }

    pub fn observables(&self) -> Observables3D {
        let g = &self.grid;
        let n = g.n;
        let mut norm = 0.0;
        let mut mean = [0.0; 3];
        let mut mean_sq = [0.0; 3];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let w = g.weight(i) * g.weight(j) * g.weight(k);
                    let p = self.amp[self.index(i, j, k)].norm_sqr() * w;
                    let r = [g.x(i), g.x(j), g.x(k)];
                    norm += p;
                    for ax in 0..3 {
                        mean[ax] += r[ax] * p;
                        mean_sq[ax] += r[ax] * r[ax] * p;
                    }
                }
            }
        }
        for ax in 0..3 {
            mean[ax] /= norm;
            mean_sq[ax] /= norm;
        }
        Observables3D {
            t: self.time,
            norm: norm.sqrt(),
            mean,
            mean_sq,
        }
    }

    /// Largest amplitude within two nodes of any face, relative to the
    /// peak.
    pub fn wall_ratio(&self) -> f64 {
        let n = self.grid.n;
        let near = |i: usize| i < 2 || i + 2 >= n;
        let mut wall: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = self.amp[self.index(i, j, k)].norm();
                    peak = peak.max(a);
                    if near(i) || near(j) || near(k) {
                        wall = wall.max(a);
                    }
                }
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            wall / peak
        }
    }

    pub fn max_abs_diff(&self, other: &WaveState3D) -> f64 {
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Runs one CN line solve along `axis` (0 = x, 1 = y, 2 = z) for every
    /// line of the cube. Lines are independent and solved in parallel.
    fn sweep(&mut self, axis: usize, terms: &EquationTerms, dt: f64) -> Result<(), EvolveError> {
        let n = self.grid.n;
        let stride = match axis {
            0 => n * n,
            1 => n,
            _ => 1,
        };
        let base = |line: usize| {
            let (p, q) = (line / n, line % n);
            match axis {
                0 => p * n + q,
                1 => p * n * n + q,
                _ => (p * n + q) * n,
            }
        };
        let grid = self.grid;
        let amp = &self.amp;
        let solved: Vec<Result<Vec<Complex64>, EvolveError>> = (0..n * n)
            .into_par_iter()
            .map_init(
                || LineWorkspace::new(n),
                |ws, line| {
                    let b = base(line);
                    let mut buf: Vec<Complex64> = (0..n).map(|s| amp[b + s * stride]).collect();
                    cn_line(terms, &grid, dt, &mut buf, ws)?;
                    Ok(buf)
                },
            )
            .collect();
        for (line, res) in solved.into_iter().enumerate() {
            let buf = res?;
            let b = base(line);
            for (s, v) in buf.into_iter().enumerate() {
                self.amp[b + s * stride] = v;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory3D {
    pub observables: Vec<Observables3D>,
    pub final_state: WaveState3D,
    pub steps: usize,
    pub norm_drift: f64,
}

/// One step from `t` to `t + dt`: x, y and z sweeps with the per-axis
/// equations assembled at the midpoint.
pub fn step_3d(
    state: &mut WaveState3D,
    coeffs: &CoefficientSet,
    t: f64,
    dt: f64,
    variant: Variant,
) -> Result<(), EvolveError> {
    let axes = assemble_3d(coeffs, t + 0.5 * dt, variant)?;
    for (axis, terms) in axes.iter().enumerate() {
        state.sweep(axis, terms, dt)?;
    }
    state.time = t + dt;
    Ok(())
}

pub fn evolve_3d_isotropic(
    initial: &WaveState3D,
    coeffs: &CoefficientSet,
    params: &EvolveParams,
) -> Result<Trajectory3D, EvolveFailure<Trajectory3D>> {
    let t0 = initial.time;
    params.check(t0)?;
    if initial.grid.n > MAX_3D_POINTS {
        return Err(EvolveError::TooLarge(initial.grid.n).into());
    }
    let violations = coeffs.validate(t0, params.t_final.max(t0));
    if !violations.is_empty() {
        return Err(EvolveError::InvalidCoefficients(violations).into());
    }
    let schedule = params.schedule(t0);
    let mut state = initial.clone();
    let first = state.observables();
    let mut traj = Trajectory3D {
        observables: vec![first],
        final_state: state.clone(),
        steps: 0,
        norm_drift: 0.0,
    };
    let last = schedule.len() - 1;
    for (k, win) in schedule.windows(2).enumerate() {
        let (ta, tb) = (win[0], win[1]);
        let res = step_3d(&mut state, coeffs, ta, tb - ta, params.variant);
        state.time = tb;
        traj.steps = k + 1;
        let failed = match res {
            Err(e) => Some(e),
            Ok(()) => {
                let ratio = state.wall_ratio();
                (ratio > params.leak_threshold).then_some(EvolveError::Leak {
                    t: tb,
                    ratio,
                    threshold: params.leak_threshold,
                })
            }
        };
        if let Some(error) = failed {
            traj.final_state = state;
            return Err(EvolveFailure {
                error,
                partial: Some(traj),
            });
        }
        if (k + 1) % params.snapshot_every == 0 || k + 1 == last {
            let obs = state.observables();
            traj.norm_drift = traj.norm_drift.max((obs.norm - first.norm).abs());
            traj.observables.push(obs);
        }
    }
    traj.final_state = state;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GaussianState;

    #[test]
    fn product_layout() {
        let g = GridSpec1D::new(-12.0, 12.0, 24).unwrap();
        let x = GaussianState::packet(0.5, 0.0, 1.0, 1.0).unwrap().sample(&g, 0.0).unwrap();
        let y = GaussianState::packet(-0.5, 0.0, 1.0, 1.0).unwrap();
        let y = WaveState::new(g, g.points().map(|p| y.eval(p)).collect(), 0.0).unwrap();
        let s = WaveState3D::product(&x, &y, &x).unwrap();
        assert_eq!(s.amp[s.index(3, 5, 7)], x.amp[3] * y.amp[5] * x.amp[7]);
        let o = s.observables();
        assert!((o.mean[0] - 0.5).abs() < 1e-6);
        assert!((o.mean[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_oversized_grid() {
        let g = GridSpec1D::new(-6.0, 6.0, 129).unwrap();
        let x = WaveState::new(g, vec![Complex64::new(0.0, 0.0); 129], 0.0).unwrap();
        assert!(matches!(
            WaveState3D::product(&x, &x, &x),
            Err(EvolveError::TooLarge(129))
        ));
    }
}
