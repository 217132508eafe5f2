//! One-dimensional Crank–Nicolson stepping.
//!
//! The spatial operator is
//! `H = K∂ₓₓ + iħ·½[w∂ₓ + ∂ₓw] + V(x) + i·r` with `w = ℓx + δ` and
//! `r = P₀ⁱ − ħℓ/2` (zero whenever the imaginary constant is the one
//! produced by symmetrizing the drift). `∂ₓₓ` uses the 3-point stencil; the
//! symmetrized drift uses centered differences with `w` taken at the cell
//! midpoints, which makes the discrete drift block exactly anti-Hermitian
//! times `i`, i.e. Hermitian. Walls are Dirichlet zero.

use num_complex::Complex64;

use crate::assembly::{assemble_1d, EquationTerms};
use crate::coefficients::CoefficientSet;
use crate::grid::{GridSpec1D, WaveState};

use super::tridiag::solve_in_place;
use super::{EvolveError, EvolveFailure, EvolveParams, Trajectory};

/// Reusable buffers for [`cn_line`].
#[derive(Debug, Default, Clone)]
pub struct LineWorkspace {
    lower: Vec<Complex64>,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
    rhs: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl LineWorkspace {
    pub fn new(n: usize) -> Self {
        let m = n.saturating_sub(2);
        let z = Complex64::new(0.0, 0.0);
        LineWorkspace {
            lower: vec![z; m],
            diag: vec![z; m],
            upper: vec![z; m],
            rhs: vec![z; m],
            scratch: vec![z; m],
        }
    }
}

/// Advances one line of amplitudes by `dt` in place. `psi[0]` and
/// `psi[n-1]` are the walls and are set to zero.
pub fn cn_line(
    terms: &EquationTerms,
    grid: &GridSpec1D,
    dt: f64,
    psi: &mut [Complex64],
    ws: &mut LineWorkspace,
) -> Result<(), EvolveError> {
    let n = grid.n;
    debug_assert_eq!(psi.len(), n);
    let m = n - 2;
    if ws.diag.len() != m {
        *ws = LineWorkspace::new(n);
    }
    let h = grid.dx();
    let hbar = terms.hbar;
    let i = Complex64::i();
    let tau = dt / (2.0 * hbar);
    let k_h2 = terms.kinetic / (h * h);
    let drift = |x: f64| hbar * (terms.drift_linear * x + terms.drift_const) / (2.0 * h);
    let resid = terms.non_hermitian_residual();

    for j in 0..m {
        let x = grid.x(j + 1);
        let lo = Complex64::new(k_h2, -drift(x - 0.5 * h));
        let up = Complex64::new(k_h2, drift(x + 0.5 * h));
        let di = Complex64::new(-2.0 * k_h2 + terms.potential_real(x), resid);

        let left = psi[j];
        let centre = psi[j + 1];
        let right = psi[j + 2];
        let h_psi = lo * left + di * centre + up * right;
        ws.rhs[j] = centre - i * tau * h_psi;

        ws.lower[j] = i * tau * lo;
        ws.diag[j] = Complex64::new(1.0, 0.0) + i * tau * di;
        ws.upper[j] = i * tau * up;
    }
    solve_in_place(&ws.lower, &ws.diag, &ws.upper, &mut ws.rhs, &mut ws.scratch).map_err(
        |s| EvolveError::Singular {
            row: s.row + 1,
            t: terms.time,
        },
    )?;
    psi[0] = Complex64::new(0.0, 0.0);
    psi[n - 1] = Complex64::new(0.0, 0.0);
    psi[1..n - 1].copy_from_slice(&ws.rhs);
    Ok(())
}

/// One Crank–Nicolson step from `t` to `t + dt` with the equation
/// assembled at `t + dt/2`. A negative `dt` steps backwards.
pub fn step_1d(
    state: &WaveState,
    coeffs: &CoefficientSet,
    t: f64,
    dt: f64,
    variant: crate::assembly::Variant,
) -> Result<WaveState, EvolveError> {
    let terms = assemble_1d(coeffs, t + 0.5 * dt, variant)?;
    let mut next = state.clone();
    let mut ws = LineWorkspace::new(state.grid.n);
    cn_line(&terms, &state.grid, dt, &mut next.amp, &mut ws)?;
    next.time = t + dt;
    Ok(next)
}

/// Repeated stepping from `initial.time` to `params.t_final`.
pub fn evolve_1d(
    initial: &WaveState,
    coeffs: &CoefficientSet,
    params: &EvolveParams,
) -> Result<Trajectory, EvolveFailure<Trajectory>> {
    let t0 = initial.time;
    params.check(t0)?;
    let violations = coeffs.validate(t0, params.t_final.max(t0));
    if !violations.is_empty() {
        return Err(EvolveError::InvalidCoefficients(violations).into());
    }
    let hbar = coeffs.hbar;
    let schedule = params.schedule(t0);
    let mut state = initial.clone();
    let norm0 = state.norm();
    let mut traj = Trajectory {
        observables: vec![state.observables(hbar)],
        snapshots: if params.keep_snapshots {
            vec![state.clone()]
        } else {
            Vec::new()
        },
        final_state: state.clone(),
        steps: 0,
        norm_drift: 0.0,
    };
    let mut ws = LineWorkspace::new(state.grid.n);
    let last = schedule.len() - 1;
    for (k, win) in schedule.windows(2).enumerate() {
        let (ta, tb) = (win[0], win[1]);
        let dt = tb - ta;
        let step = (|| {
            let terms = assemble_1d(coeffs, ta + 0.5 * dt, params.variant)?;
            cn_line(&terms, &state.grid, dt, &mut state.amp, &mut ws)
        })();
        state.time = tb;
        traj.steps = k + 1;
        let leak = state.wall_ratio();
        let failed = match step {
            Err(e) => Some(e),
            Ok(()) if leak > params.leak_threshold => Some(EvolveError::Leak {
                t: tb,
                ratio: leak,
                threshold: params.leak_threshold,
            }),
            Ok(()) => None,
        };
        if let Some(error) = failed {
            traj.final_state = state;
            return Err(EvolveFailure {
                error,
                partial: Some(traj),
            });
        }
        traj.norm_drift = traj.norm_drift.max((state.norm() - norm0).abs());
        let emit = (k + 1) % params.snapshot_every == 0 || k + 1 == last;
        if emit {
            traj.observables.push(state.observables(hbar));
            if params.keep_snapshots {
                traj.snapshots.push(state.clone());
            }
        }
    }
    traj.final_state = state;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::Variant;
    use crate::coefficients::CoefficientSet;
    use crate::expr::parse_expr;
    use crate::grid::GaussianState;

    fn grid() -> GridSpec1D {
        GridSpec1D::new(-15.0, 15.0, 600).unwrap()
    }

    fn packet() -> WaveState {
        GaussianState::packet(0.5, 0.8, 1.0, 1.0)
            .unwrap()
            .sample(&grid(), 0.0)
            .unwrap()
    }

    fn general() -> CoefficientSet {
        let mut s = CoefficientSet::free(1.0).unwrap();
        s.b = parse_expr("0.3*cos(t)").unwrap();
        s.c = parse_expr("-0.2").unwrap();
        s.d = parse_expr("0.4").unwrap();
        s.f = parse_expr("0.1*t").unwrap();
        s.g = parse_expr("0.7").unwrap();
        s
    }

    #[test]
    fn zero_duration_keeps_initial_observables() {
        let s = packet();
        let coeffs = CoefficientSet::free(1.0).unwrap();
        let traj = evolve_1d(&s, &coeffs, &EvolveParams::new(0.01, 0.0, Variant::Rederived)).unwrap();
        assert_eq!(traj.observables, vec![s.observables(1.0)]);
        assert_eq!(traj.steps, 0);
        assert_eq!(traj.final_state, s);
    }

    #[test]
    fn forward_then_backward_is_identity() {
        let s = packet();
        for variant in Variant::ALL {
            let fwd = step_1d(&s, &general(), 0.2, 0.01, variant).unwrap();
            let back = step_1d(&fwd, &general(), 0.21, -0.01, variant).unwrap();
            // walls are forced to zero by the first step
            let mut expected = s.clone();
            expected.amp[0] = Complex64::new(0.0, 0.0);
            let n = expected.amp.len();
            expected.amp[n - 1] = Complex64::new(0.0, 0.0);
            assert!(back.max_abs_diff(&expected).unwrap() < 1e-9);
        }
    }

    #[test]
    fn general_coefficients_are_unitary() {
        let s = packet();
        for variant in Variant::ALL {
            let p = EvolveParams::new(0.005, 1.0, variant).with_snapshot_every(50);
            let traj = evolve_1d(&s, &general(), &p).unwrap();
            assert!(traj.norm_drift < 1e-10, "{variant}: {}", traj.norm_drift);
            assert_eq!(traj.steps, 200);
            assert_eq!(traj.observables.len(), 5);
        }
    }

    #[test]
    fn leak_guard_trips_with_partial_output() {
        let g = GridSpec1D::new(-8.0, 8.0, 300).unwrap();
        let s = GaussianState::packet(0.0, 4.0, 0.8, 1.0)
            .unwrap()
            .sample(&g, 0.0)
            .unwrap();
        let coeffs = CoefficientSet::free(1.0).unwrap();
        let err = evolve_1d(&s, &coeffs, &EvolveParams::new(0.01, 3.0, Variant::Rederived))
            .unwrap_err();
        assert!(matches!(err.error, EvolveError::Leak { .. }));
        let partial = err.partial.unwrap();
        assert!(partial.steps > 0 && partial.steps < 300);
    }

    #[test]
    fn invalid_coefficients_are_rejected() {
        let mut coeffs = CoefficientSet::free(1.0).unwrap();
        coeffs.a = parse_expr("0.5 - t").unwrap();
        let err = evolve_1d(&packet(), &coeffs, &EvolveParams::new(0.01, 1.0, Variant::Rederived))
            .unwrap_err();
        assert!(matches!(err.error, EvolveError::InvalidCoefficients(_)));
    }
}
