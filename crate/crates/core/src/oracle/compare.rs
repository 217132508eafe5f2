//! Grid-versus-oracle cross-validation and step-size sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::Variant;
use crate::coefficients::CoefficientSet;
use crate::evolve::{evolve_1d, EvolveParams};
use crate::grid::{GaussianState, GridSpec1D, Observables, WaveState};

use super::riccati::riccati_evolve;
use super::short_time::short_time_step;
use super::OracleError;

/// Step sizes used by the default convergence sweep.
pub const SWEEP_EPS: [f64; 7] = [1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4];

/// Riccati tolerance used by sweeps; well below the smallest distance.
pub const SWEEP_TOLERANCE: f64 = 1e-14;

/// `|ΔA| + |ΔB| + |ΔC|`.
pub fn parameter_distance(p: &GaussianState, q: &GaussianState) -> f64 {
    (p.a - q.a).norm() + (p.b - q.b).norm() + (p.c - q.c).norm()
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept)`.
pub fn loglog_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSweep {
    pub variant: Variant,
    pub points: Vec<SweepPoint>,
    pub slope: f64,
    pub intercept: f64,
}

impl EpsSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,distance\n");
        for p in &self.points {
            out.push_str(&format!("{:e},{:e}\n", p.eps, p.distance));
        }
        out
    }
}

/// Distance between one short-time step of length `eps` and the `variant`
/// flow over the same interval, for each `eps`, plus the log–log fit.
pub fn eps_sweep(
    gauss: &GaussianState,
    coeffs: &CoefficientSet,
    t: f64,
    eps_values: &[f64],
    variant: Variant,
    tol: f64,
) -> Result<EpsSweep, OracleError> {
    let points = eps_values
        .par_iter()
        .map(|&eps| {
            let step = short_time_step(gauss, coeffs, t, eps)?;
            let flow = riccati_evolve(gauss, coeffs, t, t + eps, variant, tol)?;
            Ok(SweepPoint {
                eps,
                distance: parameter_distance(&step, flow.last()),
            })
        })
        .collect::<Result<Vec<_>, OracleError>>()?;
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.eps, p.distance)).collect();
    let (slope, intercept) = loglog_fit(&pairs);
    Ok(EpsSweep {
        variant,
        points,
        slope,
        intercept,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    pub t: f64,
    pub max_abs_diff: f64,
    pub grid: Observables,
    pub oracle: Observables,
    /// `|‖ψ‖` from the closed form `−` the same norm on the grid`|`.
    pub norm_consistency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub grid_variant: Variant,
    pub oracle_variant: Variant,
    pub checkpoints: Vec<Checkpoint>,
    pub max_abs_diff: f64,
    pub max_observable_delta: f64,
    pub max_norm_inconsistency: f64,
}

fn closed_form_observables(g: &GaussianState, t: f64, hbar: f64) -> Observables {
    let norm_sq = g.norm_sq();
    let mean = g.mean_x();
    Observables {
        t,
        norm: norm_sq.sqrt(),
        mean_x: mean,
        mean_x2: g.variance_x() + mean * mean,
        mean_p: g.mean_p(hbar),
    }
}

fn obs_delta(a: &Observables, b: &Observables) -> f64 {
    [
        a.norm - b.norm,
        a.mean_x - b.mean_x,
        a.mean_x2 - b.mean_x2,
        a.mean_p - b.mean_p,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max)
}

/// Evaluates `g` on every node without the coverage check.
pub fn sample_unchecked(g: &GaussianState, grid: &GridSpec1D, time: f64) -> WaveState {
    WaveState {
        grid: *grid,
        amp: grid.points().map(|x| g.eval(x)).collect(),
        time,
    }
}

/// Runs the grid evolver from the sampled `initial` and the Riccati flow
/// (in `oracle_variant`) from the same parameters, comparing them at each
/// observables checkpoint of the grid run.
pub fn cross_validate(
    initial: &GaussianState,
    coeffs: &CoefficientSet,
    t0: f64,
    grid: &GridSpec1D,
    params: &EvolveParams,
    oracle_variant: Variant,
    tol: f64,
) -> Result<CrossValidation, OracleError> {
    let start = initial.sample(grid, t0)?;
    let params = params.clone().keeping_snapshots();
    let traj = evolve_1d(&start, coeffs, &params).map_err(|f| OracleError::Evolve(f.error))?;
    let hbar = coeffs.hbar;

    let mut gauss = *initial;
    let mut t = t0;
    let mut report = CrossValidation {
        grid_variant: params.variant,
        oracle_variant,
        checkpoints: Vec::with_capacity(traj.snapshots.len()),
        max_abs_diff: 0.0,
        max_observable_delta: 0.0,
        max_norm_inconsistency: 0.0,
    };
    for (snap, grid_obs) in traj.snapshots.iter().zip(&traj.observables) {
        if snap.time > t {
            gauss = *riccati_evolve(&gauss, coeffs, t, snap.time, oracle_variant, tol)?.last();
            t = snap.time;
        }
        let sampled = sample_unchecked(&gauss, grid, t);
        let oracle = closed_form_observables(&gauss, t, hbar);
        let cp = Checkpoint {
            t,
            max_abs_diff: snap.max_abs_diff(&sampled)?,
            grid: *grid_obs,
            oracle,
            norm_consistency: (oracle.norm - sampled.norm()).abs(),
        };
        report.max_abs_diff = report.max_abs_diff.max(cp.max_abs_diff);
        report.max_observable_delta = report.max_observable_delta.max(obs_delta(grid_obs, &oracle));
        report.max_norm_inconsistency = report.max_norm_inconsistency.max(cp.norm_consistency);
        report.checkpoints.push(cp);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = SWEEP_EPS.iter().map(|&e| (e, 3.0 * e * e)).collect();
        let (slope, intercept) = loglog_fit(&pts);
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept - 3f64.ln()).abs() < 1e-10);
    }

    fn audit_coeffs() -> CoefficientSet {
        let mut c = CoefficientSet::free(1.0).unwrap();
        c.b = parse_expr("0.5").unwrap();
        c.c = parse_expr("-0.5").unwrap();
        c.d = parse_expr("0.2").unwrap();
        c.f = parse_expr("0.3").unwrap();
        c.g = parse_expr("0.1").unwrap();
        c
    }

    #[test]
    fn sweep_separates_variants() {
        let g = GaussianState::packet(0.3, 0.4, 0.8, 1.0).unwrap();
        let c = audit_coeffs();
        let re = eps_sweep(&g, &c, 0.0, &SWEEP_EPS, Variant::Rederived, SWEEP_TOLERANCE).unwrap();
        let lit = eps_sweep(&g, &c, 0.0, &SWEEP_EPS, Variant::PaperLiteral, SWEEP_TOLERANCE).unwrap();
        assert!(re.slope >= 1.9, "{re:?}");
        assert!((0.8..=1.2).contains(&lit.slope), "{lit:?}");
    }

    #[test]
    fn free_cross_validation_is_tight() {
        let g = GaussianState::packet(0.0, 1.0, 1.0, 1.0).unwrap();
        let grid = GridSpec1D::new(-20.0, 20.0, 2048).unwrap();
        let params = EvolveParams::new(1e-3, 1.0, Variant::Rederived).with_snapshot_every(250);
        let c = CoefficientSet::free(1.0).unwrap();
        let r = cross_validate(&g, &c, 0.0, &grid, &params, Variant::Rederived, 1e-12).unwrap();
        assert_eq!(r.checkpoints.len(), 5);
        assert!(r.max_abs_diff < 1e-4, "{}", r.max_abs_diff);
        assert!(r.max_norm_inconsistency < 1e-8);
    }
}
