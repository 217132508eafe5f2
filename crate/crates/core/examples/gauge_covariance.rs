//! Adding `bxẋ` to a Lagrangian is a total derivative, so it should only
//! multiply the wavefunction by `exp(ibx²/2ħ)`. The rederived equation
//! respects this; the published one does not.
//!
//! ```bash
//! cargo run --release -p qlag --example gauge_covariance
//! ```

use num_complex::Complex64;
use qlag::evolve::{evolve_1d, EvolveParams};
use qlag::{parse_expr, CoefficientSet, GaussianState, GridSpec1D, Variant, WaveState};

fn phased(psi: &WaveState, b: f64) -> WaveState {
    let mut out = psi.clone();
    for (k, amp) in out.amp.iter_mut().enumerate() {
        let x = psi.grid.x(k);
        *amp *= Complex64::from_polar(1.0, 0.5 * b * x * x);
    }
    out
}

fn main() {
    let b = 0.5;
    let grid = GridSpec1D::new(-15.0, 15.0, 4096).unwrap();
    let psi0 = GaussianState::packet(0.0, 0.0, 1.0, 1.0).unwrap().sample(&grid, 0.0).unwrap();
    let free = CoefficientSet::free(1.0).unwrap();
    let mut gauged = free.clone();
    gauged.b = parse_expr(&b.to_string()).unwrap();

    for variant in Variant::ALL {
        let params = EvolveParams::new(1e-3, 1.0, variant).with_snapshot_every(1000);
        let plain = evolve_1d(&psi0, &free, &params).unwrap().final_state;
        let moved = evolve_1d(&phased(&psi0, b), &gauged, &params).unwrap().final_state;
        let dev = moved.max_abs_diff(&phased(&plain, b)).unwrap();
        println!("{variant:<14} max |psi_b - exp(ibx^2/2) psi_0| at t = 1: {dev:.3e}");
    }
}
