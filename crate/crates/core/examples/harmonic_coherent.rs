//! A coherent state in `L = ½ẋ² − ½x²` oscillates as `x₀ cos t`.
//! Also shows the two equation variants agreeing when `b = d = 0`.
//!
//! ```bash
//! cargo run --release -p qlag --example harmonic_coherent
//! ```

use std::f64::consts::PI;

use qlag::coefficients::harmonic_stiffness;
use qlag::evolve::{evolve_1d, EvolveParams};
use qlag::{CoefficientSet, Expr, GaussianState, GridSpec1D, Variant};

fn main() {
    let (mass, omega, x0) = (1.0, 1.0, 1.0);
    let coeffs = CoefficientSet::from_standard(
        mass,
        harmonic_stiffness(mass, omega),
        Expr::zero(),
        Expr::zero(),
    )
    .unwrap();
    let grid = GridSpec1D::new(-20.0, 20.0, 2048).unwrap();
    let sigma = (1.0 / (2.0 * mass * omega)).sqrt();
    let psi0 = GaussianState::packet(x0, 0.0, sigma, 1.0).unwrap().sample(&grid, 0.0).unwrap();

    let mut finals = Vec::new();
    for variant in Variant::ALL {
        let params = EvolveParams::new(1e-3, 2.0 * PI / omega, variant).with_snapshot_every(785);
        let traj = evolve_1d(&psi0, &coeffs, &params).unwrap();
        println!("[{variant}]");
        for o in &traj.observables {
            let width = (o.mean_x2 - o.mean_x * o.mean_x).sqrt();
            println!("  t = {:5.3}  <x> = {:+.6}  x0 cos wt = {:+.6}  width = {width:.6}", o.t, o.mean_x, x0 * (omega * o.t).cos());
        }
        finals.push(traj.final_state);
    }
    println!("max |psi_literal - psi_rederived| = {:.1e}", finals[0].max_abs_diff(&finals[1]).unwrap());
}
