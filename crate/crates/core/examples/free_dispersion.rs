//! Free Gaussian packet on the grid against the spreading law
//! `σ²(t) = σ²(1 + (ħt / 2mσ²)²)`.
//!
//! ```bash
//! cargo run --release -p qlag --example free_dispersion
//! ```

use qlag::evolve::{evolve_1d, EvolveParams};
use qlag::{CoefficientSet, GaussianState, GridSpec1D, Variant};

fn main() {
    let (mass, sigma) = (1.0, 1.0);
    let grid = GridSpec1D::new(-20.0, 20.0, 2048).unwrap();
    let psi0 = GaussianState::packet(0.0, 0.0, sigma, 1.0).unwrap().sample(&grid, 0.0).unwrap();
    let free = CoefficientSet::free(mass).unwrap();
    let params = EvolveParams::new(1e-3, 2.0, Variant::Rederived).with_snapshot_every(250);
    let traj = evolve_1d(&psi0, &free, &params).expect("no leak on this domain");

    println!("{:>6} {:>12} {:>12} {:>10}", "t", "variance", "exact", "rel err");
    for o in &traj.observables {
        let var = o.mean_x2 - o.mean_x * o.mean_x;
        let exact = sigma * sigma * (1.0 + (o.t / (2.0 * mass * sigma * sigma)).powi(2));
        println!("{:>6.3} {var:>12.8} {exact:>12.8} {:>10.2e}", o.t, (var - exact).abs() / exact);
    }
    println!("norm drift {:.2e} over {} steps", traj.norm_drift, traj.steps);
}
