//! Distance between one short-time kernel step and the Riccati flow of
//! each equation variant, as a function of the step length.
//!
//! ```bash
//! cargo run --release -p qlag --example oracle_convergence
//! ```

use qlag::oracle::{eps_sweep, SWEEP_EPS, SWEEP_TOLERANCE};
use qlag::{parse_expr, CoefficientSet, GaussianState, Variant};

fn main() {
    let mut coeffs = CoefficientSet::free(0.5).unwrap();
    for (slot, src) in [(&mut coeffs.b, "0.5"), (&mut coeffs.c, "-0.5"), (&mut coeffs.d, "0.2"), (&mut coeffs.f, "0.3"), (&mut coeffs.g, "0.1")] {
        *slot = parse_expr(src).unwrap();
    }
    let psi = GaussianState::packet(0.3, 0.4, 0.8, 1.0).unwrap();

    for variant in Variant::ALL {
        let sweep = eps_sweep(&psi, &coeffs, 0.0, &SWEEP_EPS, variant, SWEEP_TOLERANCE).unwrap();
        println!("[{variant}] slope {:.3}", sweep.slope);
        for p in &sweep.points {
            println!("  eps {:8.1e}  D {:10.3e}", p.eps, p.distance);
        }
    }
}
