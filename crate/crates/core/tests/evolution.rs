mod common;

use common::{coeffs, evolve, packet, standard_grid, with_phase};
use qlag::evolve::{evolve_1d, EvolveError, EvolveParams};
use qlag::oracle::loglog_fit;
use qlag::{GridSpec1D, Variant};

fn mean_x_at(dt: f64) -> f64 {
    let grid = standard_grid();
    let harmonic = coeffs("0.5", "0", "-0.5", "0", "0", "0");
    let t = evolve(&packet(&grid, 1.0, 0.3, 0.8), &harmonic, dt, 1.0, Variant::Rederived, 1_000_000);
    t.final_state.expectation_x()
}

#[test]
fn crank_nicolson_is_second_order_in_time() {
    let dts = [4e-2, 2e-2, 1e-2, 5e-3];
    let reference = mean_x_at(1.25e-3);
    let points: Vec<(f64, f64)> = dts
        .iter()
        .map(|&dt| (dt, (mean_x_at(dt) - reference).abs()))
        .collect();
    let (slope, _) = loglog_fit(&points);
    assert!((1.8..=2.2).contains(&slope), "slope {slope}, points {points:?}");
}

#[test]
fn variants_coincide_without_b_and_d() {
    let grid = standard_grid();
    let c = coeffs("0.5 + 0.2*t", "0", "-0.3*cos(t)", "0", "0.4", "0.7");
    let init = packet(&grid, 0.5, -0.2, 1.0);
    let lit = evolve(&init, &c, 2e-3, 0.5, Variant::PaperLiteral, 50);
    let re = evolve(&init, &c, 2e-3, 0.5, Variant::Rederived, 50);
    assert_eq!(lit.final_state.amp, re.final_state.amp);
}

#[test]
fn d_gauge_holds_up_to_a_global_phase_under_paper_literal() {
    // The literal d-block only differs by a constant potential, which is
    // a global phase: the density still matches.
    let grid = GridSpec1D::new(-15.0, 15.0, 4096).unwrap();
    let base = packet(&grid, 0.0, 0.0, 1.0);
    let d = 0.5;
    let phase = |x: f64| d * x;
    let free = coeffs("0.5", "0", "0", "0", "0", "0");
    let gauged = coeffs("0.5", "0", "0", "0.5", "0", "0");
    let reference = evolve(&base, &free, 1e-3, 1.0, Variant::PaperLiteral, 1000).final_state;
    let moved = evolve(&with_phase(&base, phase), &gauged, 1e-3, 1.0, Variant::PaperLiteral, 1000).final_state;
    let expected = with_phase(&reference, phase);
    let pointwise = moved.max_abs_diff(&expected).unwrap();
    assert!(pointwise > 1e-2, "{pointwise}");
    let overlap = moved.overlap(&expected).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-8, "{overlap}");
}

#[test]
fn leak_guard_stops_early_with_partial_trajectory() {
    let grid = GridSpec1D::new(-6.0, 6.0, 384).unwrap();
    let init = packet(&grid, 0.0, 3.0, 0.5);
    let params = EvolveParams::new(1e-3, 3.0, Variant::Rederived).with_snapshot_every(10);
    let failure = evolve_1d(&init, &coeffs("0.5", "0", "0", "0", "0", "0"), &params).unwrap_err();
    assert!(matches!(failure.error, EvolveError::Leak { .. }), "{}", failure.error);
    let partial = failure.partial.expect("partial trajectory");
    assert!(partial.steps > 0 && partial.steps < 3000);
}

#[test]
fn nonpositive_mass_is_rejected_before_stepping() {
    let grid = standard_grid();
    let params = EvolveParams::new(1e-2, 1.0, Variant::Rederived);
    let failure = evolve_1d(&packet(&grid, 0.0, 0.0, 1.0), &coeffs("t - 0.5", "0", "0", "0", "0", "0"), &params)
        .unwrap_err();
    assert!(matches!(failure.error, EvolveError::InvalidCoefficients(_)), "{}", failure.error);
}

#[test]
fn time_dependent_mass_conserves_norm() {
    let grid = standard_grid();
    let c = coeffs("0.5 + 0.25*sin(3*t)", "0.2*cos(t)", "-0.5", "0.1", "0.3*t", "0");
    for v in Variant::ALL {
        let t = evolve(&packet(&grid, 0.2, 0.1, 1.0), &c, 1e-3, 1.0, v, 100);
        assert!(t.norm_drift < 1e-10, "{v}: {}", t.norm_drift);
    }
}
