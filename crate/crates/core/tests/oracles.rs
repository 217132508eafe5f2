mod common;

use common::{coeffs, standard_grid};
use qlag::evolve::EvolveParams;
use qlag::oracle::{compose_short_steps, cross_validate, parameter_distance, riccati_evolve, short_time_step};
use qlag::{GaussianState, Variant};

#[test]
fn composed_short_steps_approach_the_rederived_flow() {
    let c = coeffs("0.5 + 0.1*t", "0.4", "-0.3", "0.2", "0.5", "0.1");
    let g = GaussianState::packet(0.2, -0.3, 0.9, 1.0).unwrap();
    let flow = riccati_evolve(&g, &c, 0.0, 0.5, Variant::Rederived, 1e-12).unwrap();
    let err = |steps| parameter_distance(&compose_short_steps(&g, &c, 0.0, 0.5, steps).unwrap(), flow.last());
    let (coarse, fine) = (err(200), err(400));
    assert!(fine < 1e-3, "{fine}");
    // global error is first order in the step
    let ratio = coarse / fine;
    assert!((1.8..2.2).contains(&ratio), "{ratio}");
    let literal = riccati_evolve(&g, &c, 0.0, 0.5, Variant::PaperLiteral, 1e-12).unwrap();
    assert!(parameter_distance(literal.last(), flow.last()) > 50.0 * fine);
}

#[test]
fn gauge_in_the_oracle_is_exact() {
    // ψ ↦ exp(ibx²/2ħ) ψ under b: only A shifts, by ib/2ħ.
    let b = 0.6;
    let g = GaussianState::packet(0.5, 0.2, 1.0, 1.0).unwrap();
    let free = coeffs("0.5", "0", "0", "0", "0", "0");
    let gauged = coeffs("0.5", "0.6", "0", "0", "0", "0");
    let mut shifted = g;
    shifted.a += num_complex::Complex64::new(0.0, b / 2.0);
    let plain = riccati_evolve(&g, &free, 0.0, 1.0, Variant::Rederived, 1e-12).unwrap();
    let moved = riccati_evolve(&shifted, &gauged, 0.0, 1.0, Variant::Rederived, 1e-12).unwrap();
    let mut expected = *plain.last();
    expected.a += num_complex::Complex64::new(0.0, b / 2.0);
    assert!(parameter_distance(moved.last(), &expected) < 1e-9);
}

#[test]
fn one_short_step_tracks_the_flow_at_second_order() {
    let c = coeffs("0.5", "0.5", "-0.5", "0.2", "0.3", "0.1");
    let g = GaussianState::packet(0.3, 0.4, 0.8, 1.0).unwrap();
    for eps in [1e-3, 1e-4] {
        let step = short_time_step(&g, &c, 0.0, eps).unwrap();
        let flow = riccati_evolve(&g, &c, 0.0, eps, Variant::Rederived, 1e-14).unwrap();
        assert!(parameter_distance(&step, flow.last()) < 10.0 * eps * eps);
    }
}

#[test]
fn variant_mismatch_is_visible_in_cross_validation() {
    let grid = standard_grid();
    let c = coeffs("0.5", "0.4", "-0.5", "0", "0", "0");
    let g = GaussianState::packet(0.5, 0.0, 0.8, 1.0).unwrap();
    let params = EvolveParams::new(1e-3, 1.0, Variant::PaperLiteral).with_snapshot_every(250);
    let r = cross_validate(&g, &c, 0.0, &grid, &params, Variant::Rederived, 1e-12).unwrap();
    assert!(r.max_abs_diff > 1e-2, "{}", r.max_abs_diff);
    let diffs: Vec<f64> = r.checkpoints.iter().map(|c| c.max_abs_diff).collect();
    assert!(diffs.windows(2).all(|w| w[1] >= w[0]), "{diffs:?}");

    let same = EvolveParams::new(1e-3, 1.0, Variant::Rederived).with_snapshot_every(250);
    let r = cross_validate(&g, &c, 0.0, &grid, &same, Variant::Rederived, 1e-12).unwrap();
    assert!(r.max_abs_diff < 1e-4, "{}", r.max_abs_diff);
}
