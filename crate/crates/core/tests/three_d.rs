mod common;

use common::coeffs;
use qlag::assembly::assemble_3d;
use qlag::evolve::{evolve_3d_isotropic, EvolveParams, WaveState3D};
use qlag::{GaussianState, GridSpec1D, Variant};

fn cube(n: usize) -> WaveState3D {
    let grid = GridSpec1D::new(-10.0, 10.0, n).unwrap();
    let s = GaussianState::packet(0.3, 0.0, 1.0, 1.0).unwrap().sample(&grid, 0.0).unwrap();
    WaveState3D::product(&s, &s, &s).unwrap()
}

#[test]
fn axis_terms_sum_to_the_full_operator() {
    let c = coeffs("0.5", "0.3", "-0.2", "0", "0", "0.6");
    for v in Variant::ALL {
        let axes = assemble_3d(&c, 0.0, v).unwrap();
        let g_sum: f64 = axes.iter().map(|e| e.pot_x0_real).sum();
        assert!((g_sum + 0.6).abs() < 1e-15, "{v}: {g_sum}");
        let imag: f64 = axes.iter().map(|e| e.pot_x0_imag).sum();
        let one_axis = 0.3 / (4.0 * 0.5);
        let want = if v == Variant::Rederived { 3.0 * one_axis } else { one_axis };
        assert!((imag - want).abs() < 1e-15, "{v}: {imag}");
    }
    assert!(assemble_3d(&coeffs("0.5", "0", "0", "0.1", "0", "0"), 0.0, Variant::Rederived).is_err());
}

#[test]
fn published_third_split_does_not_conserve_norm() {
    let c = coeffs("0.5", "0.3", "-0.2", "0", "0", "0");
    let init = cube(40);
    let params = |v| EvolveParams::new(0.01, 0.5, v).with_snapshot_every(10);
    let re = evolve_3d_isotropic(&init, &c, &params(Variant::Rederived)).unwrap();
    let lit = evolve_3d_isotropic(&init, &c, &params(Variant::PaperLiteral)).unwrap();
    assert!(re.norm_drift < 1e-12, "{}", re.norm_drift);
    assert!(lit.norm_drift > 1e-2, "{}", lit.norm_drift);
}
