use num_complex::Complex64;
use proptest::prelude::*;
use qlag::assembly::{assemble_values, EquationTerms};
use qlag::coefficients::CoefficientValues;
use qlag::Variant;

fn values() -> impl Strategy<Value = CoefficientValues> {
    (0.05f64..5.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, 0.1f64..3.0)
        .prop_map(|(a, b, c, d, f, g, hbar)| CoefficientValues { a, b, c, d, f, g, hbar })
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()))
}

/// Classical Hamiltonian of the Lagrangian, `(p − bx − d)²/4a − cx² − fx − g`,
/// with `p → −iħ∂ₓ` in symmetric (Weyl) order, applied to a Gaussian and
/// divided by it.
fn weyl_on_gaussian(v: &CoefficientValues, x: f64, a: Complex64, b: Complex64) -> Complex64 {
    let i = Complex64::i();
    let h = v.hbar;
    // ψ'/ψ and ψ''/ψ for ψ = exp(ax² + bx)
    let s1 = 2.0 * a * x + b;
    let s2 = 2.0 * a + s1 * s1;
    let p = -i * h * s1;
    let p2 = -h * h * s2;
    let shift = v.b * x + v.d;
    // (p − s)² = p² − (p s + s p) + s², with p s ψ = −iħ b ψ + s p ψ
    let sym = 2.0 * shift * p - i * h * v.b;
    (p2 - sym + shift * shift) / (4.0 * v.a) - v.c * x * x - v.f * x - v.g
}

fn apply(e: &EquationTerms, x: f64, a: Complex64, b: Complex64) -> Complex64 {
    e.apply_to_gaussian_exponent(x, a, b)
}

proptest! {
    #[test]
    fn variants_agree_when_b_and_d_vanish(mut v in values(), t in -2.0f64..2.0) {
        v.b = 0.0;
        v.d = 0.0;
        let lit = assemble_values(&v, t, Variant::PaperLiteral);
        let re = assemble_values(&v, t, Variant::Rederived);
        prop_assert_eq!(
            [lit.kinetic, lit.drift_linear, lit.drift_const, lit.pot_x2, lit.pot_x1, lit.pot_x0_real, lit.pot_x0_imag],
            [re.kinetic, re.drift_linear, re.drift_const, re.pot_x2, re.pot_x1, re.pot_x0_real, re.pot_x0_imag]
        );
    }

    #[test]
    fn variants_share_every_term_except_the_squared_blocks(v in values()) {
        let lit = assemble_values(&v, 0.0, Variant::PaperLiteral);
        let re = assemble_values(&v, 0.0, Variant::Rederived);
        prop_assert_eq!(lit.kinetic, re.kinetic);
        prop_assert_eq!(lit.drift_linear, re.drift_linear);
        prop_assert_eq!(lit.drift_const, re.drift_const);
        prop_assert_eq!(lit.pot_x1, re.pot_x1);
        prop_assert_eq!(lit.pot_x0_imag, re.pot_x0_imag);
        prop_assert!(close(re.pot_x2 - lit.pot_x2, v.b * v.b / (2.0 * v.a)));
        prop_assert!(close(re.pot_x0_real - lit.pot_x0_real, v.d * v.d / (2.0 * v.a)));
    }

    #[test]
    fn rederived_is_the_weyl_quantized_hamiltonian(
        v in values(),
        x in -4.0f64..4.0,
        ar in -2.0f64..-0.1, ai in -2.0f64..2.0,
        br in -2.0f64..2.0, bi in -2.0f64..2.0,
    ) {
        let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        let e = assemble_values(&v, 0.0, Variant::Rederived);
        let got = apply(&e, x, a, b);
        let want = weyl_on_gaussian(&v, x, a, b);
        prop_assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()), "{} vs {}", got, want);
    }

    #[test]
    fn imaginary_constant_symmetrizes_the_drift(v in values()) {
        for variant in Variant::ALL {
            let e = assemble_values(&v, 0.0, variant);
            prop_assert!(close(e.pot_x0_imag, 0.5 * e.hbar * e.drift_linear));
            prop_assert!(e.non_hermitian_residual().abs() < 1e-12);
        }
    }
}
