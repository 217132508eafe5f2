//! Concrete coefficients of the generalized Schrödinger equation at one
//! instant.
//!
//! Every assembled equation has the shape
//!
//! ```text
//! iħ ∂ψ/∂t = K ∂²ψ/∂x² + iħ (ℓ x + δ) ∂ψ/∂x + (P₂ x² + P₁ x + P₀ʳ + i P₀ⁱ) ψ
//! ```
//!
//! with `K = kinetic`, `ℓ = drift_linear`, `δ = drift_const`,
//! `P₂ = pot_x2`, `P₁ = pot_x1`, `P₀ʳ = pot_x0_real`, `P₀ⁱ = pot_x0_imag`.
//!
//! The two variants differ only in the sign of the `b²x²/4a` and `d²/4a`
//! blocks. `PaperLiteral` copies the published equation term for term,
//! `Rederived` is what exact second-order expansion of the short-time kernel
//! (equivalently Weyl quantization of `(p − bx − d)²/4a − cx² − fx − g`)
//! produces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{CoefficientError, CoefficientSet, CoefficientValues};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    PaperLiteral,
    #[default]
    Rederived,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::PaperLiteral, Variant::Rederived];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::PaperLiteral => "paper_literal",
            Variant::Rederived => "rederived",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant `{0}`; expected one of: paper_literal, rederived")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_literal" => Ok(Variant::PaperLiteral),
            "rederived" => Ok(Variant::Rederived),
            other => Err(UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
    #[error("the three-dimensional Lagrangian has no `{0}` term, but {0}(t) = {1} at t = {2}")]
    NotIsotropic(&'static str, f64, f64),
}

/// Plain-number PDE coefficients at time `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationTerms {
    pub kinetic: f64,
    pub drift_linear: f64,
    pub drift_const: f64,
    pub pot_x2: f64,
    pub pot_x1: f64,
    pub pot_x0_real: f64,
    pub pot_x0_imag: f64,
    pub variant: Variant,
    pub time: f64,
    pub hbar: f64,
}

impl EquationTerms {
    /// Real part of the potential at `x`.
    #[inline]
    pub fn potential_real(&self, x: f64) -> f64 {
        (self.pot_x2 * x + self.pot_x1) * x + self.pot_x0_real
    }

    /// Imaginary constant left over after the drift term is written in its
    /// symmetrized (formally self-adjoint) form. Zero for every 1D
    /// assembly; nonzero only for the third-split published 3D equation.
    #[inline]
    pub fn non_hermitian_residual(&self) -> f64 {
        self.pot_x0_imag - 0.5 * self.hbar * self.drift_linear
    }

    /// Applies the continuous right-hand side to `ψ = exp(Ax² + Bx + C)`
    /// at `x`, returning `Hψ / ψ`.
    pub fn apply_to_gaussian_exponent(
        &self,
        x: f64,
        a: num_complex::Complex64,
        b: num_complex::Complex64,
    ) -> num_complex::Complex64 {
        use num_complex::Complex64;
        let i = Complex64::i();
        let s1 = 2.0 * a * x + b;
        let s2 = 2.0 * a;
        self.kinetic * (s2 + s1 * s1)
            + i * self.hbar * (self.drift_linear * x + self.drift_const) * s1
            + self.potential_real(x)
            + i * self.pot_x0_imag
    }
}

/// Assembles the 1D equation from coefficient values already sampled at
/// `time`.
pub fn assemble_values(v: &CoefficientValues, time: f64, variant: Variant) -> EquationTerms {
    let four_a = 4.0 * v.a;
    let sign = match variant {
        Variant::PaperLiteral => -1.0,
        Variant::Rederived => 1.0,
    };
    EquationTerms {
        kinetic: -v.hbar * v.hbar / four_a,
        drift_linear: v.b / (2.0 * v.a),
        drift_const: v.d / (2.0 * v.a),
        pot_x2: sign * v.b * v.b / four_a - v.c,
        pot_x1: v.b * v.d / (2.0 * v.a) - v.f,
        pot_x0_real: sign * v.d * v.d / four_a - v.g,
        pot_x0_imag: v.hbar * v.b / four_a,
        variant,
        time,
        hbar: v.hbar,
    }
}

pub fn assemble_1d(
    coeffs: &CoefficientSet,
    t: f64,
    variant: Variant,
) -> Result<EquationTerms, AssemblyError> {
    let v = coeffs.eval_checked(t)?;
    Ok(assemble_values(&v, t, variant))
}

/// Per-axis equations for the isotropic 3D Lagrangian
/// `a ṙ² + b r·ṙ + c r² + g`.
///
/// The three returned equations are identical; summing the axis operators
/// gives the full 3D operator. The scalar `g` is split evenly over the
/// axes. For `PaperLiteral` the published `iħb/4a` constant is split the
/// same way; for `Rederived` each axis keeps its own `iħb/4a`, which is
/// what makes every axis operator (and hence their sum) self-adjoint.
pub fn assemble_3d(
    coeffs: &CoefficientSet,
    t: f64,
    variant: Variant,
) -> Result<[EquationTerms; 3], AssemblyError> {
    let mut v = coeffs.eval_checked(t)?;
    if v.d != 0.0 {
        return Err(AssemblyError::NotIsotropic("d", v.d, t));
    }
    if v.f != 0.0 {
        return Err(AssemblyError::NotIsotropic("f", v.f, t));
    }
    v.g /= 3.0;
    let mut axis = assemble_values(&v, t, variant);
    if variant == Variant::PaperLiteral {
        axis.pot_x0_imag /= 3.0;
    }
    Ok([axis; 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{Case, Coeff};
    use crate::expr::{parse_expr, Expr};
    use std::collections::BTreeMap;

    fn set(a: &str, b: &str, c: &str, d: &str, f: &str, g: &str) -> CoefficientSet {
        let mut s = CoefficientSet::free(1.0).unwrap();
        for (k, v) in Coeff::ALL.into_iter().zip([a, b, c, d, f, g]) {
            *s.get_mut(k) = parse_expr(v).unwrap();
        }
        s
    }

    #[test]
    fn free_reduces_to_standard_equation() {
        let m = 1.7;
        let s = CoefficientSet::free(m).unwrap().with_hbar(1.3).unwrap();
        for variant in Variant::ALL {
            let e = assemble_1d(&s, 0.0, variant).unwrap();
            assert!((e.kinetic + 1.3 * 1.3 / (2.0 * m)).abs() < 1e-15);
            assert_eq!(
                (e.drift_linear, e.drift_const, e.pot_x2, e.pot_x1, e.pot_x0_real, e.pot_x0_imag),
                (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
            );
        }
    }

    #[test]
    fn case_d_literal_and_rederived() {
        let s = CoefficientSet::preset(
            Case::D,
            &BTreeMap::from([(Coeff::A, Expr::Const(0.5)), (Coeff::D, Expr::Const(2.0))]),
        )
        .unwrap();
        let lit = assemble_1d(&s, 0.0, Variant::PaperLiteral).unwrap();
        assert_eq!(lit.drift_const, 2.0);
        assert_eq!(lit.pot_x0_real, -2.0);
        let red = assemble_1d(&s, 0.0, Variant::Rederived).unwrap();
        assert_eq!(red.drift_const, 2.0);
        assert_eq!(red.pot_x0_real, 2.0);
    }

    #[test]
    fn full_coefficients_by_variant() {
        let s = set("0.5", "1", "0.25", "2", "3", "0.5");
        let lit = assemble_1d(&s, 0.0, Variant::PaperLiteral).unwrap();
        let red = assemble_1d(&s, 0.0, Variant::Rederived).unwrap();
        // b²/4a = 0.5, d²/4a = 2, bd/2a = 2
        assert_eq!(lit.pot_x2, -0.5 - 0.25);
        assert_eq!(red.pot_x2, 0.5 - 0.25);
        assert_eq!(lit.pot_x0_real, -2.0 - 0.5);
        assert_eq!(red.pot_x0_real, 2.0 - 0.5);
        assert_eq!(lit.pot_x1, 2.0 - 3.0);
        assert_eq!(red.pot_x1, lit.pot_x1);
        assert_eq!(lit.pot_x0_imag, 0.5);
        assert_eq!((lit.drift_linear, lit.drift_const), (red.drift_linear, red.drift_const));
    }

    #[test]
    fn rejects_non_positive_kinetic() {
        let s = set("t - 1", "0", "0", "0", "0", "0");
        assert!(assemble_1d(&s, 0.5, Variant::Rederived).is_err());
        assert!(assemble_1d(&s, 1.5, Variant::Rederived).is_ok());
    }

    #[test]
    fn three_d_third_split() {
        let s = set("0.5", "1", "0", "0", "0", "0");
        let lit = assemble_3d(&s, 0.0, Variant::PaperLiteral).unwrap();
        assert_eq!(lit[0].pot_x2, -0.5);
        assert!((lit[0].pot_x0_imag - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(lit[0], lit[1]);
        assert_eq!(lit[1], lit[2]);

        let free = set("0.5", "0", "0", "0", "0", "0");
        let axes = assemble_3d(&free, 0.0, Variant::Rederived).unwrap();
        assert_eq!(axes[0], assemble_1d(&free, 0.0, Variant::Rederived).unwrap());

        assert!(assemble_3d(&set("0.5", "0", "0", "1", "0", "0"), 0.0, Variant::Rederived).is_err());
        assert!(assemble_3d(&set("0.5", "0", "0", "0", "1", "0"), 0.0, Variant::Rederived).is_err());
    }

    #[test]
    fn three_d_axes_sum_to_full_operator() {
        let s = set("0.7", "0.3", "-0.2", "0", "0", "1.5");
        for variant in Variant::ALL {
            let full = assemble_1d(&s, 0.0, variant).unwrap();
            let axes = assemble_3d(&s, 0.0, variant).unwrap();
            let g_sum: f64 = axes.iter().map(|e| e.pot_x0_real).sum();
            assert!((g_sum - full.pot_x0_real).abs() < 1e-14);
            let imag_sum: f64 = axes.iter().map(|e| e.pot_x0_imag).sum();
            let expected = match variant {
                Variant::PaperLiteral => full.pot_x0_imag,
                Variant::Rederived => 3.0 * full.pot_x0_imag,
            };
            assert!((imag_sum - expected).abs() < 1e-14);
            for e in axes {
                assert_eq!(e.pot_x2, full.pot_x2);
                assert_eq!(e.drift_linear, full.drift_linear);
                assert_eq!(e.kinetic, full.kinetic);
            }
        }
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("rederived".parse::<Variant>().unwrap(), Variant::Rederived);
        let err = "bogus".parse::<Variant>().unwrap_err();
        assert!(err.to_string().contains("paper_literal"));
        assert_eq!(Variant::default(), Variant::Rederived);
    }
}
