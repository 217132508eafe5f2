//! From the expanded kernel to the PDE: match `ψ + ε∂ₜψ` against the
//! moment-substituted expansion and read off `iħ∂ₜψ`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::kernel::{expand_kernel, DerivationConfig};
use super::moments::apply_moments;
use super::poly::{CRat, Monomial, Sym, SymPoly};
use super::SymbolicError;

/// The seven slots of the one-dimensional equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PdeTerm {
    /// coefficient of `∂²ψ/∂x²`
    D2Psi,
    /// coefficient of `x ∂ψ/∂x`
    XDPsi,
    /// coefficient of `∂ψ/∂x`
    DPsi,
    /// coefficient of `x² ψ`
    X2Psi,
    /// coefficient of `x ψ`
    XPsi,
    /// real part of the coefficient of `ψ`
    PsiReal,
    /// imaginary part of the coefficient of `ψ`
    PsiImag,
}

impl PdeTerm {
    pub const ALL: [PdeTerm; 7] = [
        PdeTerm::D2Psi,
        PdeTerm::XDPsi,
        PdeTerm::DPsi,
        PdeTerm::X2Psi,
        PdeTerm::XPsi,
        PdeTerm::PsiReal,
        PdeTerm::PsiImag,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PdeTerm::D2Psi => "d2psi/dx2",
            PdeTerm::XDPsi => "x*dpsi/dx",
            PdeTerm::DPsi => "dpsi/dx",
            PdeTerm::X2Psi => "x^2*psi",
            PdeTerm::XPsi => "x*psi",
            PdeTerm::PsiReal => "psi (real)",
            PdeTerm::PsiImag => "psi (imag)",
        }
    }

    /// Slot of a `(ψ-derivative order, power of x)` pair.
    fn slot(psi: u8, x_pow: i32) -> Option<PdeTerm> {
        match (psi, x_pow) {
            (2, 0) => Some(PdeTerm::D2Psi),
            (1, 1) => Some(PdeTerm::XDPsi),
            (1, 0) => Some(PdeTerm::DPsi),
            (0, 2) => Some(PdeTerm::X2Psi),
            (0, 1) => Some(PdeTerm::XPsi),
            (0, 0) => Some(PdeTerm::PsiReal),
            _ => None,
        }
    }
}

impl fmt::Display for PdeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Right-hand side of `iħ ∂ψ/∂t = …` as a polynomial in `x`, `ψ⁽ᵏ⁾` and
/// the coefficient symbols, together with its split into the seven slots.
/// The split coefficients never contain `x`; the `PsiReal` / `PsiImag`
/// pair is real-valued (symbols are real).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPde {
    pub operator: SymPoly,
    pub terms: BTreeMap<PdeTerm, SymPoly>,
}

impl SymbolicPde {
    pub fn from_operator(operator: SymPoly) -> Result<Self, SymbolicError> {
        let mut raw: BTreeMap<PdeTerm, SymPoly> = BTreeMap::new();
        for (m, c) in operator.terms() {
            let psi = m.psi().ok_or_else(|| SymbolicError::Unmatched(m.to_string()))?;
            let x_pow = m.exp(Sym::X);
            let slot =
                PdeTerm::slot(psi, x_pow).ok_or_else(|| SymbolicError::Unmatched(m.to_string()))?;
            let stripped = m.clone().with_exp(Sym::X, 0).with_psi(None);
            raw.entry(slot).or_default().add_term(stripped, c.clone());
        }
        let mut terms = BTreeMap::new();
        for t in PdeTerm::ALL {
            let p = raw.get(&t).cloned().unwrap_or_default();
            let p = match t {
                PdeTerm::PsiReal => p.re_part(),
                PdeTerm::PsiImag => raw
                    .get(&PdeTerm::PsiReal)
                    .map(SymPoly::im_part)
                    .unwrap_or_default(),
                _ => p,
            };
            terms.insert(t, p);
        }
        Ok(SymbolicPde { operator, terms })
    }

    pub fn term(&self, t: PdeTerm) -> &SymPoly {
        &self.terms[&t]
    }

    /// Sets coefficient symbols to zero in both the operator and the slots.
    pub fn restrict(&self, zero: impl IntoIterator<Item = Sym> + Clone) -> SymbolicPde {
        let apply = |p: &SymPoly| {
            zero.clone()
                .into_iter()
                .fold(p.clone(), |acc, s| acc.substitute_zero(s))
        };
        SymbolicPde {
            operator: apply(&self.operator),
            terms: self.terms.iter().map(|(k, v)| (*k, apply(v))).collect(),
        }
    }
}

impl fmt::Display for SymbolicPde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "i*hbar*dpsi/dt = {}", self.operator)?;
        for (t, p) in &self.terms {
            writeln!(f, "  {:<12} {p}", t.label())?;
        }
        Ok(())
    }
}

/// Runs expansion, moment substitution and order matching.
pub fn derive_pde(cfg: &DerivationConfig) -> Result<SymbolicPde, SymbolicError> {
    let expanded = expand_kernel(cfg);
    let averaged = apply_moments(&expanded)?;
    let order0 = averaged.filter(|m| m.exp(Sym::Eps) == 0);
    let leftover = &order0 - &SymPoly::psi(0);
    if !leftover.is_zero() {
        return Err(SymbolicError::LeftoverMismatch(leftover.to_string()));
    }
    let order1 = averaged.filter(|m| m.exp(Sym::Eps) == 1);
    if let Some((m, _)) = averaged
        .terms()
        .find(|(m, _)| !(0..=1).contains(&m.exp(Sym::Eps)))
    {
        return Err(SymbolicError::Unmatched(m.to_string()));
    }
    // ε ∂ψ/∂t = order1  ⇒  iħ ∂ψ/∂t = iħ · order1 / ε
    let rhs = order1
        .shift(&[(Sym::Eps, -1), (Sym::Hbar, 1)])
        .scale(&CRat::i());
    SymbolicPde::from_operator(rhs)
}

/// The published one-dimensional equation, transcribed term for term:
///
/// ```text
/// iħψₜ = −ħ²/4a ψ″ + iħ/2a (bx + d) ψ′
///        − (b²x²/4a − iħb/4a + d²/4a − bdx/2a + g + fx + cx²) ψ
/// ```
pub fn published_form() -> SymbolicPde {
    use Sym::*;
    let psi = |k: u8, c: CRat, powers: &[(Sym, i32)]| {
        let m = powers
            .iter()
            .fold(Monomial::one().with_psi(Some(k)), |m, &(s, e)| m.with_exp(s, e));
        SymPoly::term(c, m)
    };
    let parts = [
        psi(2, CRat::real(-1, 4), &[(Hbar, 2), (A, -1)]),
        psi(1, CRat::imag(1, 2), &[(Hbar, 1), (A, -1), (B, 1), (X, 1)]),
        psi(1, CRat::imag(1, 2), &[(Hbar, 1), (A, -1), (D, 1)]),
        psi(0, CRat::real(-1, 4), &[(B, 2), (A, -1), (X, 2)]),
        psi(0, CRat::imag(1, 4), &[(Hbar, 1), (B, 1), (A, -1)]),
        psi(0, CRat::real(-1, 4), &[(D, 2), (A, -1)]),
        psi(0, CRat::real(1, 2), &[(B, 1), (D, 1), (A, -1), (X, 1)]),
        psi(0, CRat::real(-1, 1), &[(G, 1)]),
        psi(0, CRat::real(-1, 1), &[(F, 1), (X, 1)]),
        psi(0, CRat::real(-1, 1), &[(C, 1), (X, 2)]),
    ];
    let op = parts.iter().fold(SymPoly::zero(), |acc, p| &acc + p);
    SymbolicPde::from_operator(op).expect("published form is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::kernel::ExpansionMode;

    #[test]
    fn literal_mode_reproduces_published_equation() {
        let pde = derive_pde(&DerivationConfig::new(ExpansionMode::PaperLiteral)).unwrap();
        assert_eq!(pde, published_form());
    }

    #[test]
    fn drift_coefficient_matches() {
        let pde = derive_pde(&DerivationConfig::new(ExpansionMode::PaperLiteral)).unwrap();
        assert_eq!(
            pde.term(PdeTerm::XDPsi),
            &SymPoly::mono(CRat::imag(1, 2), &[(Sym::Hbar, 1), (Sym::A, -1), (Sym::B, 1)])
        );
    }

    #[test]
    fn exact_without_b_and_d_equals_literal() {
        let zero = [Sym::B, Sym::D];
        let lit = derive_pde(&DerivationConfig::new(ExpansionMode::PaperLiteral).with_zero(zero))
            .unwrap();
        let exact =
            derive_pde(&DerivationConfig::new(ExpansionMode::Exact).with_zero(zero)).unwrap();
        assert_eq!(lit, exact);
    }

    #[test]
    fn exact_flips_b_squared_sign() {
        let exact = derive_pde(&DerivationConfig::new(ExpansionMode::Exact)).unwrap();
        let want = &SymPoly::mono(CRat::real(1, 4), &[(Sym::B, 2), (Sym::A, -1)])
            - &SymPoly::sym(Sym::C);
        assert_eq!(exact.term(PdeTerm::X2Psi), &want);
        let want0 = &SymPoly::mono(CRat::real(1, 4), &[(Sym::D, 2), (Sym::A, -1)])
            - &SymPoly::sym(Sym::G);
        assert_eq!(exact.term(PdeTerm::PsiReal), &want0);
    }

    #[test]
    fn higher_orders_do_not_change_the_equation() {
        for mode in ExpansionMode::ALL {
            let base = derive_pde(&DerivationConfig::new(mode)).unwrap();
            for order in 3..=4 {
                let other = derive_pde(&DerivationConfig::new(mode).with_order(order)).unwrap();
                assert_eq!(base, other, "{mode} order {order}");
            }
        }
    }
}
