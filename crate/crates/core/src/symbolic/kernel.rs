//! Short-time kernel expansion.
//!
//! After substituting `x' = x + η` the kernel splits into a leading
//! Gaussian `exp(iη²a/ħε)` times nine small exponential factors. The
//! leading Gaussian is never expanded; it is handled by the moment rules.
//! Everything else is expanded either the way the published derivation
//! writes it out (`PaperLiteral`) or by consistent Taylor series (`Exact`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::poly::{CRat, Monomial, Sym, SymPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMode {
    PaperLiteral,
    Exact,
}

impl ExpansionMode {
    pub const ALL: [ExpansionMode; 2] = [ExpansionMode::PaperLiteral, ExpansionMode::Exact];

    pub fn as_str(self) -> &'static str {
        match self {
            ExpansionMode::PaperLiteral => "paper_literal",
            ExpansionMode::Exact => "exact",
        }
    }
}

impl fmt::Display for ExpansionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExpansionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_literal" => Ok(ExpansionMode::PaperLiteral),
            "exact" => Ok(ExpansionMode::Exact),
            other => Err(format!(
                "unknown mode `{other}`; expected paper_literal or exact"
            )),
        }
    }
}

/// The nine non-leading exponential factors of the substituted kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `exp(−iηbx/ħ)`
    BEtaX,
    /// `exp(−iη²b/2ħ)`
    BEtaSq,
    /// `exp(iεcx²/ħ)`
    CX2,
    /// `exp(iεηcx/ħ)`
    CEtaX,
    /// `exp(iεη²c/4ħ)`
    CEtaSq,
    /// `exp(−iηd/ħ)`
    DEta,
    /// `exp(iεfx/ħ)`
    FX,
    /// `exp(iεηf/2ħ)`
    FEta,
    /// `exp(iεg/ħ)`
    G,
}

impl Factor {
    pub const ALL: [Factor; 9] = [
        Factor::BEtaX,
        Factor::BEtaSq,
        Factor::CX2,
        Factor::CEtaX,
        Factor::CEtaSq,
        Factor::DEta,
        Factor::FX,
        Factor::FEta,
        Factor::G,
    ];

    /// The Lagrangian coefficient the factor belongs to.
    pub fn symbol(self) -> Sym {
        match self {
            Factor::BEtaX | Factor::BEtaSq => Sym::B,
            Factor::CX2 | Factor::CEtaX | Factor::CEtaSq => Sym::C,
            Factor::DEta => Sym::D,
            Factor::FX | Factor::FEta => Sym::F,
            Factor::G => Sym::G,
        }
    }

    /// The exponent `z` of the factor `exp(z)`.
    pub fn exponent(self) -> SymPoly {
        use Sym::*;
        let (c, powers): (CRat, &[(Sym, i32)]) = match self {
            Factor::BEtaX => (CRat::imag(-1, 1), &[(Hbar, -1), (Eta, 1), (B, 1), (X, 1)]),
            Factor::BEtaSq => (CRat::imag(-1, 2), &[(Hbar, -1), (Eta, 2), (B, 1)]),
            Factor::CX2 => (CRat::imag(1, 1), &[(Hbar, -1), (Eps, 1), (C, 1), (X, 2)]),
            Factor::CEtaX => (CRat::imag(1, 1), &[(Hbar, -1), (Eps, 1), (Eta, 1), (C, 1), (X, 1)]),
            Factor::CEtaSq => (CRat::imag(1, 4), &[(Hbar, -1), (Eps, 1), (Eta, 2), (C, 1)]),
            Factor::DEta => (CRat::imag(-1, 1), &[(Hbar, -1), (Eta, 1), (D, 1)]),
            Factor::FX => (CRat::imag(1, 1), &[(Hbar, -1), (Eps, 1), (F, 1), (X, 1)]),
            Factor::FEta => (CRat::imag(1, 2), &[(Hbar, -1), (Eps, 1), (Eta, 1), (F, 1)]),
            Factor::G => (CRat::imag(1, 1), &[(Hbar, -1), (Eps, 1), (G, 1)]),
        };
        SymPoly::mono(c, powers)
    }

    /// The truncated series the published derivation uses for this factor:
    /// first order everywhere, plus a second-order term `+½(ηbx/ħ)²` or
    /// `+½(ηd/ħ)²` for the two factors linear in `η`.
    pub fn published_series(self) -> SymPoly {
        use Sym::*;
        let z = self.exponent();
        let mut s = &SymPoly::one() + &z;
        match self {
            Factor::BEtaX => {
                s += &SymPoly::mono(CRat::real(1, 2), &[(Eta, 2), (Hbar, -2), (B, 2), (X, 2)]);
            }
            Factor::DEta => {
                s += &SymPoly::mono(CRat::real(1, 2), &[(Eta, 2), (Hbar, -2), (D, 2)]);
            }
            _ => {}
        }
        s
    }

    /// `Σ zᵏ/k!` truncated at grade `max_grade`.
    pub fn taylor_series(self, max_grade: i32) -> SymPoly {
        taylor_exp(&self.exponent(), max_grade)
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(j))
}

/// `exp(z)` for a single-monomial `z` of positive grade, truncated.
fn taylor_exp(z: &SymPoly, max_grade: i32) -> SymPoly {
    let grade = z
        .terms()
        .map(|(m, _)| m.grade())
        .min()
        .expect("non-empty exponent");
    assert!(grade > 0, "exponent must have positive grade");
    let mut out = SymPoly::zero();
    let mut k = 0u32;
    while (k as i32) * grade <= max_grade {
        let term = z.pow_truncated(k, Some(max_grade));
        let inv = BigRational::new(BigInt::from(1), factorial(k));
        out += &term.scale(&CRat::new(inv, BigRational::from_integer(BigInt::from(0))));
        k += 1;
    }
    out
}

/// Which coefficients are present and which factors to expand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationConfig {
    pub mode: ExpansionMode,
    /// Truncation order in the grading `deg(η) + 2·deg(ε)`; 2 to 4.
    pub order: i32,
    /// Coefficients treated as symbolically zero (any of b, c, d, f, g).
    pub zero: BTreeSet<Sym>,
    /// Factors replaced by 1 before expansion.
    pub skip_factors: BTreeSet<Factor>,
}

impl DerivationConfig {
    pub fn new(mode: ExpansionMode) -> Self {
        DerivationConfig {
            mode,
            order: 2,
            zero: BTreeSet::new(),
            skip_factors: BTreeSet::new(),
        }
    }

    pub fn with_order(mut self, order: i32) -> Self {
        self.order = order;
        self
    }

    pub fn with_zero(mut self, syms: impl IntoIterator<Item = Sym>) -> Self {
        self.zero.extend(syms);
        self
    }

    pub fn skipping(mut self, factors: impl IntoIterator<Item = Factor>) -> Self {
        self.skip_factors.extend(factors);
        self
    }

    fn factors(&self) -> impl Iterator<Item = Factor> + '_ {
        Factor::ALL
            .into_iter()
            .filter(|f| !self.zero.contains(&f.symbol()) && !self.skip_factors.contains(f))
    }
}

/// `ψ(x + η)` expanded to the given order in `η`.
pub fn psi_series(max_order: i32) -> SymPoly {
    let mut out = SymPoly::zero();
    for k in 0..=max_order.max(0) as u32 {
        let c = CRat::new(
            BigRational::new(BigInt::from(1), factorial(k)),
            BigRational::from_integer(BigInt::from(0)),
        );
        out.add_term(
            Monomial::one()
                .with_exp(Sym::Eta, k as i32)
                .with_psi(Some(k as u8)),
            c,
        );
    }
    out
}

/// Product of the expanded kernel factors and the expanded `ψ(x + η)`,
/// truncated at grade `cfg.order`.
pub fn expand_kernel(cfg: &DerivationConfig) -> SymPoly {
    assert!(
        (2..=4).contains(&cfg.order),
        "expansion order must be 2, 3 or 4"
    );
    let max = Some(cfg.order);
    let mut acc = SymPoly::one();
    for factor in cfg.factors() {
        let series = match cfg.mode {
            ExpansionMode::PaperLiteral => factor.published_series(),
            ExpansionMode::Exact => factor.taylor_series(cfg.order),
        };
        acc = acc.mul_truncated(&series, max);
    }
    let psi = match cfg.mode {
        ExpansionMode::PaperLiteral => psi_series(2),
        ExpansionMode::Exact => psi_series(cfg.order),
    };
    acc.mul_truncated(&psi, max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta2_psi() -> Monomial {
        Monomial::one().with_exp(Sym::Eta, 2).with_psi(Some(0))
    }

    fn eta2_psi_coeff(p: &SymPoly) -> SymPoly {
        p.filter(|m| m.exp(Sym::Eta) == 2 && m.psi() == Some(0))
            .shift(&[(Sym::Eta, -2)])
            .map_monomials(|m| m.clone().with_psi(None))
    }

    #[test]
    fn all_coefficients_zero_leaves_psi_series() {
        let cfg = DerivationConfig::new(ExpansionMode::Exact)
            .with_zero([Sym::B, Sym::C, Sym::D, Sym::F, Sym::G]);
        let p = expand_kernel(&cfg);
        let expected = &(&SymPoly::psi(0)
            + &SymPoly::term(CRat::one(), Monomial::one().with_exp(Sym::Eta, 1).with_psi(Some(1))))
            + &SymPoly::term(
                CRat::real(1, 2),
                Monomial::one().with_exp(Sym::Eta, 2).with_psi(Some(2)),
            );
        assert_eq!(p, expected);
    }

    #[test]
    fn b_only_second_order_coefficient_by_mode() {
        let zero = [Sym::C, Sym::D, Sym::F, Sym::G];
        let lit = expand_kernel(
            &DerivationConfig::new(ExpansionMode::PaperLiteral).with_zero(zero),
        );
        let exact = expand_kernel(&DerivationConfig::new(ExpansionMode::Exact).with_zero(zero));
        let b2x2 = |c| SymPoly::mono(c, &[(Sym::Hbar, -2), (Sym::B, 2), (Sym::X, 2)]);
        let ib = SymPoly::mono(CRat::imag(-1, 2), &[(Sym::Hbar, -1), (Sym::B, 1)]);
        assert_eq!(eta2_psi_coeff(&lit), &b2x2(CRat::real(1, 2)) + &ib);
        assert_eq!(eta2_psi_coeff(&exact), &b2x2(CRat::real(-1, 2)) + &ib);
        assert!(lit.coeff(&eta2_psi()).is_zero());
    }

    #[test]
    fn exact_series_matches_exp_definition() {
        // exp(−iηd/ħ) to grade 4: 1 + z + z²/2 + z³/6 + z⁴/24
        let s = Factor::DEta.taylor_series(4);
        assert_eq!(s.len(), 5);
        let z4 = Monomial::one()
            .with_exp(Sym::Eta, 4)
            .with_exp(Sym::Hbar, -4)
            .with_exp(Sym::D, 4);
        assert_eq!(s.coeff(&z4), CRat::real(1, 24));
        // ε-carrying factors stop at first order below grade 4
        assert_eq!(Factor::G.taylor_series(3).len(), 2);
        assert_eq!(Factor::G.taylor_series(4).len(), 3);
    }

    #[test]
    fn truncation_respects_grade() {
        for order in 2..=4 {
            for mode in ExpansionMode::ALL {
                let p = expand_kernel(&DerivationConfig::new(mode).with_order(order));
                assert!(p.terms().all(|(m, _)| m.grade() <= order));
                assert!(p.terms().all(|(m, _)| m.psi().is_some()));
            }
        }
    }
}
