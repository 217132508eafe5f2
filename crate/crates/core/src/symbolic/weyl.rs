//! Canonical quantization of the classical Hamiltonian, used as an
//! independent route to the equation.
//!
//! With `p = ∂L/∂ẋ = 2aẋ + bx + d` the Legendre transform gives
//! `H = (p − bx − d)²/4a − cx² − fx − g`. Products of `x` and `p` are
//! symmetrized (`xp → ½(x̂p̂ + p̂x̂)`) and the result is normal ordered with
//! `p̂ = −iħ∂ₓ`.
//!
//! Operators are stored as [`SymPoly`]s whose `ψ⁽ᵏ⁾` marker is read as
//! `∂ₓᵏ` standing to the right of all coefficient functions.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::derive::SymbolicPde;
use super::poly::{CRat, Monomial, Sym, SymPoly};
use super::SymbolicError;

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(n - j)) / {
        (1..=k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(j))
    }
}

/// A multiplication operator (function of `x`, no derivative).
pub fn multiplication(f: &SymPoly) -> SymPoly {
    f.map_monomials(|m| {
        assert!(m.psi().is_none(), "multiplication operand carries a marker");
        m.clone().with_psi(Some(0))
    })
}

/// `p̂ = −iħ ∂ₓ`.
pub fn momentum() -> SymPoly {
    SymPoly::term(
        CRat::imag(-1, 1),
        Monomial::one().with_exp(Sym::Hbar, 1).with_psi(Some(1)),
    )
}

/// Composition of two normal-ordered operators, using
/// `∂ᵐ g = Σⱼ C(m, j) g⁽ʲ⁾ ∂ᵐ⁻ʲ`.
pub fn compose(lhs: &SymPoly, rhs: &SymPoly) -> SymPoly {
    let mut out = SymPoly::zero();
    for (ml, cl) in lhs.terms() {
        let m = ml.psi().expect("operator term without derivative order") as u32;
        let f = SymPoly::term(cl.clone(), ml.clone().with_psi(None));
        for (mr, cr) in rhs.terms() {
            let n = mr.psi().expect("operator term without derivative order") as u32;
            let mut g = SymPoly::term(cr.clone(), mr.clone().with_psi(None));
            for j in 0..=m {
                let k = CRat::new(
                    BigRational::from_integer(binomial(m, j)),
                    BigRational::from_integer(BigInt::from(0)),
                );
                let order = (m - j + n) as u8;
                let prod = (&f * &g).scale(&k).map_monomials(|mm| mm.clone().with_psi(Some(order)));
                out += &prod;
                g = g.d_dx();
            }
        }
    }
    out
}

/// Symmetrized product `½(AB + BA)`.
pub fn symmetrized(lhs: &SymPoly, rhs: &SymPoly) -> SymPoly {
    (&compose(lhs, rhs) + &compose(rhs, lhs)).scale(&CRat::real(1, 2))
}

/// The quantized Hamiltonian as the right-hand side of `iħψₜ = Ĥψ`,
/// with the listed coefficient symbols set to zero.
pub fn quantized_hamiltonian(zero: &[Sym]) -> Result<SymbolicPde, SymbolicError> {
    use Sym::*;
    let keep = |s: Sym, p: SymPoly| if zero.contains(&s) { SymPoly::zero() } else { p };
    // w(x) = b x + d
    let w = &keep(B, SymPoly::mono(CRat::one(), &[(B, 1), (X, 1)]))
        + &keep(D, SymPoly::sym(D));
    let w_op = multiplication(&w);
    let p = momentum();
    // (p − w)² = p² − 2·sym(w, p) + w²
    let kinetic = &(&compose(&p, &p) - &symmetrized(&w_op, &p).scale(&CRat::real(2, 1)))
        + &compose(&w_op, &w_op);
    let kinetic = kinetic.shift(&[(A, -1)]).scale(&CRat::real(1, 4));
    let potential = &(&keep(C, SymPoly::mono(CRat::one(), &[(C, 1), (X, 2)]))
        + &keep(F, SymPoly::mono(CRat::one(), &[(F, 1), (X, 1)])))
        + &keep(G, SymPoly::sym(G));
    let h = &kinetic - &multiplication(&potential);
    SymbolicPde::from_operator(h)
}
