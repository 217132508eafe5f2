//! Gaussian moment substitution.
//!
//! With the normalization `C = √(a/(iπħε))`,
//! `C∫exp(iη²a/ħε) ηᵏ dη` equals `1, 0, iħε/2a, 0, −¾ħ²ε²/a²` for
//! `k = 0..4`.

use super::poly::{CRat, Sym, SymPoly};
use super::SymbolicError;

/// The normalized moment `C∫exp(iη²a/ħε) ηᵏ dη` as a polynomial.
pub fn moment(k: i32) -> Result<SymPoly, SymbolicError> {
    use Sym::*;
    Ok(match k {
        0 => SymPoly::one(),
        1 | 3 => SymPoly::zero(),
        2 => SymPoly::mono(CRat::imag(1, 2), &[(Hbar, 1), (Eps, 1), (A, -1)]),
        4 => SymPoly::mono(CRat::real(-3, 4), &[(Hbar, 2), (Eps, 2), (A, -2)]),
        _ => return Err(SymbolicError::MomentOrder(k)),
    })
}

/// Replaces every power of `η` by its moment and drops everything of
/// order `ε²` or higher.
pub fn apply_moments(poly: &SymPoly) -> Result<SymPoly, SymbolicError> {
    let mut out = SymPoly::zero();
    for (m, c) in poly.terms() {
        let k = m.exp(Sym::Eta);
        let rule = moment(k)?;
        let base = SymPoly::term(c.clone(), m.clone().with_exp(Sym::Eta, 0));
        out += &(&base * &rule);
    }
    Ok(out.filter(|m| m.exp(Sym::Eps) < 2))
}
