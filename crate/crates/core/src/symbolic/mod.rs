//! Exact re-execution of the short-time path-integral derivation.
//!
//! Pipeline: [`expand_kernel`] → [`apply_moments`] → [`derive_pde`], run in
//! two modes and compared with [`compare_modes`]. All arithmetic is exact
//! (complex rationals over formal symbols); nothing here touches floating
//! point.

pub mod derive;
pub mod kernel;
pub mod moments;
pub mod poly;
pub mod report;
pub mod weyl;

use thiserror::Error;

pub use derive::{derive_pde, published_form, PdeTerm, SymbolicPde};
pub use kernel::{expand_kernel, DerivationConfig, ExpansionMode, Factor};
pub use moments::{apply_moments, moment};
pub use poly::{CRat, Monomial, Sym, SymPoly};
pub use report::{compare_modes, ClaimCheck, Discrepancy, DiscrepancyReport, TermVerdict};
pub use weyl::quantized_hamiltonian;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("no moment rule for eta^{0} (the rules stop at eta^4)")]
    MomentOrder(i32),
    #[error("order eps^0 does not reduce to psi; leftover: {0}")]
    LeftoverMismatch(String),
    #[error("monomial `{0}` does not fit the second-order equation")]
    Unmatched(String),
}

/// Maps a coefficient name (`b`, `c`, `d`, `f`, `g`) to its symbol.
pub fn coefficient_symbol(name: &str) -> Option<Sym> {
    match name {
        "b" => Some(Sym::B),
        "c" => Some(Sym::C),
        "d" => Some(Sym::D),
        "f" => Some(Sym::F),
        "g" => Some(Sym::G),
        _ => None,
    }
}
