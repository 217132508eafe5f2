//! Sparse multivariate Laurent polynomials with exact complex-rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `re + i·im` with arbitrary-precision rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn real(n: i64, d: i64) -> Self {
        CRat::new(rat(n, d), BigRational::zero())
    }

    pub fn imag(n: i64, d: i64) -> Self {
        CRat::new(BigRational::zero(), rat(n, d))
    }

    pub fn zero() -> Self {
        CRat::real(0, 1)
    }

    pub fn one() -> Self {
        CRat::real(1, 1)
    }

    pub fn i() -> Self {
        CRat::imag(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        CRat::new(&self.re * k, &self.im * k)
    }

    pub fn re_part(&self) -> Self {
        CRat::new(self.re.clone(), BigRational::zero())
    }

    pub fn im_part(&self) -> Self {
        CRat::new(self.im.clone(), BigRational::zero())
    }
}

impl Add for &CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        CRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        CRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        CRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&fmt_rat(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    f.write_str("i")
                } else if (-self.im.clone()).is_one() {
                    f.write_str("-i")
                } else {
                    write!(f, "{}*i", fmt_rat(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({} {sign} {}*i)",
                    fmt_rat(&self.re),
                    fmt_rat(&self.im.abs())
                )
            }
        }
    }
}

/// Formal symbols. `Hbar` and `A` may carry negative exponents, which is
/// how `ħ⁻¹` and `a⁻¹` are represented; a product `ħ·ħ⁻¹` therefore cancels
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Hbar,
    A,
    B,
    C,
    D,
    F,
    G,
    X,
    Eta,
    Eps,
}

impl Sym {
    pub const ALL: [Sym; 10] = [
        Sym::Hbar,
        Sym::A,
        Sym::B,
        Sym::C,
        Sym::D,
        Sym::F,
        Sym::G,
        Sym::X,
        Sym::Eta,
        Sym::Eps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sym::Hbar => "hbar",
            Sym::A => "a",
            Sym::B => "b",
            Sym::C => "c",
            Sym::D => "d",
            Sym::F => "f",
            Sym::G => "g",
            Sym::X => "x",
            Sym::Eta => "eta",
            Sym::Eps => "eps",
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

/// Exponent vector plus an optional `ψ⁽ᵏ⁾` marker (or `∂ᵏ` when the
/// polynomial is read as a differential operator).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: [i32; 10],
    psi: Option<u8>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: [0; 10],
            psi: None,
        }
    }

    pub fn exp(&self, s: Sym) -> i32 {
        self.exps[s.idx()]
    }

    pub fn psi(&self) -> Option<u8> {
        self.psi
    }

    pub fn with_exp(mut self, s: Sym, e: i32) -> Self {
        self.exps[s.idx()] = e;
        self
    }

    pub fn with_psi(mut self, k: Option<u8>) -> Self {
        self.psi = k;
        self
    }

    /// `deg(η) + 2·deg(ε)`.
    pub fn grade(&self) -> i32 {
        self.exp(Sym::Eta) + 2 * self.exp(Sym::Eps)
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, r) in exps.iter_mut().zip(rhs.exps) {
            *e += r;
        }
        let psi = match (self.psi, rhs.psi) {
            (None, p) | (p, None) => p,
            (Some(a), Some(b)) => panic!("monomial product carries two psi markers ({a}, {b})"),
        };
        Monomial { exps, psi }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for s in Sym::ALL {
            match self.exp(s) {
                0 => {}
                1 => parts.push(s.name().to_string()),
                e => parts.push(format!("{}^{e}", s.name())),
            }
        }
        if let Some(k) = self.psi {
            parts.push(format!("psi{}", "'".repeat(k as usize)));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Exact polynomial; never stores a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, CRat>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn constant(c: CRat) -> Self {
        SymPoly::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        SymPoly::constant(CRat::one())
    }

    pub fn term(c: CRat, m: Monomial) -> Self {
        let mut p = SymPoly::zero();
        p.add_term(m, c);
        p
    }

    /// `coeff · Π symᵉ`, no marker.
    pub fn mono(coeff: CRat, powers: &[(Sym, i32)]) -> Self {
        let m = powers
            .iter()
            .fold(Monomial::one(), |m, &(s, e)| {
                let cur = m.exp(s);
                m.with_exp(s, cur + e)
            });
        SymPoly::term(coeff, m)
    }

    pub fn sym(s: Sym) -> Self {
        SymPoly::mono(CRat::one(), &[(s, 1)])
    }

    /// The marker `ψ⁽ᵏ⁾` with unit coefficient.
    pub fn psi(k: u8) -> Self {
        SymPoly::term(CRat::one(), Monomial::one().with_psi(Some(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: CRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &CRat) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Product keeping only monomials with grade `<= max_grade`.
    pub fn mul_truncated(&self, rhs: &SymPoly, max_grade: Option<i32>) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                let m = ml.mul(mr);
                if max_grade.is_some_and(|g| m.grade() > g) {
                    continue;
                }
                out.add_term(m, cl * cr);
            }
        }
        out
    }

    pub fn pow_truncated(&self, k: u32, max_grade: Option<i32>) -> SymPoly {
        (0..k).fold(SymPoly::one(), |acc, _| acc.mul_truncated(self, max_grade))
    }

    /// Keeps the monomials for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every monomial; results are re-collected.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Monomial) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Sets symbol `s` to zero.
    pub fn substitute_zero(&self, s: Sym) -> SymPoly {
        self.filter(|m| m.exp(s) == 0)
    }

    /// Multiplies every monomial by `Π symᵉ`.
    pub fn shift(&self, powers: &[(Sym, i32)]) -> SymPoly {
        self.map_monomials(|m| {
            powers
                .iter()
                .fold(m.clone(), |m, &(s, e)| {
                    let cur = m.exp(s);
                    m.with_exp(s, cur + e)
                })
        })
    }

    /// Real and imaginary parts of the coefficients, which are the real and
    /// imaginary parts of the polynomial when all symbols are real.
    pub fn re_part(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.re_part());
        }
        out
    }

    pub fn im_part(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.im_part());
        }
        out
    }

    /// `∂/∂x`; every monomial must have a non-negative power of `x`.
    pub fn d_dx(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(Sym::X);
            assert!(e >= 0, "d/dx of a negative power of x");
            if e == 0 {
                continue;
            }
            let k = BigRational::from_integer(BigInt::from(e));
            out.add_term(m.clone().with_exp(Sym::X, e - 1), c.scale(&k));
        }
        out
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&SymPoly> for SymPoly {
    fn add_assign(&mut self, rhs: &SymPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(&CRat::real(-1, 1))
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        self.mul_truncated(rhs, None)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m.to_string();
                if mono == "1" {
                    c.to_string()
                } else if c.is_one() {
                    mono
                } else if c == &CRat::real(-1, 1) {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_powers_cancel() {
        let h = SymPoly::sym(Sym::Hbar);
        let hinv = SymPoly::mono(CRat::one(), &[(Sym::Hbar, -1)]);
        assert_eq!(&h * &hinv, SymPoly::one());
        let a = SymPoly::mono(CRat::one(), &[(Sym::A, 2)]);
        let ainv = SymPoly::mono(CRat::real(1, 2), &[(Sym::A, -2)]);
        assert_eq!(&a * &ainv, SymPoly::constant(CRat::real(1, 2)));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = SymPoly::sym(Sym::X);
        assert!((&x - &x).is_zero());
        let i = CRat::i();
        assert!((&i * &i).re == rat(-1, 1));
    }

    #[test]
    fn truncation_by_grade() {
        let one_plus_eta = &SymPoly::one() + &SymPoly::sym(Sym::Eta);
        let sq = one_plus_eta.pow_truncated(3, Some(1));
        assert_eq!(sq.len(), 2);
        assert_eq!(
            sq.coeff(&Monomial::one().with_exp(Sym::Eta, 1)),
            CRat::real(3, 1)
        );
    }

    #[test]
    #[should_panic]
    fn two_markers_panic() {
        let _ = &SymPoly::psi(0) * &SymPoly::psi(1);
    }

    #[test]
    fn derivative_in_x() {
        let p = &SymPoly::mono(CRat::real(3, 1), &[(Sym::X, 2), (Sym::B, 1)])
            + &SymPoly::sym(Sym::D);
        assert_eq!(
            p.d_dx(),
            SymPoly::mono(CRat::real(6, 1), &[(Sym::X, 1), (Sym::B, 1)])
        );
    }

    #[test]
    fn display_is_readable() {
        let p = SymPoly::mono(CRat::real(-1, 4), &[(Sym::Hbar, 2), (Sym::A, -1)]);
        assert_eq!(p.to_string(), "-1/4*hbar^2*a^-1");
        assert_eq!(CRat::new(rat(1, 2), rat(-3, 4)).to_string(), "(1/2 - 3/4*i)");
    }
}
