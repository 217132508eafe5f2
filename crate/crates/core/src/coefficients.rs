//! The quadratic Lagrangian
//! `L = a(t)ẋ² + b(t)xẋ + c(t)x² + d(t)ẋ + f(t)x + g(t)`
//! as six evaluable time functions plus ħ.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{BinOp, Expr, ExprError};

/// Number of sample points used by [`CoefficientSet::validate`].
pub const VALIDATION_SAMPLES: usize = 1001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("case ({case}) forces `{coeff}` to zero but a value was supplied")]
    ForcedZero { case: Case, coeff: Coeff },
    #[error("case ({case}) requires a value for `{coeff}`")]
    Missing { case: Case, coeff: Coeff },
    #[error("a(t) = {value} at t = {t}; the kinetic coefficient must be positive")]
    NonPositiveKinetic { t: f64, value: f64 },
    #[error("evaluating `{coeff}` at t = {t}: {source}")]
    Eval {
        coeff: Coeff,
        t: f64,
        source: ExprError,
    },
}

/// Names of the six Lagrangian coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    A,
    B,
    C,
    D,
    F,
    G,
}

impl Coeff {
    pub const ALL: [Coeff; 6] = [Coeff::A, Coeff::B, Coeff::C, Coeff::D, Coeff::F, Coeff::G];

    pub fn name(self) -> &'static str {
        match self {
            Coeff::A => "a",
            Coeff::B => "b",
            Coeff::C => "c",
            Coeff::D => "d",
            Coeff::F => "f",
            Coeff::G => "g",
        }
    }

    pub fn from_name(name: &str) -> Option<Coeff> {
        Coeff::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four reduced Lagrangians, each keeping `a` plus one other term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `a ẋ² + f x`
    A,
    /// `a ẋ² + c x²`
    B,
    /// `a ẋ² + b x ẋ`
    C,
    /// `a ẋ² + d ẋ`
    D,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::A, Case::B, Case::C, Case::D];

    /// The coefficient kept besides `a`.
    pub fn partner(self) -> Coeff {
        match self {
            Case::A => Coeff::F,
            Case::B => Coeff::C,
            Case::C => Coeff::B,
            Case::D => Coeff::D,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Case::A => 'a',
            Case::B => 'b',
            Case::C => 'c',
            Case::D => 'd',
        }
    }

    pub fn from_letter(s: &str) -> Option<Case> {
        Case::ALL
            .into_iter()
            .find(|c| s.len() == 1 && s.starts_with(c.letter()))
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Coefficient values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValues {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
    pub hbar: f64,
}

impl CoefficientValues {
    pub fn get(&self, coeff: Coeff) -> f64 {
        match coeff {
            Coeff::A => self.a,
            Coeff::B => self.b,
            Coeff::C => self.c,
            Coeff::D => self.d,
            Coeff::F => self.f,
            Coeff::G => self.g,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub d: Expr,
    pub f: Expr,
    pub g: Expr,
    pub hbar: f64,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositiveKinetic,
    NonFinite,
}

/// A contiguous run of sample times on which one coefficient misbehaves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub coeff: Coeff,
    pub kind: ViolationKind,
    pub t_first: f64,
    pub t_last: f64,
    pub samples: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NonPositiveKinetic => "is not positive",
            ViolationKind::NonFinite => "is not finite or undefined",
        };
        write!(
            f,
            "{}(t) {what} for t in [{}, {}] ({} samples)",
            self.coeff, self.t_first, self.t_last, self.samples
        )
    }
}

impl CoefficientSet {
    /// Free particle of unit mass in natural units.
    pub fn free(mass: f64) -> Result<Self, CoefficientError> {
        Self::from_standard(mass, Expr::zero(), Expr::zero(), Expr::zero())
    }

    /// Maps `L = ½mẋ² − V` with `V = V2(t)x² + V1(t)x + V0(t)`.
    pub fn from_standard(
        mass: f64,
        v2: Expr,
        v1: Expr,
        v0: Expr,
    ) -> Result<Self, CoefficientError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(CoefficientError::NonPositiveMass(mass));
        }
        Ok(CoefficientSet {
            a: Expr::Const(mass / 2.0),
            b: Expr::zero(),
            c: negate(v2),
            d: Expr::zero(),
            f: negate(v1),
            g: negate(v0),
            hbar: 1.0,
            label: "standard".into(),
        })
    }

    /// Reads the standard potential `(V2, V1, V0)` back out.
    pub fn standard_potential(&self) -> (Expr, Expr, Expr) {
        (negate(self.c.clone()), negate(self.f.clone()), negate(self.g.clone()))
    }

    /// Builds one of the reduced Lagrangians. `params` must name `a` and
    /// the case's partner coefficient, and nothing else.
    pub fn preset(case: Case, params: &BTreeMap<Coeff, Expr>) -> Result<Self, CoefficientError> {
        let partner = case.partner();
        for &coeff in params.keys() {
            if coeff != Coeff::A && coeff != partner {
                return Err(CoefficientError::ForcedZero { case, coeff });
            }
        }
        let need = |coeff| {
            params
                .get(&coeff)
                .cloned()
                .ok_or(CoefficientError::Missing { case, coeff })
        };
        let mut set = CoefficientSet {
            a: need(Coeff::A)?,
            b: Expr::zero(),
            c: Expr::zero(),
            d: Expr::zero(),
            f: Expr::zero(),
            g: Expr::zero(),
            hbar: 1.0,
            label: format!("case-{case}"),
        };
        *set.get_mut(partner) = need(partner)?;
        Ok(set)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self, CoefficientError> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(CoefficientError::NonPositiveHbar(hbar));
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn get(&self, coeff: Coeff) -> &Expr {
        match coeff {
            Coeff::A => &self.a,
            Coeff::B => &self.b,
            Coeff::C => &self.c,
            Coeff::D => &self.d,
            Coeff::F => &self.f,
            Coeff::G => &self.g,
        }
    }

    pub fn get_mut(&mut self, coeff: Coeff) -> &mut Expr {
        match coeff {
            Coeff::A => &mut self.a,
            Coeff::B => &mut self.b,
            Coeff::C => &mut self.c,
            Coeff::D => &mut self.d,
            Coeff::F => &mut self.f,
            Coeff::G => &mut self.g,
        }
    }

    /// Coefficients whose expression is the literal zero.
    pub fn zero_pattern(&self) -> Vec<Coeff> {
        Coeff::ALL
            .into_iter()
            .filter(|&c| self.get(c).is_literal_zero())
            .collect()
    }

    pub fn eval(&self, t: f64) -> Result<CoefficientValues, CoefficientError> {
        let ev = |coeff: Coeff| {
            self.get(coeff)
                .eval(t)
                .map_err(|source| CoefficientError::Eval { coeff, t, source })
        };
        Ok(CoefficientValues {
            a: ev(Coeff::A)?,
            b: ev(Coeff::B)?,
            c: ev(Coeff::C)?,
            d: ev(Coeff::D)?,
            f: ev(Coeff::F)?,
            g: ev(Coeff::G)?,
            hbar: self.hbar,
        })
    }

    /// Like [`eval`](Self::eval) but also insists on `a(t) > 0`.
    pub fn eval_checked(&self, t: f64) -> Result<CoefficientValues, CoefficientError> {
        let v = self.eval(t)?;
        if v.a <= 0.0 {
            return Err(CoefficientError::NonPositiveKinetic { t, value: v.a });
        }
        Ok(v)
    }

    /// Samples every coefficient on [`VALIDATION_SAMPLES`] evenly spaced
    /// points of `[t0, t1]` and reports runs of non-finite values and of
    /// `a(t) <= 0`. An empty list means the set is usable on the interval.
    pub fn validate(&self, t0: f64, t1: f64) -> Vec<Violation> {
        let n = VALIDATION_SAMPLES;
        let times: Vec<f64> = (0..n)
            .map(|k| {
                if t1 == t0 {
                    t0
                } else {
                    t0 + (t1 - t0) * k as f64 / (n - 1) as f64
                }
            })
            .collect();
        let mut out = Vec::new();
        for coeff in Coeff::ALL {
            let expr = self.get(coeff);
            let mut open: Option<Violation> = None;
            for &t in &times {
                let kind = match expr.eval(t) {
                    Err(_) => Some(ViolationKind::NonFinite),
                    Ok(v) if coeff == Coeff::A && v <= 0.0 => {
                        Some(ViolationKind::NonPositiveKinetic)
                    }
                    Ok(_) => None,
                };
                match (kind, open.as_mut()) {
                    (Some(k), Some(run)) if run.kind == k => {
                        run.t_last = t;
                        run.samples += 1;
                    }
                    (Some(k), _) => {
                        out.extend(open.take());
                        open = Some(Violation {
                            coeff,
                            kind: k,
                            t_first: t,
                            t_last: t,
                            samples: 1,
                        });
                    }
                    (None, _) => out.extend(open.take()),
                }
            }
            out.extend(open);
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            out.push(Violation {
                coeff: Coeff::A,
                kind: ViolationKind::NonFinite,
                t_first: t0,
                t_last: t1,
                samples: 0,
            });
        }
        out
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Neg(inner) => *inner,
        Expr::Const(0.0) => Expr::Const(0.0),
        other => Expr::neg(other),
    }
}

/// `½ m ω²` as an expression, for harmonic presets.
pub fn harmonic_stiffness(mass: f64, omega: f64) -> Expr {
    Expr::binary(
        BinOp::Mul,
        Expr::Const(0.5 * mass),
        Expr::binary(BinOp::Pow, Expr::Const(omega), Expr::Const(2.0)),
    )
}
