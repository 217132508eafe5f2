#![allow(dead_code)]

use num_complex::Complex64;
use qlag::evolve::{evolve_1d, EvolveParams, Trajectory};
use qlag::symbolic::{Sym, SymPoly};
use qlag::{CoefficientSet, GaussianState, GridSpec1D, Variant, WaveState};

pub fn coeffs(a: &str, b: &str, c: &str, d: &str, f: &str, g: &str) -> CoefficientSet {
    let p = |s: &str| qlag::parse_expr(s).unwrap();
    CoefficientSet {
        a: p(a),
        b: p(b),
        c: p(c),
        d: p(d),
        f: p(f),
        g: p(g),
        hbar: 1.0,
        label: "test".into(),
    }
}

pub fn standard_grid() -> GridSpec1D {
    GridSpec1D::new(-20.0, 20.0, 2048).unwrap()
}

pub fn packet(grid: &GridSpec1D, x0: f64, p0: f64, sigma: f64) -> WaveState {
    GaussianState::packet(x0, p0, sigma, 1.0)
        .unwrap()
        .sample(grid, 0.0)
        .unwrap()
}

pub fn evolve(
    state: &WaveState,
    c: &CoefficientSet,
    dt: f64,
    t_final: f64,
    variant: Variant,
    every: usize,
) -> Trajectory {
    let p = EvolveParams::new(dt, t_final, variant).with_snapshot_every(every);
    evolve_1d(state, c, &p).unwrap_or_else(|e| panic!("evolution failed: {e}"))
}

/// Multiplies every amplitude by `exp(i·phase(x))`.
pub fn with_phase(state: &WaveState, phase: impl Fn(f64) -> f64) -> WaveState {
    let mut out = state.clone();
    for (k, amp) in out.amp.iter_mut().enumerate() {
        *amp *= Complex64::from_polar(1.0, phase(state.grid.x(k)));
    }
    out
}

/// Numeric value of an exact polynomial in `ħ`, `a`, `ε` (other symbols
/// must be absent).
pub fn eval_poly(p: &SymPoly, hbar: f64, a: f64, eps: f64) -> Complex64 {
    use num_traits::ToPrimitive;
    let mut total = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let coef = Complex64::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap());
        let mut v = coef;
        for (s, x) in [(Sym::Hbar, hbar), (Sym::A, a), (Sym::Eps, eps)] {
            v *= x.powi(m.exp(s));
        }
        for s in [Sym::B, Sym::C, Sym::D, Sym::F, Sym::G, Sym::X, Sym::Eta] {
            assert_eq!(m.exp(s), 0, "unexpected symbol in {m}");
        }
        total += v;
    }
    total
}
