//! Flow of the Gaussian parameters under the assembled equation.
//!
//! Substituting `ψ = exp(Ax² + Bx + C)` and matching powers of `x`:
//!
//! ```text
//! iħ Ȧ = 4K A² + 2iħℓ A + P₂
//! iħ Ḃ = 4K AB + iħ(ℓB + 2δA) + P₁
//! iħ Ċ = K(B² + 2A) + iħδB + P₀ʳ + iP₀ⁱ
//! ```
//!
//! integrated with an adaptive Dormand–Prince 5(4) pair.

use num_complex::Complex64;

use crate::assembly::{assemble_1d, EquationTerms, Variant};
use crate::coefficients::CoefficientSet;
use crate::grid::GaussianState;

use super::OracleError;

/// Default relative/absolute tolerance for the flow.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_STEPS: usize = 1_000_000;

type State = [Complex64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiFlow {
    /// Accepted step endpoints, starting at `t0`.
    pub times: Vec<f64>,
    pub states: Vec<GaussianState>,
    pub variant: Variant,
    pub tolerance: f64,
}

impl RiccatiFlow {
    pub fn last(&self) -> &GaussianState {
        self.states.last().expect("flow always holds the initial state")
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("flow always holds the initial time")
    }
}

fn rhs(terms: &EquationTerms, y: &State) -> State {
    let [a, b, _] = *y;
    let ih = Complex64::new(0.0, terms.hbar);
    let k = terms.kinetic;
    let (l, dl) = (terms.drift_linear, terms.drift_const);
    let p0 = Complex64::new(terms.pot_x0_real, terms.pot_x0_imag);
    [
        (4.0 * k * a * a + 2.0 * ih * l * a + terms.pot_x2) / ih,
        (4.0 * k * a * b + ih * (l * b + 2.0 * dl * a) + terms.pot_x1) / ih,
        (k * (b * b + 2.0 * a) + ih * dl * b + p0) / ih,
    ]
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for j in 0..3 {
            out[j] += h * c * k[j];
        }
    }
    out
}

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step of length `h` from `(t, gauss)`. Returns the
/// fifth-order solution and the embedded error estimate per component.
pub fn riccati_step(
    gauss: &GaussianState,
    coeffs: &CoefficientSet,
    t: f64,
    h: f64,
    variant: Variant,
) -> Result<(GaussianState, [f64; 3]), OracleError> {
    let y = [gauss.a, gauss.b, gauss.c];
    let (next, err) = dp_step(&y, coeffs, t, h, variant)?;
    let g = GaussianState {
        a: next[0],
        b: next[1],
        c: next[2],
    };
    Ok((g, err))
}

fn dp_step(
    y: &State,
    coeffs: &CoefficientSet,
    t: f64,
    h: f64,
    variant: Variant,
) -> Result<(State, [f64; 3]), OracleError> {
    let f = |s: f64, y: &State| -> Result<State, OracleError> {
        Ok(rhs(&assemble_1d(coeffs, t + s * h, variant)?, y))
    };
    let k1 = f(0.0, y)?;
    let k2 = f(C2, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = f(C3, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = f(C4, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(
        C5,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        1.0,
        &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(1.0, &y5)?;
    let mut err = [0.0; 3];
    for j in 0..3 {
        let e = E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j];
        err[j] = (h * e).norm();
    }
    Ok((y5, err))
}

/// Integrates the flow from `t0` to `t1` with mixed absolute/relative
/// tolerance `tol` per component.
pub fn riccati_evolve(
    gauss: &GaussianState,
    coeffs: &CoefficientSet,
    t0: f64,
    t1: f64,
    variant: Variant,
    tol: f64,
) -> Result<RiccatiFlow, OracleError> {
    if !(tol > 0.0) || !(t1 >= t0) {
        return Err(OracleError::Params(format!(
            "need tol > 0 and t1 >= t0 (tol = {tol}, t0 = {t0}, t1 = {t1})"
        )));
    }
    if !(gauss.a.re < 0.0) {
        return Err(OracleError::LostNormalizability { t: t0, re_a: gauss.a.re });
    }
    let mut flow = RiccatiFlow {
        times: vec![t0],
        states: vec![*gauss],
        variant,
        tolerance: tol,
    };
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(flow);
    }
    let mut y = [gauss.a, gauss.b, gauss.c];
    let mut t = t0;
    let mut h = span.min(0.01);
    let h_min = 1e-14 * span.max(1.0);
    for _ in 0..MAX_STEPS {
        if t1 - t <= 1e-15 * span {
            return Ok(flow);
        }
        h = h.min(t1 - t);
        let (next, err) = dp_step(&y, coeffs, t, h, variant)?;
        let ratio = (0..3)
            .map(|j| err[j] / (tol * (1.0 + y[j].norm().max(next[j].norm()))))
            .fold(0.0, f64::max);
        if ratio <= 1.0 {
            t = if t1 - (t + h) <= 1e-15 * span { t1 } else { t + h };
            y = next;
            if !(y[0].re < 0.0) {
                return Err(OracleError::LostNormalizability { t, re_a: y[0].re });
            }
            if y.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(OracleError::NonFinite { t });
            }
            flow.times.push(t);
            flow.states.push(GaussianState {
                a: y[0],
                b: y[1],
                c: y[2],
            });
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min {
            return Err(OracleError::StepUnderflow { t, h });
        }
    }
    Err(OracleError::StepUnderflow { t, h })
}

/// Free-particle closed form `A(t) = A₀ / (1 − 2iħA₀t/m)` together with the
/// matching `B` and `C`.
pub fn free_closed_form(gauss: &GaussianState, mass: f64, hbar: f64, t: f64) -> GaussianState {
    let i = Complex64::i();
    let s = 1.0 - 2.0 * i * hbar * gauss.a * t / mass;
    GaussianState {
        a: gauss.a / s,
        b: gauss.b / s,
        c: gauss.c + i * hbar * t * gauss.b * gauss.b / (2.0 * mass * s) - 0.5 * s.ln(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::harmonic_stiffness;
    use crate::expr::parse_expr;
    use crate::oracle::compose_short_steps;

    fn packet() -> GaussianState {
        GaussianState::packet(0.4, -0.3, 0.7, 1.0).unwrap()
    }

    fn dist(a: &GaussianState, b: &GaussianState) -> f64 {
        (a.a - b.a).norm() + (a.b - b.b).norm() + (a.c - b.c).norm()
    }

    #[test]
    fn free_flow_matches_closed_form() {
        let coeffs = CoefficientSet::free(1.0).unwrap();
        let flow = riccati_evolve(&packet(), &coeffs, 0.0, 2.0, Variant::Rederived, 1e-12).unwrap();
        let exact = free_closed_form(&packet(), 1.0, 1.0, 2.0);
        assert!(dist(flow.last(), &exact) < 1e-10, "{}", dist(flow.last(), &exact));
    }

    #[test]
    fn composed_short_steps_match_free_closed_form() {
        let coeffs = CoefficientSet::free(1.0).unwrap();
        let g = compose_short_steps(&packet(), &coeffs, 0.0, 1.0, 100).unwrap();
        let exact = free_closed_form(&packet(), 1.0, 1.0, 1.0);
        assert!((g.a - exact.a).norm() < 1e-10);
        assert!(dist(&g, &exact) < 1e-10, "{}", dist(&g, &exact));
    }

    #[test]
    fn harmonic_width_is_periodic() {
        let omega = 1.3;
        let coeffs = CoefficientSet::from_standard(
            1.0,
            harmonic_stiffness(1.0, omega),
            crate::expr::Expr::zero(),
            crate::expr::Expr::zero(),
        )
        .unwrap();
        let mut g = packet();
        g.a = Complex64::new(-1.7, 0.3); // squeezed, not the ground-state width
        let period = std::f64::consts::PI / omega;
        let flow = riccati_evolve(&g, &coeffs, 0.0, period, Variant::Rederived, 1e-12).unwrap();
        assert!((flow.last().a - g.a).norm() < 1e-8);
    }

    #[test]
    fn constant_term_only_rotates_phase() {
        let free = CoefficientSet::free(1.0).unwrap();
        let mut coeffs = free.clone();
        coeffs.g = parse_expr("0.6").unwrap();
        let g = packet();
        let base = riccati_evolve(&g, &free, 0.0, 1.0, Variant::Rederived, 1e-12).unwrap();
        let with_g = riccati_evolve(&g, &coeffs, 0.0, 1.0, Variant::Rederived, 1e-12).unwrap();
        let (p, q) = (base.last(), with_g.last());
        assert!((p.a - q.a).norm() < 1e-12);
        assert!((p.b - q.b).norm() < 1e-12);
        assert!((q.c - p.c - Complex64::new(0.0, 0.6)).norm() < 1e-10);
    }

    #[test]
    fn rejects_unnormalizable_start() {
        let coeffs = CoefficientSet::free(1.0).unwrap();
        let g = GaussianState {
            a: Complex64::new(0.1, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
        };
        assert!(matches!(
            riccati_evolve(&g, &coeffs, 0.0, 1.0, Variant::Rederived, 1e-10),
            Err(OracleError::LostNormalizability { .. })
        ));
    }
}
