//! One short-time path-integral step applied to a Gaussian in closed form.

use num_complex::Complex64;

use crate::coefficients::CoefficientSet;
use crate::grid::GaussianState;

use super::OracleError;

/// Propagates `gauss` from `t` to `t + eps` with the single-step kernel
///
/// ```text
/// ψ'(x) = N ∫ exp{(i/ħ)[a(x−y)²/ε + b(x+y)(x−y)/2 + cε((x+y)/2)²
///                      + d(x−y) + fε(x+y)/2 + gε]} ψ(y) dy,
/// N = √(a / iπħε),
/// ```
///
/// with the coefficients frozen at the midpoint `t + eps/2`.
///
/// Collecting the exponent as `αy² + (β₁x + β₀)y + γ₂x² + γ₁x + γ₀` the
/// integral is `√(−π/α)·exp(γ − β²/4α)`; combined with `N` the prefactor
/// is `√w` with `w = ia/(ħεα)`. For `Re A < 0` and `a > 0`, `Im α > 0`
/// and `w` stays in the open lower half plane, so the principal square
/// root is continuous in `eps` and no unwrapping is needed.
pub fn short_time_step(
    gauss: &GaussianState,
    coeffs: &CoefficientSet,
    t: f64,
    eps: f64,
) -> Result<GaussianState, OracleError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(OracleError::Params(format!("eps must be positive, got {eps}")));
    }
    let v = coeffs.eval_checked(t + 0.5 * eps)?;
    let i_h = Complex64::new(0.0, 1.0 / v.hbar);

    let alpha = i_h * (v.a / eps - 0.5 * v.b + 0.25 * v.c * eps) + gauss.a;
    let beta1 = i_h * (-2.0 * v.a / eps + 0.5 * v.c * eps);
    let beta0 = i_h * (-v.d + 0.5 * v.f * eps) + gauss.b;
    let gamma2 = i_h * (v.a / eps + 0.5 * v.b + 0.25 * v.c * eps);
    let gamma1 = i_h * (v.d + 0.5 * v.f * eps);
    let gamma0 = i_h * (v.g * eps) + gauss.c;

    if alpha.re >= 0.0 && alpha.im == 0.0 {
        return Err(OracleError::NotIntegrable { alpha });
    }
    let w = Complex64::new(0.0, v.a / (v.hbar * eps)) / alpha;
    let a_new = gamma2 - beta1 * beta1 / (4.0 * alpha);
    let b_new = gamma1 - beta1 * beta0 / (2.0 * alpha);
    let c_new = gamma0 - beta0 * beta0 / (4.0 * alpha) + 0.5 * w.ln();
    GaussianState::new(a_new, b_new, c_new).map_err(|_| OracleError::LostNormalizability {
        t: t + eps,
        re_a: a_new.re,
    })
}

/// Composes `steps` short-time steps of equal length covering `[t0, t1]`.
pub fn compose_short_steps(
    gauss: &GaussianState,
    coeffs: &CoefficientSet,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<GaussianState, OracleError> {
    if steps == 0 {
        return Err(OracleError::Params("need at least one step".into()));
    }
    let eps = (t1 - t0) / steps as f64;
    let mut g = *gauss;
    for k in 0..steps {
        g = short_time_step(&g, coeffs, t0 + k as f64 * eps, eps)?;
    }
    Ok(g)
}
