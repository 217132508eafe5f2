//! Uniform grids, sampled wavefunctions, closed-form Gaussian states and
//! observables. All integrals use the trapezoid rule.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 8;
/// Required endpoint decay (relative to the peak) when sampling.
pub const SAMPLE_COVERAGE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least {MIN_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("grid bounds must satisfy x_min < x_max (got {0}, {1})")]
    BadBounds(f64, f64),
    #[error("domain too small: |psi| at the walls is {0:.3e} of the peak (limit {1:.0e})")]
    InsufficientCoverage(f64, f64),
    #[error("states live on different grids")]
    MismatchedGrids,
    #[error("Gaussian with Re(A) = {0} is not normalizable")]
    NotNormalizable(f64),
    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, GridError> {
        if n < MIN_POINTS {
            return Err(GridError::TooFewPoints(n));
        }
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(GridError::BadBounds(x_min, x_max));
        }
        Ok(GridSpec1D { x_min, x_max, n })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.x(i))
    }

    /// Trapezoid weight of node `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.dx()
        } else {
            self.dx()
        }
    }

    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| self.weight(i) * v)
            .sum()
    }
}

/// `ψ(x) = exp(A x² + B x + C)` with `Re A < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl GaussianState {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self, GridError> {
        if !(a.re < 0.0) {
            return Err(GridError::NotNormalizable(a.re));
        }
        Ok(GaussianState { a, b, c })
    }

    /// Unit-norm packet centred at `x0` with mean momentum `p0` and
    /// position spread `sigma`.
    pub fn packet(x0: f64, p0: f64, sigma: f64, hbar: f64) -> Result<Self, GridError> {
        let s2 = sigma * sigma;
        let a = Complex64::new(-1.0 / (4.0 * s2), 0.0);
        let b = Complex64::new(x0 / (2.0 * s2), p0 / hbar);
        let c = Complex64::new(
            -x0 * x0 / (4.0 * s2) - 0.25 * (2.0 * std::f64::consts::PI * s2).ln(),
            0.0,
        );
        GaussianState::new(a, b, c)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        ((self.a * x + self.b) * x + self.c).exp()
    }

    /// `∫|ψ|² dx` in closed form.
    pub fn norm_sq(&self) -> f64 {
        let (ar, br, cr) = (self.a.re, self.b.re, self.c.re);
        (2.0 * cr - br * br / (2.0 * ar)).exp() * (std::f64::consts::PI / (-2.0 * ar)).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        self.c.re -= 0.5 * self.norm_sq().ln();
        self
    }

    pub fn mean_x(&self) -> f64 {
        -self.b.re / (2.0 * self.a.re)
    }

    pub fn variance_x(&self) -> f64 {
        -1.0 / (4.0 * self.a.re)
    }

    pub fn mean_p(&self, hbar: f64) -> f64 {
        hbar * (2.0 * self.a.im * self.mean_x() + self.b.im)
    }

    pub fn sample(&self, grid: &GridSpec1D, time: f64) -> Result<WaveState, GridError> {
        let amp: Vec<Complex64> = grid.points().map(|x| self.eval(x)).collect();
        let peak_x = self.mean_x();
        let peak = self.eval(peak_x).norm();
        let wall = amp[0].norm().max(amp[grid.n - 1].norm());
        if !(wall <= SAMPLE_COVERAGE * peak) {
            return Err(GridError::InsufficientCoverage(wall / peak, SAMPLE_COVERAGE));
        }
        WaveState::new(*grid, amp, time)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub grid: GridSpec1D,
    pub amp: Vec<Complex64>,
    pub time: f64,
}

/// One row of the observables table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub t: f64,
    pub norm: f64,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
}

impl WaveState {
    pub fn new(grid: GridSpec1D, amp: Vec<Complex64>, time: f64) -> Result<Self, GridError> {
        assert_eq!(amp.len(), grid.n, "amplitude count must match the grid");
        if let Some(i) = amp.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(WaveState { grid, amp, time })
    }

    fn density(&self) -> impl Iterator<Item = f64> + '_ {
        self.amp.iter().map(|z| z.norm_sqr())
    }

    /// `√∫|ψ|²`.
    pub fn norm(&self) -> f64 {
        self.grid.integrate(self.density()).sqrt()
    }

    pub fn expectation_x(&self) -> f64 {
        let g = &self.grid;
        let w = g.integrate(self.density());
        g.integrate(self.density().enumerate().map(|(i, p)| g.x(i) * p)) / w
    }

    pub fn expectation_x2(&self) -> f64 {
        let g = &self.grid;
        let w = g.integrate(self.density());
        g.integrate(self.density().enumerate().map(|(i, p)| g.x(i) * g.x(i) * p)) / w
    }

    /// `⟨p⟩` with `p = −iħ∂ₓ` discretized by centered differences; the
    /// wall nodes contribute nothing.
    pub fn expectation_p(&self, hbar: f64) -> f64 {
        let g = &self.grid;
        let n = g.n;
        let inv = 1.0 / (2.0 * g.dx());
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            let d = (self.amp[i + 1] - self.amp[i - 1]) * inv;
            acc += self.amp[i].conj() * d * g.weight(i);
        }
        let w = g.integrate(self.density());
        (Complex64::new(0.0, -hbar) * acc).re / w
    }

    /// `∫ conj(ψ₁) ψ₂ dx`.
    pub fn overlap(&self, other: &WaveState) -> Result<Complex64, GridError> {
        if self.grid != other.grid {
            return Err(GridError::MismatchedGrids);
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .enumerate()
            .map(|(i, (a, b))| a.conj() * b * self.grid.weight(i))
            .sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.amp.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest amplitude among the two outermost nodes at each wall,
    /// relative to the peak.
    pub fn wall_ratio(&self) -> f64 {
        let n = self.grid.n;
        let wall = [0, 1, n - 2, n - 1]
            .iter()
            .map(|&i| self.amp[i].norm())
            .fold(0.0, f64::max);
        let peak = self.max_abs();
        if peak == 0.0 {
            0.0
        } else {
            wall / peak
        }
    }

    /// Pointwise maximum of `|ψ₁ − ψ₂|`.
    pub fn max_abs_diff(&self, other: &WaveState) -> Result<f64, GridError> {
        if self.grid != other.grid {
            return Err(GridError::MismatchedGrids);
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn observables(&self, hbar: f64) -> Observables {
        Observables {
            t: self.time,
            norm: self.norm(),
            mean_x: self.expectation_x(),
            mean_x2: self.expectation_x2(),
            mean_p: self.expectation_p(hbar),
        }
    }

    /// CSV with columns `x, re_psi, im_psi, abs2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re_psi,im_psi,abs2\n");
        for (i, z) in self.amp.iter().enumerate() {
            let _ = writeln!(out, "{:e},{:e},{:e},{:e}", self.grid.x(i), z.re, z.im, z.norm_sqr());
        }
        out
    }
}

pub const OBSERVABLES_HEADER: &str = "t,norm,mean_x,mean_x2,mean_p";

impl Observables {
    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e}",
            self.t, self.norm, self.mean_x, self.mean_x2, self.mean_p
        )
    }
}

pub fn observables_csv(rows: &[Observables]) -> String {
    let mut out = String::from(OBSERVABLES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
