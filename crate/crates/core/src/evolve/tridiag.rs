//! Thomas algorithm for complex tridiagonal systems.

use num_complex::Complex64;

/// Pivots smaller than this (in modulus) are treated as singular.
const PIVOT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singular {
    pub row: usize,
}

/// Solves `A x = rhs` in place, where `A` has sub-diagonal `lower`
/// (`lower[0]` unused), diagonal `diag` and super-diagonal `upper`
/// (`upper[n-1]` unused). `scratch` must have the same length as `rhs`.
pub fn solve_in_place(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &mut [Complex64],
    scratch: &mut [Complex64],
) -> Result<(), Singular> {
    let n = rhs.len();
    debug_assert!(lower.len() == n && diag.len() == n && upper.len() == n && scratch.len() == n);
    if n == 0 {
        return Ok(());
    }
    let mut pivot = diag[0];
    if pivot.norm() < PIVOT_FLOOR {
        return Err(Singular { row: 0 });
    }
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if pivot.norm() < PIVOT_FLOOR {
            return Err(Singular { row: i });
        }
        scratch[i] = upper[i] / pivot;
        let prev = rhs[i - 1];
        rhs[i] = (rhs[i] - lower[i] * prev) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= scratch[i] * next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn matvec(l: &[Complex64], d: &[Complex64], u: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = d[i] * x[i];
                if i > 0 {
                    v += l[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += u[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn small_system() {
        let l = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let d = [c(4.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)];
        let u = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let x = [c(1.0, 1.0), c(-2.0, 0.5), c(0.0, 3.0)];
        let mut rhs = matvec(&l, &d, &u, &x);
        let mut s = vec![c(0.0, 0.0); 3];
        solve_in_place(&l, &d, &u, &mut rhs, &mut s).unwrap();
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_pivot() {
        let z = c(0.0, 0.0);
        let mut rhs = vec![c(1.0, 0.0); 2];
        let mut s = vec![z; 2];
        assert_eq!(
            solve_in_place(&[z, z], &[z, c(1.0, 0.0)], &[z, z], &mut rhs, &mut s),
            Err(Singular { row: 0 })
        );
    }

    proptest! {
        #[test]
        fn diagonally_dominant_round_trip(
            vals in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 3..40)
        ) {
            let n = vals.len();
            let l: Vec<_> = vals.iter().map(|v| c(v.0, v.1)).collect();
            let u: Vec<_> = vals.iter().map(|v| c(v.2, v.3)).collect();
            let d: Vec<_> = vals.iter().map(|v| c(3.0 + v.4.abs(), v.5)).collect();
            let x: Vec<_> = vals.iter().map(|v| c(v.5, v.0)).collect();
            let mut rhs = matvec(&l, &d, &u, &x);
            let mut s = vec![c(0.0, 0.0); n];
            solve_in_place(&l, &d, &u, &mut rhs, &mut s).unwrap();
            for (a, b) in rhs.iter().zip(&x) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
