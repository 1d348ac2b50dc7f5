//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each step applies a complex plane rotation `J = P·R` to the pair `(p, q)`:
//! `P` is a diagonal phase that makes `a_pq` real and positive, `R` is the
//! classical real Jacobi rotation that annihilates it. The accumulated product
//! of the rotations is the unitary factor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default number of cyclic sweeps before giving up.
pub const DEFAULT_MAX_SWEEPS: usize = 64;

/// Off-diagonal Frobenius norm, relative to `‖A‖_F`, at which a sweep stops.
pub const CONVERGENCE_TOL: f64 = 1e-14;

/// Eigenvalues (ascending) and the unitary whose columns are eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub unitary: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U·diag(φ(λ))·U*` as a raw matrix (not symmetrized).
    pub fn synthesize(&self, values: &[f64]) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut scaled = self.unitary.clone();
        for (j, &v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        scaled * self.unitary.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        self.synthesize(&self.eigenvalues)
    }

    /// `‖U*U − I‖_F`
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        (self.unitary.adjoint() * &self.unitary - DMatrix::<Complex64>::identity(n, n)).norm()
    }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Runs cyclic Jacobi sweeps in place. On return `a` is diagonal (to the
/// convergence tolerance) and, when given, `v` holds the accumulated rotations.
fn jacobi_sweeps(
    a: &mut DMatrix<Complex64>,
    mut v: Option<&mut DMatrix<Complex64>>,
    max_sweeps: usize,
) -> Result<()> {
    let n = a.nrows();
    let threshold = CONVERGENCE_TOL * a.norm();
    for _ in 0..max_sweeps {
        let off = off_diagonal_norm(a);
        if off <= threshold {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[(p, q)];
                let abs_g = g.norm();
                if abs_g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // negligible against both diagonal entries: drop it
                if abs_g < f64::EPSILON * 1e-3 * app.abs().min(aqq.abs()) {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = g / abs_g;
                let theta = (aqq - app) / (2.0 * abs_g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let cphase = phase.conj();

                // A <- A·J  (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * cphase * s;
                    a[(k, q)] = akp * s + akq * cphase * c;
                }
                // A <- J*·A  (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * cphase * s;
                        v[(k, q)] = vkp * s + vkq * cphase * c;
                    }
                }
            }
        }
    }
    let off = off_diagonal_norm(a);
    if off <= threshold {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            sweeps: max_sweeps,
            off_diagonal: off,
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix given as raw storage.
/// The caller guarantees the input is exactly Hermitian.
pub(crate) fn eig_raw(a: &DMatrix<Complex64>, max_sweeps: usize) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    let mut work = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    jacobi_sweeps(&mut work, Some(&mut v), max_sweeps)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let unitary = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        unitary,
    })
}

/// Eigenvalues only, ascending.
pub(crate) fn eigenvalues_raw(a: &DMatrix<Complex64>, max_sweeps: usize) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut work = a.clone();
    jacobi_sweeps(&mut work, None, max_sweeps)?;
    let mut values: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> DMatrix<Complex64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn already_diagonal_gives_permutation() {
        let d = eig_raw(&real(&[&[3.0, 0.0], &[0.0, 1.0]]), 64).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 3.0]);
        assert_eq!(d.unitary[(1, 0)].re.abs(), 1.0);
        assert_eq!(d.unitary[(0, 1)].re.abs(), 1.0);
    }

    #[test]
    fn classic_two_by_two() {
        let d = eig_raw(&real(&[&[2.0, 1.0], &[1.0, 2.0]]), 64).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // eigenvectors up to a unimodular factor
        let u = &d.unitary;
        let ratio0 = u[(1, 0)] / u[(0, 0)];
        let ratio1 = u[(1, 1)] / u[(0, 1)];
        assert!((ratio0 - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((ratio1 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((u[(0, 0)].norm() - h).abs() < 1e-15);
    }

    #[test]
    fn complex_entries_diagonalize() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = DMatrix::from_row_slice(2, 2, &[one * 2.0, i, -i, one * 2.0]);
        let d = eig_raw(&a, 64).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!((d.reconstruct() - &a).norm() < 1e-14);
    }

    #[test]
    fn zero_sweeps_reports_residual() {
        let err = eig_raw(&real(&[&[1.0, 1.0], &[1.0, 1.0]]), 0).unwrap_err();
        match err {
            Error::NoConvergence {
                sweeps,
                off_diagonal,
            } => {
                assert_eq!(sweeps, 0);
                assert!((off_diagonal - 2f64.sqrt()).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigenvalues_only_matches_full() {
        let a = real(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, -0.2], &[0.5, -0.2, 1.0]]);
        let full = eig_raw(&a, 64).unwrap();
        let only = eigenvalues_raw(&a, 64).unwrap();
        for (x, y) in full.eigenvalues.iter().zip(&only) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
