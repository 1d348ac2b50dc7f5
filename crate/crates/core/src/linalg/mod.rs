//! Dense Hermitian linear algebra over `Complex64`.

mod eigen;
pub mod io;
mod loewner;

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{SpectralDecomposition, CONVERGENCE_TOL, DEFAULT_MAX_SWEEPS};
pub use loewner::{loewner_leq, LoewnerVerdict};

/// Square complex matrix storage.
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for accepting a matrix as Hermitian before symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Largest condition number accepted by [`PDMatrix`].
pub const MAX_CONDITION: f64 = 1e12;

/// Default dimension cap for Kronecker products.
pub const DEFAULT_KRON_CAP: usize = 64;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// An `n×n` complex matrix equal to its conjugate transpose.
///
/// Construction checks the Hermitian property and then symmetrizes exactly,
/// so downstream code may rely on `a[(i, j)] == conj(a[(j, i)])` bitwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

impl HermitianMatrix {
    pub fn new(data: CMatrix) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let max_entry = data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let allowed = HERMITIAN_TOL * max_entry;
        let mut deviation: f64 = 0.0;
        for i in 0..rows {
            for j in i..rows {
                deviation = deviation.max((data[(i, j)] - data[(j, i)].conj()).norm());
            }
        }
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }
        Ok(Self::symmetrized(data))
    }

    /// `(X + X*)/2` with exact conjugate symmetry. No validation.
    pub(crate) fn symmetrized(mut data: CMatrix) -> Self {
        let n = data.nrows();
        for i in 0..n {
            data[(i, i)] = c(data[(i, i)].re);
            for j in i + 1..n {
                let avg = (data[(i, j)] + data[(j, i)].conj()) * 0.5;
                data[(i, j)] = avg;
                data[(j, i)] = avg.conj();
            }
        }
        Self { data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| c(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n, n),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            data: CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) }),
        }
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            data: &self.data * c(k),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eigen::eig_raw(&self.data, DEFAULT_MAX_SWEEPS)
    }

    pub fn eig_with_sweeps(&self, max_sweeps: usize) -> Result<SpectralDecomposition> {
        eigen::eig_raw(&self.data, max_sweeps)
    }

    /// Eigenvalues in ascending order, without accumulating eigenvectors.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigen::eigenvalues_raw(&self.data, DEFAULT_MAX_SWEEPS)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    /// Relative Frobenius distance `‖X−Y‖_F / max(1, ‖X‖_F, ‖Y‖_F)`.
    pub fn relative_distance(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let denom = 1f64.max(self.frobenius_norm()).max(other.frobenius_norm());
        Ok((&self.data - &other.data).norm() / denom)
    }

    /// Principal submatrix on the given indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        Self {
            data: CMatrix::from_fn(k, k, |i, j| self.data[(indices[i], indices[j])]),
        }
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    /// Panics on dimension mismatch; use [`HermitianMatrix::try_add`] otherwise.
    fn add(self, rhs: Self) -> HermitianMatrix {
        self.try_add(rhs)
            .expect("dimension mismatch in Hermitian sum")
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: Self) -> HermitianMatrix {
        self.try_sub(rhs)
            .expect("dimension mismatch in Hermitian difference")
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, k: f64) -> HermitianMatrix {
        self.scale(k)
    }
}

/// A Hermitian matrix with strictly positive spectrum.
///
/// The spectral decomposition computed during validation is kept, so matrix
/// functions of a `PDMatrix` do not re-run the eigensolver.
#[derive(Debug, Clone)]
pub struct PDMatrix {
    matrix: HermitianMatrix,
    spectral: SpectralDecomposition,
}

impl PDMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let spectral = matrix.eig()?;
        check_spectrum(&spectral.eigenvalues)?;
        Ok(Self { matrix, spectral })
    }

    /// Builds `U·diag(λ)·U*` from a known decomposition.
    pub fn from_spectral(spectral: SpectralDecomposition) -> Result<Self> {
        check_spectrum(&spectral.eigenvalues)?;
        let matrix = HermitianMatrix::symmetrized(spectral.reconstruct());
        Ok(Self { matrix, spectral })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(n),
            spectral: SpectralDecomposition {
                eigenvalues: vec![1.0; n],
                unitary: CMatrix::identity(n, n),
            },
        }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(values))
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::diagonal(&[value])
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn spectral_norm(&self) -> f64 {
        self.spectral.eigenvalues[self.n() - 1]
    }

    pub fn condition_number(&self) -> f64 {
        self.spectral.eigenvalues[self.n() - 1] / self.spectral.eigenvalues[0]
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.try_add(&other.matrix)?)
    }

    pub fn scale(&self, k: f64) -> Result<Self> {
        Self::new(self.matrix.scale(k))
    }

    /// `A + εI`; used by callers to regularize semidefinite inputs.
    pub fn regularized(matrix: &HermitianMatrix, eps: Option<f64>) -> Result<Self> {
        let eps = match eps {
            Some(e) => e,
            None => 1e-8 * matrix.spectral_norm()?,
        };
        Self::new(matrix.try_add(&HermitianMatrix::identity(matrix.n()).scale(eps))?)
    }
}

impl AsRef<HermitianMatrix> for PDMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.matrix
    }
}

fn check_spectrum(eigenvalues: &[f64]) -> Result<()> {
    let min = eigenvalues[0];
    let max = eigenvalues[eigenvalues.len() - 1];
    if !(min > 0.0) || min <= max / MAX_CONDITION {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
            max_eigenvalue: max,
        });
    }
    Ok(())
}

/// Eigendecomposition; see [`HermitianMatrix::eig`].
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    a.eig()
}

/// Functional calculus `U·diag(φ(λ))·U*`.
pub fn apply_function<F>(a: &PDMatrix, phi: F) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let values = mapped_spectrum(a, phi)?;
    Ok(HermitianMatrix::symmetrized(a.spectral.synthesize(&values)))
}

/// Like [`apply_function`] for a function known to be positive on the
/// spectrum; keeps the decomposition.
pub fn apply_positive_function<F>(a: &PDMatrix, phi: F) -> Result<PDMatrix>
where
    F: Fn(f64) -> f64,
{
    let eigenvalues = mapped_spectrum(a, phi)?;
    let mut pairs: Vec<(f64, usize)> = eigenvalues.iter().copied().zip(0..).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = a.n();
    let unitary = CMatrix::from_fn(n, n, |i, j| a.spectral.unitary[(i, pairs[j].1)]);
    PDMatrix::from_spectral(SpectralDecomposition {
        eigenvalues: pairs.into_iter().map(|p| p.0).collect(),
        unitary,
    })
}

fn mapped_spectrum<F: Fn(f64) -> f64>(a: &PDMatrix, phi: F) -> Result<Vec<f64>> {
    a.spectral
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let value = phi(lambda);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Domain {
                    eigenvalue: lambda,
                    value,
                })
            }
        })
        .collect()
}

/// Spectral power `A^t`.
pub fn power(a: &PDMatrix, t: f64) -> Result<PDMatrix> {
    if t == 1.0 {
        return Ok(a.clone());
    }
    if t == 0.0 {
        return Ok(PDMatrix::identity(a.n()));
    }
    apply_positive_function(a, |x| x.powf(t))
}

/// `C*·X·C`, symmetrized.
pub fn congruence(c_mat: &CMatrix, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (rows, cols) = c_mat.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows != x.n() {
        return Err(Error::Dimension {
            expected: x.n(),
            found: rows,
        });
    }
    Ok(HermitianMatrix::symmetrized(
        c_mat.adjoint() * x.as_matrix() * c_mat,
    ))
}

/// Congruence of a positive definite matrix by a Hermitian one: `X·A·X`.
pub fn congruence_pd(x: &HermitianMatrix, a: &HermitianMatrix) -> Result<PDMatrix> {
    PDMatrix::new(congruence(x.as_matrix(), a)?)
}

/// Kronecker product with the default dimension cap.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    kron_with_cap(a, b, DEFAULT_KRON_CAP)
}

pub fn kron_with_cap(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    cap: usize,
) -> Result<HermitianMatrix> {
    let size = a.n().saturating_mul(b.n());
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    // entries are products of conjugate pairs, so the result is exactly Hermitian
    Ok(HermitianMatrix {
        data: a.data.kronecker(&b.data),
    })
}

/// Entrywise (Schur) product.
pub fn hadamard(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_dim(b)?;
    Ok(HermitianMatrix {
        data: a.data.component_mul(&b.data),
    })
}

/// Indices `{i·n + i}` selecting the Hadamard product inside `A ⊗ B`.
pub fn hadamard_indices(n: usize) -> Vec<usize> {
    (0..n).map(|i| i * n + i).collect()
}
