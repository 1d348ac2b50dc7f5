use serde::{Deserialize, Serialize};

use super::HermitianMatrix;
use crate::error::Result;

/// Outcome of testing `A ≤ B` in the Loewner order.
///
/// `margin` is the smallest eigenvalue of `B − A`; `scale` is `‖A‖₂ + ‖B‖₂`.
/// The comparison holds when `margin ≥ −tolerance·max(1, scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerVerdict {
    pub holds: bool,
    pub margin: f64,
    pub scale: f64,
    pub tolerance: f64,
}

impl LoewnerVerdict {
    pub fn from_parts(margin: f64, scale: f64, tolerance: f64) -> Self {
        Self {
            holds: margin >= -tolerance * scale.max(1.0),
            margin,
            scale,
            tolerance,
        }
    }

    /// `x ≤ y` for real scalars.
    pub fn scalar(x: f64, y: f64, tolerance: f64) -> Self {
        Self::from_parts(y - x, x.abs() + y.abs(), tolerance)
    }

    /// Margin divided by `max(1, scale)`.
    pub fn normalized_margin(&self) -> f64 {
        self.margin / self.scale.max(1.0)
    }

    /// True when the margin is within the tolerance band around zero.
    pub fn is_tight(&self, tolerance: f64) -> bool {
        self.margin.abs() <= tolerance * self.scale.max(1.0)
    }
}

pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<LoewnerVerdict> {
    let diff = b.try_sub(a)?;
    let margin = diff.eigenvalues()?[0];
    let scale = a.spectral_norm()? + b.spectral_norm()?;
    Ok(LoewnerVerdict::from_parts(margin, scale, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_below_twice_identity() {
        let v = loewner_leq(
            &HermitianMatrix::identity(3),
            &HermitianMatrix::identity(3).scale(2.0),
            1e-12,
        )
        .unwrap();
        assert!(v.holds);
        assert!((v.margin - 1.0).abs() < 1e-15);
        assert!((v.scale - 3.0).abs() < 1e-15);
    }

    #[test]
    fn incomparable_pair_fails_both_ways() {
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let b = HermitianMatrix::diagonal(&[2.0, 1.0]);
        let ab = loewner_leq(&a, &b, 1e-8).unwrap();
        let ba = loewner_leq(&b, &a, 1e-8).unwrap();
        assert!(!ab.holds && !ba.holds);
        assert_eq!(ab.margin, -1.0);
        assert_eq!(ba.margin, -1.0);
    }

    #[test]
    fn reflexive_with_zero_margin() {
        let a = HermitianMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 2.0]]).unwrap();
        let v = loewner_leq(&a, &a, 1e-12).unwrap();
        assert!(v.holds);
        assert_eq!(v.margin, 0.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(loewner_leq(
            &HermitianMatrix::identity(2),
            &HermitianMatrix::identity(3),
            1e-8
        )
        .is_err());
    }
}
