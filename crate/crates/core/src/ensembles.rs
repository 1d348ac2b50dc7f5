//! Seeded generators for positive definite matrices, ordered pairs,
//! invertible congruences and in-region parameters.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix, PDMatrix, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(FieldKind::Real),
            "complex" => Ok(FieldKind::Complex),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub m: usize,
    pub field: FieldKind,
    pub kappa_max: f64,
    pub seed: u64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n: 3,
            m: 2,
            field: FieldKind::Complex,
            kappa_max: 1e4,
            seed: 0,
        }
    }
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Precondition("ensemble needs n ≥ 1 and m ≥ 1".into()));
        }
        if !(self.kappa_max >= 1.0 && self.kappa_max <= crate::linalg::MAX_CONDITION) {
            return Err(Error::Precondition(format!(
                "kappa_max={} outside [1, 1e12]",
                self.kappa_max
            )));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `k` under a master seed; independent of evaluation order.
pub fn child_seed(master: u64, k: u64) -> u64 {
    mix64(mix64(master).wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ 0x5851_f42d_4c95_7f2d)
}

/// Parameter regions for `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `0 ≤ t ≤ s ≤ 1/2` or `1/2 ≤ s ≤ t ≤ 1`.
    Callebaut,
    /// `s` between `t` and `1 − t`.
    Between,
    /// Any `(s, t)` in the unit square.
    Unit,
}

impl Region {
    pub fn contains(self, s: f64, t: f64) -> bool {
        let unit = (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t);
        unit && match self {
            Region::Callebaut => (t <= s && s <= 0.5) || (0.5 <= s && s <= t),
            Region::Between => t.min(1.0 - t) <= s && s <= t.max(1.0 - t),
            Region::Unit => true,
        }
    }

    /// Number of forced boundary cases.
    pub fn boundary_count(self) -> usize {
        match self {
            Region::Callebaut => 4,
            Region::Between => 3,
            Region::Unit => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Callebaut => "callebaut",
            Region::Between => "between",
            Region::Unit => "unit",
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "callebaut" => Ok(Region::Callebaut),
            "between" => Ok(Region::Between),
            "unit" => Ok(Region::Unit),
            other => Err(Error::Precondition(format!("unknown region {other:?}"))),
        }
    }
}

/// A seeded stream of random objects.
pub struct Ensemble {
    spec: EnsembleSpec,
    rng: ChaCha8Rng,
}

impl Ensemble {
    pub fn new(spec: EnsembleSpec) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            spec,
        }
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn entry(&mut self) -> Complex64 {
        match self.spec.field {
            FieldKind::Real => Complex64::new(self.gaussian(), 0.0),
            FieldKind::Complex => {
                Complex64::new(self.gaussian(), self.gaussian()) * std::f64::consts::FRAC_1_SQRT_2
            }
        }
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self.entry();
            }
        }
        m
    }

    /// Haar-distributed unitary (orthogonal in real mode) via QR with phase fix.
    pub fn unitary(&mut self) -> CMatrix {
        let n = self.spec.n;
        let qr = self.gaussian_matrix(n, n).qr();
        let (mut q, r) = qr.unpack();
        for j in 0..n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        q
    }

    /// Log-uniform value in `[1/√κ, √κ]`.
    pub fn log_uniform(&mut self) -> f64 {
        let ln_k = self.spec.kappa_max.ln();
        (self.uniform() * ln_k - 0.5 * ln_k).exp()
    }

    /// `Q·diag(λ)·Q*` with log-uniform eigenvalues.
    pub fn pd(&mut self) -> Result<PDMatrix> {
        let n = self.spec.n;
        let unitary = self.unitary();
        let mut eigenvalues: Vec<f64> = (0..n).map(|_| self.log_uniform()).collect();
        eigenvalues.sort_by(f64::total_cmp);
        let mut pd = PDMatrix::from_spectral(SpectralDecomposition {
            eigenvalues,
            unitary,
        })?;
        if self.spec.field == FieldKind::Real {
            // QR of a real matrix is real; drop signed zeros from complex arithmetic
            pd = PDMatrix::new(real_part(pd.hermitian()))?;
        }
        Ok(pd)
    }

    pub fn pd_tuple(&mut self, m: usize) -> Result<Vec<PDMatrix>> {
        (0..m).map(|_| self.pd()).collect()
    }

    /// Positive semidefinite Gram matrix `G·G*/k` with random rank `k`.
    pub fn psd(&mut self, scale: f64) -> HermitianMatrix {
        let n = self.spec.n;
        let k = 1 + self.index(n);
        let g = self.gaussian_matrix(n, k);
        HermitianMatrix::symmetrized(&g * g.adjoint() * Complex64::new(scale / k as f64, 0.0))
    }

    /// `(A, B)` with `B = A + P`, `P ⪰ 0`.
    pub fn ordered_pair(&mut self) -> Result<(PDMatrix, PDMatrix)> {
        let a = self.pd()?;
        let scale = a.spectral_norm() * self.uniform();
        let p = self.psd(scale);
        let b = PDMatrix::new(a.hermitian().try_add(&p)?)?;
        Ok((a, b))
    }

    /// `U·diag(σ)·V*` with singular values log-uniform in `[1/√κc, √κc]`,
    /// `κc = min(κ, 100)`.
    pub fn invertible(&mut self) -> CMatrix {
        let n = self.spec.n;
        let u = self.unitary();
        let v = self.unitary();
        let ln_k = self.spec.kappa_max.min(100.0).ln();
        let mut us = u;
        for j in 0..n {
            let sigma = (self.uniform() * ln_k - 0.5 * ln_k).exp();
            for i in 0..n {
                us[(i, j)] *= sigma;
            }
        }
        us * v.adjoint()
    }

    /// Positive scalars, log-uniform in `[1/√κ, √κ]`.
    pub fn positive_scalars(&mut self, m: usize) -> Vec<f64> {
        (0..m).map(|_| self.log_uniform()).collect()
    }

    /// `(s, t)` in the region: rejection sampling on the unit square, or a
    /// forced boundary case when `boundary` is given.
    pub fn region(&mut self, region: Region, boundary: Option<usize>) -> Result<(f64, f64)> {
        if let Some(k) = boundary {
            let t = self.uniform();
            let pair = match (region, k) {
                (Region::Callebaut, 0) => (t, t),
                (Region::Callebaut, 1) => (0.5, 0.5),
                (Region::Callebaut, 2) => (0.0, 0.0),
                (Region::Callebaut, 3) => (1.0, 1.0),
                (Region::Between, 0) => (t, t),
                (Region::Between, 1) => (1.0 - t, t),
                (Region::Between, 2) => (0.5, t),
                (Region::Unit, 0) => (0.0, 0.0),
                (Region::Unit, 1) => (0.5, 0.5),
                (Region::Unit, 2) => (1.0, 1.0),
                _ => {
                    return Err(Error::Precondition(format!(
                        "region {} has no boundary case {k}",
                        region.name()
                    )))
                }
            };
            return Ok(pair);
        }
        loop {
            let s = self.uniform();
            let t = self.uniform();
            if region.contains(s, t) {
                return Ok((s, t));
            }
        }
    }
}

fn real_part(h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(h.as_matrix().map(|z| Complex64::new(z.re, 0.0)))
}

pub fn random_pd(spec: &EnsembleSpec) -> Result<PDMatrix> {
    spec.validate()?;
    Ensemble::new(*spec).pd()
}

pub fn random_ordered_pair(spec: &EnsembleSpec) -> Result<(PDMatrix, PDMatrix)> {
    spec.validate()?;
    Ensemble::new(*spec).ordered_pair()
}

pub fn random_invertible(spec: &EnsembleSpec) -> Result<DMatrix<Complex64>> {
    spec.validate()?;
    Ok(Ensemble::new(*spec).invertible())
}

pub fn sample_region(region: &str, seed: u64, boundary: Option<usize>) -> Result<(f64, f64)> {
    let region: Region = region.parse()?;
    let spec = EnsembleSpec {
        seed,
        ..EnsembleSpec::default()
    };
    Ensemble::new(spec).region(region, boundary)
}
