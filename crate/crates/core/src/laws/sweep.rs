//! Matrix-valued functions of one parameter, sampled on a grid, with pairwise
//! Loewner comparisons on each monotone side of the minimum.

use serde::{Deserialize, Serialize};

use super::{Instance, InstanceData, LawId};
use crate::error::{Error, Result};
use crate::linalg::{kron, loewner_leq, power, HermitianMatrix, LoewnerVerdict, PDMatrix};
use crate::means::weighted_geometric_mean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub trace: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// `f(lower) ≤ f(upper)`, where `lower` is the grid point nearer the minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveLink {
    pub lower: usize,
    pub upper: usize,
    pub verdict: LoewnerVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub law: String,
    pub center: f64,
    pub points: Vec<CurvePoint>,
    pub links: Vec<CurveLink>,
}

impl Curve {
    pub fn all_hold(&self) -> bool {
        self.links.iter().all(|l| l.verdict.holds)
    }

    /// Margin of the link joining point `i` to point `i − 1`, if any.
    pub fn incoming_margin(&self, i: usize) -> Option<f64> {
        self.links
            .iter()
            .find(|l| l.lower.max(l.upper) == i && l.lower.min(l.upper) + 1 == i)
            .map(|l| l.verdict.margin)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,trace,lambda_min,lambda_max,monotone_link_margin\n");
        for (i, p) in self.points.iter().enumerate() {
            let margin = self
                .incoming_margin(i)
                .map(|m| format!("{m:e}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{}\n",
                p.t, p.trace, p.lambda_min, p.lambda_max, margin
            ));
        }
        out
    }
}

/// Parameter domain `(lo, center, hi)` of a sweepable law.
pub fn domain(law: LawId) -> Result<(f64, f64, f64)> {
    match law {
        LawId::TensorF | LawId::ScalarCallebaut => Ok((-1.0, 0.0, 1.0)),
        LawId::TensorG | LawId::MatrixCallebaut => Ok((0.0, 0.5, 1.0)),
        other => Err(Error::Precondition(format!("{other} is not sweepable"))),
    }
}

fn sum(xs: &[HermitianMatrix]) -> Result<HermitianMatrix> {
    let mut it = xs.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Precondition("empty tuple".into()))?
        .clone();
    it.try_fold(first, |acc, x| acc.try_add(x))
}

/// `X⊗Y + Y⊗X`.
pub(crate) fn symmetric_kron(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    kron(x, y)?.try_add(&kron(y, x)?)
}

/// `Σ_j A_j ♯_x B_j`.
pub(crate) fn path_sum(a: &[PDMatrix], b: &[PDMatrix], x: f64) -> Result<HermitianMatrix> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    let terms = a
        .iter()
        .zip(b)
        .map(|(aj, bj)| weighted_geometric_mean(aj, bj, x).map(PDMatrix::into_hermitian))
        .collect::<Result<Vec<_>>>()?;
    sum(&terms)
}

/// `(Σ a^{c+r} b^{c−r})(Σ a^{c−r} b^{c+r})`.
pub fn callebaut_product(a: &[f64], b: &[f64], center: f64, r: f64) -> f64 {
    let left: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.powf(center + r) * y.powf(center - r))
        .sum();
    let right: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.powf(center - r) * y.powf(center + r))
        .sum();
    left * right
}

/// Value of the law's one-parameter function at `t`.
pub fn value_at(instance: &Instance, t: f64) -> Result<HermitianMatrix> {
    use InstanceData as D;
    match &instance.data {
        D::TensorF { a, b, .. } => symmetric_kron_powers(a, b, 1.0 + t, 1.0 - t),
        D::TensorG { a, b, .. } => symmetric_kron_powers(a, b, t, 1.0 - t),
        D::MatrixCallebaut { a, b, .. } => {
            symmetric_kron(&path_sum(a, b, t)?, &path_sum(a, b, 1.0 - t)?)
        }
        D::ScalarCallebaut { a, b, center, .. } => {
            Ok(HermitianMatrix::diagonal(&[callebaut_product(
                a, b, *center, t,
            )]))
        }
        _ => Err(Error::Precondition(format!(
            "{} is not sweepable",
            instance.law
        ))),
    }
}

/// `A^p⊗B^q + A^q⊗B^p`.
fn symmetric_kron_powers(a: &PDMatrix, b: &PDMatrix, p: f64, q: f64) -> Result<HermitianMatrix> {
    let (ap, aq) = (power(a, p)?, power(a, q)?);
    let (bp, bq) = (power(b, p)?, power(b, q)?);
    kron(ap.hermitian(), bq.hermitian())?.try_add(&kron(aq.hermitian(), bp.hermitian())?)
}

pub(crate) fn check_grid(grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Precondition("grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition(
            "grid must be strictly increasing".into(),
        ));
    }
    if grid[0] < lo || grid[grid.len() - 1] > hi {
        return Err(Error::Precondition(format!(
            "grid must lie within [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Samples the law's function on `grid` and compares consecutive points:
/// decreasing up to the center, increasing after it.
pub fn sweep_law(law: LawId, instance: &Instance, grid: &[f64], tol: f64) -> Result<Curve> {
    if instance.law != law {
        return Err(Error::Precondition(format!(
            "instance was drawn for {}, not {law}",
            instance.law
        )));
    }
    let (lo, center, hi) = domain(law)?;
    check_grid(grid, lo, hi)?;
    let values = grid
        .iter()
        .map(|&t| value_at(instance, t))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.with_seed(instance.seed))?;

    let mut points = Vec::with_capacity(grid.len());
    for (&t, v) in grid.iter().zip(&values) {
        let ev = v.eigenvalues()?;
        points.push(CurvePoint {
            t,
            trace: v.trace(),
            lambda_min: ev[0],
            lambda_max: ev[ev.len() - 1],
        });
    }

    let mut links = Vec::new();
    for i in 1..grid.len() {
        let (lower, upper) = if grid[i] <= center {
            (i, i - 1)
        } else if grid[i - 1] >= center {
            (i - 1, i)
        } else {
            // straddles the minimum: no ordering claimed
            continue;
        };
        let verdict = loewner_leq(&values[lower], &values[upper], tol)?;
        links.push(CurveLink {
            lower,
            upper,
            verdict,
        });
    }

    Ok(Curve {
        law: law.name().to_string(),
        center,
        points,
        links,
    })
}
