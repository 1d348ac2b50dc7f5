//! Concrete inputs for one trial of a law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::LawId;
use crate::ensembles::{Ensemble, EnsembleSpec, FieldKind, Region};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, PDMatrix};
use crate::means::MeanDescriptor;

/// Everything needed to regenerate one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub field: FieldKind,
    pub kappa_max: f64,
    /// Forced boundary case index, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<usize>,
}

impl TrialSpec {
    pub fn ensemble(&self) -> EnsembleSpec {
        EnsembleSpec {
            n: self.n,
            m: self.m,
            field: self.field,
            kappa_max: self.kappa_max,
            seed: self.seed,
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum InstanceData {
    MeanAxioms {
        mean: MeanDescriptor,
        a: PDMatrix,
        b: PDMatrix,
        a_upper: PDMatrix,
        b_upper: PDMatrix,
        congruence: CMatrix,
    },
    Superadditivity {
        mean: MeanDescriptor,
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
    },
    SharpIdentity {
        mean: MeanDescriptor,
        a: PDMatrix,
        b: PDMatrix,
    },
    CallebautOperator {
        mean: MeanDescriptor,
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
    },
    /// `path_r = 0` is the geometric path `♯_t`; otherwise the power path `m_{r,t}`.
    PathMonotonicity {
        path_r: f64,
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
        s: f64,
        t: f64,
    },
    GeoPathCallebaut {
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
        s: f64,
    },
    ScalarCallebaut {
        a: Vec<f64>,
        b: Vec<f64>,
        s: f64,
        t: f64,
        /// Exponent center of `f(r, center)` for the monotonicity-in-`|r|` links.
        center: f64,
    },
    PowerLemma {
        a: PDMatrix,
        r_grid: Vec<f64>,
    },
    TensorF {
        a: PDMatrix,
        b: PDMatrix,
        grid: Vec<f64>,
    },
    TensorG {
        a: PDMatrix,
        b: PDMatrix,
        grid: Vec<f64>,
    },
    MatrixCallebaut {
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
        s: f64,
        t: f64,
    },
    HadamardCallebaut {
        a: Vec<PDMatrix>,
        b: Vec<PDMatrix>,
        s: f64,
        t: f64,
    },
    HadamardPower {
        a: Vec<PDMatrix>,
        t: f64,
    },
    InterpolationIdentity {
        a: PDMatrix,
        b: PDMatrix,
        p: f64,
        q: f64,
        r: f64,
    },
    PathAxioms {
        r: f64,
        a: PDMatrix,
        b: PDMatrix,
        p: f64,
        q: f64,
        t: f64,
    },
    Wada {
        mean: MeanDescriptor,
        a: PDMatrix,
        b: PDMatrix,
    },
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub law: LawId,
    pub seed: u64,
    pub data: InstanceData,
}

/// Evenly spaced points, both ends included.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points)
            .map(|i| {
                if i == points - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

/// Grid with `per_side` points on each of `[lo, center]` and `[center, hi]`.
pub fn two_sided_grid(lo: f64, center: f64, hi: f64, per_side: usize) -> Vec<f64> {
    let mut grid = linspace(lo, center, per_side);
    grid.extend(linspace(center, hi, per_side).into_iter().skip(1));
    grid
}

pub const DEFAULT_POINTS_PER_SIDE: usize = 9;

/// `r ∈ {0, 0.1, …, 1}`.
pub fn power_lemma_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

fn general_mean(e: &mut Ensemble) -> MeanDescriptor {
    use MeanDescriptor::*;
    let base = match e.index(7) {
        0 => Arithmetic,
        1 => Harmonic,
        2 => Geometric,
        3 => WeightedGeometric(e.uniform()),
        4 => Power(e.uniform_in(-1.0, 1.0)),
        5 => PowerPath {
            r: e.uniform_in(-1.0, 1.0),
            t: e.uniform(),
        },
        _ => GeometricPath(e.uniform()),
    };
    if e.index(4) == 0 {
        MeanDescriptor::dual_of(base)
    } else {
        base
    }
}

/// Means for the sharp identity: arithmetic, harmonic, `m_{±1/2}`, `♯_{1/4}`,
/// wrapped in up to two explicit duals.
fn sharp_mean(e: &mut Ensemble) -> MeanDescriptor {
    use MeanDescriptor::*;
    let mut d = match e.index(5) {
        0 => Arithmetic,
        1 => Harmonic,
        2 => Power(0.5),
        3 => Power(-0.5),
        _ => WeightedGeometric(0.25),
    };
    for _ in 0..e.index(3) {
        d = MeanDescriptor::dual_of(d);
    }
    d
}

pub(crate) fn sample(law: LawId, trial: &TrialSpec) -> Result<Instance> {
    let spec = trial.ensemble();
    spec.validate()?;
    let mut e = Ensemble::new(spec);
    let m = trial.m;
    let boundary = trial.boundary;
    if let Some(k) = boundary {
        if k >= law.boundary_count() {
            return Err(Error::Precondition(format!(
                "{law} has {} boundary cases, requested #{k}",
                law.boundary_count()
            )));
        }
    }
    use InstanceData as D;
    let data = match law {
        LawId::MeanAxioms => {
            let mean = general_mean(&mut e);
            let (a, a_upper) = e.ordered_pair()?;
            let (b, b_upper) = e.ordered_pair()?;
            let congruence = e.invertible();
            D::MeanAxioms {
                mean,
                a,
                b,
                a_upper,
                b_upper,
                congruence,
            }
        }
        LawId::Superadditivity => D::Superadditivity {
            mean: general_mean(&mut e),
            a: e.pd_tuple(m)?,
            b: e.pd_tuple(m)?,
        },
        LawId::SharpIdentity => D::SharpIdentity {
            mean: sharp_mean(&mut e),
            a: e.pd()?,
            b: e.pd()?,
        },
        LawId::CallebautOperator => D::CallebautOperator {
            mean: general_mean(&mut e),
            a: e.pd_tuple(m)?,
            b: e.pd_tuple(m)?,
        },
        LawId::PathMonotonicity => {
            let (s, t) = e.region(Region::Between, boundary)?;
            D::PathMonotonicity {
                path_r: 0.0,
                a: e.pd_tuple(m)?,
                b: e.pd_tuple(m)?,
                s,
                t,
            }
        }
        LawId::GeoPathCallebaut => {
            let (s, _) = e.region(Region::Unit, boundary)?;
            D::GeoPathCallebaut {
                a: e.pd_tuple(m)?,
                b: e.pd_tuple(m)?,
                s,
            }
        }
        LawId::ScalarCallebaut => {
            let (s, t) = e.region(Region::Callebaut, boundary)?;
            let a = e.positive_scalars(m);
            let b = if e.index(4) == 0 {
                let c = e.log_uniform();
                a.iter().map(|x| c * x).collect()
            } else {
                e.positive_scalars(m)
            };
            D::ScalarCallebaut {
                a,
                b,
                s,
                t,
                center: e.uniform(),
            }
        }
        LawId::PowerLemma => D::PowerLemma {
            a: e.pd()?,
            r_grid: power_lemma_grid(),
        },
        LawId::TensorF => D::TensorF {
            a: e.pd()?,
            b: e.pd()?,
            grid: two_sided_grid(-1.0, 0.0, 1.0, DEFAULT_POINTS_PER_SIDE),
        },
        LawId::TensorG => D::TensorG {
            a: e.pd()?,
            b: e.pd()?,
            grid: two_sided_grid(0.0, 0.5, 1.0, DEFAULT_POINTS_PER_SIDE),
        },
        LawId::MatrixCallebaut | LawId::HadamardCallebaut => {
            let (s, t) = e.region(Region::Callebaut, boundary)?;
            let a = e.pd_tuple(m)?;
            let b = e.pd_tuple(m)?;
            if law == LawId::MatrixCallebaut {
                D::MatrixCallebaut { a, b, s, t }
            } else {
                D::HadamardCallebaut { a, b, s, t }
            }
        }
        LawId::HadamardPower => {
            let (t, _) = e.region(Region::Unit, boundary)?;
            D::HadamardPower {
                a: e.pd_tuple(m)?,
                t,
            }
        }
        LawId::InterpolationIdentity => {
            let (r, _) = e.region(Region::Unit, boundary)?;
            D::InterpolationIdentity {
                a: e.pd()?,
                b: e.pd()?,
                p: e.uniform(),
                q: e.uniform(),
                r,
            }
        }
        LawId::PathAxioms => {
            let r = if boundary == Some(0) {
                0.0
            } else {
                e.uniform_in(-1.0, 1.0)
            };
            D::PathAxioms {
                r,
                a: e.pd()?,
                b: e.pd()?,
                p: e.uniform(),
                q: e.uniform(),
                t: e.uniform(),
            }
        }
        LawId::Wada => D::Wada {
            mean: general_mean(&mut e),
            a: e.pd()?,
            b: e.pd()?,
        },
    };
    Ok(Instance {
        law,
        seed: trial.seed,
        data,
    })
}

fn indexed<'a>(name: &str, xs: &'a [PDMatrix]) -> Vec<(String, &'a CMatrix)> {
    xs.iter()
        .enumerate()
        .map(|(j, x)| (format!("{name}[{j}]"), x.hermitian().as_matrix()))
        .collect()
}

impl Instance {
    pub fn n(&self) -> usize {
        use InstanceData as D;
        match &self.data {
            D::ScalarCallebaut { .. } => 1,
            D::MeanAxioms { a, .. }
            | D::SharpIdentity { a, .. }
            | D::PowerLemma { a, .. }
            | D::TensorF { a, .. }
            | D::TensorG { a, .. }
            | D::InterpolationIdentity { a, .. }
            | D::PathAxioms { a, .. }
            | D::Wada { a, .. } => a.n(),
            D::Superadditivity { a, .. }
            | D::CallebautOperator { a, .. }
            | D::PathMonotonicity { a, .. }
            | D::GeoPathCallebaut { a, .. }
            | D::MatrixCallebaut { a, .. }
            | D::HadamardCallebaut { a, .. }
            | D::HadamardPower { a, .. } => a.first().map_or(0, PDMatrix::n),
        }
    }

    pub fn m(&self) -> usize {
        use InstanceData as D;
        match &self.data {
            D::ScalarCallebaut { a, .. } => a.len(),
            D::Superadditivity { a, .. }
            | D::CallebautOperator { a, .. }
            | D::PathMonotonicity { a, .. }
            | D::GeoPathCallebaut { a, .. }
            | D::MatrixCallebaut { a, .. }
            | D::HadamardCallebaut { a, .. }
            | D::HadamardPower { a, .. } => a.len(),
            _ => 1,
        }
    }

    /// Scalar parameters, for reports and reproduction dumps.
    pub fn params(&self) -> BTreeMap<String, Value> {
        use InstanceData as D;
        let mut p = BTreeMap::new();
        let mut put = |k: &str, v: Value| {
            p.insert(k.to_string(), v);
        };
        match &self.data {
            D::MeanAxioms { mean, .. }
            | D::Superadditivity { mean, .. }
            | D::SharpIdentity { mean, .. }
            | D::CallebautOperator { mean, .. }
            | D::Wada { mean, .. } => put("mean", json!(mean.to_string())),
            D::PathMonotonicity { path_r, s, t, .. } => {
                put("path_r", json!(path_r));
                put("s", json!(s));
                put("t", json!(t));
            }
            D::GeoPathCallebaut { s, .. } => put("s", json!(s)),
            D::ScalarCallebaut { a, b, s, t, center } => {
                put("a", json!(a));
                put("b", json!(b));
                put("s", json!(s));
                put("t", json!(t));
                put("center", json!(center));
            }
            D::PowerLemma { r_grid, .. } => put("r_grid", json!(r_grid)),
            D::TensorF { grid, .. } | D::TensorG { grid, .. } => put("grid", json!(grid)),
            D::MatrixCallebaut { s, t, .. } | D::HadamardCallebaut { s, t, .. } => {
                put("s", json!(s));
                put("t", json!(t));
            }
            D::HadamardPower { t, .. } => put("t", json!(t)),
            D::InterpolationIdentity { p: pp, q, r, .. } => {
                put("p", json!(pp));
                put("q", json!(q));
                put("r", json!(r));
            }
            D::PathAxioms { r, p: pp, q, t, .. } => {
                put("r", json!(r));
                put("p", json!(pp));
                put("q", json!(q));
                put("t", json!(t));
            }
        }
        p
    }

    /// Named matrices of the instance.
    pub fn matrices(&self) -> Vec<(String, &CMatrix)> {
        use InstanceData as D;
        match &self.data {
            D::MeanAxioms {
                a,
                b,
                a_upper,
                b_upper,
                congruence,
                ..
            } => vec![
                ("A".into(), a.hermitian().as_matrix()),
                ("B".into(), b.hermitian().as_matrix()),
                ("A_upper".into(), a_upper.hermitian().as_matrix()),
                ("B_upper".into(), b_upper.hermitian().as_matrix()),
                ("C".into(), congruence),
            ],
            D::SharpIdentity { a, b, .. }
            | D::TensorF { a, b, .. }
            | D::TensorG { a, b, .. }
            | D::InterpolationIdentity { a, b, .. }
            | D::PathAxioms { a, b, .. }
            | D::Wada { a, b, .. } => vec![
                ("A".into(), a.hermitian().as_matrix()),
                ("B".into(), b.hermitian().as_matrix()),
            ],
            D::PowerLemma { a, .. } => vec![("A".into(), a.hermitian().as_matrix())],
            D::Superadditivity { a, b, .. }
            | D::CallebautOperator { a, b, .. }
            | D::PathMonotonicity { a, b, .. }
            | D::GeoPathCallebaut { a, b, .. }
            | D::MatrixCallebaut { a, b, .. }
            | D::HadamardCallebaut { a, b, .. } => {
                let mut v = indexed("A", a);
                v.extend(indexed("B", b));
                v
            }
            D::HadamardPower { a, .. } => indexed("A", a),
            D::ScalarCallebaut { .. } => vec![],
        }
    }
}
