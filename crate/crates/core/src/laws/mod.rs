//! Catalog of matrix-mean inequalities and identities, each with a checker
//! that reports Loewner margins or equality residuals per link of the chain.

mod checks;
pub mod instance;
pub mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{loewner_leq, HermitianMatrix, LoewnerVerdict};

pub use instance::{Instance, InstanceData, TrialSpec};
pub use sweep::{sweep_law, Curve, CurveLink, CurvePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawId {
    /// Normalization, congruence equivariance and joint monotonicity.
    MeanAxioms,
    /// `Σ A_j σ B_j ≤ (Σ A_j) σ (Σ B_j)`.
    Superadditivity,
    /// `(A σ B) ♯ (A σ⊥ B) = A ♯ B`.
    SharpIdentity,
    /// `Σ A_j♯B_j ≤ (Σ A_jσB_j) ♯ (Σ A_jσ⊥B_j) ≤ (Σ A_j) ♯ (Σ B_j)`.
    CallebautOperator,
    /// The sharp of complementary path sums shrinks as `s` moves toward `1/2`.
    PathMonotonicity,
    /// Operator Callebaut chain for weighted geometric means.
    GeoPathCallebaut,
    /// The classical scalar chain and monotonicity of `f(r, s)` in `|r|`.
    ScalarCallebaut,
    /// `A^r + A^{-r} ≤ A + A^{-1}` for `0 ≤ r ≤ 1`.
    PowerLemma,
    /// `A^{1+t}⊗B^{1-t} + A^{1-t}⊗B^{1+t}` is minimal at `t = 0`.
    TensorF,
    /// `A^t⊗B^{1-t} + A^{1-t}⊗B^t` is minimal at `t = 1/2`.
    TensorG,
    /// Kronecker Callebaut chain.
    MatrixCallebaut,
    /// Hadamard Callebaut chain.
    HadamardCallebaut,
    /// Hadamard chain for powers with the `1/m` normalizations.
    HadamardPower,
    /// `(A♯_pB) ♯_r (A♯_qB) = A ♯_{(1-r)p+rq} B`.
    InterpolationIdentity,
    /// Endpoints, midpoint and continuity of the power-mean paths.
    PathAxioms,
    /// Tensor version of the operator Callebaut inequality for one pair.
    Wada,
}

impl LawId {
    pub const ALL: [LawId; 16] = [
        LawId::MeanAxioms,
        LawId::Superadditivity,
        LawId::SharpIdentity,
        LawId::CallebautOperator,
        LawId::PathMonotonicity,
        LawId::GeoPathCallebaut,
        LawId::ScalarCallebaut,
        LawId::PowerLemma,
        LawId::TensorF,
        LawId::TensorG,
        LawId::MatrixCallebaut,
        LawId::HadamardCallebaut,
        LawId::HadamardPower,
        LawId::InterpolationIdentity,
        LawId::PathAxioms,
        LawId::Wada,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawId::MeanAxioms => "mean-axioms",
            LawId::Superadditivity => "superadditivity",
            LawId::SharpIdentity => "sharp-identity",
            LawId::CallebautOperator => "callebaut-operator",
            LawId::PathMonotonicity => "path-monotonicity",
            LawId::GeoPathCallebaut => "geo-path-callebaut",
            LawId::ScalarCallebaut => "scalar-callebaut",
            LawId::PowerLemma => "power-lemma",
            LawId::TensorF => "tensor-f",
            LawId::TensorG => "tensor-g",
            LawId::MatrixCallebaut => "matrix-callebaut",
            LawId::HadamardCallebaut => "hadamard-callebaut",
            LawId::HadamardPower => "hadamard-power",
            LawId::InterpolationIdentity => "interpolation-identity",
            LawId::PathAxioms => "path-axioms",
            LawId::Wada => "wada",
        }
    }

    /// Laws whose matrices live in `n²` dimensions.
    pub fn is_tensor(self) -> bool {
        matches!(
            self,
            LawId::TensorF | LawId::TensorG | LawId::MatrixCallebaut | LawId::Wada
        )
    }

    /// Largest tuple length the default suite cycles through.
    pub fn max_m(self) -> usize {
        match self {
            LawId::ScalarCallebaut => 8,
            LawId::Superadditivity
            | LawId::CallebautOperator
            | LawId::PathMonotonicity
            | LawId::GeoPathCallebaut
            | LawId::MatrixCallebaut
            | LawId::HadamardCallebaut
            | LawId::HadamardPower => 4,
            _ => 1,
        }
    }

    pub fn boundary_count(self) -> usize {
        match self {
            LawId::ScalarCallebaut | LawId::MatrixCallebaut | LawId::HadamardCallebaut => 4,
            LawId::PathMonotonicity | LawId::GeoPathCallebaut | LawId::HadamardPower => 3,
            LawId::InterpolationIdentity => 3,
            LawId::PathAxioms => 1,
            _ => 0,
        }
    }

    pub fn is_sweepable(self) -> bool {
        matches!(
            self,
            LawId::TensorF | LawId::TensorG | LawId::MatrixCallebaut | LawId::ScalarCallebaut
        )
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown law {s:?}")))
    }
}

/// Tolerances applied by the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Loewner links hold when `margin ≥ −loewner·max(1, scale)`.
    pub loewner: f64,
    /// Relative Frobenius residual allowed for identities.
    pub equality: f64,
    /// Residual for identities that involve no accumulated error.
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            loewner: 1e-8,
            equality: 1e-9,
            exact: 1e-13,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            loewner: tol,
            equality: tol,
            exact: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LinkCheck {
    Loewner(LoewnerVerdict),
    Equality { residual: f64, tolerance: f64 },
}

/// One comparison in a law's chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub label: String,
    pub check: LinkCheck,
    /// The parameters force equality here, so the margin must also be ≈ 0.
    #[serde(default)]
    pub tight: bool,
    pub holds: bool,
}

impl Link {
    pub fn from_verdict(label: impl Into<String>, verdict: LoewnerVerdict, tight: bool) -> Self {
        let holds = verdict.holds && (!tight || verdict.is_tight(verdict.tolerance));
        Self {
            label: label.into(),
            check: LinkCheck::Loewner(verdict),
            tight,
            holds,
        }
    }

    /// `lhs ≤ rhs`.
    pub fn loewner(
        label: impl Into<String>,
        lhs: &HermitianMatrix,
        rhs: &HermitianMatrix,
        tol: f64,
        tight: bool,
    ) -> Result<Self> {
        Ok(Self::from_verdict(
            label,
            loewner_leq(lhs, rhs, tol)?,
            tight,
        ))
    }

    pub fn scalar(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64, tight: bool) -> Self {
        Self::from_verdict(label, LoewnerVerdict::scalar(lhs, rhs, tol), tight)
    }

    pub fn residual(label: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            check: LinkCheck::Equality {
                residual,
                tolerance,
            },
            tight: false,
            holds: residual <= tolerance,
        }
    }

    pub fn equality(
        label: impl Into<String>,
        lhs: &HermitianMatrix,
        rhs: &HermitianMatrix,
        tolerance: f64,
    ) -> Result<Self> {
        Ok(Self::residual(
            label,
            lhs.relative_distance(rhs)?,
            tolerance,
        ))
    }

    pub fn verdict(&self) -> Option<&LoewnerVerdict> {
        match &self.check {
            LinkCheck::Loewner(v) => Some(v),
            LinkCheck::Equality { .. } => None,
        }
    }

    pub fn residual_value(&self) -> Option<f64> {
        match self.check {
            LinkCheck::Equality { residual, .. } => Some(residual),
            LinkCheck::Loewner(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub law: String,
    pub instance: InstanceSummary,
    pub links: Vec<Link>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(law: impl Into<String>, instance: InstanceSummary, links: Vec<Link>) -> Self {
        let status = if links.iter().all(|l| l.holds) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            law: law.into(),
            instance,
            links,
            status,
            note: None,
        }
    }

    pub fn skipped(law: impl Into<String>, instance: InstanceSummary, note: String) -> Self {
        Self {
            law: law.into(),
            instance,
            links: vec![],
            status: Status::Skipped,
            note: Some(note),
        }
    }

    pub fn holds(&self) -> bool {
        self.status != Status::Fail
    }

    /// Smallest `margin / max(1, scale)` over Loewner links.
    pub fn worst_margin(&self) -> Option<f64> {
        self.links
            .iter()
            .filter_map(Link::verdict)
            .map(LoewnerVerdict::normalized_margin)
            .min_by(f64::total_cmp)
    }

    /// Largest residual over equality links.
    pub fn worst_residual(&self) -> Option<f64> {
        self.links
            .iter()
            .filter_map(Link::residual_value)
            .max_by(f64::total_cmp)
    }

    pub fn link(&self, label: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.label == label)
    }
}

/// A verifiable statement: how to draw an instance and how to check it.
///
/// Implemented by [`LawId`]; the harness accepts any implementation so test
/// fixtures can be injected.
pub trait Law: Sync {
    fn law_name(&self) -> String;

    fn is_tensor(&self) -> bool {
        false
    }

    fn max_m(&self) -> usize {
        1
    }

    fn boundary_count(&self) -> usize {
        0
    }

    fn sample(&self, trial: &TrialSpec) -> Result<Instance>;

    fn check(&self, instance: &Instance, tol: &Tolerances) -> Result<CheckResult>;
}

impl Law for LawId {
    fn law_name(&self) -> String {
        LawId::name(*self).to_string()
    }

    fn is_tensor(&self) -> bool {
        LawId::is_tensor(*self)
    }

    fn max_m(&self) -> usize {
        LawId::max_m(*self)
    }

    fn boundary_count(&self) -> usize {
        LawId::boundary_count(*self)
    }

    fn sample(&self, trial: &TrialSpec) -> Result<Instance> {
        sample_instance(*self, trial)
    }

    fn check(&self, instance: &Instance, tol: &Tolerances) -> Result<CheckResult> {
        check_law(*self, instance, tol)
    }
}

pub fn sample_instance(law: LawId, trial: &TrialSpec) -> Result<Instance> {
    instance::sample(law, trial).map_err(|e| e.with_seed(trial.seed))
}

/// Evaluates every link of `law` on `instance`.
pub fn check_law(law: LawId, instance: &Instance, tol: &Tolerances) -> Result<CheckResult> {
    if instance.law != law {
        return Err(Error::Precondition(format!(
            "instance was drawn for {}, not {law}",
            instance.law
        )));
    }
    checks::check(instance, tol).map_err(|e| match e {
        e @ Error::Precondition(_) => e,
        e => e.with_seed(instance.seed),
    })
}

pub(crate) fn summary(instance: &Instance) -> InstanceSummary {
    InstanceSummary {
        n: instance.n(),
        m: instance.m(),
        seed: instance.seed,
        params: instance.params(),
    }
}
