use super::sweep::{callebaut_product, check_grid, domain, path_sum, sweep_law, symmetric_kron};
use super::{summary, CheckResult, Instance, InstanceData, Link, Tolerances};
use crate::ensembles::Region;
use crate::error::{Error, Result};
use crate::linalg::{congruence, hadamard, hadamard_indices, power, HermitianMatrix, PDMatrix};
use crate::means::{geometric_mean, mean, path_point, weighted_geometric_mean, MeanDescriptor};

/// Step used to probe norm continuity of a path.
const CONTINUITY_STEP: f64 = 1e-9;
/// Relative change allowed across one continuity step.
const CONTINUITY_BOUND: f64 = 1e-4;

fn pd_sum(xs: &[PDMatrix]) -> Result<PDMatrix> {
    let mut it = xs.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Precondition("empty matrix tuple".into()))?
        .hermitian()
        .clone();
    PDMatrix::new(it.try_fold(first, |acc, x| acc.try_add(x.hermitian()))?)
}

/// `Σ_j A_j σ B_j`.
fn mean_sum(d: &MeanDescriptor, a: &[PDMatrix], b: &[PDMatrix]) -> Result<PDMatrix> {
    check_pairs(a, b)?;
    let terms = a
        .iter()
        .zip(b)
        .map(|(x, y)| mean(d, x, y))
        .collect::<Result<Vec<_>>>()?;
    pd_sum(&terms)
}

fn check_pairs(a: &[PDMatrix], b: &[PDMatrix]) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::Precondition(format!(
            "need equally many A_j and B_j (m ≥ 1), got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{name}={v} must lie in [0, 1]"
        )))
    }
}

fn check_callebaut_region(s: f64, t: f64) -> Result<()> {
    if Region::Callebaut.contains(s, t) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "(s, t) = ({s}, {t}) violates 0 ≤ t ≤ s ≤ 1/2 or 1/2 ≤ s ≤ t ≤ 1"
        )))
    }
}

fn is_endpoint(x: f64) -> bool {
    x == 0.0 || x == 1.0
}

fn pd_of(x: &PDMatrix) -> &HermitianMatrix {
    x.hermitian()
}

pub(super) fn check(instance: &Instance, tol: &Tolerances) -> Result<CheckResult> {
    use InstanceData as D;
    let law = instance.law;
    let summary = summary(instance);
    let lt = tol.loewner;
    let links = match &instance.data {
        D::MeanAxioms {
            mean: d,
            a,
            b,
            a_upper,
            b_upper,
            congruence: c,
        } => {
            d.validate()
                .map_err(|e| Error::Precondition(e.to_string()))?;
            let n = a.n();
            let id = PDMatrix::identity(n);
            let normalized = mean(d, &id, &id)?;
            let ab = mean(d, a, b)?;
            let lhs = congruence(c, ab.hermitian())?;
            let ca = PDMatrix::new(congruence(c, a.hermitian())?)?;
            let cb = PDMatrix::new(congruence(c, b.hermitian())?)?;
            let rhs = mean(d, &ca, &cb)?;
            let upper = mean(d, a_upper, b_upper)?;
            vec![
                Link::equality(
                    "I σ I = I",
                    normalized.hermitian(),
                    &HermitianMatrix::identity(n),
                    tol.exact,
                )?,
                Link::equality(
                    "C*(AσB)C = (C*AC)σ(C*BC)",
                    &lhs,
                    rhs.hermitian(),
                    tol.equality,
                )?,
                Link::loewner("AσB <= A'σB'", ab.hermitian(), upper.hermitian(), lt, false)?,
            ]
        }
        D::Superadditivity { mean: d, a, b } => {
            let lhs = mean_sum(d, a, b)?;
            let rhs = mean(d, &pd_sum(a)?, &pd_sum(b)?)?;
            vec![Link::loewner(
                "Σ AσB <= (ΣA)σ(ΣB)",
                pd_of(&lhs),
                pd_of(&rhs),
                lt,
                false,
            )?]
        }
        D::SharpIdentity { mean: d, a, b } => {
            let lhs = geometric_mean(&mean(d, a, b)?, &mean(&d.dual(), a, b)?)?;
            let rhs = geometric_mean(a, b)?;
            vec![Link::equality(
                "(AσB)♯(Aσ⊥B) = A♯B",
                pd_of(&lhs),
                pd_of(&rhs),
                tol.equality,
            )?]
        }
        D::CallebautOperator { mean: d, a, b } => {
            let left = mean_sum(&MeanDescriptor::Geometric, a, b)?;
            let middle = geometric_mean(&mean_sum(d, a, b)?, &mean_sum(&d.dual(), a, b)?)?;
            let right = geometric_mean(&pd_sum(a)?, &pd_sum(b)?)?;
            vec![
                Link::loewner(
                    "Σ A♯B <= (ΣAσB)♯(ΣAσ⊥B)",
                    pd_of(&left),
                    pd_of(&middle),
                    lt,
                    false,
                )?,
                Link::loewner(
                    "(ΣAσB)♯(ΣAσ⊥B) <= (ΣA)♯(ΣB)",
                    pd_of(&middle),
                    pd_of(&right),
                    lt,
                    false,
                )?,
            ]
        }
        D::PathMonotonicity { path_r, a, b, s, t } => {
            check_pairs(a, b)?;
            check_unit("t", *t)?;
            if !Region::Between.contains(*s, *t) {
                return Err(Error::Precondition(format!(
                    "s={s} is not between t={t} and 1 − t"
                )));
            }
            let path = |x: f64| MeanDescriptor::power_path(*path_r, x);
            // σ_t⊥ = σ_{1−t} is a hypothesis of the monotonicity statement
            let dual_t = mean(&path(*t)?.dual(), &a[0], &b[0])?;
            let reversed = mean(&path(1.0 - *t)?, &a[0], &b[0])?;
            let hypothesis = dual_t.hermitian().relative_distance(reversed.hermitian())?;
            if hypothesis > tol.equality {
                return Ok(CheckResult::skipped(
                    law.name(),
                    summary,
                    format!("σ_t⊥ ≠ σ_(1−t) for r={path_r}: residual {hypothesis:e}"),
                ));
            }
            let bracket = |x: f64| -> Result<PDMatrix> {
                geometric_mean(
                    &mean_sum(&path(x)?, a, b)?,
                    &mean_sum(&path(1.0 - x)?, a, b)?,
                )
            };
            let inner = bracket(*s)?;
            let outer = bracket(*t)?;
            let tight = *s == *t || *s == 1.0 - *t;
            vec![Link::loewner(
                "(ΣAσ_sB)♯(ΣAσ_(1−s)B) <= (ΣAσ_tB)♯(ΣAσ_(1−t)B)",
                pd_of(&inner),
                pd_of(&outer),
                lt,
                tight,
            )?]
        }
        D::GeoPathCallebaut { a, b, s } => {
            check_pairs(a, b)?;
            check_unit("s", *s)?;
            let left = mean_sum(&MeanDescriptor::Geometric, a, b)?;
            let middle = geometric_mean(
                &PDMatrix::new(path_sum(a, b, *s)?)?,
                &PDMatrix::new(path_sum(a, b, 1.0 - *s)?)?,
            )?;
            let right = geometric_mean(&pd_sum(a)?, &pd_sum(b)?)?;
            vec![
                Link::loewner(
                    "Σ A♯B <= (ΣA♯_sB)♯(ΣA♯_(1−s)B)",
                    pd_of(&left),
                    pd_of(&middle),
                    lt,
                    *s == 0.5,
                )?,
                Link::loewner(
                    "(ΣA♯_sB)♯(ΣA♯_(1−s)B) <= ΣA ♯ ΣB",
                    pd_of(&middle),
                    pd_of(&right),
                    lt,
                    is_endpoint(*s),
                )?,
            ]
        }
        D::ScalarCallebaut { a, b, s, t, center } => {
            if a.is_empty() || a.len() != b.len() {
                return Err(Error::Precondition(
                    "need equally many a_j and b_j (m ≥ 1)".into(),
                ));
            }
            if a.iter().chain(b).any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(Error::Precondition("sequences must be positive".into()));
            }
            check_callebaut_region(*s, *t)?;
            let mixed = |x: f64| {
                let l: f64 = a
                    .iter()
                    .zip(b)
                    .map(|(p, q)| p.powf(x) * q.powf(1.0 - x))
                    .sum();
                let r: f64 = a
                    .iter()
                    .zip(b)
                    .map(|(p, q)| p.powf(1.0 - x) * q.powf(x))
                    .sum();
                l * r
            };
            let geo: f64 = a.iter().zip(b).map(|(p, q)| (p * q).sqrt()).sum();
            let chain = [
                geo * geo,
                mixed(*s),
                mixed(*t),
                a.iter().sum::<f64>() * b.iter().sum::<f64>(),
            ];
            let mut links = vec![
                Link::scalar("(Σ√(ab))² <= S(s)", chain[0], chain[1], lt, *s == 0.5),
                Link::scalar("S(s) <= S(t)", chain[1], chain[2], lt, s == t),
                Link::scalar("S(t) <= ΣaΣb", chain[2], chain[3], lt, is_endpoint(*t)),
            ];
            let r_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
            let values: Vec<f64> = r_grid
                .iter()
                .map(|&r| callebaut_product(a, b, *center, r))
                .collect();
            for i in 1..r_grid.len() {
                links.push(Link::scalar(
                    format!("f({}) <= f({})", r_grid[i - 1], r_grid[i]),
                    values[i - 1],
                    values[i],
                    lt,
                    false,
                ));
            }
            let ratio = b[0] / a[0];
            let proportional = a.iter().zip(b).all(|(p, q)| q / p == ratio);
            if proportional {
                let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
                for i in 1..chain.len() {
                    links.push(Link::residual(
                        format!("proportional: chain[{}] = chain[{i}]", i - 1),
                        rel(chain[i - 1], chain[i]),
                        tol.equality,
                    ));
                }
                links.push(Link::residual(
                    "proportional: f(0) = f(1)",
                    rel(values[0], values[10]),
                    tol.equality,
                ));
            }
            links
        }
        D::PowerLemma { a, r_grid } => {
            if r_grid.is_empty() {
                return Err(Error::Precondition("r grid is empty".into()));
            }
            for &r in r_grid {
                check_unit("r", r)?;
            }
            let inv = power(a, -1.0)?;
            let rhs = a.hermitian().try_add(inv.hermitian())?;
            r_grid
                .iter()
                .map(|&r| {
                    let lhs = power(a, r)?
                        .hermitian()
                        .try_add(power(a, -r)?.hermitian())?;
                    Link::loewner(
                        format!("A^{r} + A^-{r} <= A + A^-1"),
                        &lhs,
                        &rhs,
                        lt,
                        r == 1.0,
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
        D::TensorF { grid, .. } | D::TensorG { grid, .. } => {
            let (lo, _, hi) = domain(law)?;
            check_grid(grid, lo, hi)?;
            let curve = sweep_law(law, instance, grid, lt)?;
            curve
                .links
                .iter()
                .map(|l| {
                    let label = format!("f({}) <= f({})", grid[l.lower], grid[l.upper]);
                    Link::from_verdict(label, l.verdict, false)
                })
                .collect()
        }
        D::MatrixCallebaut { a, b, s, t } => {
            check_pairs(a, b)?;
            check_callebaut_region(*s, *t)?;
            tensor_chain(a, b, *s, *t)?
                .windows(2)
                .zip(chain_labels("⊗"))
                .zip(chain_tightness(*s, *t))
                .map(|((w, label), tight)| Link::loewner(label, &w[0], &w[1], lt, tight))
                .collect::<Result<Vec<_>>>()?
        }
        D::HadamardCallebaut { a, b, s, t } => {
            check_pairs(a, b)?;
            check_callebaut_region(*s, *t)?;
            let members = hadamard_chain(a, b, *s, *t)?;
            let mut links = members
                .windows(2)
                .zip(chain_labels("∘"))
                .zip(chain_tightness(*s, *t))
                .map(|((w, label), tight)| Link::loewner(label, &w[0], &w[1], lt, tight))
                .collect::<Result<Vec<_>>>()?;
            // each member is half the matching principal submatrix of the Kronecker chain
            let indices = hadamard_indices(a[0].n());
            for (k, (h, t_member)) in members.iter().zip(tensor_chain(a, b, *s, *t)?).enumerate() {
                let sub = t_member.principal_submatrix(&indices).scale(0.5);
                links.push(Link::equality(
                    format!("member[{k}] = ½·submatrix of ⊗ member"),
                    h,
                    &sub,
                    tol.exact,
                )?);
            }
            links
        }
        D::HadamardPower { a, t } => {
            if a.is_empty() {
                return Err(Error::Precondition("need m ≥ 1".into()));
            }
            check_unit("t", *t)?;
            let m = a.len() as f64;
            let avg_power = |x: f64| -> Result<HermitianMatrix> {
                let terms = a
                    .iter()
                    .map(|aj| power(aj, x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(pd_sum(&terms)?.hermitian().scale(1.0 / m))
            };
            let half = avg_power(0.5)?;
            let left = hadamard(&half, &half)?;
            let middle = hadamard(&avg_power(*t)?, &avg_power(1.0 - *t)?)?;
            let id = HermitianMatrix::identity(a[0].n());
            let diag_terms = a
                .iter()
                .map(|aj| hadamard(aj.hermitian(), &id))
                .collect::<Result<Vec<_>>>()?;
            let mut right = diag_terms[0].clone();
            for d in &diag_terms[1..] {
                right = right.try_add(d)?;
            }
            let right = right.scale(1.0 / m);
            vec![
                Link::loewner(
                    "(ΣA^½/m)∘(ΣA^½/m) <= (ΣA^t/m)∘(ΣA^(1−t)/m)",
                    &left,
                    &middle,
                    lt,
                    *t == 0.5,
                )?,
                Link::loewner(
                    "(ΣA^t/m)∘(ΣA^(1−t)/m) <= Σ(A∘I)/m",
                    &middle,
                    &right,
                    lt,
                    is_endpoint(*t),
                )?,
            ]
        }
        D::InterpolationIdentity { a, b, p, q, r } => {
            for (name, v) in [("p", p), ("q", q), ("r", r)] {
                check_unit(name, *v)?;
            }
            let ap = weighted_geometric_mean(a, b, *p)?;
            let aq = weighted_geometric_mean(a, b, *q)?;
            let lhs = weighted_geometric_mean(&ap, &aq, *r)?;
            let rhs = weighted_geometric_mean(a, b, (1.0 - r) * p + r * q)?;
            vec![Link::equality(
                "(A♯_pB)♯_r(A♯_qB) = A♯_((1−r)p+rq)B",
                pd_of(&lhs),
                pd_of(&rhs),
                tol.equality,
            )?]
        }
        D::PathAxioms { r, a, b, p, q, t } => {
            if !(-1.0..=1.0).contains(r) {
                return Err(Error::Precondition(format!("r={r} must lie in [-1, 1]")));
            }
            for (name, v) in [("p", p), ("q", q), ("t", t)] {
                check_unit(name, *v)?;
            }
            let point = |x: f64| path_point(*r, x, a, b);
            let midpoint_mean = MeanDescriptor::power(*r)?;
            let lhs_mid = mean(&midpoint_mean, &point(*p)?, &point(*q)?)?;
            let rhs_mid = point((p + q) / 2.0)?;
            let step = if *t + CONTINUITY_STEP <= 1.0 {
                CONTINUITY_STEP
            } else {
                -CONTINUITY_STEP
            };
            let drift = pd_of(&point(*t)?).relative_distance(pd_of(&point(t + step)?))?;
            vec![
                Link::equality(
                    "A m_(r,0) B = A",
                    pd_of(&point(0.0)?),
                    pd_of(a),
                    tol.equality,
                )?,
                Link::equality(
                    "A m_(r,1) B = B",
                    pd_of(&point(1.0)?),
                    pd_of(b),
                    tol.equality,
                )?,
                Link::equality(
                    "A m_(r,½) B = A m_r B",
                    pd_of(&point(0.5)?),
                    pd_of(&mean(&midpoint_mean, a, b)?),
                    tol.equality,
                )?,
                Link::equality(
                    "(A m_(r,p) B) m_r (A m_(r,q) B) = A m_(r,(p+q)/2) B",
                    pd_of(&lhs_mid),
                    pd_of(&rhs_mid),
                    tol.equality,
                )?,
                Link::residual("‖m_(r,t+h) − m_(r,t)‖ small", drift, CONTINUITY_BOUND),
            ]
        }
        D::Wada { mean: d, a, b } => {
            let g = geometric_mean(a, b)?;
            let left = crate::linalg::kron(pd_of(&g), pd_of(&g))?;
            let middle =
                symmetric_kron(pd_of(&mean(d, a, b)?), pd_of(&mean(&d.dual(), a, b)?))?.scale(0.5);
            let right = symmetric_kron(pd_of(a), pd_of(b))?.scale(0.5);
            vec![
                Link::loewner(
                    "(A♯B)⊗(A♯B) <= ½{(AσB)⊗(Aσ⊥B) + (Aσ⊥B)⊗(AσB)}",
                    &left,
                    &middle,
                    lt,
                    false,
                )?,
                Link::loewner(
                    "½{(AσB)⊗(Aσ⊥B) + …} <= ½{A⊗B + B⊗A}",
                    &middle,
                    &right,
                    lt,
                    false,
                )?,
            ]
        }
    };
    Ok(CheckResult::new(law.name(), summary, links))
}

fn chain_labels(op: &str) -> Vec<String> {
    vec![
        format!("first <= middle(s) [{op}]"),
        format!("middle(s) <= middle(t) [{op}]"),
        format!("middle(t) <= last [{op}]"),
    ]
}

/// Links forced to equality by the parameters.
fn chain_tightness(s: f64, t: f64) -> [bool; 3] {
    [s == 0.5, s == t, is_endpoint(t)]
}

/// `2·S_½⊗S_½, F(s), F(t), ΣA⊗ΣB + ΣB⊗ΣA` with `F(x) = S_x⊗S_{1−x} + S_{1−x}⊗S_x`.
pub(crate) fn tensor_chain(
    a: &[PDMatrix],
    b: &[PDMatrix],
    s: f64,
    t: f64,
) -> Result<Vec<HermitianMatrix>> {
    let f = |x: f64| -> Result<HermitianMatrix> {
        symmetric_kron(&path_sum(a, b, x)?, &path_sum(a, b, 1.0 - x)?)
    };
    let half = path_sum(a, b, 0.5)?;
    let sa = pd_sum(a)?;
    let sb = pd_sum(b)?;
    Ok(vec![
        symmetric_kron(&half, &half)?,
        f(s)?,
        f(t)?,
        symmetric_kron(sa.hermitian(), sb.hermitian())?,
    ])
}

/// `S_½∘S_½, S_s∘S_{1−s}, S_t∘S_{1−t}, ΣA∘ΣB`.
pub(crate) fn hadamard_chain(
    a: &[PDMatrix],
    b: &[PDMatrix],
    s: f64,
    t: f64,
) -> Result<Vec<HermitianMatrix>> {
    let g = |x: f64| -> Result<HermitianMatrix> {
        hadamard(&path_sum(a, b, x)?, &path_sum(a, b, 1.0 - x)?)
    };
    let half = path_sum(a, b, 0.5)?;
    Ok(vec![
        hadamard(&half, &half)?,
        g(s)?,
        g(t)?,
        hadamard(pd_sum(a)?.hermitian(), pd_sum(b)?.hermitian())?,
    ])
}
