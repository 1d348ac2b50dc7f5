//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use meanscope::ensembles::{Ensemble, EnsembleSpec};
use meanscope::harness::{self, ReproKey, RunConfig};
use meanscope::laws::instance::two_sided_grid;
use meanscope::laws::{
    check_law, CheckResult, Instance, InstanceData, InstanceSummary, Law, LawId, Link, Status,
    Tolerances, TrialSpec,
};
use meanscope::linalg::{power, HermitianMatrix};

const LOEWNER_TOL: f64 = 1e-8;
const EQUALITY_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-12;
const SCALAR_TOL: f64 = 1e-12;
const FOLLOWS_FROM_TOL: f64 = 1e-13;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(laws: &[LawId], trials: usize, seed: u64) -> RunConfig {
    RunConfig {
        laws: laws.iter().map(|l| l.name().to_string()).collect(),
        trials,
        seed,
        ..RunConfig::default()
    }
}

/// Runs `trials` trials of `law` and returns every result; errors count as failures.
fn run_all(law: LawId, cfg: &RunConfig) -> Result<Vec<(TrialSpec, CheckResult)>, String> {
    (0..cfg.trials)
        .map(|k| {
            let trial = harness::trial_spec(&law, cfg, k);
            harness::run_trial(&law, cfg, &trial)
                .map(|r| (trial, r))
                .map_err(|e| format!("{law} trial {k} (seed {}): {e}", trial.seed))
        })
        .collect()
}

fn zero_failures(law: LawId, results: &[(TrialSpec, CheckResult)]) -> Outcome {
    let failed: Vec<u64> = results
        .iter()
        .filter(|(_, r)| r.status == Status::Fail)
        .map(|(t, _)| t.seed)
        .collect();
    ensure(failed.is_empty(), || {
        format!("{law}: {} failures, seeds {failed:?}", failed.len())
    })
}

fn eigensolver_oracle() -> Outcome {
    let start = Instant::now();
    for k in 0..100u64 {
        let n = (k as usize % 16) + 1;
        let mut e = Ensemble::new(EnsembleSpec {
            n,
            seed: 1000 + k,
            ..EnsembleSpec::default()
        });
        let g = e.gaussian_matrix(n, n);
        let a = HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).map_err(|e| e.to_string())?;
        let sd = a.eig().map_err(|e| e.to_string())?;
        let bound = EIGEN_TOL * a.frobenius_norm().max(1.0);
        let recon = (sd.reconstruct() - a.as_matrix()).norm();
        ensure(recon <= bound, || {
            format!("n={n}: reconstruction residual {recon:e} > {bound:e}")
        })?;
        let unit = sd.unitarity_residual();
        ensure(unit <= bound, || {
            format!("n={n}: unitarity residual {unit:e} > {bound:e}")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2}s"))
}

fn sharp_identity() -> Outcome {
    let cfg = config(&[LawId::SharpIdentity], 500, 2);
    let results = run_all(LawId::SharpIdentity, &cfg)?;
    zero_failures(LawId::SharpIdentity, &results)?;
    let worst = results
        .iter()
        .filter_map(|(_, r)| r.worst_residual())
        .fold(0.0, f64::max);
    ensure(worst <= EQUALITY_TOL, || {
        format!("worst residual {worst:e}")
    })
}

fn operator_callebaut_chains() -> Outcome {
    for law in [LawId::CallebautOperator, LawId::GeoPathCallebaut] {
        let cfg = config(&[law], 500, 3);
        let results = run_all(law, &cfg)?;
        zero_failures(law, &results)?;
        let max_m = results.iter().map(|(t, _)| t.m).max().unwrap_or(0);
        ensure(max_m == 4, || format!("{law}: m never reached 4"))?;
    }
    Ok(())
}

/// Tight links must have |margin| ≤ tol·max(1, scale).
fn tight_links_vanish(results: &[(TrialSpec, CheckResult)], tol: f64) -> Outcome {
    for (trial, r) in results {
        for link in r.links.iter().filter(|l| l.tight) {
            let v = link.verdict().expect("tight links are Loewner links");
            ensure(v.margin.abs() <= tol * v.scale.max(1.0), || {
                format!(
                    "seed {}: {} has margin {:e}",
                    trial.seed, link.label, v.margin
                )
            })?;
        }
    }
    Ok(())
}

fn path_monotonicity() -> Outcome {
    let law = LawId::PathMonotonicity;
    let cfg = config(&[law], 500, 4);
    let results = run_all(law, &cfg)?;
    zero_failures(law, &results)?;
    let boundary: Vec<_> = results
        .iter()
        .filter(|(t, _)| t.boundary.is_some())
        .cloned()
        .collect();
    ensure(boundary.len() == law.boundary_count(), || {
        "boundary cases missing".into()
    })?;
    let tight = boundary
        .iter()
        .flat_map(|(_, r)| &r.links)
        .filter(|l| l.tight)
        .count();
    ensure(tight >= 2, || {
        format!("only {tight} forced-equality links among boundary cases")
    })?;
    tight_links_vanish(&boundary, LOEWNER_TOL)
}

fn power_lemma() -> Outcome {
    let law = LawId::PowerLemma;
    let cfg = config(&[law], 500, 5);
    let results = run_all(law, &cfg)?;
    zero_failures(law, &results)?;
    for (trial, r) in &results {
        for (label, r_value) in [
            ("A^1 + A^-1 <= A + A^-1", 1.0),
            ("A^0 + A^-0 <= A + A^-1", 0.0),
        ] {
            let v = r
                .link(label)
                .and_then(Link::verdict)
                .ok_or_else(|| format!("missing link {label}"))?;
            let bound = 1e-9 * v.scale;
            ensure(v.margin.abs() <= bound, || {
                format!(
                    "seed {}: r={r_value} margin {:e} exceeds {bound:e}",
                    trial.seed, v.margin
                )
            })?;
        }
    }
    Ok(())
}

fn tensor_sweeps() -> Outcome {
    for law in [LawId::TensorF, LawId::TensorG] {
        let cfg = config(&[law], 100, 6);
        let (lo, center, hi) = meanscope::laws::sweep::domain(law).map_err(|e| e.to_string())?;
        let grid = two_sided_grid(lo, center, hi, 9);
        let c = grid
            .iter()
            .position(|&t| t == center)
            .expect("grid contains the center");
        for k in 0..cfg.trials {
            let trial = harness::trial_spec(&law, &cfg, k);
            ensure(trial.n <= 3, || format!("n={} exceeds 3", trial.n))?;
            let instance = law.sample(&trial).map_err(|e| e.to_string())?;
            let curve = meanscope::laws::sweep_law(law, &instance, &grid, LOEWNER_TOL)
                .map_err(|e| e.to_string())?;
            ensure(curve.all_hold(), || {
                format!("{law} seed {}: a monotone link fails", trial.seed)
            })?;
            for neighbor in [c - 1, c + 1] {
                let link = curve
                    .links
                    .iter()
                    .find(|l| l.lower == c && l.upper == neighbor)
                    .ok_or_else(|| format!("{law}: no link from the center to point {neighbor}"))?;
                ensure(link.verdict.holds, || {
                    format!(
                        "{law} seed {}: neighbor {neighbor} below center",
                        trial.seed
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn matrix_callebaut() -> Outcome {
    let law = LawId::MatrixCallebaut;
    let cfg = config(&[law], 300, 7);
    let results = run_all(law, &cfg)?;
    zero_failures(law, &results)?;
    let lower = results
        .iter()
        .filter(|(_, r)| r.instance.params["s"].as_f64().unwrap() <= 0.5)
        .count();
    ensure(lower > 0 && lower < results.len(), || {
        "only one (s, t) region sampled".into()
    })?;
    for k in 0..20 {
        let trial = harness::trial_spec(&law, &cfg, k);
        let mut instance = law.sample(&trial).map_err(|e| e.to_string())?;
        if let InstanceData::MatrixCallebaut { a, b, .. } = &mut instance.data {
            *b = a.clone();
        }
        let r = check_law(law, &instance, &Tolerances::default()).map_err(|e| e.to_string())?;
        for link in &r.links {
            let v = link.verdict().expect("chain links are Loewner links");
            ensure(v.margin.abs() <= 1e-9 * v.scale.max(1.0), || {
                format!(
                    "seed {}: {} margin {:e} with A = B",
                    trial.seed, link.label, v.margin
                )
            })?;
        }
    }
    Ok(())
}

fn hadamard_corollaries() -> Outcome {
    for law in [LawId::HadamardCallebaut, LawId::HadamardPower] {
        let cfg = config(&[law], 300, 8);
        let results = run_all(law, &cfg)?;
        zero_failures(law, &results)?;
        if law == LawId::HadamardCallebaut {
            for (trial, r) in &results {
                for link in r.links.iter().filter(|l| l.label.contains("submatrix")) {
                    let res = link.residual_value().unwrap_or(f64::INFINITY);
                    ensure(res <= FOLLOWS_FROM_TOL, || {
                        format!("seed {}: {} residual {res:e}", trial.seed, link.label)
                    })?;
                }
                ensure(
                    r.links.iter().any(|l| l.label.contains("submatrix")),
                    || "no follows-from links".into(),
                )?;
            }
        }
    }
    Ok(())
}

fn wada() -> Outcome {
    let cfg = config(&[LawId::Wada], 300, 9);
    let results = run_all(LawId::Wada, &cfg)?;
    ensure(results.iter().all(|(t, _)| t.n <= 3), || {
        "n exceeds 3".into()
    })?;
    zero_failures(LawId::Wada, &results)
}

fn scalar_callebaut() -> Outcome {
    let law = LawId::ScalarCallebaut;
    let mut cfg = config(&[law], 1000, 10);
    cfg.tolerances = Tolerances {
        loewner: SCALAR_TOL,
        equality: SCALAR_TOL,
        exact: FOLLOWS_FROM_TOL,
    };
    let results = run_all(law, &cfg)?;
    zero_failures(law, &results)?;
    let proportional = results
        .iter()
        .filter(|(_, r)| r.links.iter().any(|l| l.label.starts_with("proportional")))
        .count();
    ensure(proportional > 0, || {
        "no proportional sequences sampled".into()
    })?;
    ensure(results.iter().any(|(t, _)| t.m == 8), || {
        "m never reached 8".into()
    })
}

fn mean_axiom_suite() -> Outcome {
    for law in [
        LawId::MeanAxioms,
        LawId::Superadditivity,
        LawId::InterpolationIdentity,
        LawId::PathAxioms,
    ] {
        let cfg = config(&[law], 500, 11);
        let results = run_all(law, &cfg)?;
        zero_failures(law, &results)?;
    }
    Ok(())
}

/// The power lemma with its inequality reversed; fails for any A ≠ I.
struct FlippedPowerLemma;

impl Law for FlippedPowerLemma {
    fn law_name(&self) -> String {
        "flipped-power-lemma".into()
    }

    fn sample(&self, trial: &TrialSpec) -> meanscope::Result<Instance> {
        LawId::PowerLemma.sample(trial)
    }

    fn check(&self, instance: &Instance, tol: &Tolerances) -> meanscope::Result<CheckResult> {
        let InstanceData::PowerLemma { a, r_grid } = &instance.data else {
            return Err(meanscope::Error::Precondition(
                "not a power lemma instance".into(),
            ));
        };
        let rhs = a.hermitian().try_add(power(a, -1.0)?.hermitian())?;
        let links = r_grid
            .iter()
            .map(|&r| {
                let lhs = power(a, r)?
                    .hermitian()
                    .try_add(power(a, -r)?.hermitian())?;
                Link::loewner(
                    format!("A + A^-1 <= A^{r} + A^-{r}"),
                    &rhs,
                    &lhs,
                    tol.loewner,
                    false,
                )
            })
            .collect::<meanscope::Result<Vec<_>>>()?;
        let summary = InstanceSummary {
            n: instance.n(),
            m: instance.m(),
            seed: instance.seed,
            params: instance.params(),
        };
        Ok(CheckResult::new(self.law_name(), summary, links))
    }
}

fn cli_contract() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_meanscope"))
        .args(["verify", "--laws", "all"])
        .env_remove("MEANSCOPE_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "default suite exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        )
    })?;

    let cfg = config(&[LawId::PowerLemma], 50, 12);
    let fixture = FlippedPowerLemma;
    let report = harness::verify(&cfg, &[&fixture]);
    ensure(report.exit_status == 1, || {
        format!("flipped law exited {}", report.exit_status)
    })?;
    let block = &report.laws[0];
    let worst = block
        .worst_margin
        .as_ref()
        .ok_or("no worst margin recorded")?;
    let key: ReproKey = harness::worst_key(&report, &block.law).map_err(|e| e.to_string())?;
    let (_, result) = harness::reproduce(&fixture, &cfg, &worst.key).map_err(|e| e.to_string())?;
    let again = result.worst_margin().ok_or("repro has no margin")?;
    ensure((again - worst.value).abs() <= 1e-12, || {
        format!("worst margin {:e} reproduced as {again:e}", worst.value)
    })?;
    ensure(key.seed == block.failures[0].key.seed, || {
        "repro key is not the first failure".into()
    })
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("eigensolver oracle", eigensolver_oracle),
        ("sharp identity", sharp_identity),
        ("operator Callebaut chains", operator_callebaut_chains),
        ("path monotonicity", path_monotonicity),
        ("power lemma", power_lemma),
        ("tensor sweeps", tensor_sweeps),
        ("matrix Callebaut chain", matrix_callebaut),
        ("Hadamard corollaries", hadamard_corollaries),
        ("Wada inequality", wada),
        ("scalar Callebaut", scalar_callebaut),
        ("mean axioms", mean_axiom_suite),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
