use meanscope::ensembles::FieldKind;
use meanscope::laws::instance::linspace;
use meanscope::laws::{
    check_law, sweep_law, Instance, InstanceData, Law, LawId, Status, Tolerances, TrialSpec,
};
use meanscope::linalg::PDMatrix;
use meanscope::means::MeanDescriptor;

fn pd(values: &[f64]) -> PDMatrix {
    PDMatrix::diagonal(values).unwrap()
}

fn instance(law: LawId, data: InstanceData) -> Instance {
    Instance { law, seed: 0, data }
}

#[test]
fn sharp_identity_scalar_example() {
    let inst = instance(
        LawId::SharpIdentity,
        InstanceData::SharpIdentity {
            mean: MeanDescriptor::Arithmetic,
            a: pd(&[1.0]),
            b: pd(&[4.0]),
        },
    );
    let r = check_law(LawId::SharpIdentity, &inst, &Tolerances::default()).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.worst_residual().unwrap() < 1e-15);
}

#[test]
fn scalar_callebaut_example_lies_between_eight_and_nine() {
    let inst = instance(
        LawId::ScalarCallebaut,
        InstanceData::ScalarCallebaut {
            a: vec![1.0, 2.0],
            b: vec![2.0, 1.0],
            s: 0.3,
            t: 0.1,
            center: 0.5,
        },
    );
    let r = check_law(LawId::ScalarCallebaut, &inst, &Tolerances::default()).unwrap();
    assert!(r.holds());
    // S(s) for s = 0.3: (2^0.3 + 2^0.7)(2^0.7 + 2^0.3)
    let s_mid = (2f64.powf(0.3) + 2f64.powf(0.7)).powi(2);
    assert!(8.0 < s_mid && s_mid < 9.0);
    let link = r.link("(Σ√(ab))² <= S(s)").unwrap();
    assert!((link.verdict().unwrap().margin - (s_mid - 8.0)).abs() < 1e-12);
}

#[test]
fn power_lemma_diagonal_example() {
    let inst = instance(
        LawId::PowerLemma,
        InstanceData::PowerLemma {
            a: pd(&[4.0]),
            r_grid: vec![0.5],
        },
    );
    let r = check_law(LawId::PowerLemma, &inst, &Tolerances::default()).unwrap();
    let margin = r.links[0].verdict().unwrap().margin;
    assert!((margin - (4.25 - 2.5)).abs() < 1e-14);
}

#[test]
fn matrix_callebaut_collapses_when_pairs_agree() {
    let a = vec![pd(&[1.0, 3.0]), pd(&[2.0, 0.5])];
    for (s, t) in [(0.3, 0.1), (0.5, 0.5), (0.7, 0.9), (1.0, 1.0)] {
        let inst = instance(
            LawId::MatrixCallebaut,
            InstanceData::MatrixCallebaut {
                a: a.clone(),
                b: a.clone(),
                s,
                t,
            },
        );
        let r = check_law(LawId::MatrixCallebaut, &inst, &Tolerances::default()).unwrap();
        assert!(r.holds());
        for link in &r.links {
            let v = link.verdict().unwrap();
            assert!(
                v.margin.abs() <= 1e-9 * v.scale.max(1.0),
                "{}: {}",
                link.label,
                v.margin
            );
        }
    }
}

#[test]
fn region_mismatch_is_precondition_error() {
    let inst = instance(
        LawId::MatrixCallebaut,
        InstanceData::MatrixCallebaut {
            a: vec![pd(&[1.0])],
            b: vec![pd(&[2.0])],
            s: 0.2,
            t: 0.4,
        },
    );
    assert!(check_law(LawId::MatrixCallebaut, &inst, &Tolerances::default()).is_err());
    assert!(check_law(LawId::Wada, &inst, &Tolerances::default()).is_err());
}

#[test]
fn tensor_g_scalar_sweep_is_symmetric_with_minimum_four() {
    let inst = instance(
        LawId::TensorG,
        InstanceData::TensorG {
            a: pd(&[4.0]),
            b: pd(&[1.0]),
            grid: vec![],
        },
    );
    let curve = sweep_law(LawId::TensorG, &inst, &linspace(0.0, 1.0, 5), 1e-8).unwrap();
    let trace: Vec<f64> = curve.points.iter().map(|p| p.trace).collect();
    let expected = [
        5.0,
        4.0f64.powf(0.25) + 4.0f64.powf(0.75),
        4.0,
        4.0f64.powf(0.75) + 4.0f64.powf(0.25),
        5.0,
    ];
    for (x, y) in trace.iter().zip(expected) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!(curve.all_hold());
}

#[test]
fn tensor_f_constant_when_equal() {
    let inst = instance(
        LawId::TensorF,
        InstanceData::TensorF {
            a: pd(&[3.0]),
            b: pd(&[3.0]),
            grid: vec![],
        },
    );
    let curve = sweep_law(LawId::TensorF, &inst, &linspace(-1.0, 1.0, 9), 1e-8).unwrap();
    assert!(curve.points.iter().all(|p| (p.trace - 18.0).abs() < 1e-12));
    assert!(curve.links.iter().all(|l| l.verdict.margin.abs() < 1e-12));
}

#[test]
fn tensor_f_random_pair_has_minimum_at_zero() {
    let trial = TrialSpec {
        seed: 11,
        n: 2,
        m: 1,
        field: FieldKind::Complex,
        kappa_max: 1e4,
        boundary: None,
    };
    let inst = LawId::TensorF.sample(&trial).unwrap();
    let grid = linspace(-1.0, 1.0, 9);
    let curve = sweep_law(LawId::TensorF, &inst, &grid, 1e-8).unwrap();
    assert!(curve.all_hold());
    let min = curve
        .points
        .iter()
        .min_by(|a, b| a.trace.total_cmp(&b.trace))
        .unwrap();
    assert_eq!(min.t, 0.0);
}

#[test]
fn unsorted_grid_is_rejected() {
    let inst = instance(
        LawId::TensorG,
        InstanceData::TensorG {
            a: pd(&[4.0]),
            b: pd(&[1.0]),
            grid: vec![],
        },
    );
    assert!(sweep_law(LawId::TensorG, &inst, &[0.5, 0.25], 1e-8).is_err());
    assert!(sweep_law(LawId::TensorG, &inst, &[-0.5, 0.25], 1e-8).is_err());
}

#[test]
fn callebaut_operator_collapses_for_geometric_single_pair() {
    let inst = instance(
        LawId::CallebautOperator,
        InstanceData::CallebautOperator {
            mean: MeanDescriptor::Geometric,
            a: vec![pd(&[2.0, 5.0])],
            b: vec![pd(&[3.0, 0.25])],
        },
    );
    let r = check_law(LawId::CallebautOperator, &inst, &Tolerances::default()).unwrap();
    for link in &r.links {
        let v = link.verdict().unwrap();
        assert!(v.margin.abs() <= 1e-12 * v.scale.max(1.0));
    }
}

#[test]
fn proportional_sequences_collapse_chain() {
    let a = vec![0.5, 2.0, 3.0];
    let inst = instance(
        LawId::ScalarCallebaut,
        InstanceData::ScalarCallebaut {
            b: a.iter().map(|x| 2.5 * x).collect(),
            a,
            s: 0.4,
            t: 0.2,
            center: 0.5,
        },
    );
    let r = check_law(LawId::ScalarCallebaut, &inst, &Tolerances::default()).unwrap();
    assert!(r.holds());
    assert!(r.links.iter().any(|l| l.label.starts_with("proportional")));
}
