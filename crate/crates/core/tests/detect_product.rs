use std::sync::Arc;

use curvclass::curvature::{CurvatureBundle, DerivedKind};
use curvclass::detect::*;
use curvclass::tensor::{Chart, CovariantTensor, MetricData, Symmetry};
use curvclass::RationalFunction;

fn product_bundle() -> CurvatureBundle {
    let c = Arc::new(Chart::standard(4).unwrap());
    let d: Vec<_> = ["x2", "x1", "x4", "x3"].iter().map(|e| c.parse(e).unwrap()).collect();
    let g = CovariantTensor::from_fn(c, 2, Symmetry::Symmetric2, |idx| {
        if idx[0] == idx[1] {
            d[idx[0]].clone()
        } else {
            RationalFunction::zero()
        }
    });
    CurvatureBundle::new(MetricData::new(g).unwrap()).unwrap()
}

fn theta_params(b: &CurvatureBundle, theta: &[&str]) -> Vec<Vec<RationalFunction>> {
    theta.iter().map(|t| vec![b.g().chart().parse(t).unwrap()]).collect()
}

#[test]
fn sgk_family_has_one_free_theta_per_direction() {
    let b = product_bundle();
    let out = detect_structure(StructureKind::Sgk, &b.riemann, "R", &b, None).unwrap();
    assert_eq!(out.verdict, Verdict::Holds);
    assert!(out.family.verified);
    assert_eq!(out.family.null_dims(), vec![1, 1, 1, 1]);
    let names = out.family.parameter_names();
    assert_eq!(names[0], vec!["theta_1".to_string()]);
    assert_eq!(names[3], vec!["theta_4".to_string()]);
}

#[test]
fn negative_and_ricci_verdicts() {
    let b = product_bundle();
    for kind in [StructureKind::Hgk, StructureKind::Wgk, StructureKind::Recurrent] {
        let out = detect_structure(kind, &b.riemann, "R", &b, None).unwrap();
        assert_eq!(out.verdict, Verdict::Fails, "{kind}");
    }
    let rr = detect_structure(StructureKind::Recurrent, b.s(), "S", &b, None).unwrap();
    assert_eq!(rr.verdict, Verdict::Fails);
    let gk = detect_structure(StructureKind::Generalized, b.s(), "S", &b, None).unwrap();
    assert_eq!(gk.verdict, Verdict::Holds);
    assert!(gk.family.is_unique());
}

#[test]
fn identities_hold_across_members() {
    let b = product_bundle();
    let out = detect_structure(StructureKind::Sgk, &b.riemann, "R", &b, None).unwrap();
    let chart = b.g().chart().clone();
    let rdr = check_semisymmetry(&b.riemann, &b).unwrap().r_dot_t;
    assert!(rdr.is_zero());
    for theta in [
        ["0", "0", "0", "0"],
        ["1", "0", "0", "0"],
        ["x2", "0", "0", "0"],
        ["x3", "x1*x4", "1", "x2^2"],
    ] {
        let f = SgkForms::from_slice(&out.family.member_forms(&chart, &theta_params(&b, &theta))).unwrap();
        assert_eq!(sgk_combination(&b.riemann, &f, &b).unwrap(), b.nabla_riemann);
        for c in verify_sgk_identities(&f, &b).unwrap() {
            assert_eq!(c.status, CheckStatus::Pass, "{} {:?}", c.name, theta);
        }
        assert!(verify_rdotr_expansion(&f, &b, &rdr).unwrap(), "{theta:?}");
        let mut bad = f.clone();
        bad.pi = bad
            .pi
            .add(
                &CovariantTensor::one_form(
                    chart.clone(),
                    vec![
                        RationalFunction::one(),
                        RationalFunction::zero(),
                        RationalFunction::zero(),
                        RationalFunction::zero(),
                    ],
                )
                .unwrap(),
            )
            .unwrap();
        assert!(verify_sgk_identities(&bad, &b).unwrap().iter().any(|c| c.failed()));
    }
}

#[test]
fn transfers_resubstitute() {
    let b = product_bundle();
    let chart = b.g().chart().clone();
    let sgk = detect_structure(StructureKind::Sgk, &b.riemann, "R", &b, None).unwrap();
    let gk = detect_structure(StructureKind::Generalized, b.s(), "S", &b, None).unwrap();
    let bar = gk.family.particular_forms(&chart);
    let f = SgkForms::from_slice(&sgk.family.particular_forms(&chart)).unwrap();
    for kind in [
        DerivedKind::Conformal,
        DerivedKind::Concircular,
        DerivedKind::Conharmonic,
    ] {
        let t = transfer_sgk(kind, &f, &bar[0], &bar[1], &b).unwrap();
        for c in &t.checks {
            assert_eq!(c.status, CheckStatus::Pass, "{} {:?}", c.name, c.detail);
        }
    }
    let fp = member_with_pi(&sgk.family, &chart, &bar[0]).expect("reachable");
    let t = transfer_sgk(DerivedKind::Projective, &fp, &bar[0], &bar[1], &b).unwrap();
    for c in &t.checks {
        assert_eq!(c.status, CheckStatus::Pass, "{} {:?}", c.name, c.detail);
    }
}
