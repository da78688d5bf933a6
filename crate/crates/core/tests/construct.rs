use cubicpoles::config::{curve_through, generate_instance, InstanceKind};
use cubicpoles::construct::{
    lemma1_construct, lemma2_construct, theorem_case_construct, verify_certificate, CaseTag, ConstructionReport,
    Outcome, PolePoint, PotentialCertificate, Route,
};
use cubicpoles::rational::{int, rat};
use cubicpoles::{Error, HomPoly, ProjPoint};

fn certificate(report: &ConstructionReport) -> &PotentialCertificate {
    match &report.outcome {
        Outcome::Certificate(c) => c,
        other => panic!("expected a certificate, got {other:?} after {:?}", report.trace),
    }
}

fn run(kind: InstanceKind, seed: u64) -> ConstructionReport {
    let inst = generate_instance(kind, seed).unwrap();
    if inst.m_sequence.m3 == 9 {
        lemma2_construct(&inst.points).unwrap()
    } else {
        theorem_case_construct(&inst.points, inst.extra_point.as_ref()).unwrap()
    }
}

#[test]
fn nine_on_cubic_kinds_give_ratio_three() {
    for kind in [
        InstanceKind::Generic12,
        InstanceKind::LemmaCase2,
        InstanceKind::LemmaCase3,
        InstanceKind::Conic7,
        InstanceKind::Figure1,
    ] {
        let report = run(kind, 4);
        let c = certificate(&report);
        assert!(c.verified, "{kind}");
        assert_eq!(c.total_weight, &c.gamma_u * int(3), "{kind}");
        assert!(verify_certificate(c).verified);
        let mut labels = report.relabeling.clone();
        labels.sort();
        assert_eq!(labels, (1..=12).collect::<Vec<_>>());
    }
}

#[test]
fn ten_on_cubic_kinds() {
    for (kind, gamma) in [(InstanceKind::Case2, 6), (InstanceKind::Case3, 4), (InstanceKind::Figure3, 6)] {
        let c = certificate(&run(kind, 2)).clone();
        assert_eq!(c.gamma_u, int(gamma), "{kind}");
        assert_eq!(c.total_weight, int(3 * gamma), "{kind}");
    }
}

#[test]
fn eleven_on_cubic_branches() {
    let c = certificate(&run(InstanceKind::Case4, 1)).clone();
    assert_eq!((c.gamma_u.clone(), c.total_weight.clone()), (int(4), int(13)));
    assert_eq!(c.case_tag, CaseTag::ElevenOnCubic);
    assert!(c.points.iter().any(|p| p.label.is_none()));
    let r = run(InstanceKind::Case4LineConic, 1);
    assert!(r.trace.iter().any(|t| t.ends_with("line-meets-both")));
    assert_eq!(certificate(&r).total_weight, int(12));
}

#[test]
fn eleven_on_cubic_needs_extra_point() {
    let inst = generate_instance(InstanceKind::Case4, 1).unwrap();
    assert!(matches!(theorem_case_construct(&inst.points, None), Err(Error::Precondition(_))));
    let on_cubic = inst.points.get(1).clone();
    assert!(matches!(theorem_case_construct(&inst.points, Some(&on_cubic)), Err(Error::Precondition(_))));
}

#[test]
fn wrong_case_is_a_precondition_error() {
    let inst = generate_instance(InstanceKind::Case2, 1).unwrap();
    assert!(matches!(lemma2_construct(&inst.points), Err(Error::Precondition(_))));
    let inst = generate_instance(InstanceKind::Generic12, 1).unwrap();
    assert!(matches!(theorem_case_construct(&inst.points, None), Err(Error::Precondition(_))));
}

#[test]
fn lemma1_checks_hypotheses() {
    let inst = generate_instance(InstanceKind::Generic12, 6).unwrap();
    let s = &inst.points;
    let c1 = curve_through(3, &s.select(&[1, 2, 3, 4, 5, 6, 7, 8, 9])).unwrap().unwrap();
    let c2 = curve_through(3, &s.select(&[1, 2, 3, 4, 5, 6, 10, 11, 12])).unwrap().unwrap();
    let report = lemma1_construct(s, &c1, &c2).unwrap();
    let c = certificate(&report);
    assert_eq!((c.gamma_u.clone(), c.total_weight.clone()), (int(6), int(18)));
    assert!(c.points.iter().filter(|p| p.weight == int(2)).count() == 6);

    let err = lemma1_construct(s, &c2, &c1).unwrap_err();
    assert!(matches!(&err, Error::Precondition(m) if m.contains("C1 must contain x7")), "{err}");
    let line = HomPoly::line_through(s.get(1), s.get(2));
    let conic = curve_through(2, &s.select(&[3, 4, 5, 6, 7])).unwrap().unwrap();
    let reducible = &line * &conic;
    let err = lemma1_construct(s, &reducible, &c2).unwrap_err();
    assert!(matches!(&err, Error::Precondition(m) if m.contains("irreducible")), "{err}");
}

#[test]
fn tampering_is_detected() {
    let mut c = certificate(&run(InstanceKind::Conic7, 2)).clone();
    assert_eq!(c.route, Route::IntersectionNumber);
    c.points[3].weight = rat(3, 2);
    c.total_weight = c.weight_sum();
    let report = verify_certificate(&c);
    assert!(!report.verified);
    let name = format!("x{}", c.points[3].label.unwrap());
    assert!(report.failures.iter().any(|f| f.starts_with(&name)), "{:?}", report.failures);

    let mut c = certificate(&run(InstanceKind::Conic7, 2)).clone();
    c.total_weight = int(11);
    assert!(!verify_certificate(&c).total_ok);
}

#[test]
fn shared_component_fails_discreteness() {
    let x = HomPoly::x();
    let y = HomPoly::y();
    let z = HomPoly::z();
    let c = PotentialCertificate {
        p: &x * &y,
        q: &x * &z,
        r: 1,
        points: vec![PolePoint { label: Some(1), point: ProjPoint::from_ints(0, 0, 1).unwrap(), weight: int(1) }],
        gamma_u: int(2),
        total_weight: int(1),
        case_tag: CaseTag::Custom,
        route: Route::MixedWeight,
        verified: false,
    };
    let report = verify_certificate(&c);
    assert!(!report.coprime);
    assert!(!report.verified);
}

#[test]
fn construction_is_deterministic() {
    let a = serde_json::to_string(&run(InstanceKind::LemmaCase3, 9)).unwrap();
    let b = serde_json::to_string(&run(InstanceKind::LemmaCase3, 9)).unwrap();
    assert_eq!(a, b);
}
