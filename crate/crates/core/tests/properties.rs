use std::sync::OnceLock;

use cubicpoles::config::{enumerate_4lines, EnumerationReport, IncidenceStructure};
use cubicpoles::construct::{verify_certificate, CaseTag, PolePoint, PotentialCertificate, Route};
use cubicpoles::currents::{
    estimate_growth, estimate_pole_weight, growth_radii, lelong_inequality_check, pole_radii, ArrangementCurrent,
    Sampling,
};
use cubicpoles::curves::{
    bezout_table, common_zeros_discrete, intersection_multiplicity, intersection_multiplicity_resultant,
};
use cubicpoles::linsys::{build_system, pencil_member, VanishingCondition};
use cubicpoles::poly::hompoly::space_dim;
use cubicpoles::rational::{int, rat};
use cubicpoles::{BiPoly, HomPoly, ProjPoint, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

fn small() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn form(degree: u32) -> impl Strategy<Value = HomPoly> {
    prop::collection::vec(prop_oneof![2 => Just(0i64), 3 => -5i64..=5], space_dim(degree))
        .prop_filter("nonzero", |v| v.iter().any(|c| *c != 0))
        .prop_map(move |v| HomPoly::from_coeff_vector(degree, &v.into_iter().map(int).collect::<Vec<_>>()))
}

fn point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        4 => (small(), small()).prop_map(|(x, y)| ProjPoint::affine(x, y)),
        1 => (small(), small()).prop_filter_map("nonzero", |(x, y)| ProjPoint::new(x, y, Rational::zero()).ok()),
    ]
}

fn line() -> impl Strategy<Value = HomPoly> {
    (small(), small(), small())
        .prop_filter("not constant", |(a, b, _)| !(a.is_zero() && b.is_zero()))
        .prop_map(|(a, b, c)| HomPoly::linear(a, b, c))
}

/// Degree-`degree` form vanishing to order at least `order` at the affine point `(a, b)`.
fn form_at(a: Rational, b: Rational, degree: u32, order: u32) -> impl Strategy<Value = HomPoly> {
    let exps: Vec<(u32, u32)> = (order..=degree).flat_map(|t| (0..=t).map(move |i| (i, t - i))).collect();
    prop::collection::vec(prop_oneof![1 => Just(0i64), 2 => -4i64..=4], exps.len())
        .prop_filter("nonzero", |v| v.iter().any(|c| *c != 0))
        .prop_map(move |v| {
            let f = BiPoly::from_terms(exps.iter().copied().zip(v.into_iter().map(int)));
            HomPoly::homogenize(&f.shift(&-a.clone(), &-b.clone()), degree, 2)
        })
}

fn pair_through() -> impl Strategy<Value = (HomPoly, HomPoly, ProjPoint)> {
    (-3i64..=3, -3i64..=3, 1u32..=4, 1u32..=4)
        .prop_flat_map(|(a, b, dp, dq)| {
            (
                Just(ProjPoint::from_ints(a, b, 1).unwrap()),
                (1..=dp).prop_flat_map(move |o| form_at(int(a), int(b), dp, o)),
                (1..=dq).prop_flat_map(move |o| form_at(int(a), int(b), dq, o)),
            )
        })
        .prop_map(|(x, p, q)| (p, q, x))
}

fn enumeration() -> &'static EnumerationReport {
    static R: OnceLock<EnumerationReport> = OnceLock::new();
    R.get_or_init(|| enumerate_4lines(12, 2).unwrap())
}

fn two_line_certificate(x: &ProjPoint, l1: &HomPoly, l2: &HomPoly, a: u32) -> PotentialCertificate {
    let mut cert = PotentialCertificate {
        p: l1.pow(a),
        q: l2.pow(a),
        r: 1,
        points: vec![PolePoint { label: None, point: x.clone(), weight: int(a as i64) }],
        gamma_u: int(a as i64),
        total_weight: int(a as i64),
        case_tag: CaseTag::Custom,
        route: Route::MixedWeight,
        verified: false,
    };
    cert.verified = verify_certificate(&cert).verified;
    cert
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn euler_identity(p in (1u32..=6).prop_flat_map(form)) {
        let d = p.degree();
        let [px, py, pz] = p.partial_derivatives().unwrap();
        let lhs = &(&(&HomPoly::x() * &px) + &(&HomPoly::y() * &py)) + &(&HomPoly::z() * &pz);
        prop_assert_eq!(lhs, p.scale(&int(d as i64)));
    }

    #[test]
    fn vanishing_order_is_additive(
        p in form(2), q in form(3), x in point(), other in point(), a in 0u32..=2, b in 0u32..=2,
    ) {
        prop_assume!(x != other);
        let l = HomPoly::line_through(&x, &other);
        let pp = &p * &l.pow(a);
        let qq = &q * &l.pow(b);
        prop_assert_eq!((&pp * &qq).ord(&x), pp.ord(&x) + qq.ord(&x));
    }

    #[test]
    fn gcd_divides_both(g in form(1), a in form(2), b in form(2)) {
        let p = &g * &a;
        let q = &g * &b;
        let d = HomPoly::gcd(&p, &q);
        prop_assert!(d.degree() >= 1);
        prop_assert!(p.div_exact(&d).is_some());
        prop_assert!(q.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g).is_some());
    }

    #[test]
    fn bezout_balances_on_line_products(ls in prop::collection::vec(line(), 2..=6), split in 1usize..=5) {
        let split = split.min(ls.len() - 1);
        let p = HomPoly::product(&ls[..split]);
        let q = HomPoly::product(&ls[split..]);
        prop_assume!(common_zeros_discrete(&p, &q));
        let table = bezout_table(&p, &q).unwrap();
        let sum: u32 = table.records.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(sum + table.residual, p.degree() * q.degree());
        prop_assert_eq!(table.residual, 0);
    }

    #[test]
    fn kernel_members_meet_conditions(
        d in 2u32..=5,
        conds in prop::collection::vec((point(), 1u32..=2), 2..=6),
    ) {
        let conditions: Vec<VanishingCondition> =
            conds.iter().map(|(p, m)| VanishingCondition::new(p.clone(), *m)).collect();
        let sys = build_system(d, &conditions).unwrap();
        let imposed: usize = conditions.iter().map(|c| c.num_constraints()).sum();
        prop_assert!(sys.dim() + imposed >= space_dim(d));
        for b in &sys.kernel_basis {
            for c in &conditions {
                prop_assert!(b.ord(&c.point) >= c.order);
            }
        }
    }

    #[test]
    fn rank_ignores_condition_order(
        d in 2u32..=4,
        conds in prop::collection::vec((point(), 1u32..=2), 2..=5),
        rotate in 0usize..5,
    ) {
        let conditions: Vec<VanishingCondition> =
            conds.iter().map(|(p, m)| VanishingCondition::new(p.clone(), *m)).collect();
        let mut permuted = conditions.clone();
        permuted.reverse();
        let k = rotate % permuted.len();
        permuted.rotate_left(k);
        let a = build_system(d, &conditions).unwrap();
        let b = build_system(d, &permuted).unwrap();
        prop_assert_eq!(a.matrix_rank, b.matrix_rank);
        prop_assert_eq!(a.kernel_basis, b.kernel_basis);
    }

    #[test]
    fn pencil_round_trip(f in form(3), g in form(3), alpha in small(), beta in small()) {
        let m = vec![f.coeff_vector(), g.coeff_vector()];
        prop_assume!(cubicpoles::linalg::rank(&m) == 2);
        let h = &f.scale(&alpha) + &g.scale(&beta);
        prop_assert_eq!(pencil_member(&f, &g, &h).unwrap(), Some((alpha, beta)));
    }

    #[test]
    fn canonical_form_ignores_relabeling(pick in 0usize..64, perm in Just((1..=12usize).collect::<Vec<_>>()).prop_shuffle()) {
        let r = enumeration();
        let s = &r.maximal[pick % r.maximal.len()].structure;
        let relabeled = IncidenceStructure::new(
            12,
            s.lines.iter().map(|l| l.map(|p| perm[p - 1])).collect(),
        ).unwrap();
        prop_assert_eq!(relabeled.canonical(), s.canonical());
    }
}

proptest! {
    #![proptest_config(config(120))]

    #[test]
    fn multiplicity_oracles_agree((p, q, x) in pair_through()) {
        prop_assume!(common_zeros_discrete(&p, &q));
        let fulton = intersection_multiplicity(&p, &q, &x).finite().unwrap();
        prop_assert!(fulton >= p.ord(&x) * q.ord(&x));
        let table = bezout_table(&p, &q).unwrap();
        let mut sum = 0;
        for rec in &table.records {
            let res = intersection_multiplicity_resultant(&p, &q, &rec.point).finite().unwrap();
            prop_assert_eq!(rec.multiplicity, res, "at {}", rec.point);
            sum += rec.multiplicity;
        }
        prop_assert!(table.records.iter().any(|r| r.point == x && r.multiplicity == fulton));
        prop_assert_eq!(sum + table.residual, p.degree() * q.degree());
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn estimates_match_two_line_potentials(x in point(), u in point(), v in point(), a in 1u32..=3) {
        prop_assume!(x.is_affine());
        prop_assume!(u != x && v != x);
        let l1 = HomPoly::line_through(&x, &u);
        let l2 = HomPoly::line_through(&x, &v);
        prop_assume!(cubicpoles::linalg::rank(&vec![l1.coeff_vector(), l2.coeff_vector()]) == 2);
        let cert = two_line_certificate(&x, &l1, &l2, a);
        prop_assert!(cert.verified);
        let est = estimate_pole_weight(&cert, &x, &pole_radii(), Sampling::default()).unwrap();
        prop_assert!(est.within(0.05), "slope {}", est.extrapolated);
        let g = estimate_growth(&cert, &growth_radii(), Sampling::default()).unwrap();
        prop_assert!(g.within(0.1), "growth {}", g.slope);
    }

    #[test]
    fn arrangement_inequality_holds(
        x in point(), u in point(), v in point(), a in 1u32..=3,
        anchors in prop::collection::vec(point(), 0..=4), n in 1usize..=6, seed in any::<u64>(),
    ) {
        prop_assume!(u != x && v != x);
        let l1 = HomPoly::line_through(&x, &u);
        let l2 = HomPoly::line_through(&x, &v);
        prop_assume!(cubicpoles::linalg::rank(&vec![l1.coeff_vector(), l2.coeff_vector()]) == 2);
        let cert = two_line_certificate(&x, &l1, &l2, a);
        let mut pts = vec![x.clone()];
        pts.extend(anchors.into_iter().filter(|p| *p != x));
        let t = ArrangementCurrent::random(seed, n, &pts).unwrap();
        let rep = lelong_inequality_check(&t, &cert).unwrap();
        prop_assert!(rep.pass, "{} > {}", rep.lhs, rep.rhs);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn multiplicity_is_additive_in_factors(
        (p, q, x) in pair_through(), l in line(),
    ) {
        let pl = &p * &l;
        prop_assume!(common_zeros_discrete(&pl, &q));
        let whole = intersection_multiplicity(&pl, &q, &x).finite().unwrap();
        let parts = intersection_multiplicity(&p, &q, &x).finite().unwrap()
            + intersection_multiplicity(&l, &q, &x).finite().unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn smooth_cubics_are_irreducible(c in form(3)) {
        if cubicpoles::curves::is_smooth(&c) {
            prop_assert_eq!(cubicpoles::curves::cubic_is_irreducible(&c).unwrap(), Some(true));
        }
    }
}
