//! One PASS/FAIL line per acceptance criterion, written straight to stdout so it survives
//! output capture.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cubicpoles::config::{enumerate_4lines, generate_instance, m_sequence, IncidenceStructure, InstanceKind};
use cubicpoles::construct::{
    lemma2_construct, theorem_case_construct, verify_certificate, ConstructionReport, PotentialCertificate,
};
use cubicpoles::currents::{
    estimate_growth, estimate_pole_weight, growth_radii, lelong_inequality_check, pole_radii, sharpness_example,
    ArrangementCurrent, Sampling,
};
use cubicpoles::curves::{bezout_table, common_zeros_discrete, intersection_multiplicity_resultant};
use cubicpoles::linsys::{build_system, conditions_from};
use cubicpoles::rational::{int, rat};
use cubicpoles::{BiPoly, HomPoly, ProjPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const POLE_TOLERANCE: f64 = 0.05;
const GROWTH_TOLERANCE: f64 = 0.1;

fn report(n: usize, pass: bool, detail: String, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("acceptance {n:>2}: {verdict} {detail} ({:.2}s)\n", elapsed.as_secs_f64());
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn construct(kind: InstanceKind, seed: u64) -> ConstructionReport {
    let inst = generate_instance(kind, seed).unwrap();
    if inst.m_sequence.m3 == 9 {
        lemma2_construct(&inst.points).unwrap()
    } else {
        theorem_case_construct(&inst.points, inst.extra_point.as_ref()).unwrap()
    }
}

const NINE_ON_CUBIC: [InstanceKind; 5] = [
    InstanceKind::Generic12,
    InstanceKind::LemmaCase2,
    InstanceKind::LemmaCase3,
    InstanceKind::Conic7,
    InstanceKind::Figure1,
];

/// Lemma-style certificates at seed 1, with the time each construction took.
fn nine_on_cubic_certificates() -> &'static Vec<(InstanceKind, Option<PotentialCertificate>, Duration)> {
    static C: OnceLock<Vec<(InstanceKind, Option<PotentialCertificate>, Duration)>> = OnceLock::new();
    C.get_or_init(|| {
        NINE_ON_CUBIC
            .iter()
            .map(|&kind| {
                let t = Instant::now();
                let c = construct(kind, 1).certificate().cloned();
                (kind, c, t.elapsed())
            })
            .collect()
    })
}

fn case_one_certificate() -> &'static PotentialCertificate {
    nine_on_cubic_certificates()[0].1.as_ref().expect("generic certificate")
}

#[test]
fn criterion_01_dimension_count() {
    let t = Instant::now();
    let mut dims = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 1..=20 {
        let s = Instant::now();
        let inst = generate_instance(InstanceKind::Generic12, seed).unwrap();
        let pts = inst.points.points();
        let sys = build_system(6, &conditions_from(&pts[6..], &pts[..6])).unwrap();
        dims.push(sys.dim());
        slowest = slowest.max(s.elapsed());
    }
    let pass = dims.iter().all(|&d| d == 4) && slowest < Duration::from_secs(5);
    report(
        1,
        pass,
        format!("degree-6 system dims over 20 generic seeds: {dims:?}, slowest {:.2}s", slowest.as_secs_f64()),
        t.elapsed(),
    );
}

#[test]
fn criterion_02_generic_m_sequence() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 1..=20 {
        let inst = generate_instance(InstanceKind::Generic12, seed).unwrap();
        let s = Instant::now();
        let m = m_sequence(&inst.points).unwrap();
        slowest = slowest.max(s.elapsed());
        if m.values() != [2, 5, 9] || !m.witnesses_sound(&inst.points) {
            bad.push((seed, m.values()));
        }
    }
    let pass = bad.is_empty() && slowest < Duration::from_secs(30);
    report(2, pass, format!("20 generic seeds give (2,5,9) with sound witnesses; mismatches {bad:?}"), t.elapsed());
}

#[test]
fn criterion_03_lemma_certificates() {
    let t = Instant::now();
    let allowed = [(6, 18), (5, 15), (4, 12), (3, 9)].map(|(g, w)| (int(g), int(w)));
    let mut detail = Vec::new();
    let mut pass = true;
    for (kind, cert, took) in nine_on_cubic_certificates() {
        let ok = cert.as_ref().is_some_and(|c| {
            c.verified
                && verify_certificate(c).verified
                && allowed.contains(&(c.gamma_u.clone(), c.total_weight.clone()))
                && c.total_weight == &c.gamma_u * int(3)
        }) && *took < Duration::from_secs(60);
        pass &= ok;
        let pair = cert.as_ref().map(|c| format!("({},{})", c.gamma_u, c.total_weight)).unwrap_or("none".into());
        detail.push(format!("{kind}={pair}"));
    }
    report(3, pass, format!("ratio 3 certificates: {}", detail.join(" ")), t.elapsed());
}

#[test]
fn criterion_04_eleven_on_cubic() {
    let t = Instant::now();
    let report4 = construct(InstanceKind::Case4, 1);
    let cert = report4.certificate();
    let pass = cert.is_some_and(|c| {
        c.verified
            && verify_certificate(c).verified
            && c.gamma_u == int(4)
            && c.total_weight == int(13)
            && c.total_weight > &c.gamma_u * int(3)
    }) && t.elapsed() < Duration::from_secs(60);
    let pair = cert.map(|c| format!("gamma {} total {}", c.gamma_u, c.total_weight)).unwrap_or("no certificate".into());
    report(4, pass, format!("case4 seed 1: {pair}"), t.elapsed());
}

#[test]
fn criterion_05_sharpness() {
    let t = Instant::now();
    let s = sharpness_example(7).unwrap();
    let third = rat(1, 3);
    let pass = s.points.len() == 15
        && s.no_three_concurrent
        && s.lelong.len() == 15
        && s.lelong.iter().all(|v| *v == third)
        && s.subset_ranks.len() == 105
        && s.subset_ranks.iter().all(|r| r.rank == 10)
        && t.elapsed() < Duration::from_secs(10);
    report(
        5,
        pass,
        format!("15 Lelong values 1/3, 105 thirteen-point ranks 10, m = {:?}", s.m_sequence.values()),
        t.elapsed(),
    );
}

#[test]
fn criterion_06_enumeration() {
    let t = Instant::now();
    let two = enumerate_4lines(12, 2).unwrap();
    let three = enumerate_4lines(12, 3).unwrap();
    let mut found = Vec::new();
    for kind in [InstanceKind::Figure3, InstanceKind::Figure4, InstanceKind::Figure5] {
        let inst = generate_instance(kind, 1).unwrap();
        let lines: Vec<[usize; 4]> =
            inst.collinear_sets.iter().filter(|l| l.len() == 4).map(|l| [l[0], l[1], l[2], l[3]]).collect();
        let s = IncidenceStructure::new(12, lines).unwrap();
        let shape = s.shape().shape;
        let canonical = s.canonical();
        let hit = three.shape(shape).is_some_and(|sum| sum.maximal.iter().any(|m| canonical.embeds_in(m)));
        found.push(format!("{kind}:{shape:?}:{hit}"));
    }
    let pass = two.maximum == 5 && found.iter().all(|f| f.ends_with("true")) && t.elapsed() < Duration::from_secs(300);
    report(6, pass, format!("cap 2 maximum {}; cap 3 maximal shapes {}", two.maximum, found.join(" ")), t.elapsed());
}

fn local_form(rng: &mut ChaCha8Rng, a: i64, b: i64, degree: u32, order: u32) -> HomPoly {
    loop {
        let mut f = BiPoly::zero();
        for t in order..=degree {
            for i in 0..=t {
                if rng.gen_bool(0.6) {
                    f.add_term(i, t - i, int(rng.gen_range(-4..=4)));
                }
            }
        }
        if !f.is_zero() {
            return HomPoly::homogenize(&f.shift(&int(-a), &int(-b)), degree, 2);
        }
    }
}

#[test]
fn criterion_07_multiplicity_oracles() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut points, mut mismatches, mut unbalanced) = (0, 0, 0, 0);
    while pairs < 120 {
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let (dp, dq) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (op, oq) = (rng.gen_range(1..=dp), rng.gen_range(1..=dq));
        let p = local_form(&mut rng, a, b, dp, op);
        let q = local_form(&mut rng, a, b, dq, oq);
        if !common_zeros_discrete(&p, &q) {
            continue;
        }
        pairs += 1;
        let table = bezout_table(&p, &q).unwrap();
        let sum: u32 = table.records.iter().map(|r| r.multiplicity).sum();
        if sum + table.residual != dp * dq {
            unbalanced += 1;
        }
        for rec in &table.records {
            points += 1;
            if intersection_multiplicity_resultant(&p, &q, &rec.point).finite() != Some(rec.multiplicity) {
                mismatches += 1;
            }
        }
    }
    let mut engineered = 0;
    let mut residual_zero = 0;
    while engineered < 20 {
        let lines: Vec<HomPoly> = (0..rng.gen_range(2..=6))
            .map(|_| HomPoly::linear(int(rng.gen_range(-5..=5)), int(rng.gen_range(1..=5)), int(rng.gen_range(-5..=5))))
            .collect();
        let k = rng.gen_range(1..lines.len());
        let (p, q) = (HomPoly::product(&lines[..k]), HomPoly::product(&lines[k..]));
        if !common_zeros_discrete(&p, &q) {
            continue;
        }
        engineered += 1;
        if bezout_table(&p, &q).unwrap().residual == 0 {
            residual_zero += 1;
        }
    }
    let pass =
        mismatches == 0 && unbalanced == 0 && residual_zero == engineered && t.elapsed() < Duration::from_secs(120);
    report(
        7,
        pass,
        format!("{pairs} coprime pairs, {points} common zeros, {mismatches} oracle mismatches, {unbalanced} unbalanced; {residual_zero}/{engineered} all-rational residuals zero"),
        t.elapsed(),
    );
}

#[test]
fn criterion_08_estimators() {
    let cert = case_one_certificate();
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut all = true;
    for p in &cert.points {
        let est = estimate_pole_weight(cert, &p.point, &pole_radii(), Sampling::default()).unwrap();
        worst = worst.max(est.error().unwrap());
        all &= est.within(POLE_TOLERANCE);
    }
    let g = estimate_growth(cert, &growth_radii(), Sampling::default()).unwrap();
    let twos = cert.points.iter().filter(|p| p.weight == int(2)).count();
    let pass = all
        && cert.points.len() == 12
        && twos == 6
        && g.claimed == int(6)
        && g.within(GROWTH_TOLERANCE)
        && t.elapsed() < Duration::from_secs(120);
    report(8, pass, format!("worst pole-weight error {worst:.2e} (tol {POLE_TOLERANCE}), growth slope {:.4} vs 6 (tol {GROWTH_TOLERANCE})", g.slope), t.elapsed());
}

#[test]
fn criterion_09_arrangement_inequality() {
    let certs: Vec<PotentialCertificate> =
        nine_on_cubic_certificates().iter().filter_map(|(_, c, _)| c.clone()).collect();
    let t = Instant::now();
    let (mut pairs, mut violations) = (0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for cert in &certs {
        let pts: Vec<ProjPoint> = cert.points.iter().map(|p| p.point.clone()).collect();
        for k in 0..12 {
            let mut anchors = pts.clone();
            let shift = rng.gen_range(0..anchors.len());
            anchors.rotate_left(shift);
            anchors.truncate(2 * (k % 4 + 1));
            let current = ArrangementCurrent::random(rng.gen(), rng.gen_range(1..=8), &anchors).unwrap();
            let r = lelong_inequality_check(&current, cert).unwrap();
            pairs += 1;
            if !r.pass {
                violations += 1;
            }
        }
    }
    let pass = pairs >= 50 && violations == 0 && t.elapsed() < Duration::from_secs(60);
    report(9, pass, format!("{pairs} arrangement/certificate pairs, {violations} violations"), t.elapsed());
}

#[test]
fn criterion_10_determinism() {
    let t = Instant::now();
    let runs = || {
        let cert = case_one_certificate();
        let est = estimate_pole_weight(cert, &cert.points[0].point, &pole_radii(), Sampling::default()).unwrap();
        vec![
            serde_json::to_string(&generate_instance(InstanceKind::Figure1, 3).unwrap()).unwrap(),
            serde_json::to_string(&construct(InstanceKind::LemmaCase3, 9)).unwrap(),
            serde_json::to_string(&sharpness_example(7).unwrap()).unwrap(),
            serde_json::to_string(&enumerate_4lines(12, 2).unwrap()).unwrap(),
            serde_json::to_string(&est).unwrap(),
            est.csv(),
        ]
    };
    let first = runs();
    let second = runs();
    let same = first.iter().zip(&second).filter(|(a, b)| a == b).count();
    report(10, first == second, format!("{same}/{} reports byte-identical across two runs", first.len()), t.elapsed());
}
