//! Twelve points with ten or eleven on a cubic.

use itertools::Itertools;

use super::cascade::cascade;
use super::lemma2::{conic_seven, split_search, two_cubics};
use super::{
    check_twelve, curve, factor_small, is_irreducible_curve, orders, targets, CaseTag, ConstructionReport, Labeled,
    Outcome, Target, Trace,
};
use crate::config::{collinear_sets, m_sequence, IncidenceStructure, MSequence, PointSet};
use crate::error::{Error, Result};
use crate::point::ProjPoint;
use crate::poly::HomPoly;

fn unsupported(reason: &str) -> Outcome {
    Outcome::Unsupported { reason: reason.into() }
}

fn contradiction(reason: &str) -> Outcome {
    Outcome::Contradiction { reason: reason.into() }
}

/// Certificate for twelve points with `m_1 <= 4`, `m_2 <= 7` and `m_3` equal to 10 or 11.
/// The eleven-point case needs an extra point off the eleven-point cubic.
pub fn theorem_case_construct(s: &PointSet, extra: Option<&ProjPoint>) -> Result<ConstructionReport> {
    check_twelve(s)?;
    let ms = m_sequence(s)?;
    if ms.m1 > 4 {
        return Err(Error::Precondition(format!("needs at most four collinear points, found m1 = {}", ms.m1)));
    }
    if ms.m2 > 7 {
        return Err(Error::Precondition(format!("needs at most seven points on a conic, found m2 = {}", ms.m2)));
    }
    if !(10..=11).contains(&ms.m3) {
        return Err(Error::Precondition(format!("needs ten or eleven points on a cubic, found m3 = {}", ms.m3)));
    }
    let id = Labeled::identity(s);
    let mut trace = Trace::default();
    let (ls, outcome) = if ms.m3 == 11 {
        trace.push("theorem.eleven-on-cubic");
        eleven_on_cubic(&id, &ms, extra, &mut trace)?
    } else if is_irreducible_curve(&ms.witness(3).curve, id.s.points())? {
        trace.push("theorem.ten-on-cubic.irreducible");
        (id, unsupported("an irreducible cubic through ten of the points is excluded by hypothesis"))
    } else if ms.m2 == 6 {
        trace.push("theorem.ten-on-cubic.conic-six");
        conic_six(&id, &ms, &mut trace)?
    } else if ms.m2 == 7 {
        trace.push("theorem.ten-on-cubic.conic-seven");
        conic_seven_case(&id, &mut trace)?
    } else {
        (id, contradiction("a reducible cubic through ten points needs a five-point line or a six-point conic"))
    };
    Ok(ConstructionReport { trace: trace.0, relabeling: ls.orig, outcome })
}

fn conic_six(id: &Labeled, ms: &MSequence, trace: &mut Trace) -> Result<(Labeled, Outcome)> {
    if ms.m1 != 4 {
        return Ok((
            id.clone(),
            contradiction("a reducible cubic through ten points with m2 = 6 needs a four-point line"),
        ));
    }
    let rl = id.front(&ms.witness(1).labels)?;
    let split = rl.reorder(&[7, 8, 9, 10, 11, 12, 1, 2, 5, 3, 4, 6])?;
    two_cubics(&split, CaseTag::TenOnCubicConicSix, false, trace)
}

/// Labels of an irreducible conic through seven of the points, if any.
fn irreducible_conic_seven(ls: &Labeled) -> Result<Option<(Vec<usize>, HomPoly)>> {
    for five in ls.all().combinations(5) {
        let Ok(c) = curve(ls, 2, five.iter().copied()) else { continue };
        let on: Vec<usize> = ls.all().filter(|&l| c.vanishes_at(ls.pt(l))).collect();
        if on.len() >= 7 && on[..5] == five[..] && is_irreducible_curve(&c, ls.s.points())? {
            return Ok(Some((on, c)));
        }
    }
    Ok(None)
}

fn conic_seven_case(id: &Labeled, trace: &mut Trace) -> Result<(Labeled, Outcome)> {
    let case = CaseTag::TenOnCubicConicSeven;
    let Some((on, _)) = irreducible_conic_seven(id)? else {
        let lines: Vec<[usize; 4]> =
            collinear_sets(&id.s).into_iter().filter(|l| l.len() == 4).map(|l| [l[0], l[1], l[2], l[3]]).collect();
        let shape = IncidenceStructure::new(12, lines)?.shape().shape;
        let name = serde_json::to_value(shape).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        trace.push(format!("theorem.ten-on-cubic.four-point-lines.{name}"));
        return match split_search(id)? {
            Some(sl) => two_cubics(&sl, case, true, trace),
            None => Ok((id.clone(), unsupported("no split of the four-point lines into two cubics"))),
        };
    };
    let rl = id.front(&on[..7])?;
    let c = curve(&rl, 2, 1..=7)?;
    if let Some(o) = conic_seven(&rl, &c, case, trace)? {
        return Ok((rl, o));
    }
    trace.push("theorem.ten-on-cubic.residual-conic-reducible");
    let residual = curve(&rl, 2, 8..=12)?;
    let triple = factor_small(&residual)
        .into_iter()
        .filter(|f| f.degree() == 1)
        .map(|l| (8..=12).filter(|&x| l.vanishes_at(rl.pt(x))).collect::<Vec<_>>())
        .find(|on| on.len() == 3);
    let Some(triple) = triple else {
        return Ok((rl, contradiction("the residual conic has no line through exactly three of its points")));
    };
    let pair: Vec<usize> = (8..=12).filter(|x| !triple.contains(x)).collect();
    let mut order: Vec<usize> = (1..=7).collect();
    order.extend([triple[0], triple[1], pair[0], pair[1], triple[2]]);
    let rl = rl.reorder(&order)?;
    let c = curve(&rl, 2, 1..=7)?;

    let drop_twelve: Vec<usize> = (1..=11).collect();
    for i in 1..=7 {
        let ci = curve(&rl, 2, [8, 9, 10, 11, i])?;
        if is_irreducible_curve(&ci, rl.s.points())? {
            trace.push("theorem.ten-on-cubic.conic-through-residual-four");
            let ts = targets(&rl, &orders(drop_twelve.iter().copied(), &[i]));
            return Ok((rl, cascade(&[c, ci], 4, &ts, case, "quartic", trace)?));
        }
    }
    line_pairs(&rl, &c, trace)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum PairProperty {
    /// One line meets the conic's points only at `t`, the other at most there.
    Single,
    /// Each line meets the conic's points at one distinct point.
    Separate,
    /// One line meets them at two points, the other only at `t`.
    TwoAndOne,
}

impl PairProperty {
    fn id(self) -> &'static str {
        match self {
            PairProperty::Single => "single",
            PairProperty::Separate => "separate",
            PairProperty::TwoAndOne => "two-and-one",
        }
    }
}

/// Quartics `C L_a L_b` where the two lines cover four of the residual points.
fn line_pairs(ls: &Labeled, c: &HomPoly, trace: &mut Trace) -> Result<(Labeled, Outcome)> {
    let mut candidates = Vec::new();
    for (quad, excluded) in [([8, 9, 10, 11], 12), ([8, 10, 11, 12], 9)] {
        let [a, b, x, y] = quad;
        for ((p, q), (r, s)) in [((a, b), (x, y)), ((a, x), (b, y)), ((a, y), (b, x))] {
            let la = HomPoly::line_through(ls.pt(p), ls.pt(q));
            let lb = HomPoly::line_through(ls.pt(r), ls.pt(s));
            let on = |l: &HomPoly| (1..=7).filter(|&i| l.vanishes_at(ls.pt(i))).collect::<Vec<_>>();
            let (oa, ob) = (on(&la), on(&lb));
            for (first, second) in [(&oa, &ob), (&ob, &oa)] {
                let prop = match (first.len(), second.len()) {
                    (1, 0) => Some((PairProperty::Single, first[0])),
                    (1, 1) if first == second => Some((PairProperty::Single, first[0])),
                    (1, 1) => Some((PairProperty::Separate, first[0])),
                    (2, 1) if !first.contains(&second[0]) => Some((PairProperty::TwoAndOne, second[0])),
                    _ => None,
                };
                if let Some((prop, t)) = prop {
                    candidates.push((prop, excluded, la.clone(), lb.clone(), t));
                }
            }
        }
    }
    candidates.sort_by_key(|c| c.0);
    let mut fallback = None;
    for (prop, excluded, la, lb, t) in candidates {
        let mut sub = Trace::default();
        sub.push(format!("theorem.ten-on-cubic.line-pair.{}", prop.id()));
        let keep: Vec<usize> = ls.all().filter(|&l| l != excluded).collect();
        let ts = targets(ls, &orders(keep, &[t]));
        let outcome = match cascade(&[c.clone(), la, lb], 4, &ts, CaseTag::TenOnCubicConicSeven, "quartic", &mut sub) {
            Ok(o) => o,
            Err(Error::Verification(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Outcome::Certificate(cert) = &outcome {
            if cert.total_weight == crate::rational::int(12) {
                trace.0.extend(sub.0);
                return Ok((ls.clone(), outcome));
            }
        }
        fallback.get_or_insert((sub, outcome));
    }
    if let Some((sub, outcome)) = fallback {
        trace.0.extend(sub.0);
        return Ok((ls.clone(), outcome));
    }
    trace.push("theorem.ten-on-cubic.line-pair.none");
    Ok((ls.clone(), unsupported("no line pair through the residual points meets the conic in a usable pattern")))
}

fn eleven_on_cubic(
    id: &Labeled,
    ms: &MSequence,
    extra: Option<&ProjPoint>,
    trace: &mut Trace,
) -> Result<(Labeled, Outcome)> {
    let case = CaseTag::ElevenOnCubic;
    let w = ms.witness(3);
    let gamma = &w.curve;
    if is_irreducible_curve(gamma, id.s.points())? {
        return Ok((
            id.clone(),
            unsupported("an irreducible cubic through eleven of the points is excluded by hypothesis"),
        ));
    }
    let split = factor_small(gamma).into_iter().filter(|f| f.degree() == 1).find_map(|l| {
        let conic = gamma.div_exact(&l)?;
        let on_l: Vec<usize> = w.labels.iter().copied().filter(|&x| l.vanishes_at(id.pt(x))).collect();
        let on_c: Vec<usize> = w.labels.iter().copied().filter(|&x| conic.vanishes_at(id.pt(x))).collect();
        (on_l.len() == 4 && on_c.len() == 7 && on_l.iter().all(|x| !on_c.contains(x))).then_some((on_c, on_l, conic, l))
    });
    let Some((on_c, on_l, conic, line)) = split else {
        return Ok((
            id.clone(),
            unsupported("the eleven-point cubic is not a seven-point conic and a four-point line"),
        ));
    };
    if !is_irreducible_curve(&conic, id.s.points())? {
        return Ok((
            id.clone(),
            contradiction("a reducible seven-point conic with the four-point line puts eight points on a conic"),
        ));
    }
    let last = id.all().find(|x| !w.labels.contains(x)).expect("one label is off the cubic");
    let Some(p) = extra else {
        return Err(Error::Precondition("an extra point off the eleven-point cubic is required".into()));
    };
    if gamma.vanishes_at(p) {
        return Err(Error::Precondition("the extra point lies on the eleven-point cubic".into()));
    }
    if id.s.points().contains(p) {
        return Err(Error::Precondition("the extra point is one of the twelve points".into()));
    }
    let lp = HomPoly::line_through(p, id.pt(last));
    let meets_l: Vec<usize> = on_l.iter().copied().filter(|&x| lp.vanishes_at(id.pt(x))).collect();
    let meets_c: Vec<usize> = on_c.iter().copied().filter(|&x| lp.vanishes_at(id.pt(x))).collect();
    let extra_target = Target { label: None, point: p.clone(), order: 1 };
    if meets_l.is_empty() || meets_c.is_empty() {
        trace.push(if meets_l.is_empty() {
            "theorem.eleven-on-cubic.line-misses-line"
        } else {
            "theorem.eleven-on-cubic.line-misses-conic"
        });
        let mut order = on_c.clone();
        order.extend(&on_l);
        order.push(last);
        let rl = id.reorder(&order)?;
        let mut ts = targets(&rl, &orders(rl.all(), &[]));
        ts.push(extra_target);
        return Ok((rl, cascade(&[conic, line, lp], 4, &ts, case, "quartic", trace)?));
    }
    trace.push("theorem.eleven-on-cubic.line-meets-both");
    let (xc, xl) = (meets_c[0], meets_l[0]);
    let mut order = vec![xc];
    order.extend(on_c.iter().filter(|&&x| x != xc));
    order.extend(on_l.iter().filter(|&&x| x != xl));
    order.extend([xl, last]);
    let rl = id.reorder(&order)?;
    let keep: Vec<usize> = rl.all().filter(|&x| x != 10 && x != 11).collect();
    let mut ts = targets(&rl, &orders(keep, &[1]));
    ts.push(extra_target);
    Ok((rl, cascade(&[conic, line, lp], 4, &ts, case, "quartic", trace)?))
}
