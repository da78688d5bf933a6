//! Twelve points with at most nine on any cubic: a certificate of ratio 3 in every case.

use itertools::Itertools;

use super::cascade::cascade;
use super::lemma1::lemma1_pair;
use super::{
    check_twelve, curve, factor_small, is_irreducible_curve, orders, targets, CaseTag, ConstructionReport, Labeled,
    Outcome, Trace,
};
use crate::config::{collinear_sets, m_sequence, PointSet};
use crate::error::{Error, Result};
use crate::poly::HomPoly;

const SPLIT_CUBIC_BUDGET: usize = 400;

/// With `C1` through `x1..x9` and `C2` through `x1..x6, x10..x12`: the irreducible route when
/// its hypotheses hold, a seven-point conic route when allowed, and the cascade otherwise.
pub(crate) fn two_cubics(
    ls: &Labeled,
    case: CaseTag,
    allow_conic7: bool,
    trace: &mut Trace,
) -> Result<(Labeled, Outcome)> {
    let c1 = curve(ls, 3, 1..=9)?;
    let c2 = curve(ls, 3, (1..=6).chain(10..=12))?;
    let avoid1 = (10..=12).all(|l| !c1.vanishes_at(ls.pt(l)));
    let avoid2 = (7..=9).all(|l| !c2.vanishes_at(ls.pt(l)));
    let irr1 = is_irreducible_curve(&c1, ls.s.points())?;
    let irr2 = is_irreducible_curve(&c2, ls.s.points())?;
    if irr1 && irr2 && avoid1 && avoid2 {
        trace.push("two-cubics.irreducible");
        return Ok((ls.clone(), lemma1_pair(ls, &c1, &c2, case, trace)?));
    }
    let mut factors = factor_small(&c1);
    factors.extend(factor_small(&c2));
    if allow_conic7 {
        for f in factors.iter().filter(|f| f.degree() == 2) {
            let on: Vec<usize> = ls.all().filter(|&l| f.vanishes_at(ls.pt(l))).collect();
            if on.len() >= 7 && is_irreducible_curve(f, ls.s.points())? {
                trace.push("two-cubics.conic-seven");
                let rl = ls.front(&on[..7])?;
                let conic = f.clone();
                return match conic_seven(&rl, &conic, case, trace)? {
                    Some(o) => Ok((rl, o)),
                    None => Ok((
                        rl,
                        Outcome::Contradiction { reason: "the remaining five points lie on a reducible conic".into() },
                    )),
                };
            }
        }
    }
    trace.push("two-cubics.reducible");
    let ts = targets(ls, &orders(ls.all(), &[1, 2, 3, 4, 5, 6]));
    Ok((ls.clone(), cascade(&factors, 6, &ts, case, "cascade", trace)?))
}

/// An irreducible conic through `x1..x7`: quartics through all twelve points, starting from
/// the product with the conic through `x8..x12`. `None` when that conic is reducible.
pub(crate) fn conic_seven(ls: &Labeled, conic: &HomPoly, case: CaseTag, trace: &mut Trace) -> Result<Option<Outcome>> {
    let other = curve(ls, 2, 8..=12)?;
    if !is_irreducible_curve(&other, ls.s.points())? {
        return Ok(None);
    }
    trace.push("conic-seven.two-irreducible-conics");
    let ts = targets(ls, &orders(ls.all(), &[]));
    Ok(Some(cascade(&[conic.clone(), other], 4, &ts, case, "quartic", trace)?))
}

/// Finds disjoint triples `A`, `B` meeting every four-point line such that the cubics through
/// `S \ A` and `S \ B` avoid `A` and `B`; prefers a split where both cubics are irreducible.
/// The result is relabeled as `common, B, A`, so it feeds [`two_cubics`] directly.
pub(crate) fn split_search(ls: &Labeled) -> Result<Option<Labeled>> {
    let lines: Vec<Vec<usize>> = collinear_sets(&ls.s).into_iter().filter(|l| l.len() >= 4).collect();
    let meets = |t: &[usize]| lines.iter().all(|l| l.iter().any(|x| t.contains(x)));
    let n = ls.s.len();
    let mut fallback = None;
    let mut spent = 0;
    for a in (1..=n).combinations(3).filter(|a| meets(a)) {
        for b in (1..=n).filter(|x| !a.contains(x)).combinations(3).filter(|b| meets(b)) {
            if spent == SPLIT_CUBIC_BUDGET {
                return fallback.map(|o: Vec<usize>| ls.reorder(&o)).transpose();
            }
            spent += 1;
            let mut order: Vec<usize> = (1..=n).filter(|x| !a.contains(x) && !b.contains(x)).collect();
            order.extend(&b);
            order.extend(&a);
            let rl = ls.reorder(&order)?;
            let c1 = curve(&rl, 3, 1..=9)?;
            let c2 = curve(&rl, 3, (1..=6).chain(10..=12))?;
            if (10..=12).any(|l| c1.vanishes_at(rl.pt(l))) || (7..=9).any(|l| c2.vanishes_at(rl.pt(l))) {
                continue;
            }
            if is_irreducible_curve(&c1, rl.s.points())? && is_irreducible_curve(&c2, rl.s.points())? {
                return Ok(Some(rl));
            }
            fallback.get_or_insert(order);
        }
    }
    fallback.map(|o| ls.reorder(&o)).transpose()
}

/// Certificate with `total = 3 gamma` for twelve points with `m_3 = 9`.
pub fn lemma2_construct(s: &PointSet) -> Result<ConstructionReport> {
    check_twelve(s)?;
    let ms = m_sequence(s)?;
    if ms.m3 != 9 {
        return Err(Error::Precondition(format!("needs at most nine points on any cubic, found m3 = {}", ms.m3)));
    }
    let id = Labeled::identity(s);
    let mut trace = Trace::default();
    let cubic9 = ms.witness(3).labels.clone();
    let (ls, outcome) = match (ms.m2, ms.m1) {
        (5, _) => {
            trace.push("lemma2.conic-five");
            two_cubics(&id.front(&cubic9)?, CaseTag::NineOnCubicConicFive, false, &mut trace)?
        }
        (6, m1) if m1 <= 3 => {
            trace.push(if m1 == 2 { "lemma2.conic-six.general" } else { "lemma2.conic-six.three-collinear" });
            two_cubics(&id.front(&cubic9)?, CaseTag::NineOnCubicConicSix, false, &mut trace)?
        }
        (6, _) => {
            trace.push("lemma2.conic-six.four-collinear");
            let line = &ms.witness(1).labels;
            let mut order: Vec<usize> = id.all().filter(|l| !line.contains(l)).collect();
            order.extend(line);
            let rl = id.reorder(&order)?;
            two_cubics(
                &rl.reorder(&[1, 2, 3, 4, 5, 6, 7, 9, 10, 8, 11, 12])?,
                CaseTag::NineOnCubicFourOnLine,
                false,
                &mut trace,
            )?
        }
        (7, _) => {
            let rl = id.front(&ms.witness(2).labels)?;
            let conic = curve(&rl, 2, 1..=7)?;
            if is_irreducible_curve(&conic, rl.s.points())? {
                trace.push("lemma2.conic-seven.irreducible");
                match conic_seven(&rl, &conic, CaseTag::NineOnCubicConicSeven, &mut trace)? {
                    Some(o) => (rl, o),
                    None => (
                        rl,
                        Outcome::Contradiction {
                            reason: "the remaining five points lie on a reducible conic, putting ten points on a cubic"
                                .into(),
                        },
                    ),
                }
            } else {
                trace.push("lemma2.conic-seven.four-point-lines");
                match split_search(&rl)? {
                    Some(sl) => two_cubics(&sl, CaseTag::NineOnCubicConicSeven, true, &mut trace)?,
                    None => {
                        (rl, Outcome::Unsupported { reason: "no split of the four-point lines into two cubics".into() })
                    }
                }
            }
        }
        (m2, _) => {
            return Err(Error::Precondition(format!("m2 = {m2} is incompatible with m3 = 9")));
        }
    };
    Ok(ConstructionReport { trace: trace.0, relabeling: ls.orig, outcome })
}
