//! Two irreducible cubics through nine points each, sharing six.
//!
//! With `C1` through `x1..x9` and `C2` through `x1..x6, x10..x12`, sextics double at
//! `x1..x6` and through `x7..x12` contain `C1 C2` and at least three further independent
//! members; one of them combines with `C1 C2` into a coprime pair of weight 18.

use super::{
    certify, check_twelve, coprime_to_factors, extend_independent, is_irreducible_curve, orders, targets, CaseTag,
    ConstructionReport, Labeled, Outcome, Trace,
};
use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::linalg;
use crate::linsys::{self, pencil_member};
use crate::poly::HomPoly;

fn check_hypotheses(ls: &Labeled, c1: &HomPoly, c2: &HomPoly) -> Result<()> {
    check_twelve(&ls.s)?;
    for (name, c, on, off) in [("C1", c1, 1..=9, 10..=12), ("C2", c2, 10..=12, 7..=9)] {
        if c.degree() != 3 {
            return Err(Error::Precondition(format!("{name} must be a cubic")));
        }
        if !is_irreducible_curve(c, ls.s.points())? {
            return Err(Error::Precondition(format!("{name} must be irreducible")));
        }
        let must: Vec<usize> = if name == "C1" { on.collect() } else { (1..=6).chain(on).collect() };
        if let Some(l) = must.iter().find(|&&l| !c.vanishes_at(ls.pt(l))) {
            return Err(Error::Precondition(format!("{name} must contain x{l}")));
        }
        if let Some(l) = off.clone().find(|&l| c.vanishes_at(ls.pt(l))) {
            return Err(Error::Precondition(format!("{name} must not contain x{l}")));
        }
    }
    Ok(())
}

/// Runs the construction on a point set already labeled as above.
pub(crate) fn lemma1_pair(
    ls: &Labeled,
    c1: &HomPoly,
    c2: &HomPoly,
    case: CaseTag,
    trace: &mut Trace,
) -> Result<Outcome> {
    check_hypotheses(ls, c1, c2)?;
    let ts = targets(ls, &orders(ls.all(), &[1, 2, 3, 4, 5, 6]));
    let sys = linsys::build_system(6, &super::conditions(&ts))?;
    let p1 = c1 * c2;
    let others = extend_independent(std::slice::from_ref(&p1), &sys.kernel_basis, 3);
    if others.len() < 3 {
        return Ok(Outcome::Contradiction { reason: format!("the sextic system has dimension {} < 4", sys.dim()) });
    }
    match choose_partner(c1, c2, &others) {
        Partner::Direct(p) => {
            trace.push("lemma1.direct");
            certify(p1, p, &ts, case).map(Outcome::Certificate)
        }
        Partner::Sum(p) => {
            trace.push("lemma1.sum");
            certify(p1, p, &ts, case).map(Outcome::Certificate)
        }
        Partner::OneDividesAll { rank, in_pencil } => {
            trace.push("lemma1.one-divides-all");
            trace.push("lemma1.pencil-contradiction");
            Ok(Outcome::Contradiction {
                reason: format!(
                    "the quotients and the other cubic span dimension {rank} inside the cubics through its nine points{}",
                    if in_pencil { "; a quotient lies in a pencil with it" } else { "" }
                ),
            })
        }
    }
}

#[derive(Debug)]
pub(crate) enum Partner {
    /// A member divisible by neither cubic.
    Direct(HomPoly),
    /// Sum of a member divisible by `C1` only and one divisible by `C2` only.
    Sum(HomPoly),
    /// All members share one cubic factor; the quotients together with the other cubic.
    OneDividesAll { rank: usize, in_pencil: bool },
}

/// Picks a partner for `C1 C2` among members each divisible by at most one of the cubics.
pub(crate) fn choose_partner(c1: &HomPoly, c2: &HomPoly, others: &[HomPoly]) -> Partner {
    if let Some(p) = others.iter().find(|p| !c1.divides(p) && !c2.divides(p)) {
        return Partner::Direct(p.clone());
    }
    let by1 = others.iter().find(|p| c1.divides(p));
    let by2 = others.iter().find(|p| c2.divides(p));
    if let (Some(a), Some(b)) = (by1, by2) {
        let s = a + b;
        if coprime_to_factors(&[c1.clone(), c2.clone()], &s) {
            return Partner::Sum(s);
        }
    }
    let (divisor, other) = if by2.is_none() { (c1, c2) } else { (c2, c1) };
    let d: Vec<HomPoly> = others.iter().filter_map(|p| p.div_exact(divisor)).collect();
    let in_pencil = d.len() >= 2 && (1..d.len()).any(|i| pencil_member(other, &d[0], &d[i]).ok().flatten().is_some());
    let mut rows = vec![other.coeff_vector()];
    rows.extend(d.iter().map(HomPoly::coeff_vector));
    Partner::OneDividesAll { rank: linalg::rank(&rows), in_pencil }
}

/// Certificate of weight 18 and degree 6 from two irreducible cubics: `c1` through
/// `x1..x9` and not `x10..x12`, `c2` through `x1..x6, x10..x12` and not `x7..x9`.
pub fn lemma1_construct(s: &PointSet, c1: &HomPoly, c2: &HomPoly) -> Result<ConstructionReport> {
    let ls = Labeled::identity(s);
    let mut trace = Trace::default();
    let outcome = lemma1_pair(&ls, c1, c2, CaseTag::NineOnCubicConicFive, &mut trace)?;
    Ok(ConstructionReport { trace: trace.0, relabeling: ls.orig, outcome })
}
