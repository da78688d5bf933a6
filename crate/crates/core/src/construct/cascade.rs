//! Reduction of a dependent-looking pair by common factors of a known product.

use super::{certify, coprime_to_factors, second_member, CaseTag, Outcome, Target, Trace};
use crate::error::Result;
use crate::linalg;
use crate::poly::HomPoly;

fn factor_name(f: &HomPoly) -> &'static str {
    match f.degree() {
        1 => "line",
        2 => "conic",
        3 => "cubic",
        _ => "factor",
    }
}

fn proportional(a: &HomPoly, b: &HomPoly) -> bool {
    linalg::rank(&vec![a.coeff_vector(), b.coeff_vector()]) < 2
}

/// Takes `P1 = prod(factors)` and a second member `P2` of the system of degree `degree`
/// defined by `ts`, then divides both by factors of `P1` dividing `P2` until they are coprime.
/// The factors must be irreducible over `Q`.
/// Target orders drop by the order of the removed factor at each point.
pub(crate) fn cascade(
    factors: &[HomPoly],
    degree: u32,
    ts: &[Target],
    case: CaseTag,
    prefix: &str,
    trace: &mut Trace,
) -> Result<Outcome> {
    let p1 = HomPoly::product(factors);
    let Some(p2) = second_member(degree, ts, &p1)? else {
        return Ok(Outcome::Contradiction { reason: format!("the degree {degree} system has dimension 1") });
    };
    if coprime_to_factors(factors, &p2) {
        trace.push(format!("{prefix}.coprime"));
        return certify(p1, p2, ts, case).map(Outcome::Certificate);
    }
    let mut rest = factors.to_vec();
    let mut b = p2;
    let mut removed = HomPoly::one();
    while let Some(i) = rest.iter().position(|f| f.divides(&b)) {
        let f = rest.remove(i);
        trace.push(format!("{prefix}.divide-{}", factor_name(&f)));
        b = b.div_exact(&f).expect("checked");
        removed = &removed * &f;
    }
    let a = HomPoly::product(&rest);
    if a.degree() == 0 || proportional(&a, &b) {
        return Ok(Outcome::Contradiction { reason: "the reduced pair is linearly dependent".into() });
    }
    let reduced: Vec<Target> =
        ts.iter().map(|t| Target { order: t.order.saturating_sub(removed.ord(&t.point)), ..t.clone() }).collect();
    certify(a, b, &reduced, case).map(Outcome::Certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::ProjPoint;

    #[test]
    fn shared_line_is_divided_out() {
        // Conics through five points of y = 0 all contain that line.
        let ts: Vec<Target> = (0..5)
            .map(|i| Target { label: Some(i + 1), point: ProjPoint::from_ints(i as i64, 0, 1).unwrap(), order: 1 })
            .collect();
        let line = HomPoly::y();
        let other = HomPoly::from_int_terms(1, &[(1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 7)]).unwrap();
        let mut trace = Trace::default();
        let out = cascade(&[line, other], 2, &ts, CaseTag::Custom, "t", &mut trace).unwrap();
        assert_eq!(trace.0, ["t.divide-line"]);
        let Outcome::Certificate(c) = out else { panic!("{out:?}") };
        assert_eq!(c.degree(), 1);
        assert!(c.points.is_empty());
        assert!(c.verified);
    }
}
