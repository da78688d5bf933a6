//! Plane-curve geometry: line components, irreducibility of conics and cubics, singular
//! points, and local intersection multiplicities.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::elim::{self, ZeroSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::point::ProjPoint;
use crate::poly::bipoly::binomial;
use crate::poly::hompoly::Mult;
use crate::poly::{BiPoly, HomPoly, UPoly};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRecord {
    pub point: ProjPoint,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutTable {
    pub records: Vec<IntersectionRecord>,
    /// Intersection count not accounted for by rational points.
    pub residual: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineComponents {
    /// Rational line factors, repeated according to multiplicity.
    pub lines: Vec<HomPoly>,
    /// True when no further line factor exists over the complex numbers.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveAnalysis {
    pub poly: HomPoly,
    /// `None` when undecided (degree 4 and up without smoothness or a line factor).
    pub is_geometrically_irreducible: Option<bool>,
    pub line_components: Vec<HomPoly>,
    pub line_components_complete: bool,
    pub singular_points_over_q: Vec<ProjPoint>,
    /// The singular locus contains a curve (a repeated component).
    pub singular_locus_is_curve: bool,
    pub smooth: bool,
}

/// Rank of the symmetric matrix of a conic: 3 irreducible, 2 line pair, 1 double line.
pub fn conic_rank(p: &HomPoly) -> Result<usize> {
    if p.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: p.degree() });
    }
    if p.is_zero() {
        return Err(Error::Invalid("zero conic".into()));
    }
    use crate::poly::Monomial as M;
    let c = |i, j, k| p.coeff(&M(i, j, k));
    let two = rational::int(2);
    let m = vec![
        vec![&two * c(2, 0, 0), c(1, 1, 0), c(1, 0, 1)],
        vec![c(1, 1, 0), &two * c(0, 2, 0), c(0, 1, 1)],
        vec![c(1, 0, 1), c(0, 1, 1), &two * c(0, 0, 2)],
    ];
    Ok(linalg::rank(&m))
}

/// Coefficients of `p(X, Y, -aX - bY)` as polynomials in `(a, b)`, one per power of `X`.
fn line_system_affine(p: &HomPoly) -> Vec<BiPoly> {
    let d = p.degree();
    let mut out = vec![BiPoly::zero(); d as usize + 1];
    for (m, c) in p.terms() {
        let sign = if m.2 % 2 == 0 { c.clone() } else { -c.clone() };
        for l in 0..=m.2 {
            out[(m.0 + l) as usize].add_term(l, m.2 - l, &sign * binomial(m.2, l));
        }
    }
    out
}

/// Coefficients of `p(X, -aX, Z)` as polynomials in `a`, one per power of `X`.
fn line_system_pencil(p: &HomPoly) -> Vec<UPoly> {
    let d = p.degree() as usize;
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d + 1];
    for (m, c) in p.terms() {
        let v = if m.1 % 2 == 0 { c.clone() } else { -c.clone() };
        rows[(m.0 + m.1) as usize][m.1 as usize] += v;
    }
    rows.into_iter().map(UPoly::new).collect()
}

fn contains_line_x0(p: &HomPoly) -> bool {
    p.terms().all(|(m, _)| m.0 > 0)
}

/// Whether `p` has a line component over the complex numbers.
pub fn has_complex_line(p: &HomPoly) -> bool {
    if p.degree() == 0 {
        return false;
    }
    if p.is_zero() || p.degree() == 1 {
        return true;
    }
    if contains_line_x0(p) {
        return true;
    }
    let g = line_system_pencil(p).iter().fold(UPoly::zero(), |acc, u| UPoly::gcd(&acc, u));
    if g.is_zero() || g.degree().unwrap() > 0 {
        return true;
    }
    elim::has_complex_common_zero(&line_system_affine(p))
}

/// Rational points of `p` on the line through `a` and `b`; `None` if the line is a component.
fn rational_points_on(p: &HomPoly, a: &[Rational; 3], b: &[Rational; 3]) -> Option<Vec<ProjPoint>> {
    let u = restrict_to_line(p, a, b);
    let deg = u.degree()?;
    let mut out: Vec<ProjPoint> = u
        .rational_roots()
        .into_iter()
        .filter_map(|t| ProjPoint::from_array([0, 1, 2].map(|i| &a[i] + &t * &b[i])).ok())
        .collect();
    if deg < p.degree() as usize {
        out.extend(ProjPoint::from_array(b.clone()).ok());
    }
    Some(out)
}

/// Distinct rational line components: each meets two of the coordinate lines in rational points.
fn rational_lines(p: &HomPoly) -> Vec<HomPoly> {
    let e = |i: usize| -> [Rational; 3] {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero()];
        v[i] = Rational::one();
        v
    };
    let refs = [(e(0), e(1)), (e(1), e(2)), (e(2), e(0))];
    let mut out: Vec<HomPoly> = Vec::new();
    let push = |l: HomPoly, out: &mut Vec<HomPoly>| {
        let l = l.normalized();
        if !out.contains(&l) && l.divides(p) {
            out.push(l);
        }
    };
    let on: Vec<Option<Vec<ProjPoint>>> = refs.iter().map(|(a, b)| rational_points_on(p, a, b)).collect();
    for (i, pts) in on.iter().enumerate() {
        if pts.is_none() {
            let (a, b) = &refs[i];
            push(
                HomPoly::line_through(
                    &ProjPoint::from_array(a.clone()).unwrap(),
                    &ProjPoint::from_array(b.clone()).unwrap(),
                ),
                &mut out,
            );
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let (Some(pi), Some(pj)) = (&on[i], &on[j]) else { continue };
            for q1 in pi {
                for q2 in pj.iter().filter(|q2| *q2 != q1) {
                    push(HomPoly::line_through(q1, q2), &mut out);
                }
            }
        }
    }
    out
}

/// Rational line factors with multiplicity, and the cofactor.
pub fn rational_line_factors(p: &HomPoly) -> (Vec<HomPoly>, HomPoly) {
    let mut residual = p.clone();
    let mut lines = Vec::new();
    for l in rational_lines(p) {
        while let Some(q) = residual.div_exact(&l) {
            lines.push(l.clone());
            residual = q;
        }
    }
    (lines, residual)
}

/// All rational line factors with multiplicity, plus a certificate that none is missing over `C`.
pub fn find_line_components(p: &HomPoly) -> Result<LineComponents> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::Invalid("line components need a nonzero polynomial of positive degree".into()));
    }
    let (lines, residual) = rational_line_factors(p);
    let complete = match residual.degree() {
        0 => true,
        2 => conic_rank(&residual)? == 3,
        _ => !has_complex_line(&residual),
    };
    Ok(LineComponents { lines, complete })
}

/// A cubic is reducible exactly when it contains a line.
pub fn cubic_is_irreducible(p: &HomPoly) -> Result<Option<bool>> {
    if p.degree() != 3 {
        return Err(Error::DegreeMismatch { expected: 3, found: p.degree() });
    }
    if p.is_zero() {
        return Err(Error::Invalid("zero cubic".into()));
    }
    Ok(Some(!has_complex_line(p)))
}

/// Irreducibility of a cubic known to pass through `points`. With two distinct rational points
/// on the curve, a complex line component forces a rational one: three conjugate lines share
/// at most one rational point.
pub fn cubic_is_irreducible_through(p: &HomPoly, points: &[ProjPoint]) -> Result<bool> {
    if p.degree() != 3 {
        return Err(Error::DegreeMismatch { expected: 3, found: p.degree() });
    }
    if p.is_zero() {
        return Err(Error::Invalid("zero cubic".into()));
    }
    if !rational_lines(p).is_empty() {
        return Ok(false);
    }
    if points.iter().filter(|x| p.vanishes_at(x)).take(2).count() == 2 {
        return Ok(true);
    }
    Ok(!has_complex_line(p))
}

/// Irreducibility over `C` for degrees up to 3; `None` when undecided.
pub fn is_irreducible(p: &HomPoly) -> Option<bool> {
    match p.degree() {
        0 => Some(false),
        1 => Some(!p.is_zero()),
        2 => conic_rank(p).ok().map(|r| r == 3),
        3 => cubic_is_irreducible(p).ok().flatten(),
        _ => {
            if has_complex_line(p) {
                Some(false)
            } else if is_smooth(p) {
                Some(true)
            } else {
                None
            }
        }
    }
}

/// No complex point where all partials vanish.
pub fn is_smooth(p: &HomPoly) -> bool {
    match p.partial_derivatives() {
        Ok(d) => !elim::projective_has_complex_zero(&d),
        Err(_) => false,
    }
}

pub fn analyze(p: &HomPoly) -> Result<CurveAnalysis> {
    let lc = find_line_components(p)?;
    let partials = p.partial_derivatives()?;
    let (singular_points_over_q, singular_locus_is_curve) = match elim::projective_rational_zeros(&partials) {
        ZeroSet::Finite(pts) => (pts, false),
        ZeroSet::Infinite => (Vec::new(), true),
    };
    let smooth = !singular_locus_is_curve && !elim::projective_has_complex_zero(&partials);
    let irreducible = if smooth { Some(true) } else { is_irreducible(p) };
    Ok(CurveAnalysis {
        poly: p.clone(),
        is_geometrically_irreducible: irreducible,
        line_components: lc.lines,
        line_components_complete: lc.complete,
        singular_points_over_q,
        singular_locus_is_curve,
        smooth,
    })
}

fn div_y(f: &BiPoly) -> BiPoly {
    BiPoly::from_terms(f.terms().map(|(&(i, j), c)| ((i, j - 1), c.clone())))
}

/// Intersection number at the origin of affine curves with no common component through it.
fn local_mult(f: &BiPoly, g: &BiPoly) -> u32 {
    let origin = (Rational::zero(), Rational::zero());
    if !f.eval(&origin.0, &origin.1).is_zero() || !g.eval(&origin.0, &origin.1).is_zero() {
        return 0;
    }
    let fx = f.eval_y(&Rational::zero());
    let gx = g.eval_y(&Rational::zero());
    match (fx.degree(), gx.degree()) {
        (None, None) => unreachable!("y divides both; excluded by the common-component check"),
        (None, _) => gx.order_at_zero().unwrap() + local_mult(&div_y(f), g),
        (_, None) => fx.order_at_zero().unwrap() + local_mult(f, &div_y(g)),
        (Some(r), Some(s)) => {
            let (f, g, fx, gx, r, s) = if r <= s { (f, g, fx, gx, r, s) } else { (g, f, gx, fx, s, r) };
            let g1 = &g.scale(&fx.lc()) - &f.scale(&gx.lc()).mul_monomial((s - r) as u32, 0);
            local_mult(f, &g1)
        }
    }
}

/// Intersection number 1 at `x`: both local equations have independent linear parts.
pub fn meets_transversally(p: &HomPoly, q: &HomPoly, x: &ProjPoint) -> bool {
    if !p.vanishes_at(x) || !q.vanishes_at(x) {
        return false;
    }
    let (f, g) = (p.local_at(x), q.local_at(x));
    f.coeff(1, 0) * g.coeff(0, 1) != f.coeff(0, 1) * g.coeff(1, 0)
}

/// Local intersection number of the curves `p = 0` and `q = 0` at `x`.
pub fn intersection_multiplicity(p: &HomPoly, q: &HomPoly, x: &ProjPoint) -> Mult {
    if !p.vanishes_at(x) || !q.vanishes_at(x) {
        return Mult::Finite(0);
    }
    let g = HomPoly::gcd(p, q);
    if g.is_zero() || (g.degree() > 0 && g.vanishes_at(x)) {
        return Mult::Infinite;
    }
    Mult::Finite(local_mult(&p.local_at(x), &q.local_at(x)))
}

/// `p(a + t b)` as a polynomial in `t`.
pub fn restrict_to_line(p: &HomPoly, a: &[Rational; 3], b: &[Rational; 3]) -> UPoly {
    let lin: Vec<UPoly> = (0..3).map(|i| UPoly::new(vec![a[i].clone(), b[i].clone()])).collect();
    let mut out = UPoly::zero();
    for (m, c) in p.terms() {
        let t = &(&lin[0].pow(m.0) * &lin[1].pow(m.1)) * &lin[2].pow(m.2);
        out = &out + &t.scale(c);
    }
    out
}

/// Independent route: move a projection center to `[0:1:0]` and read the multiplicity of
/// `x`'s image as a root of the resultant in `Y`.
pub fn intersection_multiplicity_resultant(p: &HomPoly, q: &HomPoly, x: &ProjPoint) -> Mult {
    if !p.vanishes_at(x) || !q.vanishes_at(x) {
        return Mult::Finite(0);
    }
    let g = HomPoly::gcd(p, q);
    if g.is_zero() || (g.degree() > 0 && g.vanishes_at(x)) {
        return Mult::Infinite;
    }
    let xc = x.coords();
    for family in [2u32, 3] {
        for k in 1..400i64 {
            let kk = rational::int(k);
            let c = [kk.clone(), Rational::one(), rational::int(k.pow(family))];
            if p.eval(&c).is_zero() || q.eval(&c).is_zero() {
                continue;
            }
            // The line through x and the center must meet the common zeros only at x.
            let gp = restrict_to_line(p, xc, &c);
            let gq = restrict_to_line(q, xc, &c);
            let h = UPoly::gcd(&gp, &gq);
            let only_x = h.coeffs().iter().rev().skip(1).all(|v| v.is_zero());
            if !only_x {
                continue;
            }
            // Columns: e1, c, e3; so new [0:1:0] maps to c.
            let m = [
                [Rational::one(), c[0].clone(), Rational::zero()],
                [Rational::zero(), c[1].clone(), Rational::zero()],
                [Rational::zero(), c[2].clone(), Rational::one()],
            ];
            let pp = p.compose_linear(&m);
            let qq = q.compose_linear(&m);
            let res = BiPoly::resultant_y(&pp.dehomogenize(2), &qq.dehomogenize(2));
            // Image of x: solve m w = x, with w = (x0 - k x1, x1, x2 - k^e x1).
            let w0 = &xc[0] - &c[0] * &xc[1];
            let w2 = &xc[2] - &c[2] * &xc[1];
            let total = p.degree() * q.degree();
            let mult = if w2.is_zero() {
                total - res.degree().unwrap_or(0) as u32
            } else {
                res.root_multiplicity(&(w0 / w2)).unwrap_or(0)
            };
            return Mult::Finite(mult);
        }
    }
    unreachable!("some projection center separates the common zeros")
}

pub fn common_zeros_discrete(p: &HomPoly, q: &HomPoly) -> bool {
    !p.is_zero() && !q.is_zero() && HomPoly::gcd(p, q).degree() == 0
}

/// Multiplicities at all rational common zeros, and what is left for irrational ones.
pub fn bezout_table(p: &HomPoly, q: &HomPoly) -> Result<BezoutTable> {
    if !common_zeros_discrete(p, q) {
        return Err(Error::InfiniteIntersection);
    }
    let ZeroSet::Finite(pts) = elim::projective_rational_zeros(&[p.clone(), q.clone()]) else {
        return Err(Error::InfiniteIntersection);
    };
    let mut records = Vec::with_capacity(pts.len());
    let mut sum = 0;
    for pt in pts {
        let m = intersection_multiplicity(p, q, &pt).finite().ok_or(Error::InfiniteIntersection)?;
        sum += m;
        records.push(IntersectionRecord { point: pt, multiplicity: m });
    }
    let total = p.degree() * q.degree();
    Ok(BezoutTable { records, residual: total - sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn hp(d: u32, ts: &[(u32, u32, u32, i64)]) -> HomPoly {
        HomPoly::from_int_terms(d, ts).unwrap()
    }

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }

    #[test]
    fn conic_ranks() {
        assert_eq!(conic_rank(&hp(2, &[(1, 1, 0, 1)])).unwrap(), 2);
        assert_eq!(conic_rank(&hp(2, &[(2, 0, 0, 1)])).unwrap(), 1);
        assert_eq!(conic_rank(&hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)])).unwrap(), 3);
        assert!(conic_rank(&HomPoly::x()).is_err());
    }

    #[test]
    fn line_components_examples() {
        let xyz = hp(3, &[(1, 1, 1, 1)]);
        let lc = find_line_components(&xyz).unwrap();
        assert_eq!(lc.lines.len(), 3);
        assert!(lc.complete);
        let fermat = hp(3, &[(3, 0, 0, 1), (0, 3, 0, 1), (0, 0, 3, 1)]);
        let lc = find_line_components(&fermat).unwrap();
        assert!(lc.lines.is_empty() && lc.complete);
        let conic = hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)]);
        let f = &HomPoly::linear(int(1), int(1), int(0)) * &conic;
        let lc = find_line_components(&f).unwrap();
        assert_eq!(lc.lines, vec![HomPoly::linear(int(1), int(1), int(0))]);
        assert!(lc.complete);
        // X^2 + Y^2 splits over C but not over Q.
        let lc = find_line_components(&hp(2, &[(2, 0, 0, 1), (0, 2, 0, 1)])).unwrap();
        assert!(lc.lines.is_empty() && !lc.complete);
        let doubled = &HomPoly::y().pow(2) * &HomPoly::z();
        assert_eq!(find_line_components(&doubled).unwrap().lines.len(), 3);
    }

    #[test]
    fn cubic_irreducibility() {
        assert_eq!(cubic_is_irreducible(&hp(3, &[(1, 1, 1, 1)])).unwrap(), Some(false));
        let fermat = hp(3, &[(3, 0, 0, 1), (0, 3, 0, 1), (0, 0, 3, 1)]);
        assert_eq!(cubic_is_irreducible(&fermat).unwrap(), Some(true));
        assert!(is_smooth(&fermat));
        let nodal = hp(3, &[(0, 2, 1, 1), (3, 0, 0, -1), (2, 0, 1, -1)]);
        assert_eq!(cubic_is_irreducible(&nodal).unwrap(), Some(true));
        let a = analyze(&nodal).unwrap();
        assert_eq!(a.singular_points_over_q, vec![pt(0, 0, 1)]);
        assert!(!a.smooth);
    }

    #[test]
    fn multiplicity_examples() {
        let o = pt(0, 0, 1);
        assert_eq!(intersection_multiplicity(&HomPoly::x(), &HomPoly::y(), &o), Mult::Finite(1));
        let parabola = hp(2, &[(0, 1, 1, 1), (2, 0, 0, -1)]);
        assert_eq!(intersection_multiplicity(&parabola, &HomPoly::y(), &o), Mult::Finite(2));
        assert_eq!(intersection_multiplicity_resultant(&parabola, &HomPoly::y(), &o), Mult::Finite(2));
        let cusp = hp(3, &[(0, 2, 1, 1), (3, 0, 0, -1)]);
        assert_eq!(intersection_multiplicity(&cusp, &HomPoly::y(), &o), Mult::Finite(3));
        assert_eq!(intersection_multiplicity_resultant(&cusp, &HomPoly::y(), &o), Mult::Finite(3));
        let xy = hp(2, &[(1, 1, 0, 1)]);
        assert_eq!(intersection_multiplicity(&xy, &HomPoly::x(), &o), Mult::Infinite);
        assert_eq!(intersection_multiplicity(&xy, &HomPoly::z(), &o), Mult::Finite(0));
    }

    #[test]
    fn bezout_examples() {
        let conic = hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)]);
        let t = bezout_table(&conic, &HomPoly::x()).unwrap();
        assert_eq!(t.records, vec![IntersectionRecord { point: pt(0, 0, 1), multiplicity: 2 }]);
        assert_eq!(t.residual, 0);
        let circle = hp(2, &[(2, 0, 0, 1), (0, 2, 0, 1), (0, 0, 2, -1)]);
        let t = bezout_table(&circle, &HomPoly::linear(int(1), int(-1), int(0))).unwrap();
        assert!(t.records.is_empty());
        assert_eq!(t.residual, 2);
        assert_eq!(bezout_table(&HomPoly::x(), &HomPoly::x()), Err(Error::InfiniteIntersection));
    }
}
