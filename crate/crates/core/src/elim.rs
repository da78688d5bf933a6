//! Elimination for systems of bivariate polynomials: rational common zeros, and an exact
//! decision of whether a complex common zero exists (dynamic evaluation over `Q[x]/(r)`).

use num_traits::Zero;

use crate::point::ProjPoint;
use crate::poly::{BiPoly, HomPoly, UPoly};
use crate::rational::{self, Rational};

/// Outcome of asking for the common zeros of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSet<T> {
    /// The polynomials share a nonconstant factor.
    Infinite,
    Finite(T),
}

fn nonzero(polys: &[BiPoly]) -> Vec<BiPoly> {
    polys.iter().filter(|p| !p.is_zero()).cloned().collect()
}

/// Index of the lowest-degree member.
fn lowest(ps: &[BiPoly]) -> usize {
    (0..ps.len()).min_by_key(|&i| (ps[i].total_degree().unwrap(), i)).unwrap()
}

/// A combination of the members other than `ps[fi]` that is coprime to `ps[fi]`.
/// Requires at least two members and a constant gcd of the whole system.
fn coprime_partner(ps: &[BiPoly], fi: usize) -> BiPoly {
    let f = &ps[fi];
    for k in 1..200i64 {
        let mut g = BiPoly::zero();
        let mut w = rational::int(1);
        for (i, p) in ps.iter().enumerate() {
            if i == fi {
                continue;
            }
            g = &g + &p.scale(&w);
            w *= rational::int(k);
        }
        if !g.is_zero() && BiPoly::gcd(f, &g).is_constant() {
            return g;
        }
    }
    unreachable!("a generic combination is coprime to F when the gcd of the system is constant")
}

/// All rational common zeros in the affine plane, sorted.
pub fn rational_common_zeros(polys: &[BiPoly]) -> ZeroSet<Vec<(Rational, Rational)>> {
    let ps = nonzero(polys);
    if ps.is_empty() {
        return ZeroSet::Infinite;
    }
    if ps.iter().any(|p| p.is_constant()) {
        return ZeroSet::Finite(Vec::new());
    }
    let g = ps.iter().skip(1).fold(ps[0].clone(), |acc, p| BiPoly::gcd(&acc, p));
    if !g.is_constant() {
        return ZeroSet::Infinite;
    }
    let fi = lowest(&ps);
    let h = coprime_partner(&ps, fi);
    let res = BiPoly::resultant_y(&ps[fi], &h);
    let mut out = Vec::new();
    for a in res.rational_roots() {
        let mut u = UPoly::zero();
        for p in &ps {
            u = UPoly::gcd(&u, &p.eval_x(&a));
        }
        for b in u.rational_roots() {
            out.push((a.clone(), b));
        }
    }
    out.sort();
    ZeroSet::Finite(out)
}

/// Whether the system has a common zero in `C^2`.
pub fn has_complex_common_zero(polys: &[BiPoly]) -> bool {
    let ps = nonzero(polys);
    if ps.is_empty() {
        return true;
    }
    if ps.iter().any(|p| p.is_constant()) {
        return false;
    }
    let g = ps.iter().skip(1).fold(ps[0].clone(), |acc, p| BiPoly::gcd(&acc, p));
    if !g.is_constant() {
        return true;
    }
    let fi = lowest(&ps);
    // Shear so that F has constant leading coefficient in y; common zeros correspond bijectively.
    let mut t = Rational::zero();
    while ps[fi].top_form_at(&t).is_zero() {
        t += rational::int(1);
    }
    let sheared: Vec<BiPoly> = ps.iter().map(|p| p.shear(&t)).collect();
    let h = coprime_partner(&sheared, fi);
    let r = BiPoly::resultant_y(&sheared[fi], &h).squarefree_part();
    if r.is_constant() {
        return false;
    }
    let mut system = vec![sheared[fi].clone()];
    system.extend(sheared.iter().enumerate().filter(|&(i, _)| i != fi).map(|(_, p)| p.clone()));
    branch_has_zero(&r, &system)
}

/// Polynomials in `y` over `Q[x]/(m)`, coefficients reduced, lowest degree first.
type ModPoly = Vec<UPoly>;

fn reduce(p: &BiPoly, m: &UPoly) -> ModPoly {
    let mut v: ModPoly = p.y_coeffs().iter().map(|c| c.rem(m)).collect();
    trim(&mut v);
    v
}

fn trim(v: &mut ModPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

enum Step<T> {
    Done(T),
    Split(UPoly, UPoly),
}

/// Inverse of `c` modulo `m`, or a nontrivial factorization of `m`.
fn invert(c: &UPoly, m: &UPoly) -> Step<UPoly> {
    let (g, s, _) = UPoly::ext_gcd(c, m);
    if g.degree() == Some(0) {
        Step::Done(s.rem(m))
    } else {
        let other = m.div_exact(&g).expect("gcd divides modulus");
        Step::Split(g, other.monic())
    }
}

fn mulmod(a: &UPoly, b: &UPoly, m: &UPoly) -> UPoly {
    (a * b).rem(m)
}

/// Monic gcd over `Q[x]/(m)`, splitting the modulus when a zero divisor appears.
fn gcd_mod(a: &ModPoly, b: &ModPoly, m: &UPoly) -> Step<ModPoly> {
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        trim(&mut a);
        trim(&mut b);
        if b.is_empty() {
            if a.is_empty() {
                return Step::Done(a);
            }
            let inv = match invert(a.last().unwrap(), m) {
                Step::Done(i) => i,
                Step::Split(x, y) => return Step::Split(x, y),
            };
            return Step::Done(a.iter().map(|c| mulmod(c, &inv, m)).collect());
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let inv = match invert(b.last().unwrap(), m) {
            Step::Done(i) => i,
            Step::Split(x, y) => return Step::Split(x, y),
        };
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let q = mulmod(a.last().unwrap(), &inv, m);
            for (k, bc) in b.iter().enumerate() {
                a[shift + k] = (&a[shift + k] - &mulmod(&q, bc, m)).rem(m);
            }
            a.pop();
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

fn branch_has_zero(m: &UPoly, system: &[BiPoly]) -> bool {
    let polys: Vec<ModPoly> = system.iter().map(|p| reduce(p, m)).collect();
    let mut g = polys[0].clone();
    for p in &polys[1..] {
        match gcd_mod(&g, p, m) {
            Step::Done(h) => g = h,
            Step::Split(m1, m2) => return branch_has_zero(&m1, system) || branch_has_zero(&m2, system),
        }
        if g.len() <= 1 {
            return false;
        }
    }
    g.len() >= 2
}

/// Rational common zeros of homogeneous polynomials in the projective plane.
pub fn projective_rational_zeros(polys: &[HomPoly]) -> ZeroSet<Vec<ProjPoint>> {
    let nz: Vec<&HomPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nz.is_empty() {
        return ZeroSet::Infinite;
    }
    let g = nz.iter().skip(1).fold(nz[0].clone(), |acc, p| HomPoly::gcd(&acc, p));
    if g.degree() > 0 {
        return ZeroSet::Infinite;
    }
    let mut out = Vec::new();
    let affine: Vec<BiPoly> = nz.iter().map(|p| p.dehomogenize(2)).collect();
    if let ZeroSet::Finite(pts) = rational_common_zeros(&affine) {
        out.extend(pts.into_iter().map(|(x, y)| ProjPoint::affine(x, y)));
    }
    let mut u = UPoly::zero();
    for p in &nz {
        u = UPoly::gcd(&u, &p.dehomogenize(2).top_restriction(p.degree()));
    }
    for a in u.rational_roots() {
        out.push(ProjPoint::new(a, rational::int(1), Rational::zero()).unwrap());
    }
    let corner = ProjPoint::from_ints(1, 0, 0).unwrap();
    if nz.iter().all(|p| p.vanishes_at(&corner)) {
        out.push(corner);
    }
    out.sort();
    out.dedup();
    ZeroSet::Finite(out)
}

/// Whether homogeneous polynomials without common factor share a complex zero in the projective plane.
pub fn projective_has_complex_zero(polys: &[HomPoly]) -> bool {
    let nz: Vec<&HomPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nz.is_empty() {
        return true;
    }
    let affine: Vec<BiPoly> = nz.iter().map(|p| p.dehomogenize(2)).collect();
    if has_complex_common_zero(&affine) {
        return true;
    }
    let mut u = UPoly::zero();
    for p in &nz {
        u = UPoly::gcd(&u, &p.dehomogenize(2).top_restriction(p.degree()));
    }
    if u.is_zero() || u.degree().unwrap() > 0 {
        return true;
    }
    let corner = ProjPoint::from_ints(1, 0, 0).unwrap();
    nz.iter().all(|p| p.vanishes_at(&corner))
}

impl BiPoly {
    /// For the dehomogenization of a degree-`d` form: its restriction to the line at
    /// infinity at `[x:1:0]`, as a polynomial in `x`.
    pub fn top_restriction(&self, d: u32) -> UPoly {
        let mut c = vec![Rational::zero(); d as usize + 1];
        for (&(i, j), v) in self.terms() {
            if i + j == d {
                c[i as usize] = v.clone();
            }
        }
        UPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(ts: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(ts.iter().map(|&(i, j, c)| ((i, j), int(c))))
    }

    #[test]
    fn rational_zeros_of_circle_and_line() {
        // x^2 + y^2 - 25, x + y - 7: zeros (3,4), (4,3)
        let c = p(&[(2, 0, 1), (0, 2, 1), (0, 0, -25)]);
        let l = p(&[(1, 0, 1), (0, 1, 1), (0, 0, -7)]);
        assert_eq!(rational_common_zeros(&[c, l]), ZeroSet::Finite(vec![(int(3), int(4)), (int(4), int(3))]));
    }

    #[test]
    fn complex_existence() {
        // x^2 + 1 = 0, y^2 + 1 = 0: complex zeros, none rational
        let a = p(&[(2, 0, 1), (0, 0, 1)]);
        let b = p(&[(0, 2, 1), (0, 0, 1)]);
        assert!(has_complex_common_zero(&[a.clone(), b.clone()]));
        assert_eq!(rational_common_zeros(&[a.clone(), b.clone()]), ZeroSet::Finite(vec![]));
        // add x - y: zeros (i,i), (-i,-i) survive
        let c = p(&[(1, 0, 1), (0, 1, -1)]);
        assert!(has_complex_common_zero(&[a.clone(), b.clone(), c]));
        // add x*y - 1: at (i,i) gives -2, at (i,-i) gives 0 -> survives
        let d = p(&[(1, 1, 1), (0, 0, -1)]);
        assert!(has_complex_common_zero(&[a.clone(), b.clone(), d]));
        // add x*y + 2: values -1+2, 1+2 never zero
        let e = p(&[(1, 1, 1), (0, 0, 2)]);
        assert!(!has_complex_common_zero(&[a, b, e]));
    }

    #[test]
    fn zeros_at_infinity() {
        // XY and X(X - Z) meet at [0:0:1], [0:1:0], and [1:0:1]
        let f = HomPoly::from_int_terms(2, &[(1, 1, 0, 1)]).unwrap();
        let g = HomPoly::from_int_terms(2, &[(2, 0, 0, 1), (1, 0, 1, -1)]).unwrap();
        let ZeroSet::Infinite = projective_rational_zeros(&[f.clone(), g.clone()]) else {
            panic!("X is a common factor")
        };
        let h = HomPoly::from_int_terms(2, &[(0, 1, 1, 1), (2, 0, 0, 1)]).unwrap();
        let ZeroSet::Finite(pts) = projective_rational_zeros(&[f.clone(), h.clone()]) else { panic!() };
        assert_eq!(pts, vec![ProjPoint::from_ints(0, 0, 1).unwrap(), ProjPoint::from_ints(0, 1, 0).unwrap()]);
        assert!(projective_has_complex_zero(&[f, h]));
    }
}
