//! Homogeneous polynomials in `X, Y, Z` over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::point::ProjPoint;
use crate::rational::{self, Rational};

/// Exponents of `X^i Y^j Z^k`. The derived order is graded lex with `X > Y > Z`
/// inside a fixed degree, so the largest key of a map is the leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub u32, pub u32, pub u32);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0 + self.1 + self.2
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.0, self.1, self.2]
    }

    pub fn from_exps(e: [u32; 3]) -> Self {
        Monomial(e[0], e[1], e[2])
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0 <= o.0 && self.1 <= o.1 && self.2 <= o.2
    }
}

/// All monomials of degree `d`, leading (greatest) first.
pub fn monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(Monomial(i, j, d - i - j));
        }
    }
    out
}

pub fn space_dim(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

/// Local intersection data: a multiplicity that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    Finite(u32),
    Infinite,
}

impl Mult {
    pub fn finite(self) -> Option<u32> {
        match self {
            Mult::Finite(m) => Some(m),
            Mult::Infinite => None,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(m) => write!(f, "{m}"),
            Mult::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Mult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mult::Finite(m) => s.serialize_u32(*m),
            Mult::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for Mult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(m) => Ok(Mult::Finite(m)),
            Raw::S(s) if s == "infinity" => Ok(Mult::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad multiplicity {s:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut s = String::new();
            for (e, v) in [(m.0, 'X'), (m.1, 'Y'), (m.2, 'Z')] {
                match e {
                    0 => {}
                    1 => s.push(v),
                    _ => s.push_str(&format!("{v}^{e}")),
                }
            }
            let coeff = if c.is_one() && !s.is_empty() {
                String::new()
            } else if (-c).is_one() && !s.is_empty() {
                "-".to_string()
            } else if c.denom().is_one() {
                c.to_string()
            } else {
                format!("({c})")
            };
            let text = format!("{coeff}{s}");
            if first {
                write!(f, "{text}")?;
            } else if let Some(rest) = text.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {text}")?;
            }
            first = false;
        }
        Ok(())
    }
}

fn rpow(a: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

impl HomPoly {
    pub fn zero(degree: u32) -> Self {
        HomPoly { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = HomPoly::zero(0);
        p.push(Monomial(0, 0, 0), c);
        p
    }

    pub fn one() -> Self {
        HomPoly::constant(Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = HomPoly::zero(m.degree());
        p.push(m, c);
        p
    }

    /// Rejects any exponent triple whose sum differs from `degree`.
    pub fn from_terms(degree: u32, ts: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut p = HomPoly::zero(degree);
        for (m, c) in ts {
            if m.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: m.degree() });
            }
            p.push(m, c);
        }
        Ok(p)
    }

    pub fn from_int_terms(degree: u32, ts: &[(u32, u32, u32, i64)]) -> Result<Self> {
        HomPoly::from_terms(degree, ts.iter().map(|&(i, j, k, c)| (Monomial(i, j, k), rational::int(c))))
    }

    pub fn x() -> Self {
        HomPoly::monomial(Monomial(1, 0, 0), Rational::one())
    }

    pub fn y() -> Self {
        HomPoly::monomial(Monomial(0, 1, 0), Rational::one())
    }

    pub fn z() -> Self {
        HomPoly::monomial(Monomial(0, 0, 1), Rational::one())
    }

    /// `aX + bY + cZ`
    pub fn linear(a: Rational, b: Rational, c: Rational) -> Self {
        let mut p = HomPoly::zero(1);
        p.push(Monomial(1, 0, 0), a);
        p.push(Monomial(0, 1, 0), b);
        p.push(Monomial(0, 0, 1), c);
        p
    }

    /// The line through two distinct points.
    pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Self {
        let [a0, a1, a2] = p.coords();
        let [b0, b1, b2] = q.coords();
        HomPoly::linear(a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0).normalized()
    }

    fn push(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from leading to trailing.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient vector in the order of [`monomials`].
    pub fn coeff_vector(&self) -> Vec<Rational> {
        monomials(self.degree).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coeff_vector(degree: u32, v: &[Rational]) -> Self {
        let mut p = HomPoly::zero(degree);
        for (m, c) in monomials(degree).into_iter().zip(v) {
            p.push(m, c.clone());
        }
        p
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scaled to leading coefficient 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return HomPoly::zero(self.degree);
        }
        HomPoly { degree: self.degree, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn eval(&self, v: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * rpow(&v[0], m.0) * rpow(&v[1], m.1) * rpow(&v[2], m.2);
        }
        acc
    }

    /// Value at the canonical representative of `x`.
    pub fn evaluate(&self, x: &ProjPoint) -> Rational {
        self.eval(x.coords())
    }

    pub fn vanishes_at(&self, x: &ProjPoint) -> bool {
        self.evaluate(x).is_zero()
    }

    pub fn try_add(&self, o: &HomPoly) -> Result<HomPoly> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: o.degree });
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(*m, c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> HomPoly {
        let mut acc = HomPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in variable `var` (0 = X, 1 = Y, 2 = Z).
    pub fn partial(&self, var: usize) -> Result<HomPoly> {
        if self.degree == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let mut out = HomPoly::zero(self.degree - 1);
        for (m, c) in &self.terms {
            let mut e = m.exps();
            if e[var] == 0 {
                continue;
            }
            let k = e[var];
            e[var] -= 1;
            out.push(Monomial::from_exps(e), c * rational::int(k as i64));
        }
        Ok(out)
    }

    pub fn partial_derivatives(&self) -> Result<[HomPoly; 3]> {
        Ok([self.partial(0)?, self.partial(1)?, self.partial(2)?])
    }

    /// Substitute 1 for variable `var`; the remaining two variables keep their order.
    pub fn dehomogenize(&self, var: usize) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exps();
            let rest: Vec<u32> = (0..3).filter(|&i| i != var).map(|i| e[i]).collect();
            out.add_term(rest[0], rest[1], c.clone());
        }
        out
    }

    /// Inverse of [`HomPoly::dehomogenize`] at the given degree (which must be at least the total degree of `f`).
    pub fn homogenize(f: &BiPoly, degree: u32, var: usize) -> HomPoly {
        let mut out = HomPoly::zero(degree);
        for (&(a, b), c) in f.terms() {
            let mut e = [0u32; 3];
            let others: Vec<usize> = (0..3).filter(|&i| i != var).collect();
            e[others[0]] = a;
            e[others[1]] = b;
            e[var] = degree - a - b;
            out.push(Monomial::from_exps(e), c.clone());
        }
        out
    }

    /// Affine polynomial centered at `x`, in the chart of its dominant coordinate.
    /// The local variables are the other two coordinates in their natural order.
    pub fn local_at(&self, x: &ProjPoint) -> BiPoly {
        let idx = x.dominant_index();
        let c = x.scaled_to(idx);
        let others: Vec<usize> = (0..3).filter(|&i| i != idx).collect();
        self.dehomogenize(idx).shift(&c[others[0]], &c[others[1]])
    }

    /// Multiplicity of `x` on the curve; `Infinite` only for the zero polynomial.
    pub fn vanishing_order(&self, x: &ProjPoint) -> Mult {
        if self.is_zero() {
            return Mult::Infinite;
        }
        Mult::Finite(self.local_at(x).order_at_origin().expect("nonzero local polynomial"))
    }

    pub fn ord(&self, x: &ProjPoint) -> u32 {
        self.vanishing_order(x).finite().unwrap_or(u32::MAX)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &HomPoly) -> Option<HomPoly> {
        let (dm, dc) = d.leading().expect("division by zero polynomial");
        if self.is_zero() {
            return Some(HomPoly::zero(self.degree.saturating_sub(d.degree)));
        }
        if d.degree > self.degree {
            return None;
        }
        let inv = dc.recip();
        let mut r = self.clone();
        let mut q = HomPoly::zero(self.degree - d.degree);
        while let Some((rm, rc)) = r.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let m = Monomial(rm.0 - dm.0, rm.1 - dm.1, rm.2 - dm.2);
            let t = HomPoly::monomial(m, rc * &inv);
            r = &r - &(&t * d);
            q.push(m, t.terms.into_values().next().unwrap());
        }
        Some(q)
    }

    pub fn divides(&self, p: &HomPoly) -> bool {
        p.div_exact(self).is_some()
    }

    /// Highest power of `Z` dividing a nonzero polynomial.
    fn z_valuation(&self) -> u32 {
        self.terms.keys().map(|m| m.2).min().unwrap_or(0)
    }

    fn div_z_power(&self, e: u32) -> HomPoly {
        HomPoly {
            degree: self.degree - e,
            terms: self.terms.iter().map(|(m, c)| (Monomial(m.0, m.1, m.2 - e), c.clone())).collect(),
        }
    }

    /// Greatest common divisor with leading coefficient 1.
    pub fn gcd(p: &HomPoly, q: &HomPoly) -> HomPoly {
        if p.is_zero() && q.is_zero() {
            return HomPoly::zero(0);
        }
        if p.is_zero() {
            return q.normalized();
        }
        if q.is_zero() {
            return p.normalized();
        }
        let ep = p.z_valuation();
        let eq = q.z_valuation();
        let fp = p.div_z_power(ep).dehomogenize(2);
        let fq = q.div_z_power(eq).dehomogenize(2);
        let g = BiPoly::gcd(&fp, &fq);
        let gd = g.total_degree().unwrap_or(0);
        let zs = HomPoly::z().pow(ep.min(eq));
        (&HomPoly::homogenize(&g, gd, 2) * &zs).normalized()
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    /// `p(M v)`: substitutes each variable by the linear form given by a row of `m`.
    pub fn compose_linear(&self, m: &[[Rational; 3]; 3]) -> HomPoly {
        let forms: Vec<HomPoly> = m.iter().map(|r| HomPoly::linear(r[0].clone(), r[1].clone(), r[2].clone())).collect();
        let mut powers: Vec<Vec<HomPoly>> = Vec::new();
        for f in &forms {
            let mut ps = vec![HomPoly::one()];
            for e in 1..=self.degree {
                let next = &ps[e as usize - 1] * f;
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = HomPoly::zero(self.degree);
        for (mono, c) in &self.terms {
            let t = &(&powers[0][mono.0 as usize] * &powers[1][mono.1 as usize]) * &powers[2][mono.2 as usize];
            for (m2, c2) in t.terms {
                out.push(m2, c * c2);
            }
        }
        out
    }

    /// Product of all factors (1 for an empty list).
    pub fn product(factors: &[HomPoly]) -> HomPoly {
        factors.iter().fold(HomPoly::one(), |acc, f| &acc * f)
    }
}

impl Add for &HomPoly {
    type Output = HomPoly;
    fn add(self, o: &HomPoly) -> HomPoly {
        self.try_add(o).expect("adding polynomials of different degree")
    }
}

impl Sub for &HomPoly {
    type Output = HomPoly;
    fn sub(self, o: &HomPoly) -> HomPoly {
        self.try_add(&-o).expect("subtracting polynomials of different degree")
    }
}

impl Neg for &HomPoly {
    type Output = HomPoly;
    fn neg(self) -> HomPoly {
        HomPoly { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl Mul for &HomPoly {
    type Output = HomPoly;
    fn mul(self, o: &HomPoly) -> HomPoly {
        let mut out = HomPoly::zero(self.degree + o.degree);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.push(Monomial(a.0 + b.0, a.1 + b.1, a.2 + b.2), x * y);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct HomPolyRepr {
    degree: u32,
    terms: Vec<(u32, u32, u32, String)>,
}

impl Serialize for HomPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomPolyRepr {
            degree: self.degree,
            terms: self.terms().map(|(m, c)| (m.0, m.1, m.2, rational::format(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HomPolyRepr::deserialize(d)?;
        let mut ts = Vec::with_capacity(r.terms.len());
        for (i, j, k, c) in r.terms {
            ts.push((Monomial(i, j, k), rational::parse(&c).map_err(serde::de::Error::custom)?));
        }
        HomPoly::from_terms(r.degree, ts).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn hp(d: u32, ts: &[(u32, u32, u32, i64)]) -> HomPoly {
        HomPoly::from_int_terms(d, ts).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let xyz = hp(3, &[(1, 1, 1, 1)]);
        assert_eq!(xyz.evaluate(&ProjPoint::from_ints(1, 1, 1).unwrap()), int(1));
        let fermat = hp(3, &[(3, 0, 0, 1), (0, 3, 0, 1), (0, 0, 3, 1)]);
        assert!(fermat.vanishes_at(&ProjPoint::from_ints(1, -1, 0).unwrap()));
        assert!(HomPoly::from_int_terms(3, &[(2, 0, 1, 1), (0, 3, 0, -1), (1, 0, 0, 1)]).is_err());
    }

    #[test]
    fn partials_and_euler() {
        let xyz = hp(3, &[(1, 1, 1, 1)]);
        let [px, py, pz] = xyz.partial_derivatives().unwrap();
        assert_eq!(px, hp(2, &[(0, 1, 1, 1)]));
        assert_eq!(py, hp(2, &[(1, 0, 1, 1)]));
        assert_eq!(pz, hp(2, &[(1, 1, 0, 1)]));
        let x2 = hp(2, &[(2, 0, 0, 1)]);
        let d = x2.partial_derivatives().unwrap();
        assert_eq!(d[0], hp(1, &[(1, 0, 0, 2)]));
        assert!(d[1].is_zero() && d[2].is_zero());
        assert_eq!(HomPoly::one().partial(0), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn orders() {
        let origin = ProjPoint::from_ints(0, 0, 1).unwrap();
        assert_eq!(hp(2, &[(1, 1, 0, 1)]).vanishing_order(&origin), Mult::Finite(2));
        assert_eq!(HomPoly::x().vanishing_order(&origin), Mult::Finite(1));
        assert_eq!(HomPoly::zero(3).vanishing_order(&origin), Mult::Infinite);
        let l = HomPoly::linear(int(1), int(2), int(-3));
        let q = hp(2, &[(2, 0, 0, 1), (0, 0, 2, 1)]);
        let f = &l.pow(2) * &q;
        let on = ProjPoint::from_ints(1, 1, 1).unwrap();
        assert_eq!(f.vanishing_order(&on), Mult::Finite(2));
    }

    #[test]
    fn gcd_examples() {
        let c = hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)]);
        let d = hp(3, &[(3, 0, 0, 1), (0, 3, 0, 1), (0, 0, 3, 1)]);
        assert_eq!(HomPoly::gcd(&c, &d), HomPoly::one());
        let p = &HomPoly::x() * &c;
        let q = &HomPoly::x() * &d;
        assert_eq!(HomPoly::gcd(&p, &q), HomPoly::x());
        let p2 = p.scale(&int(-7));
        assert_eq!(HomPoly::gcd(&p2, &p2), p.normalized());
        let zc = &HomPoly::z() * &c;
        let zz = &HomPoly::z().pow(2) * &HomPoly::y();
        assert_eq!(HomPoly::gcd(&zc, &zz), HomPoly::z());
    }

    #[test]
    fn exact_division_and_serialization() {
        let a = hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)]);
        let b = HomPoly::linear(int(1), int(1), int(0));
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!(ab.div_exact(&HomPoly::z()), None);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"degree":2,"terms":[[1,0,1,"1"],[0,2,0,"-1"]]}"#);
        let back: HomPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn linear_substitution() {
        let c = hp(2, &[(1, 0, 1, 1), (0, 2, 0, -1)]);
        let id = [[int(1), int(0), int(0)], [int(0), int(1), int(0)], [int(0), int(0), int(1)]];
        assert_eq!(c.compose_linear(&id), c);
        let swap = [[int(0), int(1), int(0)], [int(1), int(0), int(0)], [int(0), int(0), int(1)]];
        assert_eq!(c.compose_linear(&swap), hp(2, &[(0, 1, 1, 1), (2, 0, 0, -1)]));
    }
}
