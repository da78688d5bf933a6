//! Sparse bivariate polynomials over the rationals, used for affine charts and elimination.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::upoly::UPoly;
use crate::rational::{self, Rational};

/// Polynomial in `x`, `y`; keys are `(deg_x, deg_y)` and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((i, j), c)| format!("({c})x^{i}y^{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rational::int((n - i) as i64) / rational::int((i + 1) as i64);
    }
    acc
}

fn rpow(a: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, Rational::one())
    }

    pub fn from_terms(ts: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in ts {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Lowest total degree of a term: the multiplicity at the origin.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn mul_monomial(&self, i: u32, j: u32) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(a, b), v)| ((a + i, b + j), v.clone())).collect() }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms.iter().map(|(&(i, j), c)| c * rpow(x, i) * rpow(y, j)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitute `x = a`, leaving a polynomial in `y`.
    pub fn eval_x(&self, a: &Rational) -> UPoly {
        let n = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut c = vec![Rational::zero(); n];
        for (&(i, j), v) in &self.terms {
            c[j as usize] += v * rpow(a, i);
        }
        UPoly::new(c)
    }

    /// Substitute `y = b`, leaving a polynomial in `x`.
    pub fn eval_y(&self, b: &Rational) -> UPoly {
        let n = self.terms.keys().map(|&(i, _)| i as usize + 1).max().unwrap_or(0);
        let mut c = vec![Rational::zero(); n];
        for (&(i, j), v) in &self.terms {
            c[i as usize] += v * rpow(b, j);
        }
        UPoly::new(c)
    }

    /// Coefficients of powers of `y`, each a polynomial in `x`.
    pub fn y_coeffs(&self) -> Vec<UPoly> {
        let Some(dy) = self.deg_y() else { return Vec::new() };
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); dy as usize + 1];
        for (&(i, j), v) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Rational::zero());
            }
            row[i as usize] = v.clone();
        }
        rows.into_iter().map(UPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UPoly]) -> Self {
        let mut p = BiPoly::zero();
        for (j, c) in cs.iter().enumerate() {
            for (i, v) in c.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, v.clone());
            }
        }
        p
    }

    pub fn from_x_poly(u: &UPoly) -> Self {
        BiPoly::from_y_coeffs(std::slice::from_ref(u))
    }

    /// `f(x + a, y + b)`
    pub fn shift(&self, a: &Rational, b: &Rational) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for k in 0..=i {
                let cx = c * binomial(i, k) * rpow(a, i - k);
                if cx.is_zero() {
                    continue;
                }
                for l in 0..=j {
                    out.add_term(k, l, &cx * binomial(j, l) * rpow(b, j - l));
                }
            }
        }
        out
    }

    /// `f(x + t*y, y)`
    pub fn shear(&self, t: &Rational) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for k in 0..=i {
                out.add_term(k, j + i - k, c * binomial(i, k) * rpow(t, i - k));
            }
        }
        out
    }

    /// The homogeneous part of top total degree, evaluated at `(x, y) = (t, 1)`.
    pub fn top_form_at(&self, t: &Rational) -> Rational {
        let Some(d) = self.total_degree() else { return Rational::zero() };
        self.terms
            .iter()
            .filter(|(&(i, j), _)| i + j == d)
            .map(|(&(i, _), c)| c * rpow(t, i))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Leading term under graded lex with `x > y`.
    pub fn leading(&self) -> Option<((u32, u32), Rational)> {
        self.terms.iter().max_by_key(|(&(i, j), _)| (i + j, i)).map(|(k, v)| (*k, v.clone()))
    }

    /// Scaled so the leading coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let ((di, dj), dc) = d.leading().expect("division by zero polynomial");
        let inv = dc.recip();
        let mut r = self.clone();
        let mut q = BiPoly::zero();
        while let Some(((ri, rj), rc)) = r.leading() {
            if ri < di || rj < dj {
                return None;
            }
            let t = BiPoly::monomial(ri - di, rj - dj, &rc * &inv);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    fn content_primitive(&self) -> (UPoly, Vec<UPoly>) {
        let ys = self.y_coeffs();
        let mut c = UPoly::zero();
        for u in &ys {
            c = UPoly::gcd(&c, u);
            if c.degree() == Some(0) {
                break;
            }
        }
        let pp = ys.iter().map(|u| u.div_exact(&c).expect("content divides")).collect();
        (c, pp)
    }

    /// Greatest common divisor, normalized to leading coefficient one (zero iff both are zero).
    pub fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        let (ca, pa) = a.content_primitive();
        let (cb, pb) = b.content_primitive();
        let c = UPoly::gcd(&ca, &cb);
        let (mut u, mut v) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
        loop {
            if v.is_empty() {
                break;
            }
            if v.len() == 1 {
                u = vec![UPoly::one()];
                break;
            }
            let r = pseudo_rem(&u, &v);
            u = v;
            v = if r.is_empty() { Vec::new() } else { BiPoly::from_y_coeffs(&r).content_primitive().1 };
        }
        let g = &BiPoly::from_y_coeffs(&u) * &BiPoly::from_x_poly(&c);
        g.normalized()
    }

    /// Resultant with respect to `y`, a polynomial in `x`.
    pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        let ac = a.y_coeffs();
        let bc = b.y_coeffs();
        let m = ac.len() - 1;
        let n = bc.len() - 1;
        if m == 0 && n == 0 {
            return UPoly::one();
        }
        if m == 0 {
            return ac[0].pow(n as u32);
        }
        if n == 0 {
            return bc[0].pow(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![UPoly::zero(); size]; size];
        for i in 0..n {
            for (k, c) in ac.iter().rev().enumerate() {
                mat[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in bc.iter().rev().enumerate() {
                mat[n + i][i + k] = c.clone();
            }
        }
        det_upoly(mat)
    }
}

/// Pseudo-remainder of `u` by `v` as polynomials in `y` (coefficient lists, lowest first).
fn pseudo_rem(u: &[UPoly], v: &[UPoly]) -> Vec<UPoly> {
    let dv = v.len() - 1;
    let lv = v[dv].clone();
    let mut r: Vec<UPoly> = u.to_vec();
    while r.len() > dv {
        let top = r.len() - 1;
        let lr = r[top].clone();
        for c in r.iter_mut() {
            *c = &*c * &lv;
        }
        let shift = top - dv;
        for (k, vc) in v.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&lr * vc);
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Fraction-free (Bareiss) determinant over `Q[x]`.
pub(crate) fn det_upoly(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut negate = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}
