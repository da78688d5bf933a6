//! Rational roots of univariate polynomials by p-adic lifting.
//!
//! The squarefree part is turned into a monic integer polynomial, whose rational roots are
//! integers. Simple roots modulo a prime that keeps the polynomial squarefree are Newton-lifted
//! past twice the Cauchy bound and then checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::UPoly;
use crate::rational::Rational;

pub fn rational_roots(p: &UPoly) -> Vec<Rational> {
    match p.degree() {
        None | Some(0) => return Vec::new(),
        _ => {}
    }
    let sf = p.squarefree_part();
    let mut ints = sf.primitive_integer();
    let mut roots = Vec::new();
    if ints[0].is_zero() {
        roots.push(Rational::zero());
        ints.remove(0);
    }
    let n = ints.len() - 1;
    if n == 0 {
        return roots;
    }
    if n == 1 {
        roots.push(Rational::new(-ints[0].clone(), ints[1].clone()));
        return roots;
    }
    let lead = ints[n].clone();
    // g(y) = lead^(n-1) f(y / lead) is monic with integer coefficients.
    let mut g = Vec::with_capacity(n + 1);
    let mut pw = BigInt::one();
    for i in (0..n).rev() {
        g.push(&ints[i] * &pw);
        pw *= &lead;
    }
    g.reverse();
    g.push(BigInt::one());
    for y in integer_roots_monic(&g) {
        let x = Rational::new(y, lead.clone());
        if sf.eval(&x).is_zero() {
            roots.push(x);
        }
    }
    roots
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        if c != 0 {
            for (j, bc) in b.iter().enumerate() {
                let idx = top - db + j;
                r[idx] = (r[idx] + p - c * bc % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut r);
    r
}

fn squarefree_mod(g: &[u64], p: u64) -> bool {
    let d: Vec<u64> = g.iter().enumerate().skip(1).map(|(i, c)| c * (i as u64 % p) % p).collect();
    let (mut a, mut b) = (g.to_vec(), d);
    trim(&mut a);
    trim(&mut b);
    if b.is_empty() {
        return false;
    }
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

fn eval_big(g: &[BigInt], y: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
}

fn eval_mod_big(g: &[BigInt], y: &BigInt, m: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| (acc * y + c).mod_floor(m))
}

/// Integer roots of a monic squarefree integer polynomial (coefficients lowest first).
fn integer_roots_monic(g: &[BigInt]) -> Vec<BigInt> {
    let bound = g.iter().map(|c| c.abs()).max().unwrap() + BigInt::one();
    let target = &bound * 2 + BigInt::one();
    let dg: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut p = 1009u64;
    let gp = loop {
        if is_prime(p) {
            let gp: Vec<u64> = g.iter().map(|c| reduce(c, p)).collect();
            if squarefree_mod(&gp, p) {
                break gp;
            }
        }
        p += 2;
    };
    let mut out = Vec::new();
    for r0 in 0..p {
        let v = gp.iter().rev().fold(0u64, |acc, c| (acc * r0 + c) % p);
        if v != 0 {
            continue;
        }
        let mut m = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while m < target {
            let m2 = &m * &m;
            let fv = eval_mod_big(g, &r, &m2);
            let dv = eval_mod_big(&dg, &r, &m2);
            let inv = dv.extended_gcd(&m2).x.mod_floor(&m2);
            r = (&r - fv * inv).mod_floor(&m2);
            m = m2;
        }
        let half = &m / 2;
        let y = if r > half { r - &m } else { r };
        if y.abs() <= bound && eval_big(g, &y).is_zero() {
            out.push(y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn finds_large_rational_roots() {
        // (97x - 1234567)(3x + 2)(x^2 - 2)
        let a = UPoly::new(vec![rat(-1234567, 1), rat(97, 1)]);
        let b = UPoly::new(vec![rat(2, 1), rat(3, 1)]);
        let c = UPoly::new(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]);
        let p = &(&a * &b) * &c;
        let mut r = rational_roots(&p);
        r.sort();
        assert_eq!(r, vec![rat(-2, 3), rat(1234567, 97)]);
    }

    #[test]
    fn no_roots_for_irreducible() {
        let p = UPoly::new(vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        // x^3 + 1 has root -1 only
        assert_eq!(rational_roots(&p), vec![rat(-1, 1)]);
        let q = UPoly::new(vec![rat(2, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(rational_roots(&q).is_empty());
    }
}
