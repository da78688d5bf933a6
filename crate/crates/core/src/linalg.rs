//! Exact Gaussian elimination over the rationals, with a modular rank shortcut.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Row-reduced echelon form in place; returns pivot columns.
/// The pivot in each column is the candidate entry of smallest bit size.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| rational::bit_size(&m[i][c]));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : M v = 0}` in reduced echelon form: each vector has a 1 at its first
/// nonzero position and zeros there in every other vector.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Matrix = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][f].clone();
        }
        basis.push(v);
    }
    rref(&mut basis);
    basis
}

/// Canonical row space basis (reduced echelon form without zero rows).
pub fn row_space(m: &Matrix) -> Matrix {
    let mut a = m.clone();
    let n = rref(&mut a).len();
    a.truncate(n);
    a
}

/// The Mersenne prime 2^61 - 1.
pub const MOD_P: u64 = (1u64 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn big_mod(n: &BigInt) -> u64 {
    let m = n.mod_floor(&BigInt::from(MOD_P));
    m.to_u64().unwrap()
}

/// Image of `q` in the prime field, or `None` if the denominator vanishes there.
pub fn reduce_mod(q: &Rational) -> Option<u64> {
    let d = big_mod(q.denom());
    if d == 0 {
        return None;
    }
    let n = big_mod(q.numer());
    Some(mulmod(n, powmod(d, MOD_P - 2)))
}

/// Rank over the prime field; never exceeds the rational rank.
pub fn rank_mod(m: &[Vec<u64>]) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = powmod(a[r][c], MOD_P - 2);
        for v in a[r].iter_mut().skip(c) {
            *v = mulmod(*v, inv);
        }
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (v, &pv) in row.iter_mut().zip(&pr).skip(c) {
                *v = (*v + MOD_P - mulmod(f, pv)) % MOD_P;
            }
        }
        r += 1;
    }
    r
}

pub fn matrix_mod(m: &Matrix) -> Option<Vec<Vec<u64>>> {
    m.iter().map(|row| row.iter().map(reduce_mod).collect()).collect()
}

/// Exact rank, short-circuited when the modular rank is already maximal.
pub fn rank_fast(m: &Matrix) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if let Some(mm) = matrix_mod(m) {
        let rm = rank_mod(&mm);
        if rm == rows.min(cols) {
            return rm;
        }
    }
    rank(m)
}

/// Determinant of a square matrix (for small sizes; uses elimination).
pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &f * y;
            }
        }
    }
    d
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}
