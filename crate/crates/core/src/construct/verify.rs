//! Independent check of a certificate.
//!
//! Shares nothing with the construction beyond polynomial arithmetic: vanishing orders come
//! from iterated partial derivatives, coprimality from resultant evaluations after a coordinate
//! change, and intersection numbers from tangent directions or the resultant oracle.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{PotentialCertificate, Route};
use crate::curves;
use crate::linalg;
use crate::point::ProjPoint;
use crate::poly::{HomPoly, UPoly};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    pub label: Option<usize>,
    pub point: ProjPoint,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
    pub ord_p: u32,
    pub ord_q: u32,
    /// Local intersection number, computed only on the intersection-number route; with `r = 1`
    /// anything other than a transversal crossing is reported as 2.
    pub intersection: Option<u32>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verified: bool,
    pub degree_ok: bool,
    pub coprime: bool,
    pub total_ok: bool,
    pub case_ok: bool,
    pub points: Vec<PointCheck>,
    pub failures: Vec<String>,
}

/// Vanishing order as the least `k` with a nonzero `k`-th partial derivative at `x`.
pub fn order_by_partials(p: &HomPoly, x: &ProjPoint) -> u32 {
    if p.is_zero() {
        return u32::MAX;
    }
    let mut layer: BTreeMap<[u32; 3], HomPoly> = BTreeMap::from([([0, 0, 0], p.clone())]);
    for k in 0..=p.degree() {
        if layer.values().any(|d| !d.vanishes_at(x)) {
            return k;
        }
        let mut next = BTreeMap::new();
        for (idx, d) in &layer {
            for var in 0..3 {
                let mut j = *idx;
                j[var] += 1;
                next.entry(j).or_insert_with(|| d.partial(var).expect("positive degree"));
            }
        }
        layer = next;
    }
    p.degree()
}

fn shear(t: i64, u: i64) -> [[Rational; 3]; 3] {
    let (o, z) = (Rational::one(), Rational::zero());
    [[o.clone(), rational::int(t), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), rational::int(u), o]]
}

/// Resultant of two univariate polynomials as a Sylvester determinant.
fn sylvester_resultant(f: &UPoly, g: &UPoly) -> Rational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else { return Rational::zero() };
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::with_capacity(size);
    for (p, deg, count) in [(f, m, n), (g, n, m)] {
        for shift in 0..count {
            let mut row = vec![Rational::zero(); size];
            for k in 0..=deg {
                row[shift + k] = p.coeff(deg - k);
            }
            rows.push(row);
        }
    }
    linalg::det(&rows)
}

/// No common factor. After moving `[0:1:0]` off both curves the resultant in `y` is a
/// polynomial in `x` of degree at most `deg p * deg q`; it vanishes identically exactly when
/// the curves share a component, so that many plus one evaluations decide.
pub fn coprime_by_resultant(p: &HomPoly, q: &HomPoly) -> bool {
    if p.is_zero() || q.is_zero() {
        return false;
    }
    if p.degree() == 0 || q.degree() == 0 {
        return true;
    }
    let pole = |t: i64, u: i64| ProjPoint::from_ints(t, 1, u).expect("nonzero");
    let (t, u) = (0..)
        .flat_map(|s: i64| (0..=s).map(move |t| (t, s - t)))
        .find(|&(t, u)| !p.vanishes_at(&pole(t, u)) && !q.vanishes_at(&pole(t, u)))
        .expect("finitely many zeros on a line");
    let m = shear(t, u);
    let (pp, qq) = (p.compose_linear(&m), q.compose_linear(&m));
    let dir = [Rational::zero(), Rational::one(), Rational::zero()];
    let bound = (p.degree() * q.degree()) as i64;
    (0..=bound).any(|x0| {
        let base = [rational::int(x0), Rational::zero(), Rational::one()];
        let f = curves::restrict_to_line(&pp, &base, &dir);
        let g = curves::restrict_to_line(&qq, &base, &dir);
        !sylvester_resultant(&f, &g).is_zero()
    })
}

/// Transversality at a common zero: both curves smooth there with distinct tangents.
fn transversal(p: &HomPoly, q: &HomPoly, x: &ProjPoint) -> bool {
    let (Ok(dp), Ok(dq)) = (p.partial_derivatives(), q.partial_derivatives()) else { return false };
    let gp: Vec<Rational> = dp.iter().map(|d| d.evaluate(x)).collect();
    let gq: Vec<Rational> = dq.iter().map(|d| d.evaluate(x)).collect();
    (0..3).any(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &gp[j] * &gq[k] != &gp[k] * &gq[j]
    })
}

/// Checks degrees, coprimality, per-point weights against vanishing orders, the total, and
/// the `(gamma, total)` pair advertised by the case tag.
pub fn verify_certificate(cert: &PotentialCertificate) -> VerificationReport {
    let mut failures = Vec::new();
    let d = cert.p.degree();
    let degree_ok =
        cert.r > 0 && d > 0 && cert.q.degree() == d && cert.gamma_u == rational::rat(d as i64, cert.r as i64);
    if !degree_ok {
        failures.push(format!(
            "degrees {} and {} with r = {} do not give gamma = {}",
            d,
            cert.q.degree(),
            cert.r,
            rational::format(&cert.gamma_u)
        ));
    }
    let coprime = coprime_by_resultant(&cert.p, &cert.q);
    if !coprime {
        failures.push("P and Q share a component, so the common zero set is not discrete".into());
    }
    let r = rational::int(cert.r as i64);
    let mut points = Vec::with_capacity(cert.points.len());
    for pt in &cert.points {
        let name = pt.label.map_or_else(|| "extra point".to_string(), |l| format!("x{l}"));
        let ord_p = order_by_partials(&cert.p, &pt.point);
        let ord_q = order_by_partials(&cert.q, &pt.point);
        let bound = rational::int(ord_p.min(ord_q) as i64) / &r;
        let mut pass = pt.weight > Rational::zero() && pt.weight <= bound;
        if !pass {
            failures.push(format!(
                "{name}: weight {} exceeds min(ord P, ord Q)/r = {}",
                rational::format(&pt.weight),
                rational::format(&bound)
            ));
        }
        let intersection = match cert.route {
            Route::IntersectionNumber if coprime => {
                let mu = if cert.r == 1 {
                    Some(if transversal(&cert.p, &cert.q, &pt.point) { 1 } else { 2 })
                } else {
                    curves::intersection_multiplicity_resultant(&cert.p, &cert.q, &pt.point).finite()
                };
                if mu != Some(cert.r * cert.r) || ord_p.min(ord_q) < cert.r {
                    pass = false;
                    failures.push(format!("{name}: intersection number {mu:?} differs from r^2 = {}", cert.r * cert.r));
                }
                mu
            }
            _ => None,
        };
        points.push(PointCheck {
            label: pt.label,
            point: pt.point.clone(),
            weight: pt.weight.clone(),
            ord_p,
            ord_q,
            intersection,
            pass,
        });
    }
    let sum = cert.weight_sum();
    let total_ok = sum == cert.total_weight;
    if !total_ok {
        failures.push(format!(
            "weights sum to {} but the total is {}",
            rational::format(&sum),
            rational::format(&cert.total_weight)
        ));
    }
    let case_ok = cert.case_tag.admits(&cert.gamma_u, &cert.total_weight);
    if !case_ok {
        failures.push(format!(
            "(gamma, total) = ({}, {}) is not advertised by case {:?}",
            rational::format(&cert.gamma_u),
            rational::format(&cert.total_weight),
            cert.case_tag
        ));
    }
    VerificationReport { verified: failures.is_empty(), degree_ok, coprime, total_ok, case_ok, points, failures }
}
