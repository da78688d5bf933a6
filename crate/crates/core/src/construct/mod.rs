//! Construction of pole certificates `u = (1/2r) log(|P|^2 + |Q|^2)` for twelve-point
//! configurations, following the case analysis on `(m_1, m_2, m_3)`, and their independent
//! verification.

mod cascade;
pub mod lemma1;
pub mod lemma2;
pub mod theorem;
pub mod verify;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::config::{curve_through, PointSet};
use crate::curves;
use crate::error::{Error, Result};
use crate::linalg;
use crate::linsys::{self, VanishingCondition};
use crate::point::ProjPoint;
use crate::poly::HomPoly;
use crate::rational::{self, Rational};

pub use lemma1::lemma1_construct;
pub use lemma2::lemma2_construct;
pub use theorem::theorem_case_construct;
pub use verify::{verify_certificate, VerificationReport};

/// Which case analysis produced a certificate; fixes the advertised `(gamma, total)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// Two irreducible cubics through nine points each (`m_2 = 5`).
    NineOnCubicConicFive,
    /// `m_2 = 6`, no four collinear points.
    NineOnCubicConicSix,
    /// `m_2 = 6` with a four-point line.
    NineOnCubicFourOnLine,
    /// `m_2 = 7`.
    NineOnCubicConicSeven,
    /// `m_3 = 10`, `m_2 = 6`.
    TenOnCubicConicSix,
    /// `m_3 = 10`, `m_2 = 7`.
    TenOnCubicConicSeven,
    /// `m_3 = 11`, with an extra point off the cubic.
    ElevenOnCubic,
    /// Built by hand, outside the case analysis.
    Custom,
}

impl CaseTag {
    /// Whether `(gamma, total)` is one of the pairs this case may produce.
    pub fn admits(self, gamma: &Rational, total: &Rational) -> bool {
        let three = rational::int(3);
        match self {
            CaseTag::ElevenOnCubic => {
                *gamma == rational::int(4) && (*total == rational::int(13) || *total == rational::int(12))
            }
            CaseTag::Custom => true,
            _ => [3, 4, 5, 6].iter().any(|&g| *gamma == rational::int(g)) && *total == gamma * &three,
        }
    }
}

/// How the pole weights are justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Every listed point has `ord P, ord Q >= r` and local intersection number `r^2`.
    IntersectionNumber,
    /// Weights are `min(ord P, ord Q) / r` lower bounds; intersection numbers are not constrained.
    MixedWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolePoint {
    /// Label in the input point set; `None` for an extra point.
    pub label: Option<usize>,
    pub point: ProjPoint,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialCertificate {
    pub p: HomPoly,
    pub q: HomPoly,
    pub r: u32,
    pub points: Vec<PolePoint>,
    #[serde(with = "rational::serde_str")]
    pub gamma_u: Rational,
    #[serde(with = "rational::serde_str")]
    pub total_weight: Rational,
    pub case_tag: CaseTag,
    pub route: Route,
    pub verified: bool,
}

impl PotentialCertificate {
    pub fn degree(&self) -> u32 {
        self.p.degree()
    }

    pub fn weight_sum(&self) -> Rational {
        self.points.iter().fold(Rational::zero(), |s, p| s + &p.weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Certificate(PotentialCertificate),
    /// The instance contradicts an assumption of the case analysis.
    Contradiction {
        reason: String,
    },
    Unsupported {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    /// Branch identifiers in the order taken.
    pub trace: Vec<String>,
    /// `relabeling[i]` is the input label playing the role of label `i + 1`.
    pub relabeling: Vec<usize>,
    pub outcome: Outcome,
}

impl ConstructionReport {
    pub fn certificate(&self) -> Option<&PotentialCertificate> {
        match &self.outcome {
            Outcome::Certificate(c) => Some(c),
            _ => None,
        }
    }
}

/// A point set under a relabeling: current label `i + 1` is input label `orig[i]`.
#[derive(Clone, Debug)]
pub(crate) struct Labeled {
    pub s: PointSet,
    pub orig: Vec<usize>,
}

impl Labeled {
    pub fn identity(s: &PointSet) -> Labeled {
        Labeled { s: s.clone(), orig: (1..=s.len()).collect() }
    }

    /// New label `i + 1` is current label `order[i]`.
    pub fn reorder(&self, order: &[usize]) -> Result<Labeled> {
        Ok(Labeled { s: self.s.reordered(order)?, orig: order.iter().map(|&l| self.orig[l - 1]).collect() })
    }

    /// Moves `first` (in order) to the front, keeping the rest ascending.
    pub fn front(&self, first: &[usize]) -> Result<Labeled> {
        let mut order = first.to_vec();
        order.extend((1..=self.s.len()).filter(|l| !first.contains(l)));
        self.reorder(&order)
    }

    pub fn pt(&self, l: usize) -> &ProjPoint {
        self.s.get(l)
    }

    pub fn pts(&self, ls: impl IntoIterator<Item = usize>) -> Vec<ProjPoint> {
        ls.into_iter().map(|l| self.pt(l).clone()).collect()
    }

    pub fn all(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.s.len()
    }
}

/// Branch trace accumulated by a pipeline.
#[derive(Clone, Debug, Default)]
pub(crate) struct Trace(pub Vec<String>);

impl Trace {
    pub fn push(&mut self, id: impl Into<String>) {
        let id = id.into();
        log::debug!("branch {id}");
        self.0.push(id);
    }
}

/// A point with its required vanishing order, and an extra-point marker.
#[derive(Clone, Debug)]
pub(crate) struct Target {
    pub label: Option<usize>,
    pub point: ProjPoint,
    pub order: u32,
}

pub(crate) fn targets(ls: &Labeled, orders: &[(usize, u32)]) -> Vec<Target> {
    orders.iter().map(|&(l, order)| Target { label: Some(ls.orig[l - 1]), point: ls.pt(l).clone(), order }).collect()
}

pub(crate) fn conditions(ts: &[Target]) -> Vec<VanishingCondition> {
    ts.iter().filter(|t| t.order > 0).map(|t| VanishingCondition::new(t.point.clone(), t.order)).collect()
}

/// Orders `2` at `doubles` and `1` at the other labels of `all`.
pub(crate) fn orders(all: impl IntoIterator<Item = usize>, doubles: &[usize]) -> Vec<(usize, u32)> {
    all.into_iter().map(|l| (l, if doubles.contains(&l) { 2 } else { 1 })).collect()
}

/// The canonical cubic (or other degree) through the given labels.
pub(crate) fn curve(ls: &Labeled, degree: u32, labels: impl IntoIterator<Item = usize>) -> Result<HomPoly> {
    let pts = ls.pts(labels);
    curve_through(degree, &pts)?
        .ok_or_else(|| Error::Invalid(format!("no curve of degree {degree} through {} points", pts.len())))
}

/// Irreducibility of a curve of degree at most 3 through some of `points`.
pub(crate) fn is_irreducible_curve(c: &HomPoly, points: &[ProjPoint]) -> Result<bool> {
    match c.degree() {
        1 => Ok(true),
        2 => Ok(curves::conic_rank(c)? == 3),
        3 => curves::cubic_is_irreducible_through(c, points),
        d => Err(Error::Unsupported(format!("irreducibility test for degree {d}"))),
    }
}

/// Elements of `basis` extending `fixed` to a linearly independent family of `count` more.
pub(crate) fn extend_independent(fixed: &[HomPoly], basis: &[HomPoly], count: usize) -> Vec<HomPoly> {
    let mut rows: Vec<Vec<Rational>> = fixed.iter().map(|p| p.coeff_vector()).collect();
    let mut out = Vec::new();
    for b in basis {
        if out.len() == count {
            break;
        }
        rows.push(b.coeff_vector());
        if linalg::rank(&rows) == rows.len() {
            out.push(b.clone());
        } else {
            rows.pop();
        }
    }
    out
}

/// Factors over `Q` of a form of degree at most 3: rational lines, then the remaining factor.
pub(crate) fn factor_small(c: &HomPoly) -> Vec<HomPoly> {
    if c.degree() == 0 {
        return Vec::new();
    }
    let (mut out, rest) = curves::rational_line_factors(c);
    if rest.degree() > 0 {
        out.push(rest.normalized());
    }
    out
}

/// Builds a certificate with `r = 1` from a pair already known to be coprime, claiming each
/// target order that `P` and `Q` both meet, then runs the independent verifier.
pub(crate) fn certify(p: HomPoly, q: HomPoly, ts: &[Target], case_tag: CaseTag) -> Result<PotentialCertificate> {
    let p = p.normalized();
    let q = q.normalized();
    let mut points = Vec::new();
    let mut all_transversal = true;
    for t in ts.iter().filter(|t| t.order > 0) {
        let found = p.ord(&t.point).min(q.ord(&t.point));
        if found < t.order {
            return Err(Error::Verification(format!(
                "point {} needs order {} but min(ord P, ord Q) = {found}",
                t.label.map_or("p".to_string(), |l| format!("x{l}")),
                t.order
            )));
        }
        if !curves::meets_transversally(&p, &q, &t.point) {
            all_transversal = false;
        }
        points.push(PolePoint { label: t.label, point: t.point.clone(), weight: rational::int(t.order as i64) });
    }
    let total_weight = points.iter().fold(Rational::zero(), |s, x| s + &x.weight);
    let route = if all_transversal && points.iter().all(|x| x.weight == rational::int(1)) {
        Route::IntersectionNumber
    } else {
        Route::MixedWeight
    };
    let mut cert = PotentialCertificate {
        gamma_u: rational::int(p.degree() as i64),
        p,
        q,
        r: 1,
        points,
        total_weight,
        case_tag,
        route,
        verified: false,
    };
    let report = verify_certificate(&cert);
    if !report.verified {
        return Err(Error::Verification(report.failures.join("; ")));
    }
    cert.verified = true;
    Ok(cert)
}

/// A member of the system given by `ts` not proportional to `p1`, or `None`.
pub(crate) fn second_member(degree: u32, ts: &[Target], p1: &HomPoly) -> Result<Option<HomPoly>> {
    let sys = linsys::build_system(degree, &conditions(ts))?;
    Ok(extend_independent(std::slice::from_ref(p1), &sys.kernel_basis, 1).pop())
}

/// Coprimality of `prod(factors)` with `q`, for factors irreducible over `Q`.
pub(crate) fn coprime_to_factors(factors: &[HomPoly], q: &HomPoly) -> bool {
    factors.iter().all(|f| !f.divides(q))
}

pub(crate) fn check_twelve(s: &PointSet) -> Result<()> {
    if s.len() != 12 {
        return Err(Error::Precondition(format!("the constructions need exactly 12 points, got {}", s.len())));
    }
    Ok(())
}
