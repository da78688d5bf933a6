//! Seeded generators for the named twelve-point configurations and the six-line arrangement.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::realize::{conic_point, line_coeffs, line_poly, meet, place_lines, well_spread, Sampler, ATTEMPT_BUDGET};
use super::{collinear_sets, m_sequence, MSequence, PointSet};
use crate::error::{Error, Result};
use crate::point::ProjPoint;
use crate::poly::HomPoly;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// Twelve points with `m = (2, 5, 9)`.
    Generic12,
    /// Five four-point lines meeting pairwise in ten points, plus two free points.
    Figure1,
    /// Five pairwise-meeting four-point lines and a three-point line through a crossing.
    Figure2,
    /// Three concurrent four-point lines and two more.
    Figure3,
    /// Two points on three four-point lines each, joined by one of them.
    Figure4,
    /// Two points on three four-point lines each, not joined by any.
    Figure5,
    /// A four-point line and six points on an irreducible conic: `m = (4, 6, 10)`.
    Case2,
    /// Seven points on an irreducible conic and a three-point line: `m = (3, 7, 10)`.
    Case3,
    /// Seven points on a conic, four on a line, one free point and a generic extra point.
    Case4,
    /// As `case4`, with the extra point on the line through the free point and a line point.
    Case4Line,
    /// As `case4`, with the free point, a conic point and a line point collinear and the extra
    /// point on that line.
    Case4LineConic,
    /// Six points on an irreducible conic and a three-point line: `m = (3, 6, 9)`.
    LemmaCase2,
    /// A single four-point line among otherwise generic points: `m = (4, 6, 9)`.
    LemmaCase3,
    /// Seven points on an irreducible conic: `m = (2, 7, 9)`.
    Conic7,
    /// The fifteen crossings of six generic lines.
    Example6lines,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 15] = [
        InstanceKind::Generic12,
        InstanceKind::Figure1,
        InstanceKind::Figure2,
        InstanceKind::Figure3,
        InstanceKind::Figure4,
        InstanceKind::Figure5,
        InstanceKind::Case2,
        InstanceKind::Case3,
        InstanceKind::Case4,
        InstanceKind::Case4Line,
        InstanceKind::Case4LineConic,
        InstanceKind::LemmaCase2,
        InstanceKind::LemmaCase3,
        InstanceKind::Conic7,
        InstanceKind::Example6lines,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Generic12 => "generic12",
            InstanceKind::Figure1 => "figure1",
            InstanceKind::Figure2 => "figure2",
            InstanceKind::Figure3 => "figure3",
            InstanceKind::Figure4 => "figure4",
            InstanceKind::Figure5 => "figure5",
            InstanceKind::Case2 => "case2",
            InstanceKind::Case3 => "case3",
            InstanceKind::Case4 => "case4",
            InstanceKind::Case4Line => "case4-line",
            InstanceKind::Case4LineConic => "case4-line-conic",
            InstanceKind::LemmaCase2 => "lemma-case2",
            InstanceKind::LemmaCase3 => "lemma-case3",
            InstanceKind::Conic7 => "conic7",
            InstanceKind::Example6lines => "example6lines",
        }
    }

    pub fn expected_m(self) -> [usize; 3] {
        match self {
            InstanceKind::Generic12 => [2, 5, 9],
            InstanceKind::Figure1 => [4, 7, 9],
            InstanceKind::Figure2 | InstanceKind::Figure3 | InstanceKind::Figure4 | InstanceKind::Figure5 => [4, 7, 10],
            InstanceKind::Case2 => [4, 6, 10],
            InstanceKind::Case3 => [3, 7, 10],
            InstanceKind::Case4 | InstanceKind::Case4Line | InstanceKind::Case4LineConic => [4, 7, 11],
            InstanceKind::LemmaCase2 => [3, 6, 9],
            InstanceKind::LemmaCase3 => [4, 6, 9],
            InstanceKind::Conic7 => [2, 7, 9],
            InstanceKind::Example6lines => [5, 9, 12],
        }
    }

    fn blueprint(self) -> Blueprint {
        let lines = |v: &[&[usize]]| v.iter().map(|l| l.to_vec()).collect::<Vec<_>>();
        let five = [&[1, 2, 3, 4][..], &[1, 5, 6, 7], &[2, 5, 8, 9], &[3, 6, 8, 10], &[4, 7, 9, 10]];
        let pencil = [&[1, 2, 3, 4][..], &[1, 5, 6, 7], &[1, 8, 9, 10]];
        let (lines, conic) = match self {
            InstanceKind::Generic12 => (vec![], vec![]),
            InstanceKind::Figure1 => (lines(&five), vec![]),
            InstanceKind::Figure2 => {
                let mut l = lines(&five);
                l.push(vec![8, 11, 12]);
                (l, vec![])
            }
            InstanceKind::Figure3 => {
                let mut l = lines(&pencil);
                l.extend(lines(&[&[2, 5, 8, 11], &[3, 6, 9, 11]]));
                (l, vec![])
            }
            InstanceKind::Figure4 => {
                let mut l = lines(&pencil);
                l.extend(lines(&[&[2, 5, 8, 11], &[2, 6, 9, 12]]));
                (l, vec![])
            }
            InstanceKind::Figure5 => {
                let mut l = lines(&pencil);
                l.extend(lines(&[&[2, 5, 8, 11], &[3, 6, 9, 11], &[4, 7, 10, 11]]));
                (l, vec![])
            }
            InstanceKind::Case2 => (lines(&[&[1, 2, 3, 4]]), (7..=12).collect()),
            InstanceKind::Case3 => (lines(&[&[8, 9, 12]]), (1..=7).collect()),
            InstanceKind::Case4 | InstanceKind::Case4Line => (lines(&[&[8, 9, 10, 11]]), (1..=7).collect()),
            InstanceKind::Case4LineConic => (lines(&[&[8, 9, 10, 11], &[1, 11, 12]]), (1..=7).collect()),
            InstanceKind::LemmaCase2 => (lines(&[&[7, 8, 9]]), (1..=6).collect()),
            InstanceKind::LemmaCase3 => (lines(&[&[9, 10, 11, 12]]), vec![]),
            InstanceKind::Conic7 => (vec![], (1..=7).collect()),
            InstanceKind::Example6lines => unreachable!("arrangement instances have no blueprint"),
        };
        Blueprint { lines, conic }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown instance kind `{s}`")))
    }
}

/// Label sets (1-based) that must be exactly the collinear triples, and labels on a conic.
struct Blueprint {
    lines: Vec<Vec<usize>>,
    conic: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub seed: u64,
    pub attempts: usize,
    pub points: PointSet,
    /// The extra point `p` required by the eleven-on-a-cubic constructions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_point: Option<ProjPoint>,
    /// Lines of the arrangement (`example6lines`) or through each collinear set.
    pub lines: Vec<HomPoly>,
    pub collinear_sets: Vec<Vec<usize>>,
    pub m_sequence: MSequence,
}

impl Instance {
    /// Recomputes the invariants and compares them with the stored metadata and the kind.
    pub fn certify(&self) -> Result<MSequence> {
        let m = m_sequence(&self.points)?;
        if m.values() != self.kind.expected_m() {
            return Err(Error::Verification(format!(
                "{} instance has m = {:?}, expected {:?}",
                self.kind,
                m.values(),
                self.kind.expected_m()
            )));
        }
        if m.values() != self.m_sequence.values() || !self.m_sequence.witnesses_sound(&self.points) {
            return Err(Error::Verification("stored m-sequence does not match the points".into()));
        }
        if collinear_sets(&self.points) != self.collinear_sets {
            return Err(Error::Verification("stored collinear sets do not match the points".into()));
        }
        for l in &self.lines {
            if l.degree() != 1 || self.points.on_curve(l).len() < 3 {
                return Err(Error::Verification(format!("line {l} carries fewer than three points")));
            }
        }
        if let Some(p) = &self.extra_point {
            if self.points.points().contains(p) {
                return Err(Error::Verification("extra point belongs to the point set".into()));
            }
        }
        Ok(m)
    }
}

fn random_conic_map(sampler: &mut Sampler) -> [[Rational; 3]; 3] {
    loop {
        let m: [[Rational; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rational::int(sampler.rng().gen_range(-3..=3))));
        let det = crate::linalg::det(&m.iter().map(|r| r.to_vec()).collect());
        if !det.is_zero() {
            return m;
        }
    }
}

fn sorted_sets(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = v
        .iter()
        .map(|l| {
            let mut l = l.clone();
            l.sort_unstable();
            l
        })
        .collect();
    out.sort();
    out
}

type Attempt = (PointSet, Option<ProjPoint>, Vec<HomPoly>);

fn attempt(kind: InstanceKind, sampler: &mut Sampler) -> Result<Option<Attempt>> {
    if kind == InstanceKind::Example6lines {
        let ls: Vec<[Rational; 3]> = (0..6).map(|_| sampler.line()).collect();
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                let Some(p) = meet(&ls[i], &ls[j]) else { return Ok(None) };
                pts.push(p);
            }
        }
        if !well_spread(&pts) {
            return Ok(None);
        }
        return Ok(Some((PointSet::new(pts)?, None, ls.iter().map(line_poly).collect())));
    }
    let bp = kind.blueprint();
    // Lines through a conic point are completed after the conic is placed.
    let (through_conic, placed_first): (Vec<&Vec<usize>>, Vec<&Vec<usize>>) =
        bp.lines.iter().partition(|l| l.iter().any(|p| bp.conic.contains(p)));
    let zero_based: Vec<Vec<usize>> = placed_first.iter().map(|l| l.iter().map(|p| p - 1).collect()).collect();
    let Some((mut pts, _)) = place_lines(12, &zero_based, sampler) else { return Ok(None) };
    if !bp.conic.is_empty() {
        let m = random_conic_map(sampler);
        for &c in &bp.conic {
            let t = sampler.rational();
            let Some(q) = conic_point(&m, &t) else { return Ok(None) };
            pts[c - 1] = q;
        }
    }
    for l in through_conic {
        let (a, b) = (l[0] - 1, l[1] - 1);
        let line = line_coeffs(&pts[a], &pts[b]);
        for &c in &l[2..] {
            let Some(q) = sampler.point_on(&line) else { return Ok(None) };
            pts[c - 1] = q;
        }
    }
    if !well_spread(&pts) {
        return Ok(None);
    }
    let s = PointSet::new(pts)?;
    let extra = match kind {
        InstanceKind::Case4 => Some(sampler.point()),
        InstanceKind::Case4Line | InstanceKind::Case4LineConic => sampler.point_on(&line_coeffs(s.get(12), s.get(11))),
        _ => None,
    };
    if let Some(p) = &extra {
        if s.points().contains(p) || !well_spread(&[s.points(), std::slice::from_ref(p)].concat()) {
            return Ok(None);
        }
    }
    let lines = sorted_sets(&bp.lines).iter().map(|l| line_poly(&line_coeffs(s.get(l[0]), s.get(l[1])))).collect();
    Ok(Some((s, extra, lines)))
}

/// A seeded instance of `kind`, certified against the kind's m-sequence and collinear sets.
pub fn generate_instance(kind: InstanceKind, seed: u64) -> Result<Instance> {
    let mut sampler = Sampler::new(seed);
    let expected_sets = match kind {
        InstanceKind::Example6lines => None,
        _ => Some(sorted_sets(&kind.blueprint().lines)),
    };
    for attempts in 1..=ATTEMPT_BUDGET {
        let Some((points, extra_point, lines)) = attempt(kind, &mut sampler)? else { continue };
        let sets = collinear_sets(&points);
        let sets_ok = match &expected_sets {
            Some(e) => &sets == e,
            None => sets.len() == 6 && sets.iter().all(|l| l.len() == 5),
        };
        if !sets_ok {
            continue;
        }
        if let Some(p) = &extra_point {
            if extra_violates(kind, &points, p) {
                continue;
            }
        }
        let m = m_sequence(&points)?;
        if m.values() != kind.expected_m() {
            continue;
        }
        return Ok(Instance { kind, seed, attempts, points, extra_point, lines, collinear_sets: sets, m_sequence: m });
    }
    Err(Error::Verification(format!("no {kind} instance found within {ATTEMPT_BUDGET} attempts (seed {seed})")))
}

/// The extra point must avoid the eleven-point cubic, and its line to `x12` must meet the
/// point set exactly as the kind prescribes.
fn extra_violates(kind: InstanceKind, s: &PointSet, p: &ProjPoint) -> bool {
    let l = HomPoly::line_through(p, s.get(12));
    let on: Vec<usize> = s.on_curve(&l);
    let want: &[usize] = match kind {
        InstanceKind::Case4 => &[12],
        InstanceKind::Case4Line => &[11, 12],
        _ => &[1, 11, 12],
    };
    if on != want {
        return true;
    }
    let Ok(zero_on_cubic) = m_sequence(s).map(|m| m.witness(3).curve.vanishes_at(p)) else { return true };
    zero_on_cubic
}
