//! Randomized exact realization of incidence patterns by rational points.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::incidence::IncidenceStructure;
use super::{collinear_sets, m_sequence, MSequence, PointSet};
use crate::error::Result;
use crate::point::ProjPoint;
use crate::poly::HomPoly;
use crate::rational::{self, Rational};

/// Attempts made before giving up on a pattern.
pub const ATTEMPT_BUDGET: usize = 300;

/// Smallest Euclidean distance allowed between two realized points.
pub const MIN_SEPARATION: f64 = 0.02;

/// Seeded source of small-height rationals and random incidences.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational `a/b` with `1 <= b <= 9` and `|a/b| <= 4`.
    pub fn rational(&mut self) -> Rational {
        let b: i64 = self.rng.gen_range(1..=9);
        let a: i64 = self.rng.gen_range(-4 * b..=4 * b);
        rational::rat(a, b)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let q = self.rational();
            if !q.is_zero() {
                return q;
            }
        }
    }

    pub fn point(&mut self) -> ProjPoint {
        ProjPoint::affine(self.rational(), self.rational())
    }

    /// Coefficients of a line through `p` with a random direction.
    pub fn line_through(&mut self, p: &ProjPoint) -> [Rational; 3] {
        let (x, y) = p.affine_coords().expect("affine point");
        loop {
            let (a, b) = (self.rational(), self.rational());
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let q = ProjPoint::affine(&x + a, &y + b);
            return line_coeffs(p, &q);
        }
    }

    pub fn line(&mut self) -> [Rational; 3] {
        let p = self.point();
        self.line_through(&p)
    }

    /// A random affine point on the line `a X + b Y + c Z = 0`.
    pub fn point_on(&mut self, l: &[Rational; 3]) -> Option<ProjPoint> {
        let [a, b, c] = l;
        if !b.is_zero() {
            let x = self.rational();
            let y = -(a * &x + c) / b;
            Some(ProjPoint::affine(x, y))
        } else if !a.is_zero() {
            Some(ProjPoint::affine(-c / a, self.rational()))
        } else {
            None
        }
    }
}

pub fn line_coeffs(p: &ProjPoint, q: &ProjPoint) -> [Rational; 3] {
    cross(p.coords(), q.coords())
}

pub fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

/// Affine intersection point of two lines, if they meet in the chart `Z = 1`.
pub fn meet(l: &[Rational; 3], m: &[Rational; 3]) -> Option<ProjPoint> {
    let c = cross(l, m);
    if c[2].is_zero() {
        return None;
    }
    ProjPoint::from_array(c).ok()
}

pub fn on_line(l: &[Rational; 3], p: &ProjPoint) -> bool {
    let c = p.coords();
    (&l[0] * &c[0] + &l[1] * &c[1] + &l[2] * &c[2]).is_zero()
}

pub fn line_poly(l: &[Rational; 3]) -> HomPoly {
    HomPoly::linear(l[0].clone(), l[1].clone(), l[2].clone()).normalized()
}

/// One randomized placement of `n` points such that each listed label set (0-based) is
/// collinear; lines are placed in a random order and points fixed as soon as two of their
/// lines are known.
pub fn place_lines(
    n: usize,
    lines: &[Vec<usize>],
    sampler: &mut Sampler,
) -> Option<(Vec<ProjPoint>, Vec<[Rational; 3]>)> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.shuffle(sampler.rng());
    let mut coords: Vec<Option<ProjPoint>> = vec![None; n];
    let mut placed: Vec<Option<[Rational; 3]>> = vec![None; lines.len()];
    for &li in &order {
        let known: Vec<ProjPoint> = lines[li].iter().filter_map(|&p| coords[p].clone()).collect();
        let line = match known.len() {
            0 => sampler.line(),
            1 => sampler.line_through(&known[0]),
            _ => {
                let l = line_coeffs(&known[0], &known[1]);
                if !known[2..].iter().all(|p| on_line(&l, p)) {
                    return None;
                }
                l
            }
        };
        for &p in &lines[li] {
            if coords[p].is_some() {
                continue;
            }
            let other = (0..lines.len()).find(|&lj| lj != li && placed[lj].is_some() && lines[lj].contains(&p));
            if let Some(lj) = other {
                coords[p] = Some(meet(&line, placed[lj].as_ref().unwrap())?);
            }
        }
        placed[li] = Some(line);
    }
    let placed: Vec<[Rational; 3]> = placed.into_iter().map(Option::unwrap).collect();
    let mut points = Vec::with_capacity(n);
    for (p, c) in coords.into_iter().enumerate() {
        let q = match c {
            Some(q) => q,
            None => match lines.iter().position(|l| l.contains(&p)) {
                Some(li) => sampler.point_on(&placed[li])?,
                None => sampler.point(),
            },
        };
        points.push(q);
    }
    Some((points, placed))
}

/// Pairwise distinct, affine, and separated by at least [`MIN_SEPARATION`].
pub fn well_spread(points: &[ProjPoint]) -> bool {
    let aff: Option<Vec<(f64, f64)>> =
        points.iter().map(|p| p.affine_coords().map(|(x, y)| (rational::to_f64(&x), rational::to_f64(&y)))).collect();
    let Some(aff) = aff else { return false };
    aff.iter()
        .enumerate()
        .all(|(i, a)| aff[..i].iter().all(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() >= MIN_SEPARATION))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub structure: IncidenceStructure,
    pub seed: u64,
    pub attempts: usize,
    pub points: PointSet,
    /// Equation of each structure line, in structure order.
    pub lines: Vec<HomPoly>,
    pub m_sequence: MSequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RealizationOutcome {
    Realized(Realization),
    /// The attempt budget ran out; this says nothing about realizability.
    NotRealized {
        attempts: usize,
        reason: String,
    },
}

/// Rational points realizing exactly the lines of `structure` as their collinear triples.
pub fn realize_structure(structure: &IncidenceStructure, seed: u64) -> Result<RealizationOutcome> {
    structure.validate()?;
    let lines: Vec<Vec<usize>> = structure.lines.iter().map(|l| l.iter().map(|p| p - 1).collect()).collect();
    let mut expected: Vec<Vec<usize>> = structure
        .lines
        .iter()
        .map(|l| {
            let mut v = l.to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    expected.sort();
    let mut sampler = Sampler::new(seed);
    let mut last = String::from("no attempt made");
    for attempt in 1..=ATTEMPT_BUDGET {
        let Some((pts, placed)) = place_lines(structure.n_points, &lines, &mut sampler) else {
            last = "forced collinearity or intersection at infinity".into();
            continue;
        };
        if !well_spread(&pts) {
            last = "points coincide or crowd together".into();
            continue;
        }
        let s = PointSet::new(pts)?;
        if collinear_sets(&s) != expected {
            last = "unintended collinear triple".into();
            continue;
        }
        let m = m_sequence(&s)?;
        return Ok(RealizationOutcome::Realized(Realization {
            structure: structure.clone(),
            seed,
            attempts: attempt,
            lines: placed.iter().map(line_poly).collect(),
            points: s,
            m_sequence: m,
        }));
    }
    Ok(RealizationOutcome::NotRealized { attempts: ATTEMPT_BUDGET, reason: last })
}

/// Image of `(t^2, t, 1)` under `m`: a rational point on a conic.
pub fn conic_point(m: &[[Rational; 3]; 3], t: &Rational) -> Option<ProjPoint> {
    let v = [t * t, t.clone(), Rational::one()];
    let w: Vec<Rational> =
        m.iter().map(|row| row.iter().zip(&v).fold(Rational::zero(), |s, (a, b)| s + a * b)).collect();
    if w[2].is_zero() {
        return None;
    }
    ProjPoint::new(w[0].clone(), w[1].clone(), w[2].clone()).ok()
}
