//! Point configurations: labeled point sets, the invariants `m_1, m_2, m_3`, four-point line
//! incidence structures, and seeded realizations of named configurations.

pub mod incidence;
pub mod instances;
pub mod realize;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::linsys::{self, VanishingCondition};
use crate::par;
use crate::point::{collinearity_det, ProjPoint};
use crate::poly::hompoly::space_dim;
use crate::poly::HomPoly;

pub use incidence::{enumerate_4lines, EnumerationReport, IncidenceStructure, Shape};
pub use instances::{generate_instance, Instance, InstanceKind};
pub use realize::{realize_structure, Realization, RealizationOutcome};

/// Largest point set accepted by [`m_sequence`].
pub const MAX_POINTS: usize = 16;

/// Distinct points labeled `1..=n` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<ProjPoint>,
}

impl PointSet {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::Invalid(format!("points {} and {} coincide at {p}", j + 1, i + 1)));
            }
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The point with 1-based `label`.
    pub fn get(&self, label: usize) -> &ProjPoint {
        &self.points[label - 1]
    }

    pub fn select(&self, labels: &[usize]) -> Vec<ProjPoint> {
        labels.iter().map(|&l| self.get(l).clone()).collect()
    }

    /// Relabels so that new label `i + 1` is old label `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<PointSet> {
        let mut seen = vec![false; self.len()];
        for &l in order {
            if l == 0 || l > self.len() || std::mem::replace(&mut seen[l - 1], true) {
                return Err(Error::Invalid(format!("{order:?} is not a permutation of 1..={}", self.len())));
            }
        }
        if order.len() != self.len() {
            return Err(Error::Invalid(format!("{order:?} is not a permutation of 1..={}", self.len())));
        }
        Ok(PointSet { points: self.select(order) })
    }

    /// Labels of the points lying on `curve`.
    pub fn on_curve(&self, curve: &HomPoly) -> Vec<usize> {
        (1..=self.len()).filter(|&l| curve.vanishes_at(self.get(l))).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct LabeledPoint {
    label: usize,
    coords: ProjPoint,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    points: Vec<LabeledPoint>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let points =
            self.points.iter().enumerate().map(|(i, p)| LabeledPoint { label: i + 1, coords: p.clone() }).collect();
        PointSetRepr { points }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut repr = PointSetRepr::deserialize(d)?;
        repr.points.sort_by_key(|p| p.label);
        for (i, p) in repr.points.iter().enumerate() {
            if p.label != i + 1 {
                return Err(D::Error::custom(format!("labels must be 1..=n without gaps; found label {}", p.label)));
            }
        }
        PointSet::new(repr.points.into_iter().map(|p| p.coords).collect()).map_err(D::Error::custom)
    }
}

/// A subset of a point set lying on a curve of the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: u32,
    pub labels: Vec<usize>,
    pub curve: HomPoly,
}

impl Witness {
    pub fn is_sound(&self, s: &PointSet) -> bool {
        self.curve.degree() == self.degree
            && !self.curve.is_zero()
            && self.labels.iter().all(|&l| l >= 1 && l <= s.len() && self.curve.vanishes_at(s.get(l)))
    }
}

/// `m_j` = the largest number of points on one curve of degree `j`, for `j = 1, 2, 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSequence {
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
    pub witnesses: Vec<Witness>,
}

impl MSequence {
    pub fn values(&self) -> [usize; 3] {
        [self.m1, self.m2, self.m3]
    }

    pub fn witness(&self, degree: u32) -> &Witness {
        &self.witnesses[degree as usize - 1]
    }

    pub fn witnesses_sound(&self, s: &PointSet) -> bool {
        self.witnesses.len() == 3
            && self
                .witnesses
                .iter()
                .zip(self.values())
                .enumerate()
                .all(|(j, (w, m))| w.degree == j as u32 + 1 && w.labels.len() == m && w.is_sound(s))
    }
}

fn evaluation_row(degree: u32, p: &ProjPoint) -> Vec<crate::Rational> {
    linsys::condition_rows(degree, p, 1).remove(0)
}

/// Curve of the given degree through the listed points, from the canonical kernel basis.
pub fn curve_through(degree: u32, points: &[ProjPoint]) -> Result<Option<HomPoly>> {
    let conds: Vec<VanishingCondition> = points.iter().map(|p| VanishingCondition::new(p.clone(), 1)).collect();
    let sys = linsys::build_system(degree, &conds)?;
    Ok(sys.kernel_basis.into_iter().next())
}

/// `m_j(S)` with a witness, by descending subset search.
pub fn max_on_curve(s: &PointSet, degree: u32) -> Result<Witness> {
    let n = s.len();
    let dim = space_dim(degree);
    let rows: Matrix = s.points().iter().map(|p| evaluation_row(degree, p)).collect();
    let rows_mod = linalg::matrix_mod(&rows);
    let trivial = n.min(dim - 1);
    let lies_on_curve = |subset: &Vec<usize>| -> bool {
        if let Some(rm) = &rows_mod {
            let sub: Vec<Vec<u64>> = subset.iter().map(|&i| rm[i].clone()).collect();
            if linalg::rank_mod(&sub) == dim {
                return false;
            }
        }
        let sub: Matrix = subset.iter().map(|&i| rows[i].clone()).collect();
        linalg::rank(&sub) < dim
    };
    let mut found: Option<Vec<usize>> = None;
    for k in (trivial + 1..=n).rev() {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        if let Some(sub) = par::find_first(&subsets, |c| lies_on_curve(c)) {
            found = Some(sub.clone());
            break;
        }
    }
    let subset = found.unwrap_or_else(|| (0..trivial).collect());
    let pts: Vec<ProjPoint> = subset.iter().map(|&i| s.points()[i].clone()).collect();
    let curve = curve_through(degree, &pts)?.expect("subset below the interpolation bound lies on a curve");
    Ok(Witness { degree, labels: subset.iter().map(|i| i + 1).collect(), curve })
}

/// The sequence `(m_1, m_2, m_3)` with one witness per degree.
pub fn m_sequence(s: &PointSet) -> Result<MSequence> {
    if s.len() > MAX_POINTS {
        return Err(Error::Precondition(format!("at most {MAX_POINTS} points supported, got {}", s.len())));
    }
    let witnesses = (1..=3).map(|d| max_on_curve(s, d)).collect::<Result<Vec<_>>>()?;
    Ok(MSequence {
        m1: witnesses[0].labels.len(),
        m2: witnesses[1].labels.len(),
        m3: witnesses[2].labels.len(),
        witnesses,
    })
}

/// All maximal collinear subsets with at least three points, as sorted label lists.
pub fn collinear_sets(s: &PointSet) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if out.iter().any(|l| l.contains(&(i + 1)) && l.contains(&(j + 1))) {
                continue;
            }
            let line: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || collinearity_det(&s.points[i], &s.points[j], &s.points[k]).is_zero())
                .map(|k| k + 1)
                .collect();
            if line.len() >= 3 {
                out.push(line);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(x, y)| ProjPoint::from_ints(x, y, 1).unwrap()).collect()).unwrap()
    }

    #[test]
    fn four_points_three_collinear() {
        let s = pts(&[(0, 0), (1, 0), (2, 0), (0, 1)]);
        let m = m_sequence(&s).unwrap();
        assert_eq!(m.values(), [3, 4, 4]);
        assert!(m.witnesses_sound(&s));
        assert_eq!(m.witness(1).labels, vec![1, 2, 3]);
    }

    #[test]
    fn grid_points() {
        // 3x3 grid: three points per line, six on a line pair, all nine on three lines.
        let v: Vec<(i64, i64)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
        let s = pts(&v);
        let m = m_sequence(&s).unwrap();
        assert_eq!(m.values(), [3, 6, 9]);
        assert!(m.witnesses_sound(&s));
        assert_eq!(collinear_sets(&s).len(), 8);
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(PointSet::new(vec![ProjPoint::from_ints(1, 2, 1).unwrap(), ProjPoint::from_ints(2, 4, 2).unwrap()])
            .is_err());
    }

    #[test]
    fn serde_round_trip() {
        let s = pts(&[(0, 0), (1, 5), (-2, 3)]);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"label\":2"));
        let back: PointSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
