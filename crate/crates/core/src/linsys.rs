//! Linear systems of plane curves with prescribed base points and multiplicities.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curves;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::point::ProjPoint;
use crate::poly::bipoly::binomial;
use crate::poly::hompoly::{monomials, space_dim, Mult};
use crate::poly::HomPoly;
use crate::rational::Rational;

pub const MAX_DEGREE: u32 = 12;

/// All partial derivatives of order below `order` vanish at `point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCondition {
    pub point: ProjPoint,
    pub order: u32,
}

impl VanishingCondition {
    pub fn new(point: ProjPoint, order: u32) -> Self {
        VanishingCondition { point, order }
    }

    pub fn num_constraints(&self) -> usize {
        (self.order * (self.order + 1) / 2) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub degree: u32,
    pub conditions: Vec<VanishingCondition>,
    pub matrix_rank: usize,
    /// `C(d+2, 2)` minus the number of imposed constraints (clamped at zero).
    pub expected_dim: usize,
    pub kernel_basis: Vec<HomPoly>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl LinearSystem {
    pub fn dim(&self) -> usize {
        self.kernel_basis.len()
    }
}

fn pow(a: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

/// Rows of Taylor-coefficient functionals of order below `order` at `point`, in the chart
/// where the point's dominant coordinate is 1.
pub fn condition_rows(degree: u32, point: &ProjPoint, order: u32) -> Matrix {
    let idx = point.dominant_index();
    let c = point.scaled_to(idx);
    let others: Vec<usize> = (0..3).filter(|&i| i != idx).collect();
    let (u0, v0) = (&c[others[0]], &c[others[1]]);
    let monos = monomials(degree);
    let mut rows = Vec::new();
    for total in 0..order {
        for s in (0..=total).rev() {
            let t = total - s;
            let row = monos
                .iter()
                .map(|m| {
                    let e = m.exps();
                    let (a, b) = (e[others[0]], e[others[1]]);
                    if a < s || b < t {
                        Rational::zero()
                    } else {
                        binomial(a, s) * pow(u0, a - s) * binomial(b, t) * pow(v0, b - t)
                    }
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Merges repeated points, keeping the larger order.
fn merge_conditions(conditions: &[VanishingCondition]) -> (Vec<VanishingCondition>, Vec<String>) {
    let mut merged: Vec<VanishingCondition> = Vec::new();
    let mut warnings = Vec::new();
    for c in conditions {
        if let Some(prev) = merged.iter_mut().find(|m| m.point == c.point) {
            if prev.order != c.order {
                let w = format!(
                    "point {} listed with orders {} and {}; using {}",
                    c.point,
                    prev.order,
                    c.order,
                    prev.order.max(c.order)
                );
                log::warn!("{w}");
                warnings.push(w);
            }
            prev.order = prev.order.max(c.order);
        } else {
            merged.push(c.clone());
        }
    }
    (merged, warnings)
}

pub fn constraint_matrix(degree: u32, conditions: &[VanishingCondition]) -> Matrix {
    conditions.iter().flat_map(|c| condition_rows(degree, &c.point, c.order)).collect()
}

/// Exact rank and canonical kernel basis of the constraint matrix.
pub fn build_system(degree: u32, conditions: &[VanishingCondition]) -> Result<LinearSystem> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::Precondition(format!("degree must be in 1..={MAX_DEGREE}, got {degree}")));
    }
    if let Some(c) = conditions.iter().find(|c| c.order == 0) {
        return Err(Error::Precondition(format!("condition at {} has order 0", c.point)));
    }
    let (conds, warnings) = merge_conditions(conditions);
    let n = space_dim(degree);
    let m = constraint_matrix(degree, &conds);
    let kernel = if m.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        linalg::kernel(&m, n)
    };
    let imposed: usize = conds.iter().map(|c| c.num_constraints()).sum();
    Ok(LinearSystem {
        degree,
        matrix_rank: n - kernel.len(),
        expected_dim: n.saturating_sub(imposed),
        kernel_basis: kernel.iter().map(|v| HomPoly::from_coeff_vector(degree, v)).collect(),
        conditions: conds,
        warnings,
    })
}

/// Shorthand: simple points get order 1, `doubles` get order 2.
pub fn conditions_from(simple: &[ProjPoint], doubles: &[ProjPoint]) -> Vec<VanishingCondition> {
    doubles
        .iter()
        .map(|p| VanishingCondition::new(p.clone(), 2))
        .chain(simple.iter().map(|p| VanishingCondition::new(p.clone(), 1)))
        .collect()
}

/// Rank of the order-1 evaluation matrix of `points` in degree `degree`.
pub fn evaluation_rank(degree: u32, points: &[&ProjPoint]) -> usize {
    let m: Matrix = points.iter().map(|p| condition_rows(degree, p, 1).remove(0)).collect();
    linalg::rank_fast(&m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub point: ProjPoint,
    pub required: u32,
    pub found: Mult,
    pub pass: bool,
}

/// Re-checks every condition on `p` through vanishing orders.
pub fn check_conditions(p: &HomPoly, conditions: &[VanishingCondition]) -> Vec<ConditionCheck> {
    conditions
        .iter()
        .map(|c| {
            let found = p.vanishing_order(&c.point);
            ConditionCheck { point: c.point.clone(), required: c.order, found, pass: found >= Mult::Finite(c.order) }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOutcome {
    Found {
        p: HomPoly,
        q: HomPoly,
        move_used: String,
    },
    /// For each basis element, the indices of the forbidden factors dividing it.
    Blocked {
        divisibility: Vec<Vec<usize>>,
    },
}

fn divisors_of(p: &HomPoly, forbidden: &[HomPoly]) -> Vec<usize> {
    forbidden.iter().enumerate().filter(|(_, f)| f.divides(p)).map(|(i, _)| i).collect()
}

fn independent(a: &HomPoly, b: &HomPoly) -> bool {
    let m = vec![a.coeff_vector(), b.coeff_vector()];
    linalg::rank(&m) == 2
}

/// Two independent members not divisible by any forbidden factor: first from the basis,
/// then from pairwise sums of basis elements.
pub fn independent_pair(system: &LinearSystem, forbidden: &[HomPoly]) -> Result<PairOutcome> {
    let basis = &system.kernel_basis;
    if basis.len() < 2 {
        return Err(Error::Precondition(format!("system has dimension {} < 2", basis.len())));
    }
    let clean: Vec<&HomPoly> = basis.iter().filter(|b| divisors_of(b, forbidden).is_empty()).collect();
    if clean.len() >= 2 {
        return Ok(PairOutcome::Found { p: clean[0].clone(), q: clean[1].clone(), move_used: "basis".into() });
    }
    let mut candidates: Vec<HomPoly> = clean.into_iter().cloned().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = &basis[i] + &basis[j];
            if divisors_of(&s, forbidden).is_empty() {
                candidates.push(s);
            }
        }
    }
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if independent(&candidates[i], &candidates[j]) {
                return Ok(PairOutcome::Found {
                    p: candidates[i].clone(),
                    q: candidates[j].clone(),
                    move_used: "sum".into(),
                });
            }
        }
    }
    Ok(PairOutcome::Blocked { divisibility: basis.iter().map(|b| divisors_of(b, forbidden)).collect() })
}

/// `(alpha, beta)` with `h = alpha f + beta g`, if `h` lies in the pencil.
pub fn pencil_member(f: &HomPoly, g: &HomPoly, h: &HomPoly) -> Result<Option<(Rational, Rational)>> {
    for p in [g, h] {
        if p.degree() != f.degree() {
            return Err(Error::DegreeMismatch { expected: f.degree(), found: p.degree() });
        }
    }
    if !independent(f, g) {
        return Err(Error::Precondition("pencil generators are linearly dependent".into()));
    }
    let (fv, gv, hv) = (f.coeff_vector(), g.coeff_vector(), h.coeff_vector());
    let m: Matrix = (0..fv.len()).map(|i| vec![fv[i].clone(), gv[i].clone(), hv[i].clone()]).collect();
    let k = linalg::kernel(&m, 3);
    let Some(v) = k.iter().find(|v| !v[2].is_zero()) else { return Ok(None) };
    Ok(Some((-&v[0] / &v[2], -&v[1] / &v[2])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyBacharachCheck {
    pub omitted: ProjPoint,
    pub dim_through_rest: usize,
    pub basis_vanishes_at_omitted: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyBacharachReport {
    pub points: Vec<ProjPoint>,
    pub checks: Vec<CayleyBacharachCheck>,
    pub pass: bool,
}

/// For two cubics meeting in nine distinct rational points, checks that every cubic
/// through any eight of them passes through the ninth.
pub fn cayley_bacharach_check(c1: &HomPoly, c2: &HomPoly) -> Result<CayleyBacharachReport> {
    if c1.degree() != 3 || c2.degree() != 3 {
        return Err(Error::Precondition("both curves must be cubics".into()));
    }
    if !curves::common_zeros_discrete(c1, c2) {
        return Err(Error::Precondition("cubics are not coprime".into()));
    }
    let table = curves::bezout_table(c1, c2)?;
    if table.residual != 0 || table.records.iter().any(|r| r.multiplicity != 1) {
        return Err(Error::Unsupported(format!(
            "intersection is not nine distinct rational points ({} rational, residual {})",
            table.records.len(),
            table.residual
        )));
    }
    let points: Vec<ProjPoint> = table.records.iter().map(|r| r.point.clone()).collect();
    let mut checks = Vec::with_capacity(9);
    for (i, omitted) in points.iter().enumerate() {
        let rest: Vec<VanishingCondition> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| VanishingCondition::new(p.clone(), 1))
            .collect();
        let sys = build_system(3, &rest)?;
        let vanish = sys.kernel_basis.iter().all(|b| b.vanishes_at(omitted));
        checks.push(CayleyBacharachCheck {
            omitted: omitted.clone(),
            dim_through_rest: sys.dim(),
            basis_vanishes_at_omitted: vanish,
            pass: sys.dim() == 2 && vanish,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(CayleyBacharachReport { points, checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }

    #[test]
    fn lines_through_points() {
        let coll = [pt(0, 0, 1), pt(1, 1, 1), pt(2, 2, 1)];
        let sys = build_system(1, &conditions_from(&coll, &[])).unwrap();
        assert_eq!(sys.dim(), 1);
        let non = [pt(0, 0, 1), pt(1, 0, 1), pt(0, 1, 1)];
        assert_eq!(build_system(1, &conditions_from(&non, &[])).unwrap().dim(), 0);
    }

    #[test]
    fn double_point_conditions() {
        // Conics singular at the origin: spanned by X^2, XY, Y^2.
        let sys = build_system(2, &[VanishingCondition::new(pt(0, 0, 1), 2)]).unwrap();
        assert_eq!(sys.dim(), 3);
        for b in &sys.kernel_basis {
            assert!(check_conditions(b, &sys.conditions).iter().all(|c| c.pass));
        }
        let at_inf = build_system(3, &[VanishingCondition::new(pt(1, 2, 0), 3)]).unwrap();
        assert_eq!(at_inf.dim(), 4);
        for b in &at_inf.kernel_basis {
            assert!(b.vanishing_order(&pt(1, 2, 0)) >= Mult::Finite(3));
        }
    }

    #[test]
    fn merged_duplicates_warn() {
        let c = vec![VanishingCondition::new(pt(0, 0, 1), 1), VanishingCondition::new(pt(0, 0, 1), 2)];
        let sys = build_system(2, &c).unwrap();
        assert_eq!(sys.conditions.len(), 1);
        assert_eq!(sys.conditions[0].order, 2);
        assert_eq!(sys.warnings.len(), 1);
        assert!(build_system(13, &[]).is_err());
    }

    #[test]
    fn pencil_examples() {
        let f = HomPoly::from_int_terms(3, &[(3, 0, 0, 1), (0, 1, 2, -1)]).unwrap();
        let g = HomPoly::from_int_terms(3, &[(0, 3, 0, 1), (1, 1, 1, 2)]).unwrap();
        assert_eq!(pencil_member(&f, &g, &f).unwrap(), Some((int(1), int(0))));
        assert_eq!(pencil_member(&f, &g, &(&f + &g)).unwrap(), Some((int(1), int(1))));
        let h = HomPoly::from_int_terms(3, &[(0, 0, 3, 1)]).unwrap();
        assert_eq!(pencil_member(&f, &g, &h).unwrap(), None);
        assert!(pencil_member(&f, &g, &HomPoly::x()).is_err());
    }

    #[test]
    fn cayley_bacharach_on_grid() {
        // X(X-Z)(X-2Z) and Y(Y-Z)(Y-2Z) meet in the 3x3 grid.
        let l = |a: i64, b: i64, c: i64| HomPoly::linear(int(a), int(b), int(c));
        let c1 = HomPoly::product(&[l(1, 0, 0), l(1, 0, -1), l(1, 0, -2)]);
        let c2 = HomPoly::product(&[l(0, 1, 0), l(0, 1, -1), l(0, 1, -2)]);
        let rep = cayley_bacharach_check(&c1, &c2).unwrap();
        assert_eq!(rep.points.len(), 9);
        assert!(rep.pass);
        assert!(matches!(cayley_bacharach_check(&c1, &c1), Err(Error::Precondition(_))));
    }
}
