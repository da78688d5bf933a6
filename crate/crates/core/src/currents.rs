//! Line-arrangement currents with exact Lelong numbers, and numerical estimates of pole
//! weights and logarithmic growth for potentials `u = (1/2r) log(|P|^2 + |Q|^2)`.

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{generate_instance, InstanceKind, MSequence};
use crate::construct::PotentialCertificate;
use crate::error::{Error, Result};
use crate::linsys;
use crate::par;
use crate::point::ProjPoint;
use crate::poly::{BiPoly, HomPoly};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedLine {
    pub line: HomPoly,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

/// `sum_j w_j [L_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementCurrent {
    pub lines: Vec<WeightedLine>,
}

impl ArrangementCurrent {
    pub fn new(lines: Vec<(HomPoly, Rational)>) -> Result<Self> {
        let mut out = Vec::with_capacity(lines.len());
        for (i, (line, weight)) in lines.into_iter().enumerate() {
            if line.degree() != 1 || line.is_zero() {
                return Err(Error::Invalid(format!("entry {} is not a line", i + 1)));
            }
            if weight <= Rational::zero() {
                return Err(Error::Invalid(format!("entry {} has non-positive weight", i + 1)));
            }
            out.push(WeightedLine { line: line.normalized(), weight });
        }
        Ok(ArrangementCurrent { lines: out })
    }

    /// Equal weights `1/n` on `n` lines.
    pub fn uniform(lines: &[HomPoly]) -> Result<Self> {
        let w = rational::rat(1, lines.len().max(1) as i64);
        Self::new(lines.iter().map(|l| (l.clone(), w.clone())).collect())
    }

    pub fn mass(&self) -> Rational {
        self.lines.iter().fold(Rational::zero(), |s, l| s + &l.weight)
    }

    /// Random unit-mass arrangement of `n` lines; line `i` passes through two of `anchors`
    /// when `i` is below `anchors.len() / 2`.
    pub fn random(seed: u64, n: usize, anchors: &[ProjPoint]) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = |rng: &mut ChaCha8Rng| rational::rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let mut lines = Vec::with_capacity(n);
        let mut raw = Vec::with_capacity(n);
        for i in 0..n {
            let line = if 2 * i + 1 < anchors.len() {
                HomPoly::line_through(&anchors[2 * i], &anchors[2 * i + 1])
            } else {
                loop {
                    let (a, b, c) = (small(&mut rng), small(&mut rng), small(&mut rng));
                    if !(a.is_zero() && b.is_zero()) {
                        break HomPoly::linear(a, b, c);
                    }
                }
            };
            lines.push(line);
            raw.push(rational::int(rng.gen_range(1..=6)));
        }
        let total = raw.iter().fold(Rational::zero(), |s, w| s + w);
        Self::new(lines.into_iter().zip(raw.into_iter().map(|w| w / &total)).collect())
    }
}

/// Sum of the weights of the lines through `x`.
pub fn lelong_exact(t: &ArrangementCurrent, x: &ProjPoint) -> Rational {
    t.lines.iter().filter(|l| l.line.vanishes_at(x)).fold(Rational::zero(), |s, l| s + &l.weight)
}

/// `sum_j w_j max(0, r^2 - d_j^2) / r^2` in the chart `Z = 1`, where `d_j` is the distance from
/// `x` to line `j`. Incident lines contribute their exact weight.
pub fn lelong_ball_mass(t: &ArrangementCurrent, x: &ProjPoint, r: f64) -> Result<f64> {
    let (px, py) = x.affine_coords().ok_or_else(|| Error::Precondition("the center must be an affine point".into()))?;
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Precondition("the radius must be positive".into()));
    }
    let mut incident = Rational::zero();
    let mut rest = 0.0;
    for wl in &t.lines {
        let one = Rational::one();
        let a = wl.line.coeff(&crate::Monomial(1, 0, 0));
        let b = wl.line.coeff(&crate::Monomial(0, 1, 0));
        let c = wl.line.coeff(&crate::Monomial(0, 0, 1));
        if a.is_zero() && b.is_zero() {
            return Err(Error::Precondition("a line of the arrangement is the line at infinity".into()));
        }
        let num = &a * &px + &b * &py + &c * &one;
        if num.is_zero() {
            incident += &wl.weight;
            continue;
        }
        let d2 = rational::to_f64(&(&num * &num)) / rational::to_f64(&(&a * &a + &b * &b));
        let r2 = r * r;
        if d2 < r2 {
            rest += rational::to_f64(&wl.weight) * (r2 - d2) / r2;
        }
    }
    Ok(rational::to_f64(&incident) + rest)
}

/// Angular sampling of a potential: `directions` seeded unit vectors in `C^2`, each rotated by
/// `phases` equally spaced phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub seed: u64,
    pub directions: usize,
    pub phases: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { seed: 0, directions: 32, phases: 8 }
    }
}

impl Sampling {
    fn vectors(&self) -> Vec<[Complex64; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.directions * self.phases);
        for _ in 0..self.directions {
            let v = loop {
                let c: [f64; 4] = [0; 4].map(|_| rng.gen_range(-1.0..=1.0));
                let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-3 && n <= 1.0 {
                    break [Complex64::new(c[0] / n, c[1] / n), Complex64::new(c[2] / n, c[3] / n)];
                }
            };
            for k in 0..self.phases {
                let rot = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / self.phases as f64);
                out.push([v[0] * rot, v[1] * rot]);
            }
        }
        out
    }
}

/// Polynomial in two complex variables with floating coefficients.
#[derive(Clone, Debug)]
struct FloatPoly {
    terms: Vec<(i32, i32, f64)>,
}

impl FloatPoly {
    fn from_bipoly(f: &BiPoly, scale: f64) -> Self {
        FloatPoly { terms: f.terms().map(|(&(i, j), c)| (i as i32, j as i32, rational::to_f64(c) / scale)).collect() }
    }

    fn max_abs(f: &BiPoly) -> f64 {
        f.terms().map(|(_, c)| rational::to_f64(c).abs()).fold(0.0, f64::max)
    }

    fn eval(&self, z: &[Complex64; 2]) -> Complex64 {
        self.terms.iter().map(|&(i, j, c)| z[0].powi(i) * z[1].powi(j) * c).sum()
    }
}

/// `u` in local coordinates around a chosen center.
struct Potential {
    p: FloatPoly,
    q: FloatPoly,
    r: f64,
}

impl Potential {
    /// Taylor expansion at `x` in the chart `Z = 1`, or the dominant chart when `x` is at infinity.
    /// Both polynomials share one scale, which shifts `u` by a constant.
    fn centered(cert: &PotentialCertificate, x: &ProjPoint) -> Potential {
        let idx = if x.is_affine() { 2 } else { x.dominant_index() };
        let c = x.scaled_to(idx);
        let others: Vec<usize> = (0..3).filter(|&i| i != idx).collect();
        let lp = cert.p.dehomogenize(idx).shift(&c[others[0]], &c[others[1]]);
        let lq = cert.q.dehomogenize(idx).shift(&c[others[0]], &c[others[1]]);
        let scale = FloatPoly::max_abs(&lp).max(FloatPoly::max_abs(&lq)).max(f64::MIN_POSITIVE);
        Potential { p: FloatPoly::from_bipoly(&lp, scale), q: FloatPoly::from_bipoly(&lq, scale), r: cert.r as f64 }
    }

    fn eval(&self, z: &[Complex64; 2]) -> f64 {
        self.p.eval(z).norm().hypot(self.q.eval(z).norm()).ln() / self.r
    }

    fn max_on_sphere(&self, radius: f64, vectors: &[[Complex64; 2]]) -> f64 {
        vectors.iter().map(|v| self.eval(&[v[0] * radius, v[1] * radius])).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Least-squares fit `y = a + b x`: `(b, root mean square residual)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (b, (rss / n).sqrt())
}

fn check_radii(radii: &[f64]) -> Result<Vec<f64>> {
    if radii.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 radii, got {}", radii.len())));
    }
    if radii.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Error::Precondition("radii must be positive and finite".into()));
    }
    let mut v = radii.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    if v.len() < 3 {
        return Err(Error::Precondition("need at least 3 distinct radii".into()));
    }
    Ok(v)
}

/// Radii `2^-8, ..., 2^-16`.
pub fn pole_radii() -> Vec<f64> {
    (8..=16).map(|k| 2f64.powi(-k)).collect()
}

/// Radii `2^8, ..., 2^16`.
pub fn growth_radii() -> Vec<f64> {
    (8..=16).map(|k| 2f64.powi(k)).collect()
}

fn csv(xs: &[f64], ys: &[f64], header: &str) -> String {
    let mut out = format!("{header}\n");
    for (r, v) in xs.iter().zip(ys) {
        out.push_str(&format!("{},{}\n", r.ln(), v));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LelongEstimate {
    pub point: ProjPoint,
    /// Decreasing.
    pub radii: Vec<f64>,
    /// Maximum of `u` on each sphere.
    pub values: Vec<f64>,
    /// Slope of the values against `log r`.
    pub extrapolated: f64,
    pub residual: f64,
    #[serde(with = "rational::serde_str_opt")]
    pub exact: Option<Rational>,
}

impl LelongEstimate {
    pub fn error(&self) -> Option<f64> {
        self.exact.as_ref().map(|e| (self.extrapolated - rational::to_f64(e)).abs())
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.error().is_some_and(|e| e <= tolerance)
    }

    /// `log r, max u` rows.
    pub fn csv(&self) -> String {
        csv(&self.radii, &self.values, "log_r,max_u")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    /// Increasing.
    pub radii: Vec<f64>,
    pub max_values: Vec<f64>,
    pub slope: f64,
    pub residual: f64,
    #[serde(with = "rational::serde_str")]
    pub claimed: Rational,
}

impl GrowthEstimate {
    pub fn within(&self, tolerance: f64) -> bool {
        (self.slope - rational::to_f64(&self.claimed)).abs() <= tolerance
    }

    pub fn csv(&self) -> String {
        csv(&self.radii, &self.max_values, "log_R,max_u")
    }
}

/// Slope of `max u` on small spheres around `x` against `log r`; `exact` is the claimed weight.
pub fn estimate_pole_weight(
    cert: &PotentialCertificate,
    x: &ProjPoint,
    radii: &[f64],
    sampling: Sampling,
) -> Result<LelongEstimate> {
    let claimed = cert
        .points
        .iter()
        .find(|p| &p.point == x)
        .ok_or_else(|| Error::Precondition("the point is not listed in the certificate".into()))?;
    if !cert.verified {
        return Err(Error::Precondition("the certificate is not verified".into()));
    }
    let mut radii = check_radii(radii)?;
    radii.reverse();
    let pot = Potential::centered(cert, x);
    let vectors = sampling.vectors();
    let values = par::map(&radii, |&r| pot.max_on_sphere(r, &vectors));
    let logs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let (slope, residual) = fit_line(&logs, &values);
    Ok(LelongEstimate {
        point: x.clone(),
        radii,
        values,
        extrapolated: slope,
        residual,
        exact: Some(claimed.weight.clone()),
    })
}

/// Slope of `max u` on large spheres around the origin of the chart `Z = 1` against `log R`.
pub fn estimate_growth(cert: &PotentialCertificate, radii: &[f64], sampling: Sampling) -> Result<GrowthEstimate> {
    if !cert.verified {
        return Err(Error::Precondition("the certificate is not verified".into()));
    }
    let radii = check_radii(radii)?;
    let origin = ProjPoint::from_ints(0, 0, 1).expect("nonzero");
    let pot = Potential::centered(cert, &origin);
    let vectors = sampling.vectors();
    let max_values = par::map(&radii, |&r| pot.max_on_sphere(r, &vectors));
    let logs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let (slope, residual) = fit_line(&logs, &max_values);
    Ok(GrowthEstimate { radii, max_values, slope, residual, claimed: cert.gamma_u.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityTerm {
    pub label: Option<usize>,
    pub point: ProjPoint,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
    #[serde(with = "rational::serde_str")]
    pub lelong: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub terms: Vec<InequalityTerm>,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub pass: bool,
    pub note: String,
}

/// `sum_j w_j nu(T, x_j) <= gamma_u`, with the left side exact.
pub fn lelong_inequality_check(t: &ArrangementCurrent, cert: &PotentialCertificate) -> Result<InequalityReport> {
    if !t.mass().is_one() {
        return Err(Error::Precondition(format!("the current has mass {}, not 1", rational::format(&t.mass()))));
    }
    if !cert.verified {
        return Err(Error::Precondition("the certificate is not verified".into()));
    }
    let terms: Vec<InequalityTerm> = cert
        .points
        .iter()
        .map(|p| InequalityTerm {
            label: p.label,
            point: p.point.clone(),
            weight: p.weight.clone(),
            lelong: lelong_exact(t, &p.point),
        })
        .collect();
    let lhs = terms.iter().fold(Rational::zero(), |s, t| s + &t.weight * &t.lelong);
    let rhs = cert.gamma_u.clone();
    Ok(InequalityReport {
        pass: lhs <= rhs,
        terms,
        lhs,
        rhs,
        note: "logarithmic growth holds because u comes from polynomials of degree r * gamma_u".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetRank {
    /// The two labels left out.
    pub omitted: [usize; 2],
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub seed: u64,
    pub attempts: usize,
    pub current: ArrangementCurrent,
    /// Point `k` is the meet of the `k`-th pair of lines in lexicographic order.
    pub points: Vec<ProjPoint>,
    pub no_three_concurrent: bool,
    #[serde(with = "rational::serde_str_vec")]
    pub lelong: Vec<Rational>,
    pub all_one_third: bool,
    pub subset_ranks: Vec<SubsetRank>,
    pub all_full_rank: bool,
    pub m_sequence: MSequence,
}

/// Six random lines with weight 1/6 each: every pairwise meet has Lelong number 1/3, and no
/// cubic passes through 13 of the 15 meets.
pub fn sharpness_example(seed: u64) -> Result<SharpnessReport> {
    let inst = generate_instance(InstanceKind::Example6lines, seed)?;
    let current = ArrangementCurrent::uniform(&inst.lines)?;
    let coeffs: Vec<[Rational; 3]> = inst
        .lines
        .iter()
        .map(|l| [(1, 0, 0), (0, 1, 0), (0, 0, 1)].map(|(a, b, c)| l.coeff(&crate::Monomial(a, b, c))))
        .collect();
    let no_three_concurrent = coeffs.iter().combinations(3).all(|t| !linalg_det3(t[0], t[1], t[2]).is_zero());
    let points: Vec<ProjPoint> = inst.points.points().to_vec();
    let lelong: Vec<Rational> = points.iter().map(|p| lelong_exact(&current, p)).collect();
    let third = rational::rat(1, 3);
    let all_one_third = lelong.iter().all(|v| *v == third);
    let omitted: Vec<[usize; 2]> = (1..=points.len()).combinations(2).map(|c| [c[0], c[1]]).collect();
    let subset_ranks: Vec<SubsetRank> = par::map(&omitted, |om| {
        let kept: Vec<&ProjPoint> =
            points.iter().enumerate().filter(|(i, _)| !om.contains(&(i + 1))).map(|(_, p)| p).collect();
        SubsetRank { omitted: *om, rank: linsys::evaluation_rank(3, &kept) }
    });
    let all_full_rank = subset_ranks.iter().all(|s| s.rank == 10);
    Ok(SharpnessReport {
        seed,
        attempts: inst.attempts,
        current,
        points,
        no_three_concurrent,
        lelong,
        all_one_third,
        subset_ranks,
        all_full_rank,
        m_sequence: inst.m_sequence,
    })
}

fn linalg_det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    crate::linalg::det(&vec![a.to_vec(), b.to_vec(), c.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn line(a: i64, b: i64, c: i64) -> HomPoly {
        HomPoly::linear(int(a), int(b), int(c))
    }

    #[test]
    fn single_line_masses() {
        let t = ArrangementCurrent::new(vec![(line(0, 1, 0), int(1))]).unwrap();
        let on = ProjPoint::from_ints(3, 0, 1).unwrap();
        assert_eq!(lelong_exact(&t, &on), int(1));
        for r in [1e-3, 0.5, 10.0] {
            assert_eq!(lelong_ball_mass(&t, &on, r).unwrap(), 1.0);
        }
        let off = ProjPoint::from_ints(0, 1, 1).unwrap();
        assert_eq!(lelong_ball_mass(&t, &off, 0.5).unwrap(), 0.0);
        let half = ProjPoint::from_ints(0, 1, 1).unwrap();
        let m = lelong_ball_mass(&t, &half, 2f64.sqrt()).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert_eq!(lelong_exact(&t, &off), int(0));
        assert!(lelong_ball_mass(&t, &ProjPoint::from_ints(1, 0, 0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn crossover_to_exact() {
        let t = ArrangementCurrent::uniform(&[line(1, 0, 0), line(0, 1, 0), line(1, 1, -1)]).unwrap();
        let x = ProjPoint::from_ints(0, 0, 1).unwrap();
        assert_eq!(lelong_exact(&t, &x), rat(2, 3));
        assert_eq!(lelong_ball_mass(&t, &x, 0.5).unwrap(), rational::to_f64(&rat(2, 3)));
        let mut prev = f64::INFINITY;
        for k in 0..12 {
            let m = lelong_ball_mass(&t, &x, 4.0 * 0.5f64.powi(k)).unwrap();
            assert!(m <= prev);
            prev = m;
        }
    }

    fn single_pole() -> PotentialCertificate {
        use crate::construct::{CaseTag, PolePoint, Route};
        let p = ProjPoint::from_ints(1, 2, 1).unwrap();
        PotentialCertificate {
            p: line(1, 0, -1),
            q: line(0, 1, -2),
            r: 1,
            points: vec![PolePoint { label: None, point: p, weight: int(1) }],
            gamma_u: int(1),
            total_weight: int(1),
            case_tag: CaseTag::Custom,
            route: Route::IntersectionNumber,
            verified: true,
        }
    }

    #[test]
    fn synthetic_pole_and_growth() {
        let cert = single_pole();
        assert!(crate::construct::verify_certificate(&cert).verified);
        let est = estimate_pole_weight(&cert, &cert.points[0].point, &pole_radii(), Sampling::default()).unwrap();
        assert!(est.within(1e-9), "{}", est.extrapolated);
        let g = estimate_growth(&cert, &growth_radii(), Sampling::default()).unwrap();
        assert!(g.within(1e-2), "{}", g.slope);
        assert!(est.csv().starts_with("log_r,max_u\n"));
        assert!(matches!(
            estimate_pole_weight(&cert, &cert.points[0].point, &[0.1, 0.2], Sampling::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn inequality_on_single_pole() {
        let cert = single_pole();
        let t =
            ArrangementCurrent::random(3, 4, &[cert.points[0].point.clone(), ProjPoint::from_ints(5, 1, 1).unwrap()])
                .unwrap();
        assert!(t.mass().is_one());
        let rep = lelong_inequality_check(&t, &cert).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs > int(0));
        let heavy = ArrangementCurrent::new(vec![(line(1, 0, 0), int(2))]).unwrap();
        assert!(matches!(lelong_inequality_check(&heavy, &cert), Err(Error::Precondition(_))));
    }
}
