//! Abstract families of four-point lines and their exhaustive enumeration up to relabeling.
//!
//! Two lines of a family always meet in exactly one labeled point, and every label lies on at
//! most `cap` lines. Canonical forms use colour refinement on the point-line incidence graph with
//! individualization of line cells; the form is the least line-mask code over all leaves.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Largest label count accepted by [`enumerate_4lines`].
pub const MAX_LABELS: usize = 12;

/// Lines of four labels each over labels `1..=n_points`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncidenceStructure {
    pub n_points: usize,
    pub lines: Vec<[usize; 4]>,
}

impl IncidenceStructure {
    /// Validates labels and the pairwise-intersection rule (at most one shared label).
    pub fn new(n_points: usize, lines: Vec<[usize; 4]>) -> Result<Self> {
        let s = IncidenceStructure { n_points, lines };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, l) in self.lines.iter().enumerate() {
            if l.iter().any(|&p| p == 0 || p > self.n_points) {
                return Err(Error::Precondition(format!(
                    "line {} {:?} has a label outside 1..={}",
                    i + 1,
                    l,
                    self.n_points
                )));
            }
            let set: BTreeSet<usize> = l.iter().copied().collect();
            if set.len() != 4 {
                return Err(Error::Precondition(format!("line {} {:?} repeats a label", i + 1, l)));
            }
            for (j, m) in self.lines[..i].iter().enumerate() {
                let shared = m.iter().filter(|p| set.contains(p)).count();
                if shared > 1 {
                    return Err(Error::Precondition(format!(
                        "lines {} {:?} and {} {:?} share {shared} labels",
                        j + 1,
                        m,
                        i + 1,
                        l
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of lines through each label (index `label - 1`).
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_points];
        for l in &self.lines {
            for &p in l {
                d[p - 1] += 1;
            }
        }
        d
    }

    pub fn max_point_degree(&self) -> usize {
        self.point_degrees().into_iter().max().unwrap_or(0)
    }

    /// Labels on three or more lines.
    pub fn triple_points(&self) -> Vec<usize> {
        self.point_degrees().iter().enumerate().filter(|(_, &d)| d >= 3).map(|(i, _)| i + 1).collect()
    }

    pub fn shape(&self) -> ShapeInfo {
        let triples = self.triple_points();
        let mut sharing = 0;
        let mut apart = 0;
        for (i, &a) in triples.iter().enumerate() {
            for &b in &triples[i + 1..] {
                if self.lines.iter().any(|l| l.contains(&a) && l.contains(&b)) {
                    sharing += 1;
                } else {
                    apart += 1;
                }
            }
        }
        let shape = match (triples.len(), sharing) {
            (0, _) => Shape::NoTriplePoint,
            (1, _) => Shape::OneTriplePoint,
            (_, 0) => Shape::TriplePointsApart,
            _ => Shape::TriplePointsOnCommonLine,
        };
        ShapeInfo {
            lines: self.lines.len(),
            triple_points: triples.len(),
            triple_pairs_sharing_line: sharing,
            triple_pairs_apart: apart,
            shape,
        }
    }

    /// Whether some injective relabeling maps every line of `self` onto a line of `other`.
    pub fn embeds_in(&self, other: &IncidenceStructure) -> bool {
        fn extend(
            lines: &[[usize; 4]],
            targets: &[[usize; 4]],
            used: &mut Vec<bool>,
            map: &mut BTreeMap<usize, usize>,
        ) -> bool {
            let Some((l, rest)) = lines.split_first() else { return true };
            for (j, t) in targets.iter().enumerate() {
                if used[j] {
                    continue;
                }
                used[j] = true;
                for image in t.iter().copied().permutations(4) {
                    let consistent = l.iter().zip(&image).all(|(p, q)| match map.get(p) {
                        Some(v) => v == q,
                        None => !map.values().any(|v| v == q),
                    });
                    if !consistent {
                        continue;
                    }
                    let added: Vec<usize> = l.iter().copied().filter(|p| !map.contains_key(p)).collect();
                    for (p, q) in l.iter().zip(&image) {
                        map.insert(*p, *q);
                    }
                    if extend(rest, targets, used, map) {
                        return true;
                    }
                    for p in added {
                        map.remove(&p);
                    }
                }
                used[j] = false;
            }
            false
        }
        self.lines.len() <= other.lines.len()
            && extend(&self.lines, &other.lines, &mut vec![false; other.lines.len()], &mut BTreeMap::new())
    }

    /// The canonical representative of the relabeling class; unused labels come last.
    pub fn canonical(&self) -> IncidenceStructure {
        let masks: Vec<u16> = self.lines.iter().map(|l| l.iter().fold(0u16, |m, &p| m | 1 << (p - 1))).collect();
        from_masks(self.n_points, &canonical_code(&masks))
    }
}

/// Families classified by their points on three lines. Adding lines never moves a family to
/// an earlier class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    NoTriplePoint,
    OneTriplePoint,
    /// Several points on three lines each, no two of them on a common line.
    TriplePointsApart,
    /// Several points on three lines each, some two of them on a common line.
    TriplePointsOnCommonLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeInfo {
    pub lines: usize,
    pub triple_points: usize,
    pub triple_pairs_sharing_line: usize,
    pub triple_pairs_apart: usize,
    pub shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedStructure {
    pub structure: IncidenceStructure,
    pub shape: ShapeInfo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n_points: usize,
    pub per_point_cap: usize,
    /// Largest family size.
    pub maximum: usize,
    /// `classes_by_size[k]` = number of relabeling classes with `k` lines.
    pub classes_by_size: Vec<usize>,
    /// Families admitting no further line, one per relabeling class.
    pub maximal: Vec<ClassifiedStructure>,
    /// Per shape: families of that shape admitting no further line of the same shape.
    pub shapes: Vec<ShapeSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub shape: Shape,
    /// Relabeling classes of this shape.
    pub classes: usize,
    /// Largest family of this shape.
    pub maximum: usize,
    pub maximal: Vec<IncidenceStructure>,
}

impl EnumerationReport {
    pub fn maximum_representatives(&self) -> impl Iterator<Item = &ClassifiedStructure> {
        self.maximal.iter().filter(move |c| c.structure.lines.len() == self.maximum)
    }

    pub fn shape(&self, shape: Shape) -> Option<&ShapeSummary> {
        self.shapes.iter().find(|s| s.shape == shape)
    }
}

fn from_masks(n_points: usize, masks: &[u16]) -> IncidenceStructure {
    let lines = masks
        .iter()
        .map(|&m| {
            let mut l = [0usize; 4];
            let mut k = 0;
            for p in 0..16 {
                if m & (1 << p) != 0 {
                    l[k] = p + 1;
                    k += 1;
                }
            }
            l
        })
        .collect();
    IncidenceStructure { n_points, lines }
}

struct Graph {
    line_points: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
}

impl Graph {
    fn new(masks: &[u16]) -> Graph {
        let used: u16 = masks.iter().fold(0, |a, &m| a | m);
        let labels: Vec<usize> = (0..16).filter(|p| used & (1 << p) != 0).collect();
        let index: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let line_points: Vec<Vec<usize>> =
            masks.iter().map(|&m| (0..16).filter(|p| m & (1 << p) != 0).map(|p| index[&p]).collect()).collect();
        let mut point_lines = vec![Vec::new(); labels.len()];
        for (l, ps) in line_points.iter().enumerate() {
            for &p in ps {
                point_lines[p].push(l);
            }
        }
        Graph { line_points, point_lines }
    }

    fn refine(&self, lc: &mut [u32], pc: &mut [u32]) {
        fn distinct(v: &[u32]) -> usize {
            v.iter().collect::<BTreeSet<_>>().len()
        }
        fn recolor(sigs: Vec<(u32, Vec<u32>)>, out: &mut [u32]) {
            let sorted: BTreeSet<&(u32, Vec<u32>)> = sigs.iter().collect();
            let rank: BTreeMap<&(u32, Vec<u32>), u32> =
                sorted.into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
            for (o, s) in out.iter_mut().zip(&sigs) {
                *o = rank[s];
            }
        }
        loop {
            let before = (distinct(lc), distinct(pc));
            let line_sigs = self
                .line_points
                .iter()
                .enumerate()
                .map(|(l, ps)| {
                    let mut v: Vec<u32> = ps.iter().map(|&p| pc[p]).collect();
                    v.sort_unstable();
                    (lc[l], v)
                })
                .collect();
            let point_sigs = self
                .point_lines
                .iter()
                .enumerate()
                .map(|(p, ls)| {
                    let mut v: Vec<u32> = ls.iter().map(|&l| lc[l]).collect();
                    v.sort_unstable();
                    (pc[p], v)
                })
                .collect();
            recolor(line_sigs, lc);
            recolor(point_sigs, pc);
            if (distinct(lc), distinct(pc)) == before {
                break;
            }
        }
    }

    /// Line masks after ordering lines by `order` and labeling points by their line sets.
    fn code(&self, order: &[usize]) -> Vec<u16> {
        let k = order.len();
        let mut pos = vec![0usize; k];
        for (i, &l) in order.iter().enumerate() {
            pos[l] = i;
        }
        let mut keyed: Vec<(u32, usize)> = self
            .point_lines
            .iter()
            .enumerate()
            .map(|(p, ls)| (ls.iter().fold(0u32, |m, &l| m | 1 << (31 - pos[l])), p))
            .collect();
        keyed.sort_by_key(|k| std::cmp::Reverse(k.0));
        let mut label = vec![0usize; keyed.len()];
        for (new, &(_, p)) in keyed.iter().enumerate() {
            label[p] = new;
        }
        order.iter().map(|&l| self.line_points[l].iter().fold(0u16, |m, &p| m | 1 << label[p])).collect()
    }

    fn search(&self, mut lc: Vec<u32>, mut pc: Vec<u32>, best: &mut Option<Vec<u16>>) {
        self.refine(&mut lc, &mut pc);
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (l, &c) in lc.iter().enumerate() {
            cells.entry(c).or_default().push(l);
        }
        match cells.iter().find(|(_, ls)| ls.len() > 1) {
            None => {
                let order: Vec<usize> = cells.values().map(|ls| ls[0]).collect();
                let code = self.code(&order);
                if best.as_ref().is_none_or(|b| code < *b) {
                    *best = Some(code);
                }
            }
            Some((&c, members)) => {
                for &chosen in members {
                    let lc2 = lc.iter().enumerate().map(|(l, &x)| 2 * x + u32::from(x == c && l != chosen)).collect();
                    self.search(lc2, pc.clone(), best);
                }
            }
        }
    }
}

/// Least code over all canonical leaves; identical for any relabeling of points or lines.
fn canonical_code(masks: &[u16]) -> Vec<u16> {
    if masks.is_empty() {
        return Vec::new();
    }
    let g = Graph::new(masks);
    let mut best = None;
    g.search(vec![0; masks.len()], vec![0; g.point_lines.len()], &mut best);
    best.unwrap()
}

/// Canonical children obtained by adding one line meeting every existing line exactly once.
fn extensions(masks: &[u16], n: usize, cap: usize) -> Vec<Vec<u16>> {
    let used: u16 = masks.iter().fold(0, |a, &m| a | m);
    let u = used.count_ones() as usize;
    let degree = |p: usize| masks.iter().filter(|&&m| m & (1 << p) != 0).count();
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    exact_covers(masks, 0, 0, &mut chosen, &degree, cap, &mut |pts: &[usize]| {
        let fresh = 4 - pts.len();
        if u + fresh > n {
            return;
        }
        let mut m: u16 = pts.iter().fold(0, |a, &p| a | 1 << p);
        for f in 0..fresh {
            m |= 1 << (u + f);
        }
        let mut child = masks.to_vec();
        child.push(m);
        out.insert(canonical_code(&child));
    });
    out.into_iter().collect()
}

/// Enumerates point sets hitting each line exactly once (at most four points).
fn exact_covers(
    masks: &[u16],
    line: usize,
    covered: u32,
    chosen: &mut Vec<usize>,
    degree: &dyn Fn(usize) -> usize,
    cap: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    if line == masks.len() {
        emit(chosen);
        return;
    }
    if covered & (1 << line) != 0 {
        exact_covers(masks, line + 1, covered, chosen, degree, cap, emit);
        return;
    }
    if chosen.len() == 4 {
        return;
    }
    for p in 0..16 {
        if masks[line] & (1 << p) == 0 || degree(p) >= cap {
            continue;
        }
        let lines_of_p: u32 =
            masks.iter().enumerate().filter(|(_, &m)| m & (1 << p) != 0).fold(0, |a, (i, _)| a | 1 << i);
        if lines_of_p & covered != 0 {
            continue;
        }
        chosen.push(p);
        exact_covers(masks, line + 1, covered | lines_of_p, chosen, degree, cap, emit);
        chosen.pop();
    }
}

/// All families of four-point lines on `n_points` labels, pairwise meeting in exactly one
/// label, with at most `per_point_cap` lines per label; classes up to relabeling.
pub fn enumerate_4lines(n_points: usize, per_point_cap: usize) -> Result<EnumerationReport> {
    if n_points > MAX_LABELS {
        return Err(Error::Precondition(format!("at most {MAX_LABELS} labels supported, got {n_points}")));
    }
    if !(2..=3).contains(&per_point_cap) {
        return Err(Error::Precondition(format!("per-point cap must be 2 or 3, got {per_point_cap}")));
    }
    let mut classes_by_size = vec![1];
    let mut all: Vec<(Vec<u16>, Vec<Vec<u16>>)> = Vec::new();
    let mut level: Vec<Vec<u16>> = if n_points >= 4 { vec![vec![0b1111]] } else { Vec::new() };
    if n_points < 4 {
        all.push((Vec::new(), Vec::new()));
    }
    while !level.is_empty() {
        classes_by_size.push(level.len());
        let children = par::map(&level, |f| extensions(f, n_points, per_point_cap));
        let mut next = BTreeSet::new();
        for (f, ch) in level.iter().zip(children) {
            next.extend(ch.iter().cloned());
            all.push((f.clone(), ch));
        }
        level = next.into_iter().collect();
    }
    let maximum = classes_by_size.len() - 1;
    let shape_of = |m: &[u16]| from_masks(n_points, m).shape();
    let mut maximal: Vec<ClassifiedStructure> = Vec::new();
    let mut by_shape: BTreeMap<Shape, ShapeSummary> = BTreeMap::new();
    for (f, ch) in &all {
        let structure = from_masks(n_points, f);
        let info = structure.shape();
        let entry = by_shape.entry(info.shape).or_insert_with(|| ShapeSummary {
            shape: info.shape,
            classes: 0,
            maximum: 0,
            maximal: Vec::new(),
        });
        entry.classes += 1;
        entry.maximum = entry.maximum.max(f.len());
        if ch.iter().all(|c| shape_of(c).shape != info.shape) {
            entry.maximal.push(structure.clone());
        }
        if ch.is_empty() {
            maximal.push(ClassifiedStructure { structure, shape: info });
        }
    }
    let by_len = |a: &IncidenceStructure, b: &IncidenceStructure| b.lines.len().cmp(&a.lines.len()).then(a.cmp(b));
    maximal.sort_by(|a, b| by_len(&a.structure, &b.structure));
    let shapes = by_shape
        .into_values()
        .map(|mut s| {
            s.maximal.sort_by(by_len);
            s
        })
        .collect();
    Ok(EnumerationReport { n_points, per_point_cap, maximum, classes_by_size, maximal, shapes })
}
