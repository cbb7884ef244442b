//! Regular subdivisions induced by a lifting, regularity certificates,
//! smoothness, and the exhaustive enumeration of elementary triangulations of
//! the simplex of degree two.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{
    affine_dim, cross, det_tetra, dot, frac, gamma_points, is_zero_vec, parse_rat, rat_to_string, Hull,
    IVec3, LatticePoint3, QPoint3, Rat,
};
use crate::poly::TropicalPolynomial;

/// Lifting values on a finite support.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lifting {
    pub values: BTreeMap<LatticePoint3, Rat>,
}

impl Lifting {
    pub fn new(values: BTreeMap<LatticePoint3, Rat>) -> Self {
        Self { values }
    }

    pub fn zero(support: &[LatticePoint3]) -> Self {
        Self::new(support.iter().map(|p| (*p, Rat::zero())).collect())
    }

    pub fn of(f: &TropicalPolynomial) -> Self {
        Self::new(f.terms().clone())
    }

    pub fn support(&self) -> Vec<LatticePoint3> {
        self.values.keys().copied().collect()
    }

    pub fn get(&self, p: LatticePoint3) -> Option<&Rat> {
        self.values.get(&p)
    }

    pub fn to_polynomial(&self) -> Result<TropicalPolynomial> {
        TropicalPolynomial::new(self.values.clone())
    }
}

/// Maximal cells of a subdivision, each stored as the full set of support
/// points it contains, sorted. Cells are in canonical (lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub cells: Vec<Vec<LatticePoint3>>,
    pub lifting: Option<Lifting>,
}

impl Subdivision {
    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 4)
    }

    pub fn tetrahedra(&self) -> Option<Vec<[LatticePoint3; 4]>> {
        self.cells.iter().map(|c| <[LatticePoint3; 4]>::try_from(c.as_slice()).ok()).collect()
    }

    pub fn contains_cell(&self, cell: &[LatticePoint3]) -> bool {
        let mut c = cell.to_vec();
        c.sort();
        self.cells.binary_search(&c).is_ok()
    }

    /// Whether some cell has both points as vertices of a common cell.
    pub fn has_edge(&self, a: LatticePoint3, b: LatticePoint3) -> bool {
        self.cells.iter().any(|c| c.len() == 4 && c.contains(&a) && c.contains(&b))
    }
}

/// A set of lattice tetrahedra, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    pub tetrahedra: Vec<[LatticePoint3; 4]>,
}

impl Triangulation {
    pub fn new(tets: impl IntoIterator<Item = [LatticePoint3; 4]>) -> Self {
        let mut tetrahedra: Vec<[LatticePoint3; 4]> = tets
            .into_iter()
            .map(|mut t| {
                t.sort();
                t
            })
            .collect();
        tetrahedra.sort();
        tetrahedra.dedup();
        Self { tetrahedra }
    }

    pub fn len(&self) -> usize {
        self.tetrahedra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tetrahedra.is_empty()
    }

    pub fn has_edge(&self, a: LatticePoint3, b: LatticePoint3) -> bool {
        self.tetrahedra.iter().any(|t| t.contains(&a) && t.contains(&b))
    }
}

impl From<&Subdivision> for Option<Triangulation> {
    fn from(s: &Subdivision) -> Self {
        s.tetrahedra().map(Triangulation::new)
    }
}

/// Integer form of a lifting: `h_a = L·α(a)` for the lcm `L` of the denominators.
struct ScaledLifting {
    points: Vec<LatticePoint3>,
    heights: Vec<i128>,
}

const HEIGHT_LIMIT: i128 = 1 << 60;
const COORD_LIMIT: i64 = 1 << 12;

impl ScaledLifting {
    fn new(lift: &Lifting) -> Result<Self> {
        let mut l = BigInt::from(1);
        for v in lift.values.values() {
            l = l.lcm(v.denom());
        }
        let mut points = Vec::with_capacity(lift.values.len());
        let mut heights = Vec::with_capacity(lift.values.len());
        for (p, v) in &lift.values {
            if p.coords().iter().any(|c| c.abs() > COORD_LIMIT) {
                return Err(Error::Overflow);
            }
            let h = (v.numer() * (&l / v.denom())).to_i128().ok_or(Error::Overflow)?;
            if h.abs() > HEIGHT_LIMIT {
                return Err(Error::Overflow);
            }
            points.push(*p);
            heights.push(h);
        }
        Ok(Self { points, heights })
    }

    /// For affinely independent `idx`, returns `(D, N, v)` with `D > 0` such
    /// that the dual point is `N/D` and `D·(h_b + ⟨b, N/D⟩)` ranks all points.
    fn dual(&self, idx: [usize; 4]) -> Option<(i128, [i128; 3])> {
        let p0 = self.points[idx[0]];
        let rows: [IVec3; 3] = [1, 2, 3].map(|k| self.points[idx[k]].minus(p0));
        let r: [i128; 3] = [1, 2, 3].map(|k| self.heights[idx[0]] - self.heights[idx[k]]);
        let m = rows.map(|row| row.map(|c| c as i128));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det == 0 {
            return None;
        }
        // adjugate: columns are cross products of rows
        let c = |a: [i128; 3], b: [i128; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let a0 = c(m[1], m[2]);
        let a1 = c(m[2], m[0]);
        let a2 = c(m[0], m[1]);
        let mut n = [0i128; 3];
        for k in 0..3 {
            n[k] = a0[k] * r[0] + a1[k] * r[1] + a2[k] * r[2];
        }
        if det < 0 {
            Some((-det, n.map(|x| -x)))
        } else {
            Some((det, n))
        }
    }

    fn score(&self, i: usize, d: i128, n: [i128; 3]) -> i128 {
        let p = self.points[i];
        self.heights[i] * d + p.x as i128 * n[0] + p.y as i128 * n[1] + p.z as i128 * n[2]
    }

    /// Argmax set at the dual point of `idx`, or `None` if some point beats the
    /// four defining points.
    fn argmax_at(&self, idx: [usize; 4]) -> Option<Vec<usize>> {
        let (d, n) = self.dual(idx)?;
        let top = self.score(idx[0], d, n);
        let mut ties = Vec::new();
        for i in 0..self.points.len() {
            let s = self.score(i, d, n);
            if s > top {
                return None;
            }
            if s == top {
                ties.push(i);
            }
        }
        Some(ties)
    }
}

fn four_subsets(n: usize) -> impl ParallelIterator<Item = [usize; 4]> {
    (0..n).into_par_iter().flat_map_iter(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

/// Maximal cells of the regular subdivision induced by `lift`: the argmax
/// sets at every point where four affinely independent terms tie on top.
pub fn induce(lift: &Lifting) -> Result<Subdivision> {
    let support = lift.support();
    if affine_dim(&support) < 3 {
        return Err(Error::DegenerateSupport);
    }
    let scaled = ScaledLifting::new(lift)?;
    let n = scaled.points.len();
    let found: BTreeSet<Vec<usize>> = four_subsets(n)
        .filter_map(|idx| {
            let ties = scaled.argmax_at(idx)?;
            // only report a cell from its lexicographically first spanning subset
            (ties.len() == 4 || first_spanning_subset(&scaled.points, &ties) == idx).then_some(ties)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut cells: Vec<Vec<LatticePoint3>> = found
        .into_iter()
        .map(|ix| ix.into_iter().map(|i| scaled.points[i]).collect())
        .collect();
    cells.sort();
    Ok(Subdivision { cells, lifting: Some(lift.clone()) })
}

fn first_spanning_subset(points: &[LatticePoint3], ties: &[usize]) -> [usize; 4] {
    let k = ties.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let idx = [ties[a], ties[b], ties[c], ties[d]];
                    if det_tetra(&idx.map(|i| points[i])) != 0 {
                        return idx;
                    }
                }
            }
        }
    }
    unreachable!("argmax set of a dual vertex spans R^3")
}

pub fn induce_polynomial(f: &TropicalPolynomial) -> Result<Subdivision> {
    induce(&Lifting::of(f))
}

/// Dual point of a cell: the unique `x` where `α(a) + ⟨a, x⟩` agrees on the
/// cell's (affinely spanning) points.
pub fn dual_point(lift: &Lifting, cell: &[LatticePoint3]) -> Result<QPoint3> {
    let idx = first_spanning_subset(cell, &(0..cell.len()).collect::<Vec<_>>());
    let pts = idx.map(|i| cell[i]);
    let val = |p: LatticePoint3| lift.get(p).cloned().ok_or_else(|| Error::Invalid(format!("{p} not in support")));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 1..4 {
        let d = pts[k].minus(pts[0]);
        rows.push(d.iter().map(|&c| crate::lattice::int(c)).collect());
        rhs.push(val(pts[0])? - val(pts[k])?);
    }
    match crate::lattice::solve_linear(rows, rhs) {
        crate::lattice::LinSolution::Unique(x) => Ok(QPoint3::new(x[0].clone(), x[1].clone(), x[2].clone())),
        _ => Err(Error::DegenerateSimplex),
    }
}

/// Separating-axis test: do the convex hulls of two full-dimensional point
/// sets have disjoint interiors?
pub fn interiors_disjoint(a: &[LatticePoint3], b: &[LatticePoint3]) -> bool {
    let mut axes: Vec<IVec3> = Vec::new();
    let face_normals = |s: &[LatticePoint3], out: &mut Vec<IVec3>| {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                for k in j + 1..s.len() {
                    let n = cross(s[j].minus(s[i]), s[k].minus(s[i]));
                    if !is_zero_vec(n) {
                        out.push(n);
                    }
                }
            }
        }
    };
    face_normals(a, &mut axes);
    face_normals(b, &mut axes);
    let edges = |s: &[LatticePoint3]| {
        let mut e = Vec::new();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                e.push(s[j].minus(s[i]));
            }
        }
        e
    };
    let (ea, eb) = (edges(a), edges(b));
    for u in &ea {
        for v in &eb {
            let n = cross(*u, *v);
            if !is_zero_vec(n) {
                axes.push(n);
            }
        }
    }
    axes.iter().any(|&n| {
        let range = |s: &[LatticePoint3]| {
            let vals = s.iter().map(|p| dot(n, p.coords()));
            let (mut lo, mut hi) = (i64::MAX, i64::MIN);
            for v in vals {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        };
        let (alo, ahi) = range(a);
        let (blo, bhi) = range(b);
        ahi <= blo || bhi <= alo
    })
}

/// Checks that the tetrahedra are non-degenerate, use only support points,
/// have pairwise disjoint interiors, and fill the hull of the support.
pub fn check_tiling(support: &[LatticePoint3], tets: &[[LatticePoint3; 4]]) -> Result<()> {
    let sup: BTreeSet<_> = support.iter().copied().collect();
    let hull = Hull::new(support)?;
    let mut total = 0i64;
    for t in tets {
        if let Some(p) = t.iter().find(|p| !sup.contains(p)) {
            return Err(Error::NotATiling(format!("vertex {p} not in support")));
        }
        let d = det_tetra(t).abs();
        if d == 0 {
            return Err(Error::NotATiling("degenerate tetrahedron".into()));
        }
        total += d;
    }
    if total != hull.volume6() {
        return Err(Error::NotATiling(format!(
            "volumes sum to {}, hull volume is {}",
            frac(total, 6),
            hull.volume()
        )));
    }
    let overlap = (0..tets.len()).into_par_iter().find_map_any(|i| {
        (i + 1..tets.len()).find(|&j| !interiors_disjoint(&tets[i], &tets[j])).map(|j| (i, j))
    });
    if let Some((i, j)) = overlap {
        return Err(Error::NotATiling(format!("tetrahedra {i} and {j} overlap")));
    }
    Ok(())
}

/// Strict dominance: over each cell, the affine extension of the lifting lies
/// strictly above the lifting at every support point outside the cell.
pub fn check_dominance(lift: &Lifting, cells: &[Vec<LatticePoint3>]) -> Result<bool> {
    let scaled = ScaledLifting::new(lift)?;
    let index: BTreeMap<LatticePoint3, usize> =
        scaled.points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    cells
        .par_iter()
        .map(|cell| {
            let ids = cell
                .iter()
                .map(|p| index.get(p).copied().ok_or_else(|| Error::NotATiling(format!("vertex {p} not in support"))))
                .collect::<Result<Vec<_>>>()?;
            let idx = first_spanning_subset(&scaled.points, &ids);
            let Some(ties) = scaled.argmax_at(idx) else { return Ok(false) };
            let mut want = ids.clone();
            want.sort();
            Ok(ties == want)
        })
        .try_reduce(|| true, |a, b| Ok(a && b))
}

/// Regularity certificate for a triangulation: it must tile the hull of the
/// support (otherwise an error), and the lifting must strictly dominate.
pub fn verify_regular(lift: &Lifting, t: &Triangulation) -> Result<bool> {
    check_tiling(&lift.support(), &t.tetrahedra)?;
    let cells: Vec<Vec<LatticePoint3>> = t.tetrahedra.iter().map(|c| c.to_vec()).collect();
    check_dominance(lift, &cells)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub cell_count: usize,
    pub min_vol: Rat,
    pub max_vol: Rat,
}

/// Smooth iff the induced subdivision of the simplex of degree `δ` is an
/// elementary triangulation.
pub fn smoothness_check(f: &TropicalPolynomial) -> Result<SmoothnessReport> {
    let (_, rep) = smoothness_with_subdivision(f)?;
    Ok(rep)
}

pub fn smoothness_with_subdivision(f: &TropicalPolynomial) -> Result<(Subdivision, SmoothnessReport)> {
    if !f.has_full_simplex_newton_polytope() {
        return Err(Error::WrongDegreeShape(f.degree()));
    }
    let sub = induce_polynomial(f)?;
    let vols: Vec<i64> = sub
        .cells
        .iter()
        .map(|c| if c.len() == 4 { det_tetra(&[c[0], c[1], c[2], c[3]]).abs() } else { Hull::new(c).map(|h| h.volume6()).unwrap_or(0) })
        .collect();
    let smooth = sub.cells.iter().zip(&vols).all(|(c, v)| c.len() == 4 && *v == 1);
    let rep = SmoothnessReport {
        smooth,
        cell_count: sub.cells.len(),
        min_vol: frac(*vols.iter().min().unwrap_or(&0), 6),
        max_vol: frac(*vols.iter().max().unwrap_or(&0), 6),
    };
    Ok((sub, rep))
}

/// Unimodular tetrahedra on the ten lattice points of the simplex of degree two.
pub fn elementary_catalogue_gamma2() -> Vec<[LatticePoint3; 4]> {
    let pts = gamma_points(2);
    let n = pts.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let t = [pts[a], pts[b], pts[c], pts[d]];
                    if det_tetra(&t).abs() == 1 {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

fn on_boundary_gamma(tri: &[LatticePoint3; 3], delta: i64) -> bool {
    let all = |f: &dyn Fn(&LatticePoint3) -> bool| tri.iter().all(f);
    all(&|p| p.x == 0) || all(&|p| p.y == 0) || all(&|p| p.z == 0) || all(&|p| p.total() == delta)
}

fn faces(t: &[LatticePoint3; 4]) -> [([LatticePoint3; 3], LatticePoint3); 4] {
    [
        ([t[1], t[2], t[3]], t[0]),
        ([t[0], t[2], t[3]], t[1]),
        ([t[0], t[1], t[3]], t[2]),
        ([t[0], t[1], t[2]], t[3]),
    ]
}

fn side(tri: &[LatticePoint3; 3], p: LatticePoint3) -> i64 {
    det_tetra(&[tri[0], tri[1], tri[2], p]).signum()
}

/// All elementary triangulations of the simplex of degree two.
///
/// Every triangulation has exactly one tetrahedron containing a fixed generic
/// interior point; starting there, the tetrahedron across the first
/// unmatched interior face is forced by the triangulation, so the search
/// meets each triangulation exactly once.
pub fn enumerate_elementary_gamma2() -> Vec<Triangulation> {
    let cat = elementary_catalogue_gamma2();
    let n = cat.len();
    let compat: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| i != j && interiors_disjoint(&cat[i], &cat[j])).collect())
        .collect();
    let probe = QPoint3::new(frac(31, 100), frac(27, 100), frac(23, 100));
    let starts: Vec<usize> = (0..n)
        .filter(|&i| {
            crate::lattice::affine_coords(&cat[i], &probe)
                .is_some_and(|c| c.iter().all(|x| *x > Rat::zero()))
        })
        .collect();
    let mut out: Vec<Triangulation> = starts
        .par_iter()
        .flat_map_iter(|&s| {
            let mut found = Vec::new();
            let mut chosen = vec![s];
            extend_gamma2(&cat, &compat, &mut chosen, &mut found);
            found
        })
        .collect();
    out.sort();
    out
}

fn extend_gamma2(
    cat: &[[LatticePoint3; 4]],
    compat: &[Vec<bool>],
    chosen: &mut Vec<usize>,
    found: &mut Vec<Triangulation>,
) {
    // first interior face not shared by two chosen tetrahedra
    let mut open: Option<([LatticePoint3; 3], LatticePoint3)> = None;
    'search: for &c in chosen.iter() {
        for (tri, opp) in faces(&cat[c]) {
            if on_boundary_gamma(&tri, 2) {
                continue;
            }
            let shared = chosen
                .iter()
                .filter(|&&o| o != c)
                .any(|&o| tri.iter().all(|p| cat[o].contains(p)));
            if !shared {
                open = Some((tri, opp));
                break 'search;
            }
        }
    }
    let Some((tri, opp)) = open else {
        if chosen.len() == 8 {
            found.push(Triangulation::new(chosen.iter().map(|&i| cat[i])));
        }
        return;
    };
    let opp_side = side(&tri, opp);
    for k in 0..cat.len() {
        if chosen.contains(&k) || !tri.iter().all(|p| cat[k].contains(p)) {
            continue;
        }
        let apex = *cat[k].iter().find(|p| !tri.contains(p)).expect("tetrahedron has four vertices");
        if side(&tri, apex) == opp_side || !chosen.iter().all(|&c| compat[c][k]) {
            continue;
        }
        chosen.push(k);
        extend_gamma2(cat, compat, chosen, found);
        chosen.pop();
    }
}

/// The three lattice diagonals of the simplex of degree two.
pub fn gamma2_diagonals() -> [(LatticePoint3, LatticePoint3); 3] {
    [
        (LatticePoint3::new(1, 0, 0), LatticePoint3::new(0, 1, 1)),
        (LatticePoint3::new(1, 0, 1), LatticePoint3::new(0, 1, 0)),
        (LatticePoint3::new(0, 0, 1), LatticePoint3::new(1, 1, 0)),
    ]
}

pub fn triangulation_to_json(delta: u32, lift: Option<&Lifting>, cells: &[Vec<LatticePoint3>]) -> Value {
    let lifting: Vec<Value> = lift
        .map(|l| {
            l.values
                .iter()
                .map(|(p, v)| json!([p.x, p.y, p.z, rat_to_string(v)]))
                .collect()
        })
        .unwrap_or_default();
    let mut sorted: Vec<Vec<LatticePoint3>> = cells
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort();
            c
        })
        .collect();
    sorted.sort();
    let cells: Vec<Value> = sorted
        .iter()
        .map(|c| Value::Array(c.iter().map(|p| json!([p.x, p.y, p.z])).collect()))
        .collect();
    json!({ "delta": delta, "lifting": lifting, "cells": cells })
}

/// Parses the triangulation JSON layout back into degree, lifting and cells.
pub fn triangulation_from_json(v: &Value) -> Result<(u32, Lifting, Vec<Vec<LatticePoint3>>)> {
    let bad = |m: &str| Error::Invalid(format!("triangulation JSON: {m}"));
    let delta = v.get("delta").and_then(Value::as_u64).ok_or_else(|| bad("missing delta"))? as u32;
    let mut values = BTreeMap::new();
    for e in v.get("lifting").and_then(Value::as_array).ok_or_else(|| bad("missing lifting"))? {
        let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("lifting entry"))?;
        let c: Vec<i64> = a[..3].iter().map(|x| x.as_i64().ok_or_else(|| bad("coordinate"))).collect::<Result<_>>()?;
        let r = match &a[3] {
            Value::String(s) => parse_rat(s),
            Value::Number(n) => n.as_i64().map(crate::lattice::int),
            _ => None,
        }
        .ok_or_else(|| bad("lifting value"))?;
        values.insert(LatticePoint3::new(c[0], c[1], c[2]), r);
    }
    let mut cells = Vec::new();
    for c in v.get("cells").and_then(Value::as_array).ok_or_else(|| bad("missing cells"))? {
        let pts = c
            .as_array()
            .ok_or_else(|| bad("cell"))?
            .iter()
            .map(|p| serde_json::from_value::<LatticePoint3>(p.clone()).map_err(|e| bad(&e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        cells.push(pts);
    }
    Ok((delta, Lifting::new(values), cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gamma_vertices, int, Perm4};
    use proptest::prelude::*;

    const G3: &str = "-22x^3+16x^2y-10x^2z+0xy^2+0xz^2+8xyz-23y^3-12y^2z-5yz^2+0z^3-14x^2+14xy-3xz-6y^2+4yz+0z^2-8x+6y-z-3";

    fn lp(x: i64, y: i64, z: i64) -> LatticePoint3 {
        LatticePoint3::new(x, y, z)
    }

    #[test]
    fn trivial_simplex() {
        let s = induce(&Lifting::zero(&gamma_vertices(1))).unwrap();
        let mut g = gamma_vertices(1).to_vec();
        g.sort();
        assert_eq!(s.cells, vec![g]);
        let t = Triangulation::new([gamma_vertices(1)]);
        assert!(verify_regular(&Lifting::zero(&gamma_vertices(1)), &t).unwrap());
    }

    #[test]
    fn flat_pyramid_is_one_cell() {
        let pts = [lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(1, 1, 0), lp(0, 0, 1)];
        let s = induce(&Lifting::zero(&pts)).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].len(), 5);
    }

    #[test]
    fn degenerate_support() {
        let pts = [lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(1, 1, 0)];
        assert_eq!(induce(&Lifting::zero(&pts)), Err(Error::DegenerateSupport));
    }

    #[test]
    fn cubic_example_is_smooth_with_special_cell() {
        let f = TropicalPolynomial::parse(G3).unwrap();
        let (sub, rep) = smoothness_with_subdivision(&f).unwrap();
        assert!(rep.smooth);
        assert_eq!(rep.cell_count, 27);
        assert_eq!(rep.min_vol, frac(1, 6));
        assert!(sub.contains_cell(&[lp(0, 0, 0), lp(0, 0, 1), lp(2, 1, 0), lp(1, 0, 2)]));
        let lift = Lifting::of(&f);
        let t = Triangulation::new(sub.tetrahedra().unwrap());
        assert!(verify_regular(&lift, &t).unwrap());
        let dual = dual_point(&lift, &[lp(0, 0, 0), lp(0, 0, 1), lp(2, 1, 0), lp(1, 0, 2)]).unwrap();
        assert_eq!(dual, QPoint3::from_ints(1, -21, -2));
    }

    #[test]
    fn flat_lifting_not_smooth() {
        let f = TropicalPolynomial::from_terms(gamma_points(2).into_iter().map(|p| (p, int(0)))).unwrap();
        let rep = smoothness_check(&f).unwrap();
        assert!(!rep.smooth);
        assert_eq!(rep.cell_count, 1);
        assert_eq!(rep.max_vol, frac(8, 6));
        let g = TropicalPolynomial::parse("x^2 + y + 0").unwrap();
        assert_eq!(smoothness_check(&g), Err(Error::WrongDegreeShape(2)));
    }

    #[test]
    fn raised_point_breaks_regularity() {
        let f = TropicalPolynomial::parse(G3).unwrap();
        let sub = induce_polynomial(&f).unwrap();
        let t = Triangulation::new(sub.tetrahedra().unwrap());
        let mut lift = Lifting::of(&f);
        // lift an interior-edge point far above its neighbours
        *lift.values.get_mut(&lp(1, 1, 1)).unwrap() += int(1000);
        assert_eq!(verify_regular(&lift, &t), Ok(false));
        // the big simplex itself does not tile with an extra overlapping copy
        let mut bad = t.tetrahedra.clone();
        bad.push(t.tetrahedra[0]);
        let bad = Triangulation { tetrahedra: bad };
        assert!(matches!(verify_regular(&Lifting::of(&f), &bad), Err(Error::NotATiling(_))));
    }

    #[test]
    fn overlapping_but_volume_correct_is_rejected() {
        // corner tetrahedra of one five-piece cube split with the central
        // tetrahedron of the other: right total volume, but overlapping
        let c: Vec<_> = (0..8).map(|i| lp(i & 1, (i >> 1) & 1, (i >> 2) & 1)).collect();
        let good = vec![[c[1], c[0], c[3], c[5]], [c[2], c[0], c[3], c[6]], [c[4], c[0], c[5], c[6]], [c[7], c[3], c[5], c[6]], [c[0], c[3], c[5], c[6]]];
        assert!(check_tiling(&c, &good).is_ok());
        let mut tets = good.clone();
        tets[4] = [c[1], c[2], c[4], c[7]];
        assert!(check_tiling(&c, &tets).is_err());
    }

    #[test]
    fn gamma2_enumeration_matches_clique_oracle() {
        let tris = enumerate_elementary_gamma2();
        // oracle: every 8-clique of pairwise interior-disjoint unimodular tetrahedra
        let cat = elementary_catalogue_gamma2();
        let n = cat.len();
        assert!(n <= 128);
        let mut adj = vec![0u128; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && interiors_disjoint(&cat[i], &cat[j]) {
                    adj[i] |= 1 << j;
                }
            }
        }
        fn cliques(adj: &[u128], cand: u128, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            let mut c = cand;
            while c != 0 {
                let i = c.trailing_zeros() as usize;
                c &= c - 1;
                cur.push(i);
                cliques(adj, c & adj[i], size, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        cliques(&adj, (1u128 << n) - 1, 8, &mut Vec::new(), &mut out);
        // a clique is a dissection; triangulations are the face-to-face ones
        let face_to_face = |t: &Triangulation| {
            t.tetrahedra.iter().all(|tet| {
                faces(tet).iter().all(|(tri, _)| {
                    on_boundary_gamma(tri, 2)
                        || t.tetrahedra.iter().filter(|o| tri.iter().all(|p| o.contains(p))).count() == 2
                })
            })
        };
        let mut oracle: Vec<Triangulation> = out
            .into_iter()
            .map(|ix| Triangulation::new(ix.into_iter().map(|i| cat[i])))
            .filter(face_to_face)
            .collect();
        oracle.sort();
        assert_eq!(tris, oracle);
        for t in &tris {
            assert_eq!(t.len(), 8);
            let diag = gamma2_diagonals().iter().filter(|(a, b)| t.has_edge(*a, *b)).count();
            assert_eq!(diag, 1);
        }
        assert_eq!(tris.len(), GAMMA2_TRIANGULATION_COUNT);
    }

    /// Regression value from the exhaustive search.
    const GAMMA2_TRIANGULATION_COUNT: usize = 192;

    #[test]
    fn json_round_trip() {
        let f = TropicalPolynomial::parse(G3).unwrap();
        let sub = induce_polynomial(&f).unwrap();
        let v = triangulation_to_json(3, sub.lifting.as_ref(), &sub.cells);
        let (d, l, cells) = triangulation_from_json(&v).unwrap();
        assert_eq!(d, 3);
        assert_eq!(&l, sub.lifting.as_ref().unwrap());
        assert_eq!(cells, sub.cells);
    }

    fn arb_lifting(delta: u32) -> impl Strategy<Value = Lifting> {
        let pts = gamma_points(delta);
        prop::collection::vec(-40i64..40, pts.len())
            .prop_map(move |v| Lifting::new(pts.iter().copied().zip(v.into_iter().map(int)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn volumes_sum_to_hull(l in arb_lifting(3)) {
            let s = induce(&l).unwrap();
            let total: i64 = s.cells.iter().map(|c| Hull::new(c).unwrap().volume6()).sum();
            prop_assert_eq!(total, 27);
        }

        #[test]
        fn affine_shift_invariance(l in arb_lifting(2), c in -9i64..9, a in prop::array::uniform3(-9i64..9)) {
            let shifted = Lifting::new(l.values.iter().map(|(p, v)| (*p, v + int(c + dot(a, p.coords())))).collect());
            prop_assert_eq!(induce(&l).unwrap().cells, induce(&shifted).unwrap().cells);
        }

        #[test]
        fn regular_iff_induced(l in arb_lifting(2)) {
            let s = induce(&l).unwrap();
            if let Some(tets) = s.tetrahedra() {
                prop_assert!(verify_regular(&l, &Triangulation::new(tets)).unwrap());
            }
            // any other elementary triangulation fails the certificate
            for t in enumerate_elementary_gamma2().into_iter().take(40) {
                let same = s.tetrahedra().map(Triangulation::new).as_ref() == Some(&t);
                prop_assert_eq!(verify_regular(&l, &t).unwrap(), same);
            }
        }

        #[test]
        fn s4_equivariance(l in arb_lifting(2), i in 0usize..24) {
            let sigma = Perm4::all()[i];
            let f = l.to_polynomial().unwrap();
            let g = f.s4_action(sigma);
            let mut mapped: Vec<Vec<LatticePoint3>> = induce_polynomial(&f).unwrap().cells.iter().map(|c| {
                let mut m: Vec<_> = c.iter().map(|p| sigma.act_on_point(*p, 2)).collect();
                m.sort();
                m
            }).collect();
            mapped.sort();
            prop_assert_eq!(induce_polynomial(&g).unwrap().cells, mapped);
        }
    }
}
