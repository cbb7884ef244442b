//! Constructive regular elementary (RE) triangulations with explicit liftings:
//! joins, gluings along common facets, prism layers, facet extensions, filling
//! truncated simplices, and surfaces carrying a two-point family of lines.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{
    affine_coords, affine_dim, convex_polygon_order, cross, det3, det_tetra, dot, gamma_points, int, is_zero_vec,
    primitive, solve_linear, Hull, IVec3, LatticePoint3, LinSolution, Rat,
};
use crate::poly::TropicalPolynomial;
use crate::subdivision::{triangulation_to_json, verify_regular, Lifting, Triangulation};

type LP = LatticePoint3;

/// A triangulation of a lattice polytope of dimension 0 to 3 together with a
/// lifting on all of its lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedTriangulation {
    pub dim: usize,
    /// Maximal cells, each a sorted list of `dim + 1` vertices; kept sorted.
    pub cells: Vec<Vec<LP>>,
    pub lifting: BTreeMap<LP, Rat>,
    /// Bending parameters used by the gluings, in order.
    pub lambdas: Vec<Rat>,
}

fn sorted(mut v: Vec<LP>) -> Vec<LP> {
    v.sort();
    v
}

fn gcd3(v: IVec3) -> i64 {
    use num_integer::Integer;
    v[0].gcd(&v[1]).gcd(&v[2])
}

fn neg(v: IVec3) -> IVec3 {
    [-v[0], -v[1], -v[2]]
}

impl LiftedTriangulation {
    fn from_parts(dim: usize, cells: Vec<Vec<LP>>, lifting: BTreeMap<LP, Rat>) -> Self {
        let mut cells: Vec<Vec<LP>> = cells.into_iter().map(sorted).collect();
        cells.sort();
        cells.dedup();
        Self { dim, cells, lifting, lambdas: Vec::new() }
    }

    pub fn point(p: LP, value: Rat) -> Self {
        Self::from_parts(0, vec![vec![p]], BTreeMap::from([(p, value)]))
    }

    pub fn points(&self) -> Vec<LP> {
        self.lifting.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn lifting(&self) -> Lifting {
        Lifting::new(self.lifting.clone())
    }

    /// The tetrahedra; `None` below dimension 3.
    pub fn triangulation(&self) -> Option<Triangulation> {
        (self.dim == 3).then(|| Triangulation::new(self.cells.iter().map(|c| [c[0], c[1], c[2], c[3]])))
    }

    pub fn volume6(&self) -> i64 {
        self.cells.iter().map(|c| det_tetra(&[c[0], c[1], c[2], c[3]]).abs()).sum()
    }

    /// Faces of maximal cells spanned by vertices in `pts` of the given dimension.
    pub fn face_cells(&self, pts: &BTreeSet<LP>, dim: usize) -> BTreeSet<Vec<LP>> {
        self.cells
            .iter()
            .map(|c| c.iter().copied().filter(|p| pts.contains(p)).collect::<Vec<_>>())
            .filter(|f| f.len() == dim + 1 && affine_dim(f) == dim as isize)
            .collect()
    }

    /// Restriction to the lattice points in `pts`, which must span a face.
    pub fn restrict(&self, pts: &BTreeSet<LP>) -> Result<LiftedTriangulation> {
        let own: Vec<LP> = pts.iter().copied().filter(|p| self.lifting.contains_key(p)).collect();
        let dim = affine_dim(&own);
        if dim < 0 {
            return Err(Error::Invalid("empty restriction".into()));
        }
        let dim = dim as usize;
        let lifting = own.iter().map(|p| (*p, self.lifting[p].clone())).collect();
        Ok(Self::from_parts(dim, self.face_cells(pts, dim).into_iter().collect(), lifting))
    }

    pub fn shifted(&self, v: IVec3) -> LiftedTriangulation {
        self.mapped(&Frame::translation(v))
    }

    pub fn mapped(&self, f: &Frame) -> LiftedTriangulation {
        let cells = self.cells.iter().map(|c| c.iter().map(|&p| f.map(p)).collect()).collect();
        let lifting = self.lifting.iter().map(|(p, v)| (f.map(*p), v.clone())).collect();
        LiftedTriangulation { lambdas: self.lambdas.clone(), ..Self::from_parts(self.dim, cells, lifting) }
    }

    /// Adds the affine function `c + ⟨w, p⟩` to the lifting.
    pub fn add_affine(&self, c: &Rat, w: &[Rat; 3]) -> LiftedTriangulation {
        let mut out = self.clone();
        for (p, v) in out.lifting.iter_mut() {
            *v += affine_at(c, w, *p);
        }
        out
    }

    /// Checks that every cell is unimodular, that the cells tile the hull of
    /// the points, and that the lifting induces exactly these cells.
    pub fn verify(&self) -> Result<()> {
        let pts = self.points();
        if affine_dim(&pts) != self.dim as isize {
            return Err(Error::Invalid(format!("points span dimension {} not {}", affine_dim(&pts), self.dim)));
        }
        for c in &self.cells {
            if c.len() != self.dim + 1 || !is_unimodular(c) {
                return Err(Error::NotATiling(format!("cell {c:?} is not unimodular")));
            }
        }
        match self.dim {
            0 => Ok(()),
            3 => {
                let t = self.triangulation().expect("dimension 3");
                if verify_regular(&self.lifting(), &t)? {
                    Ok(())
                } else {
                    Err(Error::NotATiling("lifting does not induce the triangulation".into()))
                }
            }
            _ => {
                if measure(&pts, self.dim) != self.cells.iter().map(|c| cell_measure(c)).sum::<i64>() {
                    return Err(Error::NotATiling("cells do not cover the hull".into()));
                }
                if self.cells.iter().all(|c| dominates(&self.lifting, c)) {
                    Ok(())
                } else {
                    Err(Error::NotATiling("lifting does not induce the triangulation".into()))
                }
            }
        }
    }

    pub fn to_json(&self, delta: u32) -> Value {
        triangulation_to_json(delta, Some(&self.lifting()), &self.cells)
    }
}

fn affine_at(c: &Rat, w: &[Rat; 3], p: LP) -> Rat {
    c + &w[0] * int(p.x) + &w[1] * int(p.y) + &w[2] * int(p.z)
}

fn is_unimodular(c: &[LP]) -> bool {
    match c.len() {
        1 => true,
        2 => gcd3(c[1].minus(c[0])) == 1,
        3 => gcd3(cross(c[1].minus(c[0]), c[2].minus(c[0]))) == 1,
        4 => det_tetra(&[c[0], c[1], c[2], c[3]]).abs() == 1,
        _ => false,
    }
}

/// Lattice-normalized length or area of a cell.
fn cell_measure(c: &[LP]) -> i64 {
    match c.len() {
        2 => gcd3(c[1].minus(c[0])),
        3 => gcd3(cross(c[1].minus(c[0]), c[2].minus(c[0]))),
        _ => 0,
    }
}

/// Normalized measure of the hull of collinear or coplanar points.
fn measure(pts: &[LP], dim: usize) -> i64 {
    match dim {
        1 => {
            let d = primitive(pts.iter().map(|p| p.minus(pts[0])).find(|v| !is_zero_vec(*v)).unwrap_or([0; 3]));
            let ts: Vec<i64> = pts.iter().map(|p| dot(p.minus(pts[0]), d)).collect();
            (ts.iter().max().unwrap() - ts.iter().min().unwrap()) / dot(d, d)
        }
        2 => {
            let n = plane_normal(pts).expect("coplanar points span a plane");
            let poly = convex_polygon_order(pts, n);
            let mut total = 0;
            for k in 1..poly.len().saturating_sub(1) {
                total += dot(cross(poly[k].minus(poly[0]), poly[k + 1].minus(poly[0])), n).abs();
            }
            total / dot(n, n)
        }
        _ => 0,
    }
}

fn plane_normal(pts: &[LP]) -> Option<IVec3> {
    for i in 1..pts.len() {
        for j in i + 1..pts.len() {
            let n = cross(pts[i].minus(pts[0]), pts[j].minus(pts[0]));
            if !is_zero_vec(n) {
                return Some(primitive(n));
            }
        }
    }
    None
}

/// Strict dominance of the cell's affine interpolant over all other points.
fn dominates(lift: &BTreeMap<LP, Rat>, cell: &[LP]) -> bool {
    lift.iter().filter(|(p, _)| !cell.contains(p)).all(|(p, v)| match affine_coords(cell, &p.to_q()) {
        Some(bary) => {
            let phi = bary.iter().zip(cell).fold(Rat::zero(), |acc, (b, c)| acc + b * &lift[c]);
            *v < phi
        }
        None => false,
    })
}

/// The regular subdivision induced by `values` on a point set of dimension
/// at most 3; fails unless it is a unimodular triangulation.
pub fn induced(values: BTreeMap<LP, Rat>) -> Result<LiftedTriangulation> {
    let pts: Vec<LP> = values.keys().copied().collect();
    let dim = affine_dim(&pts);
    if dim < 0 {
        return Err(Error::Invalid("no points".into()));
    }
    let dim = dim as usize;
    let cells: Vec<Vec<LP>> = match dim {
        0 => vec![pts.clone()],
        3 => {
            let sub = crate::subdivision::induce(&Lifting::new(values.clone()))?;
            sub.cells
        }
        _ => {
            let n = pts.len();
            let mut out = Vec::new();
            let mut subsets: Vec<Vec<usize>> = Vec::new();
            if dim == 1 {
                for i in 0..n {
                    for j in i + 1..n {
                        subsets.push(vec![i, j]);
                    }
                }
            } else {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            subsets.push(vec![i, j, k]);
                        }
                    }
                }
            }
            for s in subsets {
                let cell: Vec<LP> = s.iter().map(|&i| pts[i]).collect();
                if affine_dim(&cell) != dim as isize {
                    continue;
                }
                let mut tie = false;
                let mut ok = true;
                for (p, v) in &values {
                    if cell.contains(p) {
                        continue;
                    }
                    let bary = affine_coords(&cell, &p.to_q()).ok_or(Error::DegenerateSupport)?;
                    let phi = bary.iter().zip(&cell).fold(Rat::zero(), |acc, (b, c)| acc + b * &values[c]);
                    if *v > phi {
                        ok = false;
                        break;
                    }
                    tie |= *v == phi;
                }
                if ok && tie {
                    return Err(Error::NotATiling("lifting has ties; the induced subdivision is not simplicial".into()));
                }
                if ok {
                    out.push(cell);
                }
            }
            out
        }
    };
    let out = LiftedTriangulation::from_parts(dim, cells, values);
    out.verify()?;
    Ok(out)
}

/// Unimodular affine map `p ↦ origin + a·u + b·v + c·w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub origin: LP,
    pub axes: [IVec3; 3],
}

impl Frame {
    pub fn new(origin: LP, axes: [IVec3; 3]) -> Result<Self> {
        if det3(axes[0], axes[1], axes[2]).abs() != 1 {
            return Err(Error::Invalid("frame axes are not a lattice basis".into()));
        }
        Ok(Self { origin, axes })
    }

    pub fn translation(v: IVec3) -> Self {
        Self { origin: LP::new(v[0], v[1], v[2]), axes: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] }
    }

    pub fn map(&self, p: LP) -> LP {
        let [u, v, w] = self.axes;
        let c = |k: usize| p.x * u[k] + p.y * v[k] + p.z * w[k];
        self.origin.plus([c(0), c(1), c(2)])
    }

    pub fn inverse(&self) -> Frame {
        let [u, v, w] = self.axes;
        let d = det3(u, v, w);
        // rows of the inverse are the cross products divided by the determinant
        let r = [cross(v, w), cross(w, u), cross(u, v)].map(|r| [r[0] * d, r[1] * d, r[2] * d]);
        let axes = [[r[0][0], r[1][0], r[2][0]], [r[0][1], r[1][1], r[2][1]], [r[0][2], r[1][2], r[2][2]]];
        let lin = Frame { origin: LP::new(0, 0, 0), axes };
        let o = lin.map(self.origin);
        Frame { origin: LP::new(-o.x, -o.y, -o.z), axes }
    }
}

/// The segment from `a` to `b` in unit pieces, lifted by `−k²`.
pub fn segment_re(a: LP, b: LP) -> Result<LiftedTriangulation> {
    let d = b.minus(a);
    if is_zero_vec(d) {
        return Err(Error::Invalid("segment endpoints coincide".into()));
    }
    let n = gcd3(d);
    let u = [d[0] / n, d[1] / n, d[2] / n];
    let pts: Vec<LP> = (0..=n).map(|k| a.plus([u[0] * k, u[1] * k, u[2] * k])).collect();
    let cells = pts.windows(2).map(|w| w.to_vec()).collect();
    let lifting = pts.iter().enumerate().map(|(k, p)| (*p, int(-((k * k) as i64)))).collect();
    let out = LiftedTriangulation::from_parts(1, cells, lifting);
    out.verify()?;
    Ok(out)
}

/// The triangle `corner + {i·u + j·v : i, j ≥ 0, i + j ≤ d}` cut into `d²`
/// unit triangles, lifted by `−(i² + ij + j²)`.
pub fn triangle_re(d: u32, corner: LP, u: IVec3, v: IVec3) -> Result<LiftedTriangulation> {
    if d == 0 {
        return Err(Error::Invalid("triangle side must be positive".into()));
    }
    if gcd3(cross(u, v)) != 1 {
        return Err(Error::Invalid("triangle edge vectors are not a lattice basis of their plane".into()));
    }
    let d = d as i64;
    let at = |i: i64, j: i64| corner.plus([i * u[0] + j * v[0], i * u[1] + j * v[1], i * u[2] + j * v[2]]);
    let mut cells = Vec::new();
    let mut lifting = BTreeMap::new();
    for i in 0..=d {
        for j in 0..=d - i {
            lifting.insert(at(i, j), int(-(i * i + i * j + j * j)));
            if i + j < d {
                cells.push(vec![at(i, j), at(i + 1, j), at(i, j + 1)]);
            }
            if i + j < d - 1 {
                cells.push(vec![at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)]);
            }
        }
    }
    let out = LiftedTriangulation::from_parts(2, cells, lifting);
    out.verify()?;
    Ok(out)
}

/// Lattice points of a closed lattice triangle.
pub fn triangle_points(a: LP, b: LP, c: LP) -> Vec<LP> {
    let tri = [a, b, c];
    let lo = [0, 1, 2].map(|k| tri.iter().map(|p| p.coords()[k]).min().unwrap());
    let hi = [0, 1, 2].map(|k| tri.iter().map(|p| p.coords()[k]).max().unwrap());
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let p = LP::new(x, y, z);
                if let Some(bary) = affine_coords(&tri, &p.to_q()) {
                    if bary.iter().all(|t| !t.is_negative()) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

const NOISE: i64 = 1 << 10;

/// A seeded quadratic-plus-noise lifting: strictly concave with ties broken
/// at random.
fn noisy_quadratic(pts: &[LP], seed: u64, scale: i64) -> BTreeMap<LP, Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.iter()
        .map(|&p| {
            let q = p.x * p.x + p.y * p.y + p.z * p.z + p.x * p.y;
            (p, int(-scale * q + rng.gen_range(0..NOISE)))
        })
        .collect()
}

/// An RE-triangulation of an arbitrary lattice triangle, from a seeded
/// perturbation of a strictly concave quadratic.
pub fn planar_re(a: LP, b: LP, c: LP, seed: u64) -> Result<LiftedTriangulation> {
    let pts = triangle_points(a, b, c);
    if affine_dim(&pts) != 2 {
        return Err(Error::Invalid("triangle is degenerate".into()));
    }
    let mut last = None;
    for attempt in 0..64u64 {
        match induced(noisy_quadratic(&pts, seed.wrapping_add(attempt << 32), NOISE)) {
            Ok(t) => return Ok(t),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Join of two lifted triangulations of disjoint faces whose dimensions add
/// up to 2 and whose lattice points exhaust the hull of their union.
pub fn join(a: &LiftedTriangulation, b: &LiftedTriangulation) -> Result<LiftedTriangulation> {
    let pa: BTreeSet<LP> = a.lifting.keys().copied().collect();
    let pb: BTreeSet<LP> = b.lifting.keys().copied().collect();
    if !pa.is_disjoint(&pb) {
        return Err(Error::Join("faces share lattice points".into()));
    }
    if a.dim + b.dim != 2 {
        return Err(Error::Join(format!("face dimensions {} + {} do not add up to 2", a.dim, b.dim)));
    }
    let all: Vec<LP> = pa.union(&pb).copied().collect();
    let hull = Hull::new(&all).map_err(|_| Error::Join("faces lie in a common plane".into()))?;
    let inside: BTreeSet<LP> = hull.lattice_points().into_iter().collect();
    if inside != pa.union(&pb).copied().collect() {
        return Err(Error::Join("hull has lattice points outside the two faces".into()));
    }
    let mut cells = Vec::with_capacity(a.len() * b.len());
    for ca in &a.cells {
        for cb in &b.cells {
            cells.push(ca.iter().chain(cb).copied().collect());
        }
    }
    let mut lifting = a.lifting.clone();
    lifting.extend(b.lifting.clone());
    let out = LiftedTriangulation::from_parts(3, cells, lifting);
    out.verify().map_err(|e| Error::Join(e.to_string()))?;
    Ok(out)
}

/// Affine function matching `targets` on their points, preferring zero
/// coefficients in directions the points do not determine.
fn fit_affine(targets: &BTreeMap<LP, Rat>) -> Option<(Rat, [Rat; 3])> {
    let mut rows: Vec<Vec<Rat>> = targets.keys().map(|p| vec![int(1), int(p.x), int(p.y), int(p.z)]).collect();
    let mut rhs: Vec<Rat> = targets.values().cloned().collect();
    let mut pin = 1;
    loop {
        match solve_linear(rows.clone(), rhs.clone()) {
            LinSolution::Unique(s) | LinSolution::Underdetermined(s) if pin > 3 => {
                return Some((s[0].clone(), [s[1].clone(), s[2].clone(), s[3].clone()]))
            }
            LinSolution::Unique(s) => return Some((s[0].clone(), [s[1].clone(), s[2].clone(), s[3].clone()])),
            LinSolution::Inconsistent => return None,
            LinSolution::Underdetermined(_) => {
                let mut r = vec![int(0); 4];
                r[pin] = int(1);
                let mut trial = rows.clone();
                trial.push(r);
                let mut trial_rhs = rhs.clone();
                trial_rhs.push(int(0));
                if !matches!(solve_linear(trial.clone(), trial_rhs.clone()), LinSolution::Inconsistent) {
                    rows = trial;
                    rhs = trial_rhs;
                }
                pin += 1;
            }
        }
    }
}

/// Adds an affine function to `t` so that it agrees with `reference` on
/// their common points.
pub fn align_to(t: &LiftedTriangulation, reference: &BTreeMap<LP, Rat>) -> Result<LiftedTriangulation> {
    let diff: BTreeMap<LP, Rat> =
        t.lifting.iter().filter_map(|(p, v)| reference.get(p).map(|r| (*p, r - v))).collect();
    if diff.is_empty() {
        return Ok(t.clone());
    }
    let (c, w) = fit_affine(&diff).ok_or_else(|| Error::Glue("liftings differ by a non-affine function".into()))?;
    Ok(t.add_affine(&c, &w))
}

const MAX_DOUBLINGS: u32 = 48;

/// Common facet of two pieces as `⟨normal, p⟩ = offset`, oriented so that
/// the normal points into `b`.
fn separating_facet(a: &LiftedTriangulation, b: &LiftedTriangulation) -> Result<(IVec3, i64)> {
    if a.dim != 3 || b.dim != 3 {
        return Err(Error::Glue("both pieces must be three-dimensional".into()));
    }
    let common: Vec<LP> = a.lifting.keys().copied().filter(|p| b.lifting.contains_key(p)).collect();
    if affine_dim(&common) != 2 {
        return Err(Error::Glue("pieces do not meet in a facet".into()));
    }
    for p in &common {
        if a.lifting[p] != b.lifting[p] {
            return Err(Error::Glue(format!("liftings disagree at {p}")));
        }
    }
    let n = plane_normal(&common).expect("facet spans a plane");
    let off = dot(n, common[0].coords());
    let side = |t: &LiftedTriangulation| -> BTreeSet<i64> {
        t.lifting.keys().map(|p| (dot(n, p.coords()) - off).signum()).collect()
    };
    let (sa, sb) = (side(a), side(b));
    let sign = match (sa.contains(&1), sa.contains(&-1), sb.contains(&1), sb.contains(&-1)) {
        (false, true, true, false) => 1,
        (true, false, false, true) => -1,
        _ => return Err(Error::Glue("common plane does not separate the pieces".into())),
    };
    let all: Vec<LP> = a.lifting.keys().chain(b.lifting.keys()).copied().collect::<BTreeSet<_>>().into_iter().collect();
    if Hull::new(&all)?.volume6() != a.volume6() + b.volume6() {
        return Err(Error::Glue("union is not convex".into()));
    }
    Ok(([n[0] * sign, n[1] * sign, n[2] * sign], off * sign))
}

/// The union of two pieces with `b` bent by a fixed `λ`; not verified.
pub fn glue_with_lambda(a: &LiftedTriangulation, b: &LiftedTriangulation, lambda: &Rat) -> Result<LiftedTriangulation> {
    let (normal, offset) = separating_facet(a, b)?;
    let mut lifting = a.lifting.clone();
    for (p, v) in &b.lifting {
        let l = int(dot(normal, p.coords()) - offset);
        lifting.entry(*p).or_insert_with(|| v - lambda * l);
    }
    let mut cells = a.cells.clone();
    cells.extend(b.cells.iter().cloned());
    let mut out = LiftedTriangulation::from_parts(3, cells, lifting);
    out.lambdas = a.lambdas.iter().chain(&b.lambdas).cloned().chain([lambda.clone()]).collect();
    Ok(out)
}

/// Glues `b` onto `a` along their common facet: the lifting stays as is on
/// `a` and becomes `α_b − λ·L` on `b`, where `L` vanishes on the facet and is
/// positive on `b`; `λ` doubles from 1 until the union is regular.
pub fn glue(a: &LiftedTriangulation, b: &LiftedTriangulation) -> Result<LiftedTriangulation> {
    separating_facet(a, b)?;
    let mut lambda = int(1);
    for _ in 0..MAX_DOUBLINGS {
        let out = glue_with_lambda(a, b, &lambda)?;
        if out.verify().is_ok() {
            return Ok(out);
        }
        lambda *= int(2);
    }
    Err(Error::Glue(format!("no bending parameter up to 2^{MAX_DOUBLINGS} makes the union regular")))
}

/// Lattice points of `{x, y ≥ 0, x + y ≤ d}` at height `z`.
fn standard_triangle_points(d: i64, z: i64) -> BTreeSet<LP> {
    (0..=d).flat_map(|x| (0..=d - x).map(move |y| LP::new(x, y, z))).collect()
}

/// RE-triangulation of the frustum between the side-`d` triangle at height 0
/// and the side-`e` triangle at height 1, extending both inputs.
pub fn prism_fill(t0: &LiftedTriangulation, t1: &LiftedTriangulation) -> Result<LiftedTriangulation> {
    let side = |t: &LiftedTriangulation, z: i64| -> Result<i64> {
        let pts: BTreeSet<LP> = t.lifting.keys().copied().collect();
        let d = pts.iter().map(|p| p.x).max().unwrap_or(0);
        if t.dim != 2 || pts != standard_triangle_points(d, z) {
            return Err(Error::Invalid(format!("expected a lifted standard triangle at height {z}")));
        }
        Ok(d)
    };
    let (d, e) = (side(t0, 0)?, side(t1, 1)?);
    if d <= e {
        return Err(Error::Invalid(format!("prism needs a larger bottom: {d} <= {e}")));
    }
    let top_apex = LP::new(0, 0, 1);
    let bottom_corner = LP::new(d, 0, 0);
    let d0 = join(t0, &LiftedTriangulation::point(top_apex, t1.lifting[&top_apex].clone()))?;
    let d1 = join(t1, &LiftedTriangulation::point(bottom_corner, t0.lifting[&bottom_corner].clone()))?;
    let seg0: BTreeMap<LP, Rat> =
        (0..=d).map(|k| LP::new(d - k, k, 0)).map(|p| (p, t0.lifting[&p].clone())).collect();
    let seg1: BTreeMap<LP, Rat> = (0..=e).map(|k| LP::new(0, k, 1)).map(|p| (p, t1.lifting[&p].clone())).collect();
    let d2 = join(&induced(seg0)?, &induced(seg1)?)?;
    glue(&glue(&d2, &d0)?, &d1)
}

/// Extends an RE-triangulation of the bottom facet `frame(z = 0)` of the
/// simplex `frame(Γ_s)` to the whole simplex, with `s³` tetrahedra. Layer
/// triangles are [`triangle_re`] by default and seeded otherwise.
pub fn extend_facet(tf: &LiftedTriangulation, frame: &Frame, s: u32, seed: Option<u64>) -> Result<LiftedTriangulation> {
    let inv = frame.inverse();
    let bottom = tf.mapped(&inv);
    let s = s as i64;
    if bottom.lifting.keys().copied().collect::<BTreeSet<_>>() != standard_triangle_points(s, 0) {
        return Err(Error::Truncation("facet triangulation does not match the frame".into()));
    }
    let mut stack: Option<LiftedTriangulation> = None;
    let mut current = bottom.clone();
    for k in 1..=s {
        let e = s - k;
        let layer = if e == 0 {
            join(&current, &LiftedTriangulation::point(LP::new(0, 0, 1), int(0)))?
        } else {
            let top = match seed {
                None => triangle_re(e as u32, LP::new(0, 0, 1), [1, 0, 0], [0, 1, 0])?,
                Some(sd) => planar_re(LP::new(0, 0, 1), LP::new(e, 0, 1), LP::new(0, e, 1), sd.wrapping_add(k as u64))?,
            };
            prism_fill(&current, &top)?
        };
        let layer = layer.shifted([0, 0, k - 1]);
        stack = Some(match stack {
            None => align_to(&layer, &bottom.lifting)?,
            Some(st) => {
                let layer = align_to(&layer, &st.lifting)?;
                glue(&st, &layer)?
            }
        });
        if e > 0 {
            let st = stack.as_ref().expect("stack is set");
            let top_pts = standard_triangle_points(e, k);
            current = st.restrict(&top_pts)?.shifted([0, 0, -k]);
        }
    }
    Ok(stack.expect("s ≥ 1").mapped(frame))
}

/// A corner of `Γ_δ` of side `size` cut off at vertex `vertex` (0 = origin,
/// 1..3 = `δ·e_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: usize,
    pub size: u32,
}

impl Corner {
    /// Frame whose `z = 0` facet is the cut triangle and whose apex is the corner.
    pub fn frame(&self, delta: u32) -> Frame {
        let d = delta as i64;
        let verts = [[0, 0, 0], [d, 0, 0], [0, d, 0], [0, 0, d]];
        let vi = verts[self.vertex];
        let dir = |j: usize| -> IVec3 { [(verts[j][0] - vi[0]) / d, (verts[j][1] - vi[1]) / d, (verts[j][2] - vi[2]) / d] };
        let others: Vec<usize> = (0..4).filter(|&j| j != self.vertex).collect();
        let (d1, d2, d3) = (dir(others[0]), dir(others[1]), dir(others[2]));
        let s = self.size as i64;
        let origin = LP::new(vi[0] + s * d1[0], vi[1] + s * d1[1], vi[2] + s * d1[2]);
        let sub = |a: IVec3, b: IVec3| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        Frame { origin, axes: [sub(d2, d1), sub(d3, d1), neg(d1)] }
    }
}

/// Fills the missing corners of a truncated `Γ_δ`, each extended from the
/// triangulation the input induces on its cut facet.
pub fn fill_truncated(t: &LiftedTriangulation, delta: u32, corners: &[Corner], seed: Option<u64>) -> Result<LiftedTriangulation> {
    let mut out = t.clone();
    for (i, c) in corners.iter().enumerate() {
        if c.size == 0 || c.size >= delta || c.vertex > 3 {
            return Err(Error::Truncation(format!("invalid corner {c:?}")));
        }
        let frame = c.frame(delta);
        let facet: BTreeSet<LP> = standard_triangle_points(c.size as i64, 0).into_iter().map(|p| frame.map(p)).collect();
        let tf = out.restrict(&facet)?;
        if tf.dim != 2 || tf.lifting.len() != facet.len() {
            return Err(Error::Truncation(format!("corner {c:?} is not cut along a facet of the input")));
        }
        let piece = extend_facet(&tf, &frame, c.size, seed.map(|s| s.wrapping_add(1000 * (i as u64 + 1))))?;
        out = glue(&out, &piece)?;
    }
    if !corners.is_empty() {
        let want: BTreeSet<LP> = gamma_points(delta).into_iter().collect();
        if out.lifting.keys().copied().collect::<BTreeSet<_>>() != want {
            return Err(Error::Truncation("filled polytope is not the full simplex".into()));
        }
    }
    Ok(out)
}

/// The tetrahedron whose dual vertex carries a degenerate line in a two-point family.
pub fn omega_tetrahedron(delta: u32) -> [LP; 4] {
    let d = delta as i64;
    [LP::new(0, 0, 0), LP::new(0, 0, 1), LP::new(d - 1, 1, 0), LP::new(1, 0, d - 1)]
}

#[derive(Debug, Clone)]
pub struct FamilySurface {
    pub delta: u32,
    pub triangulation: LiftedTriangulation,
    pub polynomial: TropicalPolynomial,
    pub omega: [LP; 4],
}

/// Lifting values for a face of a join piece: the union's values where it
/// has them, elsewhere the base values shifted by an affine function fitted
/// to the union's deviation from the base on the shared points.
fn face_values(face: &[LP], union: &BTreeMap<LP, Rat>, base: &BTreeMap<LP, Rat>) -> Result<BTreeMap<LP, Rat>> {
    let dev: BTreeMap<LP, Rat> = face.iter().filter_map(|p| union.get(p).map(|u| (*p, u - &base[p]))).collect();
    let (c, w) = if dev.is_empty() { (int(0), [int(0), int(0), int(0)]) } else {
        fit_affine(&dev).unwrap_or((int(0), [int(0), int(0), int(0)]))
    };
    Ok(face
        .iter()
        .map(|p| (*p, union.get(p).cloned().unwrap_or_else(|| &base[p] + affine_at(&c, &w, *p))))
        .collect())
}

/// A smooth surface of degree `delta` whose subdivision contains
/// [`omega_tetrahedron`], built from the five-piece decomposition of the
/// truncated simplex with the corner at `(0, δ, 0)` removed.
pub fn build_family_surface(delta: u32, seed: Option<u64>) -> Result<FamilySurface> {
    if delta == 0 {
        return Err(Error::DegreeZero);
    }
    let omega = omega_tetrahedron(delta);
    if delta == 1 {
        let lifting: BTreeMap<LP, Rat> = gamma_points(1).into_iter().map(|p| (p, int(0))).collect();
        let t = LiftedTriangulation::from_parts(3, vec![omega.to_vec()], lifting);
        t.verify()?;
        let polynomial = t.lifting().to_polynomial()?;
        return Ok(FamilySurface { delta, triangulation: t, polynomial, omega });
    }
    let d = delta as i64;
    let p = LP::new;
    let (o, a, b) = (omega[0], omega[2], omega[3]);
    let (x, y, zd) = (p(d, 0, 0), p(0, 1, 0), p(0, 0, d));

    // base values: a seeded RE lifting on the bottom triangle of the first
    // piece, a noisy concave quadratic on the rest of the y = 0 slice, and
    // the standard triangle lifting on the y = 1 slice
    let tri0 = planar_re(o, x, b, seed.unwrap_or(0))?;
    let tri1 = triangle_re(delta - 1, y, [1, 0, 0], [0, 0, 1])?;
    let slice0: Vec<LP> = (0..=d).flat_map(|i| (0..=d - i).map(move |k| LP::new(i, 0, k))).collect();
    let mut base: BTreeMap<LP, Rat> =
        slice0.iter().map(|q| (*q, int(-NOISE * (q.x * q.x + q.x * q.z + q.z * q.z)))).collect();
    base.extend(tri0.lifting.clone());
    base.extend(tri1.lifting.clone());

    let axis = |from: i64| -> Vec<LP> { (from..=d).map(|k| p(0, 0, k)).collect() };
    let row1: Vec<LP> = (0..d).map(|k| p(k, 1, 0)).collect();
    let tri1_pts: Vec<LP> = tri1.points();
    let tri0_pts: Vec<LP> = tri0.points();

    let mut union = induced(omega.iter().map(|q| (*q, base[q].clone())).collect())?;
    // (faces of the join, in order)
    let pieces: [(Vec<LP>, Vec<LP>); 4] = [
        (tri0_pts, vec![a]),
        (axis(1), vec![a, b]),
        (axis(0), row1),
        (tri1_pts, vec![zd]),
    ];
    for (f1, f2) in pieces {
        let l1 = induced(face_values(&f1, &union.lifting, &base)?)?;
        let l2 = induced(face_values(&f2, &union.lifting, &base)?)?;
        let piece = join(&l1, &l2)?;
        union = glue(&union, &piece)?;
    }
    let full = fill_truncated(&union, delta, &[Corner { vertex: 2, size: delta - 1 }], seed)?;
    let omega_sorted = sorted(omega.to_vec());
    if !full.cells.contains(&omega_sorted) {
        return Err(Error::Inconsistent("the family tetrahedron was lost".into()));
    }
    let polynomial = full.lifting().to_polynomial()?;
    Ok(FamilySurface { delta, triangulation: full, polynomial, omega })
}
