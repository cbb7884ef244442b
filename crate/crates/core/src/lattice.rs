//! Exact lattice geometry: rationals, points, simplices, the simplex of
//! degree `δ` with its four facets, and small exact convex-hull routines.
//!
//! Nothing here uses floating point. Integer kernels are used wherever all
//! inputs are lattice points; everything else goes through [`Rat`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number in canonical reduced form.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut n: BigInt = digits.parse().ok()?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        return Some(Rat::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Integer 3-vector helpers.
pub type IVec3 = [i64; 3];

pub fn dot(a: IVec3, b: IVec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: IVec3, b: IVec3) -> IVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn det3(a: IVec3, b: IVec3, c: IVec3) -> i64 {
    dot(a, cross(b, c))
}

pub fn is_zero_vec(a: IVec3) -> bool {
    a == [0, 0, 0]
}

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(a: IVec3) -> IVec3 {
    let g = a[0].gcd(&a[1]).gcd(&a[2]);
    if g == 0 {
        a
    } else {
        [a[0] / g, a[1] / g, a[2] / g]
    }
}

/// A point of Z^3, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct LatticePoint3 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl From<[i64; 3]> for LatticePoint3 {
    fn from(a: [i64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<LatticePoint3> for [i64; 3] {
    fn from(p: LatticePoint3) -> Self {
        p.coords()
    }
}

impl LatticePoint3 {
    pub const ORIGIN: LatticePoint3 = LatticePoint3 { x: 0, y: 0, z: 0 };

    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }

    pub fn coords(self) -> IVec3 {
        [self.x, self.y, self.z]
    }

    pub fn total(self) -> i64 {
        self.x + self.y + self.z
    }

    pub fn minus(self, o: LatticePoint3) -> IVec3 {
        [self.x - o.x, self.y - o.y, self.z - o.z]
    }

    pub fn plus(self, v: IVec3) -> LatticePoint3 {
        Self::new(self.x + v[0], self.y + v[1], self.z + v[2])
    }

    pub fn to_q(self) -> QPoint3 {
        QPoint3::new(int(self.x), int(self.y), int(self.z))
    }

    /// Pairing with a rational point, i.e. `⟨a, p⟩`.
    pub fn pair(self, p: &QPoint3) -> Rat {
        &p.x * BigInt::from(self.x) + &p.y * BigInt::from(self.y) + &p.z * BigInt::from(self.z)
    }
}

impl fmt::Display for LatticePoint3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A point of Q^3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoint3 {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl QPoint3 {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Self { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new(int(x), int(y), int(z))
    }

    pub fn from_ivec(v: IVec3) -> Self {
        Self::from_ints(v[0], v[1], v[2])
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn coords(&self) -> [&Rat; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn to_array(&self) -> [Rat; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn from_array(a: [Rat; 3]) -> Self {
        let [x, y, z] = a;
        Self::new(x, y, z)
    }

    pub fn scale(&self, s: &Rat) -> QPoint3 {
        QPoint3::new(&self.x * s, &self.y * s, &self.z * s)
    }

    /// `self + t·v` for an integer direction.
    pub fn offset(&self, v: IVec3, t: &Rat) -> QPoint3 {
        QPoint3::new(
            &self.x + t * BigInt::from(v[0]),
            &self.y + t * BigInt::from(v[1]),
            &self.z + t * BigInt::from(v[2]),
        )
    }

    pub fn dot(&self, o: &QPoint3) -> Rat {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn dot_int(&self, v: IVec3) -> Rat {
        &self.x * BigInt::from(v[0]) + &self.y * BigInt::from(v[1]) + &self.z * BigInt::from(v[2])
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// If `self = t·v` for some rational `t`, returns `t`.
    pub fn multiple_of(&self, v: IVec3) -> Option<Rat> {
        let mut t: Option<Rat> = None;
        for (c, &vi) in self.coords().into_iter().zip(v.iter()) {
            if vi == 0 {
                if !c.is_zero() {
                    return None;
                }
            } else {
                let s = c / BigInt::from(vi);
                match &t {
                    Some(t0) if *t0 != s => return None,
                    Some(_) => {}
                    None => t = Some(s),
                }
            }
        }
        Some(t.unwrap_or_else(Rat::zero))
    }
}

impl QPoint3 {
    /// If `self = t·v` for a rational `t` and nonzero `v`, returns `t`.
    pub fn multiple_of_q(&self, v: &QPoint3) -> Option<Rat> {
        let mut t: Option<Rat> = None;
        for (c, vi) in self.coords().into_iter().zip(v.coords()) {
            if vi.is_zero() {
                if !c.is_zero() {
                    return None;
                }
            } else {
                let s = c / vi;
                match &t {
                    Some(t0) if *t0 != s => return None,
                    Some(_) => {}
                    None => t = Some(s),
                }
            }
        }
        t
    }
}

impl Add for &QPoint3 {
    type Output = QPoint3;
    fn add(self, o: &QPoint3) -> QPoint3 {
        QPoint3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl Sub for &QPoint3 {
    type Output = QPoint3;
    fn sub(self, o: &QPoint3) -> QPoint3 {
        QPoint3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl Neg for &QPoint3 {
    type Output = QPoint3;
    fn neg(self) -> QPoint3 {
        QPoint3::new(-&self.x, -&self.y, -&self.z)
    }
}

impl Mul<&Rat> for &QPoint3 {
    type Output = QPoint3;
    fn mul(self, s: &Rat) -> QPoint3 {
        self.scale(s)
    }
}

impl fmt::Display for QPoint3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A subset of the facet indices `{1,2,3,4}`, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FacetSet(pub u8);

impl FacetSet {
    pub const EMPTY: FacetSet = FacetSet(0);
    pub const ALL: FacetSet = FacetSet(0b1111);

    pub fn from_indices(ix: &[u8]) -> Self {
        let mut s = FacetSet::EMPTY;
        for &i in ix {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: u8) {
        debug_assert!((1..=4).contains(&i));
        self.0 |= 1 << (i - 1);
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, o: FacetSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (1..=4u8).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }
}

impl fmt::Display for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// One of the four tropical ray directions `ω₁ = −e₁`, `ω₂ = −e₂`,
/// `ω₃ = −e₃`, `ω₄ = e₁+e₂+e₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(u8);

impl Direction {
    pub const ALL: [Direction; 4] = [Direction(1), Direction(2), Direction(3), Direction(4)];

    pub fn new(i: u8) -> Option<Direction> {
        (1..=4).contains(&i).then_some(Direction(i))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn vector(self) -> IVec3 {
        omega(self.0)
    }
}

/// The vector `ω_i`.
pub fn omega(i: u8) -> IVec3 {
    match i {
        1 => [-1, 0, 0],
        2 => [0, -1, 0],
        3 => [0, 0, -1],
        4 => [1, 1, 1],
        _ => panic!("direction index {i} out of range"),
    }
}

/// Lattice simplex of dimension 1, 2 or 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    vertices: Vec<LatticePoint3>,
}

impl LatticeSimplex {
    pub fn new(vertices: Vec<LatticePoint3>) -> Result<Self> {
        if !(2..=4).contains(&vertices.len()) || affine_rank(&vertices) != vertices.len() - 1 {
            return Err(Error::DegenerateSimplex);
        }
        Ok(Self { vertices })
    }

    pub fn tetra(v: [LatticePoint3; 4]) -> Result<Self> {
        Self::new(v.to_vec())
    }

    pub fn vertices(&self) -> &[LatticePoint3] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Signed determinant of the edge vectors, i.e. six times the signed volume.
pub fn det_tetra(v: &[LatticePoint3; 4]) -> i64 {
    det3(v[1].minus(v[0]), v[2].minus(v[0]), v[3].minus(v[0]))
}

/// Euclidean volume of a lattice tetrahedron, `|det|/6`.
pub fn simplex_volume(t: &LatticeSimplex) -> Result<Rat> {
    let v = t.vertices();
    if v.len() != 4 {
        return Err(Error::DegenerateSimplex);
    }
    let d = det_tetra(&[v[0], v[1], v[2], v[3]]);
    if d == 0 {
        return Err(Error::DegenerateSimplex);
    }
    Ok(frac(d.abs(), 6))
}

/// Dimension of the affine hull of `pts` (−1 for the empty set).
pub fn affine_dim(pts: &[LatticePoint3]) -> isize {
    if pts.is_empty() {
        return -1;
    }
    affine_rank(pts) as isize
}

fn affine_rank(pts: &[LatticePoint3]) -> usize {
    let Some(&base) = pts.first() else { return 0 };
    let diffs: Vec<IVec3> = pts[1..].iter().map(|p| p.minus(base)).collect();
    int_rank(&diffs)
}

/// Rank of a list of integer 3-vectors.
pub fn int_rank(vs: &[IVec3]) -> usize {
    let nz: Vec<IVec3> = vs.iter().copied().filter(|v| !is_zero_vec(*v)).collect();
    let Some(&a) = nz.first() else { return 0 };
    let Some(&b) = nz.iter().find(|&&b| !is_zero_vec(cross(a, b))) else { return 1 };
    let n = cross(a, b);
    if nz.iter().any(|&c| dot(n, c) != 0) {
        3
    } else {
        2
    }
}

/// Barycentric coordinates of `p` with respect to affinely independent
/// `vertices`, if `p` lies in their affine hull.
pub fn affine_coords(vertices: &[LatticePoint3], p: &QPoint3) -> Option<Vec<Rat>> {
    let base = vertices[0].to_q();
    let cols: Vec<IVec3> = vertices[1..].iter().map(|v| v.minus(vertices[0])).collect();
    let rhs = p - &base;
    let rows: Vec<Vec<Rat>> = (0..3)
        .map(|r| cols.iter().map(|c| int(c[r])).collect())
        .collect();
    let b: Vec<Rat> = rhs.to_array().to_vec();
    match solve_linear(rows, b) {
        LinSolution::Unique(mu) => {
            let s: Rat = mu.iter().fold(Rat::zero(), |acc, m| acc + m);
            let mut out = vec![Rat::one() - s];
            out.extend(mu);
            Some(out)
        }
        _ => None,
    }
}

/// Outcome of exact Gaussian elimination.
#[derive(Debug, Clone, PartialEq)]
pub enum LinSolution {
    Unique(Vec<Rat>),
    Inconsistent,
    /// Consistent with a positive-dimensional solution set; carries one solution.
    Underdetermined(Vec<Rat>),
}

/// Solves `A x = b` exactly (A is `m × n`, any shape).
pub fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> LinSolution {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = Rat::one() / &a[row][col];
        for c in col..n {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let sub = &f * &a[row][c];
                    a[r][c] -= sub;
                }
                let sub = &f * &b[row];
                b[r] -= sub;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if (row..m).any(|r| !b[r].is_zero()) {
        return LinSolution::Inconsistent;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    if pivots.len() == n {
        LinSolution::Unique(x)
    } else {
        LinSolution::Underdetermined(x)
    }
}

/// Whether the closed convex hull of the simplex contains no lattice points
/// other than its vertices.
pub fn is_primitive(t: &LatticeSimplex) -> bool {
    let v = t.vertices();
    let (lo, hi) = bbox(v);
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let p = LatticePoint3::new(x, y, z);
                if v.contains(&p) {
                    continue;
                }
                if let Some(c) = affine_coords(v, &p.to_q()) {
                    if c.iter().all(|ci| !ci.is_negative()) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn bbox(pts: &[LatticePoint3]) -> (IVec3, IVec3) {
    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for p in pts {
        for (k, c) in p.coords().into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (lo, hi)
}

pub fn in_gamma(p: LatticePoint3, delta: u32) -> bool {
    p.x >= 0 && p.y >= 0 && p.z >= 0 && p.total() <= delta as i64
}

/// `{i : p ∈ F_i}` for the facets of the simplex of degree `delta`.
pub fn facet_membership(p: LatticePoint3, delta: u32) -> Result<FacetSet> {
    if !in_gamma(p, delta) {
        return Err(Error::OutsideSimplex(p.to_string(), delta));
    }
    let mut s = FacetSet::EMPTY;
    if p.x == 0 {
        s.insert(1);
    }
    if p.y == 0 {
        s.insert(2);
    }
    if p.z == 0 {
        s.insert(3);
    }
    if p.total() == delta as i64 {
        s.insert(4);
    }
    Ok(s)
}

/// Directions `i` for which `conv(points) ∩ F_i` is at least one-dimensional.
///
/// Each `F_i` is a face of the simplex, so the intersection is the hull of the
/// points lying on `F_i`; it has positive dimension iff two of them differ.
pub fn exits(points: &[LatticePoint3], delta: u32) -> Result<FacetSet> {
    let memberships = points
        .iter()
        .map(|&p| facet_membership(p, delta).map(|m| (p, m)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = FacetSet::EMPTY;
    for i in 1..=4u8 {
        let on: BTreeSet<LatticePoint3> = memberships
            .iter()
            .filter(|(_, m)| m.contains(i))
            .map(|(p, _)| *p)
            .collect();
        if on.len() >= 2 {
            out.insert(i);
        }
    }
    Ok(out)
}

/// The four vertices of the simplex of degree `delta`.
pub fn gamma_vertices(delta: u32) -> [LatticePoint3; 4] {
    let d = delta as i64;
    [
        LatticePoint3::new(0, 0, 0),
        LatticePoint3::new(d, 0, 0),
        LatticePoint3::new(0, d, 0),
        LatticePoint3::new(0, 0, d),
    ]
}

/// All lattice points of the simplex of degree `delta`, in lexicographic order.
pub fn gamma_points(delta: u32) -> Vec<LatticePoint3> {
    let d = delta as i64;
    let mut out = Vec::new();
    for x in 0..=d {
        for y in 0..=d - x {
            for z in 0..=d - x - y {
                out.push(LatticePoint3::new(x, y, z));
            }
        }
    }
    out
}

/// A supporting plane `normal · x ≤ offset` of a hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plane {
    pub normal: IVec3,
    pub offset: i64,
}

impl Plane {
    pub fn eval(&self, p: LatticePoint3) -> i64 {
        dot(self.normal, p.coords()) - self.offset
    }
}

/// Exact convex hull of a small full-dimensional lattice point set.
#[derive(Debug, Clone)]
pub struct Hull {
    pub points: Vec<LatticePoint3>,
    pub facets: Vec<Plane>,
}

impl Hull {
    /// Brute-force facet enumeration over point triples; intended for the
    /// few dozen points that occur in this crate.
    pub fn new(points: &[LatticePoint3]) -> Result<Hull> {
        let pts: Vec<LatticePoint3> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if affine_rank(&pts) < 3 {
            return Err(Error::DegenerateSupport);
        }
        let n = pts.len();
        let mut facets = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let nrm = cross(pts[j].minus(pts[i]), pts[k].minus(pts[i]));
                    if is_zero_vec(nrm) {
                        continue;
                    }
                    let nrm = primitive(nrm);
                    let off = dot(nrm, pts[i].coords());
                    let (mut above, mut below) = (false, false);
                    for p in &pts {
                        let s = dot(nrm, p.coords()) - off;
                        above |= s > 0;
                        below |= s < 0;
                        if above && below {
                            break;
                        }
                    }
                    if !above {
                        facets.insert(Plane { normal: nrm, offset: off });
                    } else if !below {
                        facets.insert(Plane { normal: [-nrm[0], -nrm[1], -nrm[2]], offset: -off });
                    }
                }
            }
        }
        Ok(Hull { points: pts, facets: facets.into_iter().collect() })
    }

    pub fn contains(&self, p: LatticePoint3) -> bool {
        self.facets.iter().all(|f| f.eval(p) <= 0)
    }

    pub fn contains_q(&self, p: &QPoint3) -> bool {
        self.facets
            .iter()
            .all(|f| p.dot_int(f.normal) <= int(f.offset))
    }

    /// Points of the input lying on the given facet.
    pub fn facet_points(&self, f: &Plane) -> Vec<LatticePoint3> {
        self.points.iter().copied().filter(|&p| f.eval(p) == 0).collect()
    }

    /// Six times the volume, as an integer.
    pub fn volume6(&self) -> i64 {
        let base = self.points[0];
        let mut total = 0;
        for f in &self.facets {
            let poly = convex_polygon_order(&self.facet_points(f), f.normal);
            for w in 1..poly.len().saturating_sub(1) {
                total += det3(poly[0].minus(base), poly[w].minus(base), poly[w + 1].minus(base)).abs();
            }
        }
        total
    }

    pub fn volume(&self) -> Rat {
        frac(self.volume6(), 6)
    }

    /// All lattice points in the closed hull.
    pub fn lattice_points(&self) -> Vec<LatticePoint3> {
        let (lo, hi) = bbox(&self.points);
        let mut out = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    let p = LatticePoint3::new(x, y, z);
                    if self.contains(p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

/// Vertices of the convex hull of coplanar points, in cyclic order.
pub fn convex_polygon_order(pts: &[LatticePoint3], normal: IVec3) -> Vec<LatticePoint3> {
    // project away the coordinate where the normal is largest
    let drop = (0..3).max_by_key(|&k| normal[k].abs()).unwrap_or(2);
    let keep: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
    let proj = |p: &LatticePoint3| -> (i64, i64) {
        let c = p.coords();
        (c[keep[0]], c[keep[1]])
    };
    let mut v: Vec<LatticePoint3> = pts.to_vec();
    v.sort_by_key(|p| proj(p));
    v.dedup();
    if v.len() < 3 {
        return v;
    }
    let cr = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<LatticePoint3> = Vec::new();
    for p in &v {
        while lower.len() >= 2 && cr(proj(&lower[lower.len() - 2]), proj(&lower[lower.len() - 1]), proj(p)) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<LatticePoint3> = Vec::new();
    for p in v.iter().rev() {
        while upper.len() >= 2 && cr(proj(&upper[upper.len() - 2]), proj(&upper[upper.len() - 1]), proj(p)) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A permutation of `{1,2,3,4}` acting on the homogenized coordinates.
/// `images[i-1] = σ(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4 {
    images: [u8; 4],
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { images: [1, 2, 3, 4] };

    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if !(1..=4).contains(&i) || seen[(i - 1) as usize] {
                return None;
            }
            seen[(i - 1) as usize] = true;
        }
        Some(Perm4 { images })
    }

    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut images = [1, 2, 3, 4];
        images.swap((a - 1) as usize, (b - 1) as usize);
        Perm4 { images }
    }

    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    let Some(d) = 10u8.checked_sub(a + b + c) else { continue };
                    if let Some(p) = Perm4::new([a, b, c, d]) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    pub fn apply(self, i: u8) -> u8 {
        self.images[(i - 1) as usize]
    }

    pub fn inverse(self) -> Perm4 {
        let mut images = [0u8; 4];
        for i in 1..=4u8 {
            images[(self.apply(i) - 1) as usize] = i;
        }
        Perm4 { images }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        let mut images = [0u8; 4];
        for i in 1..=4u8 {
            images[(i - 1) as usize] = self.apply(other.apply(i));
        }
        Perm4 { images }
    }

    pub fn apply_set(self, s: FacetSet) -> FacetSet {
        let mut out = FacetSet::EMPTY;
        for i in s.iter() {
            out.insert(self.apply(i));
        }
        out
    }

    /// Action on a point of the simplex of degree `delta` through its
    /// homogeneous coordinates `(x, y, z, δ−x−y−z)`: `(σa)_{σ(i)} = a_i`.
    pub fn act_on_point(self, p: LatticePoint3, delta: u32) -> LatticePoint3 {
        let h = [p.x, p.y, p.z, delta as i64 - p.total()];
        let mut out = [0i64; 4];
        for i in 1..=4u8 {
            out[(self.apply(i) - 1) as usize] = h[(i - 1) as usize];
        }
        LatticePoint3::new(out[0], out[1], out[2])
    }

    /// The induced map on R^3 sending `V(f)` onto `V(σ f)`.
    pub fn act_on_qpoint(self, p: &QPoint3) -> QPoint3 {
        let inv = self.inverse();
        let h = [p.x.clone(), p.y.clone(), p.z.clone(), Rat::zero()];
        let pick = |j: u8| h[(inv.apply(j) - 1) as usize].clone();
        let c = pick(4);
        QPoint3::new(pick(1) - &c, pick(2) - &c, pick(3) - &c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(x: i64, y: i64, z: i64) -> LatticePoint3 {
        LatticePoint3::new(x, y, z)
    }

    #[test]
    fn volumes() {
        let g1 = LatticeSimplex::tetra(gamma_vertices(1)).unwrap();
        assert_eq!(simplex_volume(&g1).unwrap(), frac(1, 6));
        let tpq = LatticeSimplex::tetra([lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(1, 2, 3)]).unwrap();
        assert_eq!(simplex_volume(&tpq).unwrap(), frac(3, 6));
        let t = LatticeSimplex::tetra([lp(0, 0, 0), lp(0, 0, 1), lp(1, 1, 0), lp(1, 0, 1)]).unwrap();
        assert_eq!(simplex_volume(&t).unwrap(), frac(1, 6));
        assert_eq!(
            LatticeSimplex::tetra([lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(1, 1, 0)]),
            Err(Error::DegenerateSimplex)
        );
    }

    #[test]
    fn primitivity() {
        let g1 = LatticeSimplex::tetra(gamma_vertices(1)).unwrap();
        assert!(is_primitive(&g1));
        let e = LatticeSimplex::new(vec![lp(0, 0, 0), lp(2, 0, 0)]).unwrap();
        assert!(!is_primitive(&e));
        let tpq = LatticeSimplex::tetra([lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(1, 2, 3)]).unwrap();
        assert!(is_primitive(&tpq));
        let big = LatticeSimplex::tetra(gamma_vertices(2)).unwrap();
        assert!(!is_primitive(&big));
    }

    #[test]
    fn facets() {
        assert_eq!(facet_membership(lp(0, 0, 0), 2).unwrap(), FacetSet::from_indices(&[1, 2, 3]));
        assert_eq!(facet_membership(lp(3, 0, 0), 3).unwrap(), FacetSet::from_indices(&[2, 3, 4]));
        assert_eq!(facet_membership(lp(1, 1, 1), 4).unwrap(), FacetSet::EMPTY);
        assert!(facet_membership(lp(2, 2, 0), 3).is_err());
    }

    #[test]
    fn exit_examples() {
        let omega3 = [lp(0, 0, 0), lp(0, 0, 1), lp(2, 1, 0), lp(1, 0, 2)];
        assert_eq!(exits(&omega3, 3).unwrap(), FacetSet::ALL);
        assert_eq!(exits(&[lp(0, 0, 0)], 3).unwrap(), FacetSet::EMPTY);
        assert_eq!(
            exits(&[lp(0, 0, 0), lp(0, 0, 1)], 3).unwrap(),
            FacetSet::from_indices(&[1, 2])
        );
    }

    #[test]
    fn hull_of_gamma() {
        let h = Hull::new(&gamma_points(3)).unwrap();
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.volume(), frac(27, 6));
        assert_eq!(h.lattice_points().len(), 20);
        let cube: Vec<_> = (0..8).map(|i| lp(i & 1, (i >> 1) & 1, (i >> 2) & 1)).collect();
        let hc = Hull::new(&cube).unwrap();
        assert_eq!(hc.facets.len(), 6);
        assert_eq!(hc.volume6(), 6);
    }

    #[test]
    fn perm_action_is_left_action() {
        for s in Perm4::all() {
            for t in Perm4::all() {
                for p in gamma_points(3) {
                    assert_eq!(
                        s.compose(t).act_on_point(p, 3),
                        s.act_on_point(t.act_on_point(p, 3), 3)
                    );
                }
            }
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("-1.25"), Some(frac(-5, 4)));
        assert_eq!(parse_rat("3/6"), Some(frac(1, 2)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(rat_to_string(&int(-3)), "-3/1");
    }
}
