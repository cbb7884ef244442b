//! The polyhedral complex of a smooth tropical surface, built as the dual of
//! its elementary triangulation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{
    cross, facet_membership, int, omega, primitive, rat_to_f64, rat_to_string, FacetSet, IVec3,
    LatticePoint3, QPoint3, Rat,
};
use crate::poly::TropicalPolynomial;
use crate::subdivision::{dual_point, smoothness_with_subdivision, Lifting};

/// Reference to a cell of the surface by dimension and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub dim: u8,
    pub id: usize,
}

impl CellRef {
    pub fn vertex(id: usize) -> Self {
        Self { dim: 0, id }
    }
    pub fn edge(id: usize) -> Self {
        Self { dim: 1, id }
    }
    pub fn face(id: usize) -> Self {
        Self { dim: 2, id }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeKind {
    /// Joins the dual vertices of the two tetrahedra sharing the triangle.
    Bounded { ends: [usize; 2] },
    /// Leaves `apex` in direction `ω_i` for the facet `F_i` holding the triangle.
    Ray { apex: usize, facet: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub dual: [LatticePoint3; 3],
    pub kind: EdgeKind,
    /// Adjacent 2-cells with orientation-compatible primitive normals.
    pub around: [(usize, IVec3); 3],
}

impl Edge {
    pub fn is_bounded(&self) -> bool {
        matches!(self.kind, EdgeKind::Bounded { .. })
    }

    pub fn start(&self) -> usize {
        match self.kind {
            EdgeKind::Bounded { ends } => ends[0],
            EdgeKind::Ray { apex, .. } => apex,
        }
    }

    pub fn faces(&self) -> [usize; 3] {
        self.around.map(|(f, _)| f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub dual: [LatticePoint3; 2],
    /// Vertex ids along the boundary; a cycle for bounded faces, a path for
    /// unbounded ones.
    pub vertices: Vec<usize>,
    /// Boundary edge ids in the same order.
    pub edges: Vec<usize>,
    /// For unbounded faces, the ray directions leaving the first and last vertex.
    pub rays: Option<[IVec3; 2]>,
    /// Primitive normal, parallel to the dual edge.
    pub normal: IVec3,
}

impl Face {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceComplex {
    pub poly: TropicalPolynomial,
    pub lifting: Lifting,
    pub delta: u32,
    /// Tetrahedra of the triangulation; vertex `i` is dual to `tetrahedra[i]`.
    pub tetrahedra: Vec<[LatticePoint3; 4]>,
    pub vertices: Vec<QPoint3>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    tet_index: BTreeMap<[LatticePoint3; 4], usize>,
    tri_index: BTreeMap<[LatticePoint3; 3], usize>,
    seg_index: BTreeMap<[LatticePoint3; 2], usize>,
}

fn sorted<const N: usize>(mut a: [LatticePoint3; N]) -> [LatticePoint3; N] {
    a.sort();
    a
}

fn triangle_facet(tri: &[LatticePoint3; 3], delta: u32) -> Option<u8> {
    let common = tri
        .iter()
        .map(|p| facet_membership(*p, delta).unwrap_or(FacetSet::EMPTY))
        .fold(FacetSet::ALL, |a, b| FacetSet(a.0 & b.0));
    common.iter().next()
}

fn ivec_q(v: IVec3) -> QPoint3 {
    QPoint3::from_ivec(v)
}

/// `a × b` for rational vectors.
fn qcross(a: &QPoint3, b: &QPoint3) -> QPoint3 {
    QPoint3::new(
        &a.y * &b.z - &a.z * &b.y,
        &a.z * &b.x - &a.x * &b.z,
        &a.x * &b.y - &a.y * &b.x,
    )
}

impl SurfaceComplex {
    pub fn build(f: &TropicalPolynomial) -> Result<Self> {
        let (sub, rep) = smoothness_with_subdivision(f)?;
        if !rep.smooth {
            return Err(Error::NotSmooth);
        }
        let delta = f.degree();
        let lifting = Lifting::of(f);
        let tetrahedra: Vec<[LatticePoint3; 4]> = sub.tetrahedra().ok_or(Error::NotSmooth)?;
        let vertices = tetrahedra
            .iter()
            .map(|t| dual_point(&lifting, t))
            .collect::<Result<Vec<_>>>()?;
        let tet_index: BTreeMap<_, _> = tetrahedra.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        // triangles and segments with their incident tetrahedra
        let mut tri_tets: BTreeMap<[LatticePoint3; 3], Vec<usize>> = BTreeMap::new();
        let mut seg_tets: BTreeMap<[LatticePoint3; 2], Vec<usize>> = BTreeMap::new();
        for (i, t) in tetrahedra.iter().enumerate() {
            for skip in 0..4 {
                let tri: Vec<_> = (0..4).filter(|&k| k != skip).map(|k| t[k]).collect();
                tri_tets.entry(sorted([tri[0], tri[1], tri[2]])).or_default().push(i);
            }
            for a in 0..4 {
                for b in a + 1..4 {
                    seg_tets.entry(sorted([t[a], t[b]])).or_default().push(i);
                }
            }
        }

        let mut edges = Vec::with_capacity(tri_tets.len());
        let mut tri_index = BTreeMap::new();
        for (tri, ts) in &tri_tets {
            let kind = match ts.as_slice() {
                [a, b] => EdgeKind::Bounded { ends: [*a, *b] },
                [a] => {
                    let facet = triangle_facet(tri, delta).ok_or_else(|| {
                        Error::Inconsistent(format!("unshared triangle {:?} not on the boundary", tri))
                    })?;
                    EdgeKind::Ray { apex: *a, facet }
                }
                _ => return Err(Error::Inconsistent("triangle in more than two tetrahedra".into())),
            };
            tri_index.insert(*tri, edges.len());
            edges.push(Edge { dual: *tri, kind, around: [(0, [0, 0, 0]); 3] });
        }

        let mut faces = Vec::with_capacity(seg_tets.len());
        let mut seg_index = BTreeMap::new();
        for (seg, ts) in &seg_tets {
            let face = Self::assemble_face(*seg, ts, &tetrahedra, &tri_tets, &tri_index, &edges)?;
            seg_index.insert(*seg, faces.len());
            faces.push(face);
        }

        let mut x = SurfaceComplex {
            poly: f.clone(),
            lifting,
            delta,
            tetrahedra,
            vertices,
            edges,
            faces,
            tet_index,
            tri_index,
            seg_index,
        };
        for e in 0..x.edges.len() {
            let tri = x.edges[e].dual;
            let segs = [sorted([tri[0], tri[1]]), sorted([tri[1], tri[2]]), sorted([tri[0], tri[2]])];
            let d = x.edge_direction(e);
            let mut around = [(0usize, [0i64; 3]); 3];
            for (k, s) in segs.iter().enumerate() {
                let fid = x.seg_index[s];
                let w = x.inward_face_direction(e, fid);
                let n = qcross(&d, &w);
                around[k] = (fid, primitive_of_q(&n)?);
            }
            x.edges[e].around = around;
        }
        Ok(x)
    }

    fn assemble_face(
        seg: [LatticePoint3; 2],
        ts: &[usize],
        tets: &[[LatticePoint3; 4]],
        tri_tets: &BTreeMap<[LatticePoint3; 3], Vec<usize>>,
        tri_index: &BTreeMap<[LatticePoint3; 3], usize>,
        edges: &[Edge],
    ) -> Result<Face> {
        // triangles containing the segment, each linking one or two tetrahedra
        let mut links: Vec<[LatticePoint3; 3]> = Vec::new();
        for &t in ts {
            for &p in tets[t].iter() {
                if !seg.contains(&p) {
                    let tri = sorted([seg[0], seg[1], p]);
                    if !links.contains(&tri) {
                        links.push(tri);
                    }
                }
            }
        }
        let boundary: Vec<&[LatticePoint3; 3]> = links.iter().filter(|t| tri_tets[*t].len() == 1).collect();
        let (mut cur_tri, mut cur_tet) = match boundary.first() {
            Some(b) => (**b, tri_tets[*b][0]),
            None => {
                let t0 = *ts.iter().min().expect("segment lies in a tetrahedron");
                let tri = *links
                    .iter()
                    .filter(|l| tri_tets[*l].contains(&t0))
                    .min()
                    .expect("tetrahedron has two triangles through the segment");
                (tri, t0)
            }
        };
        let mut vertices = vec![cur_tet];
        let mut face_edges = vec![tri_index[&cur_tri]];
        loop {
            let next_tri = *links
                .iter()
                .find(|l| **l != cur_tri && tri_tets[*l].contains(&cur_tet))
                .ok_or_else(|| Error::Inconsistent("open fan around a segment".into()))?;
            let e = tri_index[&next_tri];
            if e == face_edges[0] {
                break;
            }
            face_edges.push(e);
            let owners = &tri_tets[&next_tri];
            if owners.len() == 1 {
                break;
            }
            let nt = if owners[0] == cur_tet { owners[1] } else { owners[0] };
            if nt == vertices[0] {
                break;
            }
            vertices.push(nt);
            cur_tri = next_tri;
            cur_tet = nt;
        }
        let rays = if boundary.is_empty() {
            None
        } else {
            let dir = |e: usize| match edges[e].kind {
                EdgeKind::Ray { facet, .. } => Ok(omega(facet)),
                _ => Err(Error::Inconsistent("face path does not end in rays".into())),
            };
            Some([dir(face_edges[0])?, dir(*face_edges.last().expect("nonempty"))?])
        };
        if vertices.len() != ts.len() {
            return Err(Error::Inconsistent("fan around a segment is disconnected".into()));
        }
        Ok(Face { dual: seg, vertices, edges: face_edges, rays, normal: primitive(seg[1].minus(seg[0])) })
    }

    /// Direction of a 1-cell: `end − start` or the ray vector.
    pub fn edge_direction(&self, e: usize) -> QPoint3 {
        match self.edges[e].kind {
            EdgeKind::Bounded { ends } => &self.vertices[ends[1]] - &self.vertices[ends[0]],
            EdgeKind::Ray { facet, .. } => ivec_q(omega(facet)),
        }
    }

    /// A vector from a point of edge `e` into face `f`, not parallel to `e`.
    fn inward_face_direction(&self, e: usize, f: usize) -> QPoint3 {
        let d = self.edge_direction(e);
        let base = &self.vertices[self.edges[e].start()];
        let face = &self.faces[f];
        for &v in &face.vertices {
            let w = &self.vertices[v] - base;
            if !qcross(&d, &w).is_zero() {
                return w;
            }
        }
        for r in face.rays.iter().flatten() {
            let w = ivec_q(*r);
            if !qcross(&d, &w).is_zero() {
                return w;
            }
        }
        unreachable!("a 2-cell is two-dimensional")
    }

    /// Spanning directions of the affine hull of a cell.
    pub fn cell_directions(&self, c: CellRef) -> Vec<QPoint3> {
        match c.dim {
            0 => vec![],
            1 => vec![self.edge_direction(c.id)],
            _ => {
                let face = &self.faces[c.id];
                let base = &self.vertices[face.vertices[0]];
                let mut out: Vec<QPoint3> = face.vertices[1..].iter().map(|&v| &self.vertices[v] - base).collect();
                out.extend(face.rays.iter().flatten().map(|r| ivec_q(*r)));
                out
            }
        }
    }

    /// Lattice points of the dual cell.
    pub fn dual_of(&self, c: CellRef) -> Vec<LatticePoint3> {
        match c.dim {
            0 => self.tetrahedra[c.id].to_vec(),
            1 => self.edges[c.id].dual.to_vec(),
            _ => self.faces[c.id].dual.to_vec(),
        }
    }

    pub fn is_bounded(&self, c: CellRef) -> bool {
        match c.dim {
            0 => true,
            1 => self.edges[c.id].is_bounded(),
            _ => self.faces[c.id].is_bounded(),
        }
    }

    /// Cell dual to a set of exponents, if it is a cell of the triangulation.
    pub fn cell_of_dual(&self, pts: &BTreeSet<LatticePoint3>) -> Option<CellRef> {
        let v: Vec<LatticePoint3> = pts.iter().copied().collect();
        match v.len() {
            4 => self.tet_index.get(&[v[0], v[1], v[2], v[3]]).map(|&i| CellRef::vertex(i)),
            3 => self.tri_index.get(&[v[0], v[1], v[2]]).map(|&i| CellRef::edge(i)),
            2 => self.seg_index.get(&[v[0], v[1]]).map(|&i| CellRef::face(i)),
            _ => None,
        }
    }

    /// Minimal cell containing `p`, or `None` when `p` is off the surface.
    pub fn locate(&self, p: &QPoint3) -> Option<CellRef> {
        let e = self.poly.evaluate(p);
        if e.argmax.len() < 2 {
            return None;
        }
        self.cell_of_dual(&e.argmax)
    }

    /// Geometric membership of `p` in the closed cell `c`, by explicit
    /// generators rather than by evaluating the polynomial.
    pub fn cell_contains(&self, c: CellRef, p: &QPoint3) -> bool {
        match c.dim {
            0 => self.vertices[c.id] == *p,
            1 => {
                let e = &self.edges[c.id];
                let base = &self.vertices[e.start()];
                let Some(t) = (p - base).multiple_of_q(&self.edge_direction(c.id)) else { return false };
                !t.is_negative() && (!e.is_bounded() || t <= Rat::from_integer(1.into()))
            }
            _ => self.face_contains(c.id, p),
        }
    }

    fn face_contains(&self, f: usize, p: &QPoint3) -> bool {
        let face = &self.faces[f];
        let n = ivec_q(face.normal);
        let base = &self.vertices[face.vertices[0]];
        if !(p - base).dot(&n).is_zero() {
            return false;
        }
        // an interior reference point
        let k = int(face.vertices.len() as i64);
        let mut inner = QPoint3::zero();
        for &v in &face.vertices {
            inner = &inner + &self.vertices[v];
        }
        inner = inner.scale(&(Rat::from_integer(1.into()) / k));
        if let Some(rs) = face.rays {
            inner = &inner + &ivec_q(rs[0]);
            inner = &inner + &ivec_q(rs[1]);
        }
        face.edges.iter().all(|&e| {
            let start = &self.vertices[self.edges[e].start()];
            let inward = qcross(&n, &self.edge_direction(e));
            let s_in = (&inner - start).dot(&inward);
            let s_p = (p - start).dot(&inward);
            s_p.is_zero() || s_p.is_positive() == s_in.is_positive()
        })
    }

    /// Balancing at every 1-cell, checked three ways: the stored normals sum
    /// to zero, each is a correctly oriented normal of its 2-cell, and each is
    /// ± the matching side of the dual triangle.
    pub fn check_balancing(&self) -> bool {
        self.edges.iter().enumerate().all(|(e, edge)| {
            let sum = edge.around.iter().fold([0i64; 3], |acc, (_, n)| [acc[0] + n[0], acc[1] + n[1], acc[2] + n[2]]);
            if sum != [0, 0, 0] {
                return false;
            }
            let d = self.edge_direction(e);
            edge.around.iter().all(|&(f, n)| {
                let nq = ivec_q(n);
                let ortho = self.cell_directions(CellRef::face(f)).iter().all(|v| v.dot(&nq).is_zero());
                let w = self.inward_face_direction(e, f);
                let oriented = qcross(&d, &w).dot(&nq).is_positive();
                let side = self.faces[f].dual[1].minus(self.faces[f].dual[0]);
                let matches = n == side || n == [-side[0], -side[1], -side[2]];
                ortho && oriented && matches
            })
        })
    }

    /// Every cell's affine hull is orthogonal to that of its dual cell.
    pub fn check_orthogonality(&self) -> bool {
        let cells = (0..self.edges.len()).map(CellRef::edge).chain((0..self.faces.len()).map(CellRef::face));
        cells.into_iter().all(|c| {
            let dual = self.dual_of(c);
            let dirs = self.cell_directions(c);
            dual[1..].iter().all(|q| {
                let u = ivec_q(q.minus(dual[0]));
                dirs.iter().all(|v| v.dot(&u).is_zero())
            })
        })
    }

    /// A cell is unbounded iff its dual lies in a facet of the simplex.
    pub fn check_unboundedness(&self) -> bool {
        let in_facet = |pts: &[LatticePoint3]| {
            !pts.iter()
                .map(|p| facet_membership(*p, self.delta).unwrap_or(FacetSet::EMPTY))
                .fold(FacetSet::ALL, |a, b| FacetSet(a.0 & b.0))
                .is_empty()
        };
        let edges_ok = self.edges.iter().all(|e| e.is_bounded() != in_facet(&e.dual));
        let faces_ok = self.faces.iter().all(|f| f.is_bounded() != in_facet(&f.dual));
        edges_ok && faces_ok
    }

    /// The three 2-cells around each 1-cell span pairwise different planes.
    pub fn check_distinct_planes(&self) -> bool {
        self.edges.iter().all(|e| {
            let ns = e.around.map(|(f, _)| self.faces[f].normal);
            (0..3).all(|i| (i + 1..3).all(|j| cross(ns[i], ns[j]) != [0, 0, 0]))
        })
    }

    pub fn to_json(&self) -> Value {
        let q = |p: &QPoint3| json!([rat_to_string(&p.x), rat_to_string(&p.y), rat_to_string(&p.z)]);
        let lp = |p: &LatticePoint3| json!([p.x, p.y, p.z]);
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| json!({"id": i, "point": q(v), "dual": self.tetrahedra[i].iter().map(lp).collect::<Vec<_>>()}))
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut o = json!({
                    "id": i,
                    "dual": e.dual.iter().map(lp).collect::<Vec<_>>(),
                    "faces": e.faces(),
                    "normals": e.around.iter().map(|(_, n)| json!(n)).collect::<Vec<_>>(),
                });
                match e.kind {
                    EdgeKind::Bounded { ends } => {
                        o["bounded"] = json!(true);
                        o["endpoints"] = json!(ends);
                    }
                    EdgeKind::Ray { apex, facet } => {
                        o["bounded"] = json!(false);
                        o["apex"] = json!(apex);
                        o["direction"] = json!(omega(facet));
                    }
                }
                o
            })
            .collect();
        let faces: Vec<Value> = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| {
                json!({
                    "id": i,
                    "dual": f.dual.iter().map(lp).collect::<Vec<_>>(),
                    "bounded": f.is_bounded(),
                    "vertices": f.vertices,
                    "edges": f.edges,
                    "rays": f.rays.map(|r| r.to_vec()).unwrap_or_default(),
                    "normal": f.normal,
                })
            })
            .collect();
        json!({"delta": self.delta, "vertices": vertices, "edges": edges, "faces": faces})
    }

    /// OFF text of the bounded 2-cells, optionally clipped to the box
    /// `[lo, hi]³`.
    pub fn to_off(&self, clip: Option<(Rat, Rat)>) -> String {
        let mut pts: Vec<QPoint3> = Vec::new();
        let mut index: BTreeMap<QPoint3, usize> = BTreeMap::new();
        let mut polys: Vec<Vec<usize>> = Vec::new();
        for f in self.faces.iter().filter(|f| f.is_bounded()) {
            let mut poly: Vec<QPoint3> = f.vertices.iter().map(|&v| self.vertices[v].clone()).collect();
            if let Some((lo, hi)) = &clip {
                poly = clip_to_box(poly, lo, hi);
            }
            if poly.len() < 3 {
                continue;
            }
            let ids = poly
                .into_iter()
                .map(|p| {
                    *index.entry(p.clone()).or_insert_with(|| {
                        pts.push(p);
                        pts.len() - 1
                    })
                })
                .collect();
            polys.push(ids);
        }
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} 0", pts.len(), polys.len());
        for p in &pts {
            let _ = writeln!(out, "{} {} {}", rat_to_f64(&p.x), rat_to_f64(&p.y), rat_to_f64(&p.z));
        }
        for poly in &polys {
            let ids: Vec<String> = poly.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "{} {}", poly.len(), ids.join(" "));
        }
        out
    }

    pub fn vertex_of_tetrahedron(&self, t: &[LatticePoint3; 4]) -> Option<usize> {
        self.tet_index.get(&sorted(*t)).copied()
    }
}

fn primitive_of_q(v: &QPoint3) -> Result<IVec3> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let l = v.x.denom().lcm(v.y.denom()).lcm(v.z.denom());
    let c: Vec<i64> = v
        .coords()
        .iter()
        .map(|r| (r.numer() * (&l / r.denom())).to_i64().ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    Ok(primitive([c[0], c[1], c[2]]))
}

/// Sutherland–Hodgman against the six half-spaces of an axis-aligned box.
fn clip_to_box(mut poly: Vec<QPoint3>, lo: &Rat, hi: &Rat) -> Vec<QPoint3> {
    for axis in 0..3 {
        for upper in [false, true] {
            let inside = |p: &QPoint3| {
                let c = p.coords()[axis];
                if upper {
                    c <= hi
                } else {
                    c >= lo
                }
            };
            let bound = if upper { hi } else { lo };
            let mut out = Vec::new();
            for i in 0..poly.len() {
                let a = &poly[i];
                let b = &poly[(i + 1) % poly.len()];
                let (ia, ib) = (inside(a), inside(b));
                if ia {
                    out.push(a.clone());
                }
                if ia != ib {
                    let (ca, cb) = (a.coords()[axis], b.coords()[axis]);
                    let t = (bound - ca) / (cb - ca);
                    out.push(a + &(b - a).scale(&t));
                }
            }
            poly = out;
            if poly.is_empty() {
                return poly;
            }
        }
    }
    poly
}
