//! Smooth tropical quadrics: the compact 2-cell and the two lines through each
//! of its points.

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::envelope::envelope;
use crate::error::{Error, Result};
use crate::lattice::{facet_membership, frac, IVec3, LatticePoint3, Perm4, QPoint3, Rat};
use crate::lines::{contains_line, LineType, TropicalLine};
use crate::poly::TropicalPolynomial;
use crate::subdivision::gamma2_diagonals;
use crate::surface::{CellRef, EdgeKind, SurfaceComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactCellInfo {
    pub cell: CellRef,
    pub diagonal: [LatticePoint3; 2],
    /// Normal of the cell with coordinate multiset `{−1, 1, 1}`.
    pub normal: IVec3,
    pub vertices: Vec<QPoint3>,
}

fn sorted_pair(a: LatticePoint3, b: LatticePoint3) -> [LatticePoint3; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn compact_cell(x: &SurfaceComplex) -> Result<CompactCellInfo> {
    if x.delta != 2 {
        return Err(Error::NotAQuadric);
    }
    let diagonals: Vec<[LatticePoint3; 2]> = gamma2_diagonals().iter().map(|d| sorted_pair(d.0, d.1)).collect();
    let hits: Vec<usize> = (0..x.faces.len())
        .filter(|&i| diagonals.contains(&sorted_pair(x.faces[i].dual[0], x.faces[i].dual[1])))
        .collect();
    let [id] = hits[..] else {
        return Err(Error::Inconsistent(format!("expected exactly one diagonal, found {}", hits.len())));
    };
    let face = &x.faces[id];
    if !face.is_bounded() {
        return Err(Error::Inconsistent("the diagonal's 2-cell is unbounded".into()));
    }
    let d = face.dual[1].minus(face.dual[0]);
    let normal = if d.iter().sum::<i64>() == 1 { d } else { [-d[0], -d[1], -d[2]] };
    Ok(CompactCellInfo {
        cell: CellRef::face(id),
        diagonal: sorted_pair(face.dual[0], face.dual[1]),
        normal,
        vertices: face.vertices.iter().map(|&v| x.vertices[v].clone()).collect(),
    })
}

/// The two lines through a point together with the apex of the dual triangle
/// at each end of their bounded edges (in the frame where the diagonal is
/// `(1,0,0)–(0,1,1)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricLines {
    pub lines: [TropicalLine; 2],
    pub apexes: [[LatticePoint3; 2]; 2],
    /// Permutation taking the surface to the normalized frame.
    pub frame: Perm4,
}

/// A surface expressed in the frame where its compact cell is dual to `PP′`.
struct Normalized {
    sigma: Perm4,
    x: SurfaceComplex,
    info: CompactCellInfo,
}

fn normalize(x: &SurfaceComplex) -> Result<Normalized> {
    let info = compact_cell(x)?;
    let target = sorted_pair(LatticePoint3::new(1, 0, 0), LatticePoint3::new(0, 1, 1));
    let sigma = Perm4::all()
        .into_iter()
        .find(|s| sorted_pair(s.act_on_point(info.diagonal[0], 2), s.act_on_point(info.diagonal[1], 2)) == target)
        .ok_or_else(|| Error::Inconsistent("diagonal not in the S4 orbit of PP'".into()))?;
    if sigma == Perm4::IDENTITY {
        return Ok(Normalized { sigma, x: x.clone(), info });
    }
    let nx = SurfaceComplex::build(&x.poly.s4_action(sigma))?;
    let info = compact_cell(&nx)?;
    Ok(Normalized { sigma, x: nx, info })
}

/// How far `p + t·dir` stays in the closed cell dual to `diag`, for `t ≥ 0`.
fn exit_parameter(f: &TropicalPolynomial, p: &QPoint3, dir: IVec3, diag: &[LatticePoint3; 2]) -> Rat {
    let env = envelope(f, p, dir, None);
    let mut t = Rat::zero();
    for piece in &env.pieces {
        if !(piece.argmax.contains(&diag[0]) && piece.argmax.contains(&diag[1])) {
            break;
        }
        match &piece.end {
            Some(e) => t = e.clone(),
            None => break,
        }
    }
    t
}

/// The boundary edge of the compact cell at an exit point. At a vertex of
/// the cell: among the adjacent boundary edges from which `inward` points into
/// the cell, the one with the smallest dual triangle.
fn exit_edge(n: &Normalized, q: &QPoint3, inward: IVec3) -> Result<usize> {
    let face = &n.x.faces[n.info.cell.id];
    let c = n.x.locate(q).ok_or(Error::NotInCompactCell)?;
    match c.dim {
        1 if face.edges.contains(&c.id) => Ok(c.id),
        0 => {
            let centroid = cell_centroid(&n.x, n.info.cell.id);
            face.edges
                .iter()
                .copied()
                .filter(|&e| match n.x.edges[e].kind {
                    EdgeKind::Bounded { ends } => ends.contains(&c.id),
                    EdgeKind::Ray { .. } => false,
                })
                .filter(|&e| {
                    // component of u along the inward normal of e
                    let d = n.x.edge_direction(e);
                    let w = &centroid - q;
                    let u = QPoint3::from_ivec(inward);
                    (u.dot(&w) * d.dot(&d) - w.dot(&d) * u.dot(&d)).is_positive()
                })
                .min_by_key(|&e| {
                    let mut d = n.x.edges[e].dual;
                    d.sort();
                    d
                })
                .ok_or_else(|| Error::Inconsistent("no admissible boundary edge at a cell vertex".into()))
        }
        _ => Err(Error::Inconsistent(format!("exit point {q} is not on the cell boundary"))),
    }
}

fn cell_centroid(x: &SurfaceComplex, face: usize) -> QPoint3 {
    let vs = &x.faces[face].vertices;
    vs.iter()
        .fold(QPoint3::zero(), |acc, &v| &acc + &x.vertices[v])
        .scale(&frac(1, vs.len() as i64))
}

fn apex(n: &Normalized, edge: usize) -> LatticePoint3 {
    let e = &n.x.edges[edge];
    *e.dual.iter().find(|a| !n.info.diagonal.contains(a)).expect("triangle has a third vertex")
}

/// Two distinct lines on the quadric through `p`, a point of its compact cell.
pub fn two_lines_through(x: &SurfaceComplex, p: &QPoint3) -> Result<QuadricLines> {
    let n = normalize(x)?;
    let inv = n.sigma.inverse();
    let np = n.sigma.act_on_qpoint(p);
    if !n.x.cell_contains(n.info.cell, &np) {
        return Err(Error::NotInCompactCell);
    }
    let diag = n.info.diagonal;
    let mut lines = Vec::with_capacity(2);
    let mut apexes = [[LatticePoint3::new(0, 0, 0); 2]; 2];
    for (k, kind) in [LineType::T12_34, LineType::T13_24].into_iter().enumerate() {
        let u = kind.segment_direction();
        let back = [-u[0], -u[1], -u[2]];
        let lo = np.offset(back, &exit_parameter(&n.x.poly, &np, back, &diag));
        let hi = np.offset(u, &exit_parameter(&n.x.poly, &np, u, &diag));
        apexes[k] = [apex(&n, exit_edge(&n, &lo, u)?), apex(&n, exit_edge(&n, &hi, back)?)];
        let line = TropicalLine::from_vertices(inv.act_on_qpoint(&lo), inv.act_on_qpoint(&hi))?;
        if !contains_line(&x.poly, &line) || !line.contains_point(p) {
            return Err(Error::Inconsistent(format!("constructed ruling {line} is not on the surface")));
        }
        lines.push(line);
    }
    let [a, b]: [TropicalLine; 2] = lines.try_into().expect("two lines");
    if a == b {
        return Err(Error::Inconsistent("the two rulings coincide".into()));
    }
    Ok(QuadricLines { lines: [a, b], apexes, frame: n.sigma })
}

/// Whether the apexes sit on the edges of `Γ₂` the argument requires: for the
/// first line on `F₁∩F₂` and `F₃∩F₄`, for the second on `F₁∩F₃` and `F₂∩F₄`.
pub fn apexes_have_exits(q: &QuadricLines) -> bool {
    let need = [[[1u8, 2], [3, 4]], [[1, 3], [2, 4]]];
    (0..2).all(|k| {
        (0..2).all(|j| {
            facet_membership(q.apexes[k][j], 2).is_ok_and(|fs| need[k][j].iter().all(|&i| fs.contains(i)))
        })
    })
}

/// For each boundary edge `E` of the compact cell `C`: a vector pointing from
/// `E` into `C` has negative inner product with every vector pointing from the
/// diagonal into the dual triangle of `E`.
pub fn boundary_inner_products_negative(x: &SurfaceComplex, info: &CompactCellInfo) -> bool {
    let face = &x.faces[info.cell.id];
    let centroid = cell_centroid(x, info.cell.id);
    face.edges.iter().all(|&e| {
        let EdgeKind::Bounded { ends } = x.edges[e].kind else { return false };
        let mid = (&x.vertices[ends[0]] + &x.vertices[ends[1]]).scale(&frac(1, 2));
        let v = &centroid - &mid;
        let a = x.edges[e].dual.iter().copied().find(|a| !info.diagonal.contains(a)).expect("apex");
        info.diagonal.iter().all(|&d| {
            let u = a.minus(d);
            v.dot_int(u).is_negative()
        }) && {
            // also from the midpoint of the diagonal
            let u2 = [
                2 * a.x - info.diagonal[0].x - info.diagonal[1].x,
                2 * a.y - info.diagonal[0].y - info.diagonal[1].y,
                2 * a.z - info.diagonal[0].z - info.diagonal[1].z,
            ];
            v.dot_int(u2).is_negative()
        }
    })
}

/// Uniform-ish random rational point of the closed compact cell: a random
/// convex combination of its vertices.
pub fn random_cell_point<R: Rng>(info: &CompactCellInfo, rng: &mut R) -> QPoint3 {
    let weights: Vec<i64> = info.vertices.iter().map(|_| rng.gen_range(0..=50)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return info.vertices[0].clone();
    }
    info.vertices
        .iter()
        .zip(&weights)
        .fold(QPoint3::zero(), |acc, (v, &w)| &acc + &v.scale(&frac(w, total)))
}

/// The normal has shape `−e_i+e_j+e_k` and is orthogonal to the cell.
pub fn normal_is_orthogonal(info: &CompactCellInfo) -> bool {
    let n = info.normal;
    let mut shape = n.to_vec();
    shape.sort();
    shape == vec![-1, 1, 1]
        && info.vertices.windows(2).all(|w| (&w[1] - &w[0]).dot_int(n).is_zero())
}
