//! Tropical lines in R³, their membership in a surface, the combinatorial data
//! of a line on a surface, and classification into isolated lines and
//! two-point families.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::envelope::{envelope, first_change_q, Envelope};
use crate::error::{Error, Result};
use crate::lattice::{frac, int, omega, parse_rat, rat_to_string, solve_linear, IVec3, LinSolution, QPoint3, Rat};
use crate::poly::TropicalPolynomial;
use crate::surface::{CellRef, SurfaceComplex};

/// Combinatorial type. Each non-degenerate type names the ray pairs at the
/// two vertices; the first pair (at `v1`) always contains ray 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineType {
    T12_34,
    T13_24,
    T14_23,
    Degenerate,
}

impl LineType {
    pub const NON_DEGENERATE: [LineType; 3] = [LineType::T12_34, LineType::T13_24, LineType::T14_23];

    /// Rays at `v1` and at `v2`.
    pub fn pairs(self) -> Option<([u8; 2], [u8; 2])> {
        match self {
            LineType::T12_34 => Some(([1, 2], [3, 4])),
            LineType::T13_24 => Some(([1, 3], [2, 4])),
            LineType::T14_23 => Some(([1, 4], [2, 3])),
            LineType::Degenerate => None,
        }
    }

    /// Primitive direction of the bounded edge from `v1` to `v2`.
    pub fn segment_direction(self) -> IVec3 {
        match self.pairs() {
            Some(([a, b], _)) => {
                let (wa, wb) = (omega(a), omega(b));
                [-(wa[0] + wb[0]), -(wa[1] + wb[1]), -(wa[2] + wb[2])]
            }
            None => [0, 0, 0],
        }
    }

    /// The type whose pair at `v1` is `{1, partner}`.
    pub fn with_partner_of_one(partner: u8) -> Option<LineType> {
        match partner {
            2 => Some(LineType::T12_34),
            3 => Some(LineType::T13_24),
            4 => Some(LineType::T14_23),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LineType::T12_34 => "(12)(34)",
            LineType::T13_24 => "(13)(24)",
            LineType::T14_23 => "(14)(23)",
            LineType::Degenerate => "(1234)",
        }
    }

    pub fn parse(s: &str) -> Option<LineType> {
        [LineType::T12_34, LineType::T13_24, LineType::T14_23, LineType::Degenerate]
            .into_iter()
            .find(|t| t.label() == s.trim())
    }
}

impl fmt::Display for LineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One edge of a line as `origin + t·dir`, `t ∈ [0, length]` (`None` = ray).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGeom {
    pub origin: QPoint3,
    pub dir: IVec3,
    pub length: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalLine {
    kind: LineType,
    v1: QPoint3,
    v2: QPoint3,
}

impl TropicalLine {
    /// Checks that `v2 − v1` is a positive multiple of the type's bounded
    /// direction (zero for degenerate lines).
    pub fn new(kind: LineType, v1: QPoint3, v2: QPoint3) -> Result<Self> {
        let d = &v2 - &v1;
        if kind == LineType::Degenerate {
            if !d.is_zero() {
                return Err(Error::MalformedLine("degenerate line with distinct vertices".into()));
            }
        } else {
            match d.multiple_of(kind.segment_direction()) {
                Some(s) if s.is_positive() => {}
                _ => {
                    return Err(Error::MalformedLine(format!(
                        "v2 - v1 = {d} is not a positive multiple of {:?} for type {kind}",
                        kind.segment_direction()
                    )))
                }
            }
        }
        Ok(Self { kind, v1, v2 })
    }

    pub fn degenerate(v: QPoint3) -> Self {
        Self { kind: LineType::Degenerate, v1: v.clone(), v2: v }
    }

    /// Infers the type from the vertex positions, swapping them if needed so
    /// that `v1` carries ray 1.
    pub fn from_vertices(a: QPoint3, b: QPoint3) -> Result<Self> {
        if a == b {
            return Ok(Self::degenerate(a));
        }
        let d = &b - &a;
        for kind in LineType::NON_DEGENERATE {
            if let Some(s) = d.multiple_of(kind.segment_direction()) {
                return if s.is_positive() { Self::new(kind, a, b) } else { Self::new(kind, b, a) };
            }
        }
        Err(Error::MalformedLine(format!("vertex difference {d} is not a tropical line direction")))
    }

    pub fn kind(&self) -> LineType {
        self.kind
    }

    pub fn v1(&self) -> &QPoint3 {
        &self.v1
    }

    pub fn v2(&self) -> &QPoint3 {
        &self.v2
    }

    pub fn vertex(&self, i: u8) -> &QPoint3 {
        if i == 1 {
            &self.v1
        } else {
            &self.v2
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.kind == LineType::Degenerate
    }

    /// Length parameter `s` with `v2 = v1 + s·u` for the primitive bounded direction `u`.
    pub fn segment_length(&self) -> Rat {
        (&self.v2 - &self.v1).multiple_of(self.kind.segment_direction()).unwrap_or_else(Rat::zero)
    }

    /// Which vertex (1 or 2) carries ray `i`.
    pub fn vertex_of_ray(&self, i: u8) -> u8 {
        match self.kind.pairs() {
            Some((p1, _)) if !p1.contains(&i) => 2,
            _ => 1,
        }
    }

    /// Edges `ℓ₁..ℓ₄` (rays in directions `ω₁..ω₄`) and `ℓ₅` (bounded).
    pub fn edges(&self) -> [EdgeGeom; 5] {
        let ray = |i: u8| EdgeGeom { origin: self.vertex(self.vertex_of_ray(i)).clone(), dir: omega(i), length: None };
        [
            ray(1),
            ray(2),
            ray(3),
            ray(4),
            EdgeGeom { origin: self.v1.clone(), dir: self.kind.segment_direction(), length: Some(self.segment_length()) },
        ]
    }

    pub fn contains_point(&self, p: &QPoint3) -> bool {
        self.edges().iter().any(|e| {
            if e.dir == [0, 0, 0] {
                return *p == e.origin;
            }
            match (p - &e.origin).multiple_of(e.dir) {
                Some(t) => !t.is_negative() && e.length.as_ref().is_none_or(|l| t <= *l),
                None => false,
            }
        })
    }

    /// Sum of outgoing primitive directions at each vertex.
    pub fn balancing_defects(&self) -> [IVec3; 2] {
        let Some((p1, p2)) = self.kind.pairs() else {
            let s = (1..=4).map(omega).fold([0; 3], |a, w| [a[0] + w[0], a[1] + w[1], a[2] + w[2]]);
            return [s, s];
        };
        let u = self.kind.segment_direction();
        let at = |pair: [u8; 2], out: IVec3| {
            let (a, b) = (omega(pair[0]), omega(pair[1]));
            [a[0] + b[0] + out[0], a[1] + b[1] + out[1], a[2] + b[2] + out[2]]
        };
        [at(p1, u), at(p2, [-u[0], -u[1], -u[2]])]
    }

    pub fn translate(&self, v: &QPoint3) -> TropicalLine {
        TropicalLine { kind: self.kind, v1: &self.v1 + v, v2: &self.v2 + v }
    }

    pub fn to_json(&self) -> Value {
        let q = |p: &QPoint3| json!([rat_to_string(&p.x), rat_to_string(&p.y), rat_to_string(&p.z)]);
        json!({"type": self.kind.label(), "v1": q(&self.v1), "v2": q(&self.v2)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::MalformedLine(m.to_string());
        let kind = v
            .get("type")
            .and_then(Value::as_str)
            .and_then(LineType::parse)
            .ok_or_else(|| bad("missing or unknown \"type\""))?;
        let point = |key: &str| -> Result<QPoint3> {
            let arr = v.get(key).and_then(Value::as_array).filter(|a| a.len() == 3).ok_or_else(|| bad(key))?;
            let c = arr
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_rat(s),
                    Value::Number(n) => n.as_i64().map(int).or_else(|| n.as_f64().and_then(|f| parse_rat(&f.to_string()))),
                    _ => None,
                })
                .collect::<Option<Vec<Rat>>>()
                .ok_or_else(|| bad(key))?;
            Ok(QPoint3::new(c[0].clone(), c[1].clone(), c[2].clone()))
        };
        Self::new(kind, point("v1")?, point("v2")?)
    }
}

impl fmt::Display for TropicalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} v1={} v2={}", self.kind, self.v1, self.v2)
    }
}

/// Envelope test for one segment or ray.
pub fn contains_edge(f: &TropicalPolynomial, origin: &QPoint3, dir: IVec3, length: Option<&Rat>) -> Envelope {
    envelope(f, origin, dir, length)
}

pub fn contains_line(f: &TropicalPolynomial, l: &TropicalLine) -> bool {
    l.edges()
        .iter()
        .filter(|e| e.dir != [0, 0, 0])
        .all(|e| contains_edge(f, &e.origin, e.dir, e.length.as_ref()).contained)
}

/// Cells met by an edge in a one-dimensional set.
pub fn crossed_cells(x: &SurfaceComplex, e: &EdgeGeom) -> Result<BTreeSet<CellRef>> {
    if e.dir == [0, 0, 0] {
        return x.locate(&e.origin).into_iter().map(Ok).collect();
    }
    let env = contains_edge(&x.poly, &e.origin, e.dir, e.length.as_ref());
    if !env.contained {
        return Err(Error::LineNotOnSurface);
    }
    env.pieces
        .iter()
        .map(|p| x.cell_of_dual(&p.argmax).ok_or_else(|| Error::Inconsistent("argmax is not a cell".into())))
        .collect()
}

/// The combinatorial data of a line on a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineData {
    pub v: [CellRef; 2],
    /// Cells crossed by `ℓ₁..ℓ₅`. For a degenerate line `ℓ₅` is a point and
    /// its set holds the cell of that point.
    pub c: [BTreeSet<CellRef>; 5],
    pub kind: LineType,
}

impl LineData {
    pub fn trespassing(&self, edge: u8) -> bool {
        self.c[(edge - 1) as usize].len() >= 2
    }

    pub fn any_trespassing(&self) -> bool {
        (1..=5).any(|i| self.trespassing(i))
    }
}

pub fn line_data(x: &SurfaceComplex, l: &TropicalLine) -> Result<LineData> {
    if !contains_line(&x.poly, l) {
        return Err(Error::LineNotOnSurface);
    }
    let loc = |p: &QPoint3| x.locate(p).ok_or(Error::LineNotOnSurface);
    let edges = l.edges();
    let mut c: [BTreeSet<CellRef>; 5] = Default::default();
    for (k, e) in edges.iter().enumerate() {
        c[k] = crossed_cells(x, e)?;
    }
    Ok(LineData { v: [loc(l.v1())?, loc(l.v2())?], c, kind: l.kind() })
}

/// A verified one-parameter family `t ↦ L_t`, `t ∈ [0, t_max)`, all of whose
/// members lie on the surface and pass through two common points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyWitness {
    pub base: TropicalLine,
    pub family_type: LineType,
    /// Vertex (1 or 2, in the labelling of the family members) that moves
    /// along an edge direction of the line.
    pub moving_vertex: u8,
    pub direction: IVec3,
    /// Velocity of the other vertex, when it has to follow.
    pub companion_direction: Option<QPoint3>,
    pub t_max: Option<Rat>,
    pub common_points: [QPoint3; 2],
    /// Case of the uniqueness analysis that produced the witness.
    pub case: String,
}

impl FamilyWitness {
    fn velocities(&self) -> [QPoint3; 2] {
        let mv = QPoint3::from_ivec(self.direction);
        let other = self.companion_direction.clone().unwrap_or_else(QPoint3::zero);
        if self.moving_vertex == 1 {
            [mv, other]
        } else {
            [other, mv]
        }
    }

    pub fn line_at(&self, t: &Rat) -> Result<TropicalLine> {
        let [w1, w2] = self.velocities();
        let v1 = self.base.v1().offset_q(&w1, t);
        let v2 = self.base.v2().offset_q(&w2, t);
        if t.is_zero() {
            return Ok(self.base.clone());
        }
        TropicalLine::new(self.family_type, v1, v2)
    }

    /// `k/11 · t_max` for `k = 1..10`, or `1..10` when unbounded.
    pub fn sample_parameters(&self) -> Vec<Rat> {
        (1..=10)
            .map(|k| match &self.t_max {
                Some(m) => m * frac(k, 11),
                None => int(k),
            })
            .collect()
    }

    /// Re-checks membership of the sampled lines and of the common points.
    pub fn verify(&self, f: &TropicalPolynomial) -> bool {
        self.sample_parameters().iter().all(|t| match self.line_at(t) {
            Ok(l) => contains_line(f, &l) && self.common_points.iter().all(|p| l.contains_point(p)),
            Err(_) => false,
        }) && self.common_points[0] != self.common_points[1]
    }
}

impl QPoint3 {
    /// `self + t·v` for a rational direction.
    pub fn offset_q(&self, v: &QPoint3, t: &Rat) -> QPoint3 {
        self + &v.scale(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineClass {
    Isolated,
    Family(Box<FamilyWitness>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub case: String,
    pub class: LineClass,
}

impl Classification {
    pub fn is_family(&self) -> bool {
        matches!(self.class, LineClass::Family(_))
    }
}

struct Candidate {
    family_type: LineType,
    moving_vertex: u8,
    direction: IVec3,
    companion: Option<QPoint3>,
    cap: Option<Rat>,
}

fn neg(v: IVec3) -> IVec3 {
    [-v[0], -v[1], -v[2]]
}

fn add(a: IVec3, b: IVec3) -> IVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn min_opt(a: Option<Rat>, b: Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn try_candidate(f: &TropicalPolynomial, base: &TropicalLine, cand: &Candidate, case: &str) -> Option<FamilyWitness> {
    let mut w = FamilyWitness {
        base: base.clone(),
        family_type: cand.family_type,
        moving_vertex: cand.moving_vertex,
        direction: cand.direction,
        companion_direction: cand.companion.clone(),
        t_max: None,
        common_points: [QPoint3::zero(), QPoint3::zero()],
        case: case.to_string(),
    };
    let vel = w.velocities();
    let mut t_max = cand.cap.clone();
    for (k, v) in vel.iter().enumerate() {
        if !v.is_zero() {
            t_max = min_opt(t_max, first_change_q(f, base.vertex(k as u8 + 1), v));
        }
    }
    w.t_max = t_max;
    let samples: Vec<TropicalLine> = w.sample_parameters().iter().map(|t| w.line_at(t)).collect::<Result<_>>().ok()?;
    if !samples.iter().all(|l| contains_line(f, l)) {
        return None;
    }
    // candidate common points: the base vertices and points far out on its rays
    let reach = samples.iter().chain(std::iter::once(base)).fold(Rat::one(), |acc, l| {
        let span = [l.v1(), l.v2()]
            .iter()
            .flat_map(|p| p.coords().map(|c| c.abs()))
            .fold(Rat::zero(), |a, c| if c > a { c } else { a });
        if span > acc {
            span
        } else {
            acc
        }
    });
    let k = reach * int(4) + int(1);
    let mut probes = vec![base.v1().clone(), base.v2().clone()];
    for i in 1..=4u8 {
        let o = base.vertex(base.vertex_of_ray(i));
        probes.push(o.offset(omega(i), &k));
        probes.push(o.offset(omega(i), &(&k + Rat::one())));
    }
    let mut common: Vec<QPoint3> = Vec::new();
    for p in probes {
        if !common.contains(&p) && samples.iter().chain(std::iter::once(base)).all(|l| l.contains_point(&p)) {
            common.push(p);
        }
    }
    if common.len() < 2 {
        return None;
    }
    w.common_points = [common[0].clone(), common[1].clone()];
    Some(w)
}

/// The six ways to pull a degenerate line apart, moving one ray pair off the
/// vertex in the direction `ω_a + ω_b` of that pair.
fn degenerate_splits() -> Vec<Candidate> {
    let mut out = Vec::new();
    for t in LineType::NON_DEGENERATE {
        let (p1, p2) = t.pairs().expect("non-degenerate");
        for (vertex, pair) in [(1u8, p1), (2u8, p2)] {
            out.push(Candidate {
                family_type: t,
                moving_vertex: vertex,
                direction: add(omega(pair[0]), omega(pair[1])),
                companion: None,
                cap: None,
            });
        }
    }
    out
}

/// Moving one vertex alone along the bounded edge, away from or towards the
/// other vertex.
fn slide_candidates(l: &TropicalLine, vertex: u8) -> Vec<Candidate> {
    let u = l.kind().segment_direction();
    let away = if vertex == 2 { u } else { neg(u) };
    vec![
        Candidate { family_type: l.kind(), moving_vertex: vertex, direction: away, companion: None, cap: None },
        Candidate {
            family_type: l.kind(),
            moving_vertex: vertex,
            direction: neg(away),
            companion: None,
            cap: Some(l.segment_length()),
        },
    ]
}

/// Vertex `b` slides along its ray `d` while vertex `a` follows inside its
/// 1-cell (direction `e`) so the bounded edge keeps its direction.
fn ray_slide_candidates(x: &SurfaceComplex, l: &TropicalLine, b: u8, d: u8, e_cell: CellRef) -> Vec<Candidate> {
    let e = x.edge_direction(e_cell.id);
    let u = QPoint3::from_ivec(l.kind().segment_direction());
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let w = omega(d).map(|c| c * sign);
        // w = ν·e + m·u
        let rows: Vec<Vec<Rat>> = (0..3).map(|k| vec![e.coords()[k].clone(), u.coords()[k].clone()]).collect();
        let rhs: Vec<Rat> = w.iter().map(|&c| int(c)).collect();
        if let LinSolution::Unique(sol) = solve_linear(rows, rhs) {
            let companion = e.scale(&sol[0]);
            let cap = if sol[1].is_zero() {
                None
            } else {
                // the bounded edge shrinks when its length changes by −|m|·t
                let s = l.segment_length();
                let shrink = if b == 2 { -&sol[1] } else { sol[1].clone() };
                shrink.is_positive().then(|| s / shrink)
            };
            out.push(Candidate { family_type: l.kind(), moving_vertex: b, direction: w, companion: Some(companion), cap });
        }
    }
    out
}

/// Looks for a verified two-point family through `l` using the elementary
/// perturbations (no degree restriction).
pub fn find_family(x: &SurfaceComplex, l: &TropicalLine) -> Result<Option<FamilyWitness>> {
    if !contains_line(&x.poly, l) {
        return Err(Error::LineNotOnSurface);
    }
    let cands: Vec<Candidate> = if l.is_degenerate() {
        degenerate_splits()
    } else {
        let mut c = slide_candidates(l, 1);
        c.extend(slide_candidates(l, 2));
        c
    };
    Ok(cands.iter().find_map(|c| try_candidate(&x.poly, l, c, "perturbation search")))
}

/// Walks the uniqueness case table on the dimensions of the cells holding the
/// two vertices. Where the data do not determine the line, the perturbation
/// identified by the case is constructed and verified. Where they do, the
/// elementary perturbations are still tried, since a determined line may sit
/// inside a family; only when none verifies is the line reported isolated.
pub fn classify_line(x: &SurfaceComplex, l: &TropicalLine) -> Result<Classification> {
    if x.delta < 3 {
        return Err(Error::DegreeTooLow(x.delta));
    }
    let data = line_data(x, l)?;
    let f = &x.poly;
    let fallback = |case: String| -> Result<Classification> {
        let class = match find_family(x, l)? {
            Some(w) => LineClass::Family(Box::new(FamilyWitness { case: case.clone(), ..w })),
            None => LineClass::Isolated,
        };
        Ok(Classification { case, class })
    };
    if l.is_degenerate() {
        return fallback(format!("degenerate, dim V = {}", data.v[0].dim));
    }
    let (p1, p2) = l.kind().pairs().expect("non-degenerate");
    // A = lower-dimensional vertex
    let (a, b) = if data.v[0].dim <= data.v[1].dim { (1u8, 2u8) } else { (2u8, 1u8) };
    let (pa, pb) = if a == 1 { (p1, p2) } else { (p2, p1) };
    let (da, db) = (data.v[(a - 1) as usize].dim, data.v[(b - 1) as usize].dim);
    let tres = |j: u8| data.trespassing(j);
    let [c, d] = pb;
    let case_label = format!("({da},{db})");
    let planned: Option<(String, Vec<Candidate>)> = match (da, db) {
        (0, 2) if !tres(c) && !tres(d) => Some((format!("{case_label}: free vertex along the bounded edge"), slide_candidates(l, b))),
        (1, 2) => {
            let tc = [tres(c), tres(d)];
            let others = tres(pa[0]) || tres(pa[1]) || tres(5);
            match (tc, others) {
                ([true, true], _) => None,
                ([true, false], true) | ([false, true], true) => None,
                ([true, false], false) | ([false, true], false) => {
                    let dd = if tc[0] { c } else { d };
                    let e_cell = data.v[(a - 1) as usize];
                    Some((format!("{case_label} iii: along trespassing ray {dd}"), ray_slide_candidates(x, l, b, dd, e_cell)))
                }
                ([false, false], true) => Some((format!("{case_label} iv: along the bounded edge"), slide_candidates(l, b))),
                ([false, false], false) => {
                    return Err(Error::Inconsistent("no trespassing edge with vertices on a 1-cell and a 2-cell".into()))
                }
            }
        }
        (2, 2) => {
            let mut cands = Vec::new();
            for (v, pair) in [(a, pa), (b, pb)] {
                if !tres(pair[0]) && !tres(pair[1]) {
                    cands.extend(slide_candidates(l, v));
                }
            }
            (!cands.is_empty()).then(|| (format!("{case_label}: vertex with non-trespassing rays along the bounded edge"), cands))
        }
        _ => None,
    };
    match planned {
        Some((case, cands)) => {
            let w = cands
                .iter()
                .find_map(|c| try_candidate(f, l, c, &case))
                .ok_or_else(|| Error::Inconsistent(format!("case {case}: predicted perturbation does not verify")))?;
            Ok(Classification { case, class: LineClass::Family(Box::new(w)) })
        }
        None => fallback(format!("{case_label}: determined by its data")),
    }
}

/// Outcome of asking for the lines through two points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Through {
    Unique(TropicalLine),
    Infinite(String),
}

/// The tropical line through two points, when unique.
///
/// In homogeneous coordinates `d = (Q−P, 0)` and the rays are `−e_i`. Sorting
/// the entries of `d` as `d_{i1} < d_{i2} < d_{i3} < d_{i4}`, the vertex near
/// `P` carries rays `i3, i4` and sits at `P + (d_{i4} − d_{i3})·e_{i4}`; the
/// bounded edge has length `d_{i3} − d_{i2}` in direction `e_{i3} + e_{i4}`,
/// and `Q` lies on ray `i1` of the far vertex.
pub fn lines_through(p: &QPoint3, q: &QPoint3) -> Result<Through> {
    if p == q {
        return Err(Error::CoincidentPoints);
    }
    let d = q - p;
    let h = [d.x.clone(), d.y.clone(), d.z.clone(), Rat::zero()];
    for i in 0..4 {
        for j in i + 1..4 {
            if h[i] == h[j] {
                let why = if j == 3 {
                    format!("Q - P has a zero coordinate (coordinate {})", i + 1)
                } else {
                    format!("Q - P has equal coordinates {} and {}", i + 1, j + 1)
                };
                return Ok(Through::Infinite(why));
            }
        }
    }
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&a, &b| h[a].cmp(&h[b]));
    let [_, i2, i3, i4] = idx;
    let alpha = &h[i4] - &h[i3];
    let s = &h[i3] - &h[i2];
    // homogeneous unit vector e_k as an affine displacement
    let unit = |k: usize| -> QPoint3 {
        if k == 3 {
            QPoint3::from_ints(-1, -1, -1)
        } else {
            let mut v = [0i64; 3];
            v[k] = 1;
            QPoint3::from_ivec(v)
        }
    };
    let near = p.offset_q(&unit(i4), &alpha);
    let far = near.offset_q(&(&unit(i3) + &unit(i4)), &s);
    let line = TropicalLine::from_vertices(near, far)?;
    if !(line.contains_point(p) && line.contains_point(q)) {
        return Err(Error::Inconsistent("constructed line misses an input point".into()));
    }
    Ok(Through::Unique(line))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const G3: &str = "-22x^3+16x^2y-10x^2z+0xy^2+0xz^2+8xyz-23y^3-12y^2z-5yz^2+0z^3-14x^2+14xy-3xz-6y^2+4yz+0z^2-8x+6y-z-3";

    fn g3() -> SurfaceComplex {
        SurfaceComplex::build(&TropicalPolynomial::parse(G3).unwrap()).unwrap()
    }

    fn q(x: i64, y: i64, z: i64) -> QPoint3 {
        QPoint3::from_ints(x, y, z)
    }

    #[test]
    fn type_directions_balance() {
        for t in LineType::NON_DEGENERATE {
            let l = TropicalLine::new(t, q(0, 0, 0), QPoint3::from_ivec(t.segment_direction())).unwrap();
            assert_eq!(l.balancing_defects(), [[0, 0, 0], [0, 0, 0]]);
        }
        assert_eq!(LineType::T12_34.segment_direction(), [1, 1, 0]);
        assert_eq!(LineType::T13_24.segment_direction(), [1, 0, 1]);
        assert_eq!(LineType::T14_23.segment_direction(), [0, -1, -1]);
        assert!(TropicalLine::new(LineType::T12_34, q(0, 0, 0), q(-1, -1, 0)).is_err());
        let l = TropicalLine::from_vertices(q(1, 1, 0), q(0, 0, 0)).unwrap();
        assert_eq!(l.kind(), LineType::T12_34);
        assert_eq!(l.v1(), &q(0, 0, 0));
    }

    #[test]
    fn envelope_examples_on_cubic() {
        let x = g3();
        let v = q(1, -21, -2);
        assert!(contains_edge(&x.poly, &v, [0, 0, -1], None).contained);
        let deg = TropicalLine::degenerate(v.clone());
        assert!(contains_line(&x.poly, &deg));
        assert!(!contains_line(&x.poly, &deg.translate(&q(0, 0, 1))));
        assert!(!contains_edge(&x.poly, &q(100, 100, 100), [1, 0, 0], Some(&int(3))).contained);
    }

    #[test]
    fn degenerate_line_data_on_cubic() {
        let x = g3();
        let l = TropicalLine::degenerate(q(1, -21, -2));
        let data = line_data(&x, &l).unwrap();
        assert_eq!(data.v[0], data.v[1]);
        assert_eq!(data.v[0].dim, 0);
        assert!(data.c.iter().all(|c| c.len() == 1));
        assert_eq!(data.kind, LineType::Degenerate);
    }

    #[test]
    fn cubic_family() {
        let x = g3();
        let l = TropicalLine::degenerate(q(1, -21, -2));
        let c = classify_line(&x, &l).unwrap();
        let LineClass::Family(w) = c.class else { panic!("expected a family, got {:?}", c) };
        assert_eq!(w.direction, [-1, -1, 0]);
        assert_eq!(w.family_type, LineType::T12_34);
        assert!(w.verify(&x.poly));
        // a member: V1 on a 2-cell, V2 at the vertex
        let t = w.sample_parameters()[0].clone();
        let member = w.line_at(&t).unwrap();
        let data = line_data(&x, &member).unwrap();
        assert_eq!(data.v[0].dim, 2);
        assert_eq!(data.kind, LineType::T12_34);
        assert_eq!(data.v[1].dim, 0);
    }

    #[test]
    fn low_degree_rejected() {
        let x = SurfaceComplex::build(&TropicalPolynomial::parse("1 + 2*x - 3*y + 5*z").unwrap()).unwrap();
        let l = TropicalLine::degenerate(q(-1, 4, -4));
        assert_eq!(classify_line(&x, &l), Err(Error::DegreeTooLow(1)));
    }

    #[test]
    fn through_examples() {
        let t = lines_through(&q(0, 0, 0), &q(1, 2, 4)).unwrap();
        let Through::Unique(l) = t else { panic!() };
        assert!(l.contains_point(&q(0, 0, 0)) && l.contains_point(&q(1, 2, 4)));
        assert!(matches!(lines_through(&q(0, 0, 0), &q(1, 1, 2)).unwrap(), Through::Infinite(_)));
        assert!(matches!(lines_through(&q(0, 0, 0), &q(0, 3, 5)).unwrap(), Through::Infinite(_)));
        assert_eq!(lines_through(&q(1, 1, 1), &q(1, 1, 1)), Err(Error::CoincidentPoints));
    }

    /// Every line of any type with `P` and `Q` on prescribed edges, by solving
    /// the linear system in `(v1, s, a_P, a_Q)`.
    pub(crate) fn brute_force_lines(p: &QPoint3, qq: &QPoint3) -> (Vec<TropicalLine>, bool) {
        let mut found: Vec<TropicalLine> = Vec::new();
        let mut infinite = false;
        for t in LineType::NON_DEGENERATE.into_iter().chain([LineType::Degenerate]) {
            let u = t.segment_direction();
            let (pa, _) = t.pairs().unwrap_or(([1, 2], [3, 4]));
            // edge k: 1..4 rays, 5 segment; returns (vertex 1|2, direction)
            let edge = |k: u8| -> (u8, IVec3) {
                if k == 5 {
                    (1, u)
                } else if t == LineType::Degenerate || pa.contains(&k) {
                    (1, omega(k))
                } else {
                    (2, omega(k))
                }
            };
            let ks: Vec<u8> = if t == LineType::Degenerate { vec![1, 2, 3, 4] } else { vec![1, 2, 3, 4, 5] };
            for &kp in &ks {
                for &kq in &ks {
                    // unknowns: v1 (3), s, aP, aQ
                    let mut rows = Vec::new();
                    let mut rhs = Vec::new();
                    for (pt, k, col) in [(p, kp, 4usize), (qq, kq, 5usize)] {
                        let (vtx, dir) = edge(k);
                        for c in 0..3 {
                            let mut row = vec![int(0); 6];
                            row[c] = int(1);
                            if vtx == 2 {
                                row[3] = int(u[c]);
                            }
                            row[col] = int(dir[c]);
                            rows.push(row);
                            rhs.push(pt.coords()[c].clone());
                        }
                    }
                    if t == LineType::Degenerate {
                        let mut row = vec![int(0); 6];
                        row[3] = int(1);
                        rows.push(row);
                        rhs.push(int(0));
                    }
                    match solve_linear(rows, rhs) {
                        LinSolution::Unique(sol) => {
                            let ok = !sol[4].is_negative()
                                && !sol[5].is_negative()
                                && (t == LineType::Degenerate || sol[3].is_positive())
                                && (kp != 5 || sol[4] <= sol[3])
                                && (kq != 5 || sol[5] <= sol[3]);
                            if ok {
                                let v1 = QPoint3::new(sol[0].clone(), sol[1].clone(), sol[2].clone());
                                let v2 = v1.offset(u, &sol[3]);
                                let l = TropicalLine::new(t, v1, v2).unwrap();
                                if !found.contains(&l) {
                                    found.push(l);
                                }
                            }
                        }
                        LinSolution::Underdetermined(_) => infinite = true,
                        LinSolution::Inconsistent => {}
                    }
                }
            }
        }
        (found, infinite)
    }

    #[test]
    fn through_matches_brute_force() {
        let (found, _) = brute_force_lines(&q(0, 0, 0), &q(1, 2, 4));
        let Through::Unique(l) = lines_through(&q(0, 0, 0), &q(1, 2, 4)).unwrap() else { panic!() };
        assert_eq!(found, vec![l]);
    }

    fn arb_q() -> impl Strategy<Value = QPoint3> {
        prop::array::uniform3((-20i64..20, 1i64..4)).prop_map(|c| QPoint3::new(frac(c[0].0, c[0].1), frac(c[1].0, c[1].1), frac(c[2].0, c[2].1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn through_is_unique_when_generic(p in arb_q(), qq in arb_q()) {
            prop_assume!(p != qq);
            match lines_through(&p, &qq).unwrap() {
                Through::Unique(l) => {
                    prop_assert!(l.contains_point(&p) && l.contains_point(&qq));
                    prop_assert_eq!(l.balancing_defects(), [[0, 0, 0], [0, 0, 0]]);
                    let (found, _) = brute_force_lines(&p, &qq);
                    prop_assert_eq!(found, vec![l]);
                }
                Through::Infinite(_) => {
                    let d = &qq - &p;
                    let h = [d.x, d.y, d.z, Rat::zero()];
                    prop_assert!((0..4).any(|i| (i + 1..4).any(|j| h[i] == h[j])));
                }
            }
        }

        #[test]
        fn json_round_trip(p in arb_q(), s in 1i64..9, t in 0usize..4) {
            let kind = [LineType::T12_34, LineType::T13_24, LineType::T14_23, LineType::Degenerate][t];
            let v2 = p.offset(kind.segment_direction(), &int(s));
            let l = TropicalLine::new(kind, p, v2).unwrap();
            prop_assert_eq!(TropicalLine::from_json(&l.to_json()).unwrap(), l);
        }
    }
}
