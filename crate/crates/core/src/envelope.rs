//! Upper envelope of a tropical polynomial restricted to a segment or ray.
//!
//! Along `origin + t·dir` every term becomes an affine function of `t`, and the
//! argmax set is constant between consecutive breakpoints of their maximum.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::lattice::{IVec3, LatticePoint3, QPoint3, Rat};
use crate::poly::TropicalPolynomial;

/// A maximal open parameter interval with constant argmax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Rat,
    /// `None` for the unbounded tail of a ray.
    pub end: Option<Rat>,
    pub argmax: BTreeSet<LatticePoint3>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    /// Whether the maximum is attained at least twice along the whole path.
    pub contained: bool,
    pub pieces: Vec<Piece>,
}

struct Affine {
    exp: LatticePoint3,
    intercept: Rat,
    slope: i64,
}

#[cfg(test)]
fn argmax_at(fs: &[Affine], t: &Rat) -> BTreeSet<LatticePoint3> {
    let mut best: Option<Rat> = None;
    let mut out = BTreeSet::new();
    for f in fs {
        let v = &f.intercept + t * Rat::from_integer(f.slope.into());
        match &best {
            Some(b) if v < *b => {}
            Some(b) if v == *b => {
                out.insert(f.exp);
            }
            _ => {
                best = Some(v);
                out.clear();
                out.insert(f.exp);
            }
        }
    }
    out
}

/// Envelope of `f` along `origin + t·dir` for `t ∈ [0, length]`, or `t ≥ 0`
/// when `length` is `None`.
///
/// Sweeps forward from `t = 0`: on each open piece the maximum is carried by
/// the tied terms of largest slope, and the next breakpoint is the earliest
/// crossing of a steeper term with that leader.
pub fn envelope(f: &TropicalPolynomial, origin: &QPoint3, dir: IVec3, length: Option<&Rat>) -> Envelope {
    let fs: Vec<Affine> = f
        .terms()
        .iter()
        .map(|(a, c)| Affine { exp: *a, intercept: c + a.pair(origin), slope: crate::lattice::dot(a.coords(), dir) })
        .collect();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut contained = true;
    let mut t = Rat::zero();
    loop {
        let values: Vec<Rat> = fs.iter().map(|f| &f.intercept + &t * Rat::from_integer(f.slope.into())).collect();
        let best = values.iter().max().expect("polynomial has terms").clone();
        let ties: Vec<usize> = (0..fs.len()).filter(|&i| values[i] == best).collect();
        contained &= ties.len() >= 2;
        let lead = ties.iter().map(|&i| fs[i].slope).max().expect("nonempty");
        let argmax: BTreeSet<LatticePoint3> = ties.iter().filter(|&&i| fs[i].slope == lead).map(|&i| fs[i].exp).collect();
        let next = (0..fs.len())
            .filter(|&j| fs[j].slope > lead)
            .map(|j| &t + (&best - &values[j]) / Rat::from_integer((fs[j].slope - lead).into()))
            .min();
        let stop = match (&next, length) {
            (Some(n), Some(l)) if n < l => None,
            (Some(_), Some(l)) | (None, Some(l)) => Some(Some(l.clone())),
            (Some(_), None) => None,
            (None, None) => Some(None),
        };
        if let Some(end) = stop {
            if end.as_ref().is_none_or(|l| *l > t) {
                contained &= argmax.len() >= 2;
                push_piece(&mut pieces, t, end.clone(), argmax);
            }
            if let Some(l) = end {
                if l > Rat::zero() {
                    let at_end = fs.iter().map(|f| &f.intercept + &l * Rat::from_integer(f.slope.into()));
                    let top = at_end.clone().max().expect("nonempty");
                    contained &= at_end.filter(|v| *v == top).count() >= 2;
                }
            }
            break;
        }
        let n = next.expect("a breakpoint exists");
        contained &= argmax.len() >= 2;
        push_piece(&mut pieces, t, Some(n.clone()), argmax);
        t = n;
    }
    Envelope { contained, pieces }
}

fn push_piece(pieces: &mut Vec<Piece>, start: Rat, end: Option<Rat>, argmax: BTreeSet<LatticePoint3>) {
    if let Some(last) = pieces.last_mut() {
        if last.argmax == argmax {
            last.end = end;
            return;
        }
    }
    pieces.push(Piece { start, end, argmax });
}

/// First parameter `t > 0` at which the argmax along the path changes.
pub fn first_change(f: &TropicalPolynomial, origin: &QPoint3, dir: IVec3) -> Option<Rat> {
    envelope(f, origin, dir, None).pieces.first().and_then(|p| p.end.clone())
}

/// Same as [`first_change`] for a rational direction, by clearing denominators.
pub fn first_change_q(f: &TropicalPolynomial, origin: &QPoint3, dir: &QPoint3) -> Option<Rat> {
    let (v, scale) = integer_direction(dir);
    first_change(f, origin, v).map(|t| t * scale)
}

/// Clears denominators: returns `(v, l)` with `dir = v / l`, so parameter `τ`
/// along `v` is parameter `τ·l` along `dir`.
pub fn integer_direction(dir: &QPoint3) -> (IVec3, Rat) {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let l = dir.x.denom().lcm(dir.y.denom()).lcm(dir.z.denom());
    let v = dir.coords().map(|c| (c.numer() * (&l / c.denom())).to_i64().expect("direction fits in i64"));
    (v, Rat::from_integer(l))
}
