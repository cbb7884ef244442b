//! Tetrahedra with four exits: facet distributions, four-exit distributions
//! (FEDs), the six classes they fall into, and the Diophantine searches that
//! decide which classes contain elementary tetrahedra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::lattice::{det_tetra, exits, facet_membership, gamma_points, FacetSet, LatticePoint3, Perm4};
use crate::{Error, Result};

/// An unordered collection of four subsets of `{1,2,3,4}`, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetDistribution([FacetSet; 4]);

impl FacetDistribution {
    pub fn new(mut sets: [FacetSet; 4]) -> Self {
        sets.sort();
        FacetDistribution(sets)
    }

    pub fn from_indices(sets: [&[u8]; 4]) -> Self {
        Self::new(sets.map(FacetSet::from_indices))
    }

    pub fn sets(&self) -> &[FacetSet; 4] {
        &self.0
    }

    /// Every index appears in exactly two of the sets.
    pub fn is_fed(&self) -> bool {
        (1..=4u8).all(|i| self.0.iter().filter(|s| s.contains(i)).count() == 2)
    }

    pub fn act(&self, sigma: Perm4) -> Self {
        Self::new(self.0.map(|s| sigma.apply_set(s)))
    }

    /// Smallest image under `S4`; two distributions are equivalent iff their
    /// canonical forms agree.
    pub fn canonical(&self) -> Self {
        Perm4::all().into_iter().map(|s| self.act(s)).min().expect("S4 is nonempty")
    }

    /// Whether `self` is contained in `other` after some matching of the sets.
    pub fn contained_in(&self, other: &FacetDistribution) -> bool {
        Perm4::all().into_iter().any(|p| (0..4).all(|i| self.0[i].is_subset(other.0[(p.apply(i as u8 + 1) - 1) as usize])))
    }
}

impl fmt::Display for FacetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The six class representatives `c₁..c₆`, indexed from 1.
pub fn class_representative(j: u8) -> FacetDistribution {
    match j {
        1 => FacetDistribution::from_indices([&[1, 2, 3], &[1, 2, 4], &[3], &[4]]),
        2 => FacetDistribution::from_indices([&[1, 2, 3], &[1, 2, 4], &[3, 4], &[]]),
        3 => FacetDistribution::from_indices([&[1, 2], &[1, 2], &[3, 4], &[3, 4]]),
        4 => FacetDistribution::from_indices([&[1, 2, 3], &[1, 2], &[3, 4], &[4]]),
        5 => FacetDistribution::from_indices([&[1, 2, 3], &[1, 4], &[2, 4], &[3]]),
        6 => FacetDistribution::from_indices([&[1, 2], &[1, 3], &[2, 4], &[3, 4]]),
        _ => panic!("class index {j} out of range"),
    }
}

/// The class `j` whose representative is equivalent to `fed`, if any.
pub fn class_of(fed: &FacetDistribution) -> Option<u8> {
    let c = fed.canonical();
    (1..=6).find(|&j| class_representative(j).canonical() == c)
}

/// Every FED, as a sorted list of distinct collections.
pub fn all_feds() -> Vec<FacetDistribution> {
    let mut out = BTreeSet::new();
    for a in 0..16u8 {
        for b in a..16 {
            for c in b..16 {
                for d in c..16 {
                    let f = FacetDistribution::new([a, b, c, d].map(FacetSet));
                    if f.is_fed() {
                        out.insert(f);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Canonical representatives of the `S4`-orbits of FEDs.
pub fn fed_orbits() -> Vec<FacetDistribution> {
    all_feds().iter().map(|f| f.canonical()).collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn facet_distribution(omega: &[LatticePoint3; 4], delta: u32) -> Result<FacetDistribution> {
    let mut sets = [FacetSet::EMPTY; 4];
    for (s, &p) in sets.iter_mut().zip(omega) {
        *s = facet_membership(p, delta)?;
    }
    Ok(FacetDistribution::new(sets))
}

/// All FEDs obtained by shrinking the sets of `fac`.
pub fn contained_feds(fac: &FacetDistribution) -> Vec<FacetDistribution> {
    let mut out = BTreeSet::new();
    let subsets = |s: FacetSet| (0..16u8).map(FacetSet).filter(move |t| t.is_subset(s));
    let [a, b, c, d] = fac.0;
    for sa in subsets(a) {
        for sb in subsets(b) {
            for sc in subsets(c) {
                for sd in subsets(d) {
                    let f = FacetDistribution::new([sa, sb, sc, sd]);
                    if f.is_fed() {
                        out.insert(f);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Classes of the FEDs contained in `fac`.
pub fn classes_of_distribution(fac: &FacetDistribution) -> BTreeSet<u8> {
    contained_feds(fac).iter().filter_map(class_of).collect()
}

/// The classes `j` such that `omega` lies in the `j`-th class family.
pub fn classify_tetrahedron(omega: &[LatticePoint3; 4], delta: u32) -> Result<BTreeSet<u8>> {
    if exits(omega, delta)? != FacetSet::ALL {
        return Err(Error::Invalid(format!("tetrahedron {omega:?} does not have four exits in degree {delta}")));
    }
    Ok(classes_of_distribution(&facet_distribution(omega, delta)?))
}

/// Six times the volume of the class-6 tetrahedron with vertices `(a,0,0)`,
/// `(0,b,0)`, `(0,c,δ−c)`, `(d,0,δ−d)`.
pub fn class6_volume6(delta: i64, [a, b, c, d]: [i64; 4]) -> i64 {
    (a * c * (delta - b - d) - b * d * (delta - a - c)).abs()
}

/// Six times the volume of the class-5 tetrahedron with vertices `(0,0,0)`,
/// `(δ−a,0,a)`, `(0,b,δ−b)`, `(c,d,0)`.
pub fn class5_volume6(delta: i64, [a, b, c, d]: [i64; 4]) -> i64 {
    (a * b * c + (delta - a) * (delta - b) * d).abs()
}

pub fn class6_vertices(delta: i64, [a, b, c, d]: [i64; 4]) -> [LatticePoint3; 4] {
    [
        LatticePoint3::new(a, 0, 0),
        LatticePoint3::new(0, b, 0),
        LatticePoint3::new(0, c, delta - c),
        LatticePoint3::new(d, 0, delta - d),
    ]
}

pub fn class5_vertices(delta: i64, [a, b, c, d]: [i64; 4]) -> [LatticePoint3; 4] {
    [
        LatticePoint3::new(0, 0, 0),
        LatticePoint3::new(delta - a, 0, a),
        LatticePoint3::new(0, b, delta - b),
        LatticePoint3::new(c, d, 0),
    ]
}

/// Lexicographically least `(a,b,c,d)` in `[1, δ−1]^4` whose class-6
/// tetrahedron is elementary.
///
/// For fixed `a,b,c` the volume is affine in `d`, so `d` is solved for.
pub fn class6_witness(delta: i64) -> Option<[i64; 4]> {
    for a in 1..delta {
        for b in 1..delta {
            for c in 1..delta {
                // ac(δ−b−d) − bd(δ−a−c) = k − m·d
                let k = a * c * (delta - b);
                let m = a * c + b * (delta - a - c);
                let d = if m == 0 {
                    (k.abs() == 1).then_some(1)
                } else {
                    [k - 1, k + 1].into_iter().filter(|n| n % m == 0).map(|n| n / m).filter(|d| (1..delta).contains(d)).min()
                };
                if let Some(d) = d {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenSearch {
    /// Even degrees with no elementary class-6 tetrahedron of the exclusive shape.
    pub exceptions: Vec<u32>,
    pub witnesses: BTreeMap<u32, [i64; 4]>,
}

pub fn search_even_exceptions(delta_max: u32) -> EvenSearch {
    let found: Vec<(u32, Option<[i64; 4]>)> =
        (2..=delta_max).step_by(2).collect::<Vec<_>>().into_par_iter().map(|d| (d, class6_witness(d as i64))).collect();
    let mut out = EvenSearch { exceptions: Vec::new(), witnesses: BTreeMap::new() };
    for (d, w) in found {
        match w {
            Some(w) => {
                out.witnesses.insert(d, w);
            }
            None => out.exceptions.push(d),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCheck {
    pub delta: u32,
    pub witness: [i64; 4],
    /// Whether the witness is `(n−1, n, n, n+1)` in the declared argument order
    /// rather than `(n−1, n, n+1, n)`.
    pub literal_order: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddReport {
    /// Solutions found by exhaustive search in degree 3 (expected none).
    pub degree3_solutions: Vec<[i64; 4]>,
    pub checks: Vec<OddCheck>,
    /// Odd degrees where neither ordering of the closed-form witness works.
    pub failures: Vec<u32>,
}

impl OddReport {
    pub fn holds(&self) -> bool {
        self.degree3_solutions.is_empty() && self.failures.is_empty()
    }
}

pub fn verify_odd_solutions(delta_max: u32) -> OddReport {
    let mut degree3_solutions = Vec::new();
    for a in 1..3 {
        for b in 1..3 {
            for c in 1..3 {
                for d in 1..3 {
                    if class6_volume6(3, [a, b, c, d]) == 1 {
                        degree3_solutions.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for delta in (5..=delta_max).step_by(2) {
        let n = (delta as i64 - 1) / 2;
        let stated = [n - 1, n, n + 1, n];
        let literal = [n - 1, n, n, n + 1];
        if class6_volume6(delta as i64, stated) == 1 {
            checks.push(OddCheck { delta, witness: stated, literal_order: false });
        } else if class6_volume6(delta as i64, literal) == 1 {
            checks.push(OddCheck { delta, witness: literal, literal_order: true });
        } else {
            failures.push(delta);
        }
    }
    OddReport { degree3_solutions, checks, failures }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiofantReport {
    /// `(δ,a,b,c,d)` with `abc + (δ−a)(δ−b)d = ±1` in the class-5 domain.
    pub geometric_solutions: Vec<[i64; 5]>,
    /// The first solution per degree with `c,d ≠ 0` of either sign and
    /// `|c|,|d| ≤ window`.
    pub literal_counterexamples: Vec<[i64; 5]>,
}

impl DiofantReport {
    pub fn holds(&self) -> bool {
        self.geometric_solutions.is_empty()
    }
}

/// Checks `abc + (δ−a)(δ−b)d ≠ ±1` for `1 ≤ a,b ≤ δ−1`, both over the
/// class-5 domain `c,d ≥ 1`, `c+d ≤ δ` and over a window of signed `c,d`.
pub fn verify_diofant(delta_max: u32, window: i64) -> DiofantReport {
    let mut geometric_solutions = Vec::new();
    let mut literal_counterexamples = Vec::new();
    for delta in 2..=delta_max as i64 {
        let mut literal_found = false;
        for a in 1..delta {
            for b in 1..delta {
                let value = |c: i64, d: i64| a * b * c + (delta - a) * (delta - b) * d;
                for c in 1..delta {
                    for d in 1..=delta - c {
                        if value(c, d).abs() == 1 {
                            geometric_solutions.push([delta, a, b, c, d]);
                        }
                    }
                }
                if literal_found {
                    continue;
                }
                'window: for c in (-window..=window).filter(|&c| c != 0) {
                    for d in (-window..=window).filter(|&d| d != 0) {
                        if value(c, d).abs() == 1 {
                            literal_counterexamples.push([delta, a, b, c, d]);
                            literal_found = true;
                            break 'window;
                        }
                    }
                }
            }
        }
    }
    DiofantReport { geometric_solutions, literal_counterexamples }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourExitTetrahedron {
    pub vertices: [LatticePoint3; 4],
    pub classes: BTreeSet<u8>,
}

impl FourExitTetrahedron {
    /// In class `j` and in no other class.
    pub fn exclusively(&self, j: u8) -> bool {
        self.classes.len() == 1 && self.classes.contains(&j)
    }

    /// In class `j` and in none of `others`.
    pub fn in_class_without(&self, j: u8, others: &[u8]) -> bool {
        self.classes.contains(&j) && others.iter().all(|o| !self.classes.contains(o))
    }
}

/// Largest degree accepted by [`enumerate_four_exit_elementary`].
pub const MAX_ENUMERATION_DEGREE: u32 = 4;

/// Every elementary tetrahedron with four exits in the simplex of degree `delta`.
pub fn enumerate_four_exit_elementary(delta: u32) -> Result<Vec<FourExitTetrahedron>> {
    if delta > MAX_ENUMERATION_DEGREE {
        return Err(Error::TooLarge(delta));
    }
    if delta == 0 {
        return Err(Error::DegreeZero);
    }
    let boundary: Vec<(LatticePoint3, FacetSet)> = gamma_points(delta)
        .into_iter()
        .map(|p| (p, facet_membership(p, delta).expect("point of the simplex")))
        .filter(|(_, m)| !m.is_empty())
        .collect();
    let n = boundary.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let idx = [i, j, k, l];
                    // four exits: every facet carries at least two vertices
                    if !(1..=4u8).all(|f| idx.iter().filter(|&&t| boundary[t].1.contains(f)).count() >= 2) {
                        continue;
                    }
                    let v = idx.map(|t| boundary[t].0);
                    if det_tetra(&v).abs() != 1 {
                        continue;
                    }
                    let classes = classify_tetrahedron(&v, delta)?;
                    out.push(FourExitTetrahedron { vertices: v, classes });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{simplex_volume, LatticeSimplex};
    use proptest::prelude::*;

    fn lp(x: i64, y: i64, z: i64) -> LatticePoint3 {
        LatticePoint3::new(x, y, z)
    }

    fn set(ix: &[u8]) -> FacetSet {
        FacetSet::from_indices(ix)
    }

    #[test]
    fn fed_orbits_number_eleven() {
        let orbits = fed_orbits();
        assert_eq!(orbits.len(), 11);
        let reps: BTreeSet<_> = (1..=6).map(|j| class_representative(j).canonical()).collect();
        assert_eq!(reps.len(), 6);
        assert!(reps.iter().all(|r| orbits.contains(r)));
        let rest: Vec<_> = orbits.iter().filter(|o| !reps.contains(o)).collect();
        assert_eq!(rest.iter().filter(|o| o.sets().contains(&FacetSet::ALL)).count(), 4);
        let flat = FacetDistribution::from_indices([&[1, 2, 3], &[1, 2, 3], &[4], &[4]]).canonical();
        assert!(rest.contains(&&flat));
    }

    #[test]
    fn stated_example_distribution() {
        let fac = FacetDistribution::from_indices([&[1, 2, 3], &[1, 2], &[3, 4], &[1, 4]]);
        let feds = contained_feds(&fac);
        // index 1 sits in three sets and any two of them may keep it
        assert_eq!(feds.len(), 3);
        assert!(feds.contains(&FacetDistribution::from_indices([&[1, 2, 3], &[1, 2], &[3, 4], &[4]])));
        assert!(feds.contains(&FacetDistribution::from_indices([&[2, 3], &[1, 2], &[3, 4], &[1, 4]])));
        assert!(feds.contains(&FacetDistribution::from_indices([&[1, 2, 3], &[2], &[3, 4], &[1, 4]])));
        assert_eq!(classes_of_distribution(&fac), BTreeSet::from([4, 5, 6]));
    }

    #[test]
    fn example_tetrahedron_from_its_vertices() {
        // The vertex (1,0,1) lies on F2 and F4, not F1 and F4.
        let omega = [lp(0, 0, 0), lp(0, 0, 1), lp(1, 1, 0), lp(1, 0, 1)];
        let fac = facet_distribution(&omega, 2).unwrap();
        assert_eq!(fac, FacetDistribution::from_indices([&[1, 2, 3], &[1, 2], &[3, 4], &[2, 4]]));
        assert_eq!(contained_feds(&fac).len(), 3);
        assert_eq!(classify_tetrahedron(&omega, 2).unwrap(), BTreeSet::from([4, 5, 6]));
    }

    #[test]
    fn trivial_distributions() {
        let unit = [lp(0, 0, 0), lp(1, 0, 0), lp(0, 1, 0), lp(0, 0, 1)];
        let fac = facet_distribution(&unit, 1).unwrap();
        assert_eq!(fac, FacetDistribution::new([set(&[1, 2, 3]), set(&[2, 3, 4]), set(&[1, 3, 4]), set(&[1, 2, 4])]));
        assert_eq!(classify_tetrahedron(&unit, 1).unwrap(), (1..=6).collect());

        let inner = [lp(1, 1, 1), lp(2, 1, 1), lp(1, 2, 1), lp(1, 1, 2)];
        let empty = facet_distribution(&inner, 6).unwrap();
        assert!(empty.sets().iter().all(|s| s.is_empty()));
        assert!(contained_feds(&empty).is_empty());
        assert!(classify_tetrahedron(&inner, 6).is_err());

        let c3 = class_representative(3);
        assert_eq!(contained_feds(&c3), vec![c3]);
        assert!(facet_distribution(&[lp(3, 0, 0), lp(0, 0, 0), lp(0, 1, 0), lp(0, 0, 1)], 2).is_err());
    }

    #[test]
    fn omega_tetrahedra_lie_in_classes_four_and_five() {
        for delta in 2..=8u32 {
            let d = delta as i64;
            let omega = [lp(0, 0, 0), lp(0, 0, 1), lp(d - 1, 1, 0), lp(1, 0, d - 1)];
            let c = classify_tetrahedron(&omega, delta).unwrap();
            assert!(c.contains(&4) && c.contains(&5), "degree {delta}: {c:?}");
        }
    }

    #[test]
    fn elementary_witness_in_classes_four_and_five() {
        for delta in 2..=50u32 {
            let d = delta as i64;
            let omega = [lp(0, 0, 0), lp(1, 0, 0), lp(d - 1, 0, 1), lp(0, 1, d - 1)];
            assert_eq!(det_tetra(&omega).abs(), 1);
            let c = classify_tetrahedron(&omega, delta).unwrap();
            assert!(c.contains(&4) && c.contains(&5), "degree {delta}: {c:?}");
        }
    }

    // Plain four-fold loop over the whole domain.
    fn brute_class6_witness(delta: i64) -> Option<[i64; 4]> {
        for a in 1..delta {
            for b in 1..delta {
                for c in 1..delta {
                    for d in 1..delta {
                        if class6_volume6(delta, [a, b, c, d]) == 1 {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    #[test]
    fn solved_witness_matches_brute_force() {
        for delta in 1..=40 {
            assert_eq!(class6_witness(delta), brute_class6_witness(delta), "degree {delta}");
        }
    }

    #[test]
    fn even_exceptions_up_to_100() {
        let s = search_even_exceptions(100);
        assert_eq!(s.exceptions, vec![2, 4, 6, 8, 14, 16, 18, 20, 26, 30, 56, 76]);
        let w = s.witnesses[&10];
        assert_eq!(class6_volume6(10, w), 1);
        assert_eq!(s.witnesses.len() + s.exceptions.len(), 50);
    }

    #[test]
    fn odd_degrees() {
        let r = verify_odd_solutions(99);
        assert!(r.holds());
        assert_eq!(r.checks.len(), 48);
        assert!(r.checks.iter().all(|c| !c.literal_order));
        assert_eq!(r.checks[0].witness, [1, 2, 3, 2]);
        assert_eq!(r.checks.last().unwrap().delta, 99);
    }

    #[test]
    fn diofant_geometric_domain_only() {
        let r = verify_diofant(40, 40);
        assert!(r.holds());
        // with signed c,d the equation is solvable already in degree 2: c + d = ±1
        assert!(r.literal_counterexamples.iter().any(|x| x[0] == 2));
        for &[d, a, b, c, e] in &r.literal_counterexamples {
            assert_eq!((a * b * c + (d - a) * (d - b) * e).abs(), 1);
        }
        assert!(verify_diofant(3, 0).holds());
    }

    #[test]
    fn enumeration_degree_two() {
        let all = enumerate_four_exit_elementary(2).unwrap();
        let omega = [lp(0, 0, 0), lp(0, 0, 1), lp(1, 1, 0), lp(1, 0, 1)];
        let key: BTreeSet<_> = omega.into_iter().collect();
        assert!(all.iter().any(|t| t.vertices.iter().copied().collect::<BTreeSet<_>>() == key));
        assert!(enumerate_four_exit_elementary(5).is_err());
    }

    #[test]
    fn enumeration_matches_class_statements() {
        let exceptions = search_even_exceptions(4).exceptions;
        for delta in 2..=4u32 {
            let all = enumerate_four_exit_elementary(delta).unwrap();
            assert!(!all.is_empty());
            for t in &all {
                assert!(!t.classes.iter().any(|j| *j <= 3), "{t:?}");
            }
            assert!(all.iter().any(|t| t.classes.contains(&4) && t.classes.contains(&5)));
            assert!(!all.iter().any(|t| t.in_class_without(5, &[4, 6])));
            let six_only = all.iter().any(|t| t.in_class_without(6, &[4, 5]));
            assert_eq!(six_only, !(delta == 3 || exceptions.contains(&delta)), "degree {delta}");
        }
    }

    #[test]
    fn enumeration_agrees_with_exits() {
        // every elementary tetrahedron of degree 2, by a plain scan of all 4-subsets
        let pts = gamma_points(2);
        let mut count = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    for l in k + 1..pts.len() {
                        let v = [pts[i], pts[j], pts[k], pts[l]];
                        if det_tetra(&v).abs() == 1 && exits(&v, 2).unwrap() == FacetSet::ALL {
                            count += 1;
                            let fac = facet_distribution(&v, 2).unwrap();
                            assert!(!contained_feds(&fac).is_empty());
                        }
                    }
                }
            }
        }
        assert_eq!(enumerate_four_exit_elementary(2).unwrap().len(), count);
    }

    proptest! {
        #[test]
        fn feds_exist_iff_four_exits(idx in proptest::array::uniform4(0usize..20)) {
            let pts = gamma_points(3);
            let v = idx.map(|i| pts[i]);
            let fac = facet_distribution(&v, 3).unwrap();
            let distinct = idx.iter().collect::<BTreeSet<_>>().len() == 4;
            prop_assume!(distinct);
            prop_assert_eq!(!contained_feds(&fac).is_empty(), exits(&v, 3).unwrap() == FacetSet::ALL);
            for f in contained_feds(&fac) {
                prop_assert!(f.is_fed());
                prop_assert!(f.contained_in(&fac));
            }
        }

        #[test]
        fn canonical_is_orbit_invariant(s in proptest::array::uniform4(0u8..16), p in 0usize..24) {
            let f = FacetDistribution::new(s.map(FacetSet));
            let sigma = Perm4::all()[p];
            prop_assert_eq!(f.act(sigma).canonical(), f.canonical());
        }

        #[test]
        fn class3_volume_formula(delta in 2i64..30, a in 0i64..30, b in 0i64..30, c in 0i64..30, d in 0i64..30) {
            let (a, b, c, d) = (a % (delta + 1), b % (delta + 1), c % (delta + 1), d % (delta + 1));
            let v = [lp(0, 0, a), lp(0, 0, b), lp(c, delta - c, 0), lp(d, delta - d, 0)];
            prop_assert_eq!(det_tetra(&v).abs(), (delta * (a - b) * (c - d)).abs());
        }

        #[test]
        fn class5_volume_formula(delta in 2i64..30, a in 1i64..30, b in 1i64..30, c in 1i64..30, d in 1i64..30) {
            let w = [a % delta, b % delta, c % delta, d % delta];
            let v = class5_vertices(delta, w);
            prop_assert_eq!(det_tetra(&v).abs(), class5_volume6(delta, w));
            if let Ok(t) = LatticeSimplex::tetra(v) {
                prop_assert_eq!(simplex_volume(&t).unwrap() * crate::lattice::int(6), crate::lattice::int(class5_volume6(delta, w)));
            }
        }

        #[test]
        fn class6_volume_formula(delta in 2i64..30, a in 1i64..30, b in 1i64..30, c in 1i64..30, d in 1i64..30) {
            let w = [a % delta, b % delta, c % delta, d % delta];
            prop_assume!(w.iter().all(|&x| x >= 1));
            let v = class6_vertices(delta, w);
            prop_assert_eq!(det_tetra(&v).abs(), class6_volume6(delta, w));
        }
    }
}
