//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock time
//! checked against each criterion's budget.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropline::builder::{build_family_surface, omega_tetrahedron};
use tropline::exits::{search_even_exceptions, verify_diofant, verify_odd_solutions};
use tropline::lattice::{det_tetra, frac, int, QPoint3, Rat};
use tropline::lines::{classify_line, contains_line, find_family, lines_through, LineClass, Through, TropicalLine};
use tropline::poly::TropicalPolynomial;
use tropline::quadric::{compact_cell, random_cell_point, two_lines_through};
use tropline::subdivision::{enumerate_elementary_gamma2, gamma2_diagonals, smoothness_with_subdivision, verify_regular};
use tropline::surface::SurfaceComplex;

const G3: &str = include_str!("data/g3.trop");
const G4: &str = include_str!("data/g4.trop");

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Smoothness, cell count, and the degenerate line at the dual vertex of the
/// family tetrahedron of degree `delta`.
fn family_pipeline(text: &str, delta: u32, cells: usize) -> Result<(SurfaceComplex, TropicalLine), String> {
    let f = TropicalPolynomial::parse(text).map_err(|e| e.to_string())?;
    let (sub, rep) = smoothness_with_subdivision(&f).map_err(|e| e.to_string())?;
    ensure(rep.smooth, "not smooth")?;
    ensure(rep.cell_count == cells, format!("{} cells", rep.cell_count))?;
    ensure(rep.min_vol == frac(1, 6) && rep.max_vol == frac(1, 6), "cell volumes differ from 1/6")?;
    let omega = omega_tetrahedron(delta);
    ensure(sub.contains_cell(&omega), "family tetrahedron missing")?;
    let x = SurfaceComplex::build(&f).map_err(|e| e.to_string())?;
    let v = x.vertex_of_tetrahedron(&omega).ok_or("no dual vertex")?;
    let l = TropicalLine::degenerate(x.vertices[v].clone());
    Ok((x, l))
}

fn criterion_g3() -> Outcome {
    let (x, l) = family_pipeline(G3, 3, 27)?;
    ensure(*l.v1() == QPoint3::from_ints(1, -21, -2), format!("dual vertex {}", l.v1()))?;
    let c = classify_line(&x, &l).map_err(|e| e.to_string())?;
    let LineClass::Family(w) = c.class else { return Err("classified isolated".into()) };
    ensure(w.direction == [-1, -1, 0], format!("direction {:?}", w.direction))?;
    ensure(w.verify(&x.poly), "witness does not verify")?;
    Ok(format!("27 cells, dual vertex (1,-21,-2), family {} along -e1-e2", w.family_type))
}

fn criterion_g4() -> Outcome {
    let (x, l) = family_pipeline(G4, 4, 64)?;
    let c = classify_line(&x, &l).map_err(|e| e.to_string())?;
    let LineClass::Family(w) = c.class else { return Err("classified isolated".into()) };
    ensure(w.verify(&x.poly), "witness does not verify")?;
    Ok(format!("64 cells, dual vertex {}, family direction {:?}", l.v1(), w.direction))
}

fn criterion_quadrics() -> Outcome {
    let mut polys: Vec<TropicalPolynomial> = Vec::new();
    let mut seed = 0;
    while polys.len() < 3 {
        let s = build_family_surface(2, Some(seed)).map_err(|e| e.to_string())?;
        if !polys.contains(&s.polynomial) {
            polys.push(s.polynomial);
        }
        seed += 1;
        ensure(seed < 64, "fewer than three distinct quadrics from the builder")?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for f in &polys {
        let x = SurfaceComplex::build(f).map_err(|e| e.to_string())?;
        let info = compact_cell(&x).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let p = random_cell_point(&info, &mut rng);
            let q = two_lines_through(&x, &p).map_err(|e| format!("{p}: {e}"))?;
            ensure(q.lines[0] != q.lines[1], format!("{p}: lines coincide"))?;
            for l in &q.lines {
                ensure(contains_line(f, l), format!("{p}: {l} not on surface"))?;
                ensure(l.contains_point(&p), format!("{p}: {l} misses the point"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{} quadrics, {checked} points", polys.len()))
}

fn criterion_gamma2() -> Outcome {
    let all = enumerate_elementary_gamma2();
    let diagonals = gamma2_diagonals();
    for t in &all {
        let n = diagonals.iter().filter(|(a, b)| t.has_edge(*a, *b)).count();
        ensure(n == 1, format!("triangulation with {n} diagonals"))?;
    }
    ensure(!all.is_empty(), "no triangulations")?;
    Ok(format!("{} triangulations, one diagonal each", all.len()))
}

fn criterion_builder() -> Outcome {
    let mut report = Vec::new();
    for delta in 1..=6u32 {
        let s = build_family_surface(delta, Some(0)).map_err(|e| format!("degree {delta}: {e}"))?;
        let t = s.triangulation.triangulation().ok_or(format!("degree {delta}: not simplicial"))?;
        ensure(
            verify_regular(&s.triangulation.lifting(), &t).map_err(|e| e.to_string())?,
            format!("degree {delta}: lifting does not induce the triangulation"),
        )?;
        ensure(t.len() == (delta as usize).pow(3), format!("degree {delta}: {} cells", t.len()))?;
        ensure(t.tetrahedra.iter().all(|c| det_tetra(c).abs() == 1), format!("degree {delta}: non-elementary cell"))?;
        let omega = omega_tetrahedron(delta);
        let key: BTreeSet<_> = omega.iter().copied().collect();
        ensure(
            t.tetrahedra.iter().any(|c| c.iter().copied().collect::<BTreeSet<_>>() == key),
            format!("degree {delta}: family tetrahedron missing"),
        )?;
        let x = SurfaceComplex::build(&s.polynomial).map_err(|e| format!("degree {delta}: {e}"))?;
        let v = x.vertex_of_tetrahedron(&omega).ok_or(format!("degree {delta}: no dual vertex"))?;
        let l = TropicalLine::degenerate(x.vertices[v].clone());
        let w = find_family(&x, &l).map_err(|e| e.to_string())?.ok_or(format!("degree {delta}: no family"))?;
        ensure(w.verify(&s.polynomial), format!("degree {delta}: witness does not verify"))?;
        report.push(format!("{delta}:{}", t.len()));
    }
    Ok(format!("cells per degree {}", report.join(" ")))
}

fn criterion_exceptions() -> Outcome {
    let s = search_even_exceptions(100);
    let expected = vec![2, 4, 6, 8, 14, 16, 18, 20, 26, 30, 56, 76];
    ensure(s.exceptions == expected, format!("exceptions {:?}", s.exceptions))?;
    let odd = verify_odd_solutions(99);
    ensure(odd.degree3_solutions.is_empty(), format!("degree 3 solutions {:?}", odd.degree3_solutions))?;
    ensure(odd.failures.is_empty() && odd.checks.len() == 48, format!("odd failures {:?}", odd.failures))?;
    Ok(format!("exceptions {:?}; 48 odd witnesses", s.exceptions))
}

fn criterion_diofant() -> Outcome {
    let r = verify_diofant(40, 40);
    ensure(r.holds(), format!("solutions {:?}", r.geometric_solutions))?;
    Ok(format!("no solutions for degree <= 40; {} signed counterexamples outside that domain", r.literal_counterexamples.len()))
}

fn criterion_invariants() -> Outcome {
    let f = TropicalPolynomial::parse(G3).map_err(|e| e.to_string())?;
    let x = SurfaceComplex::build(&f).map_err(|e| e.to_string())?;
    ensure(x.check_balancing(), "balancing fails")?;
    ensure(x.check_orthogonality(), "orthogonality fails")?;
    ensure(x.check_unboundedness(), "unboundedness criterion fails")?;
    Ok(format!("{} vertices, {} edges, {} faces", x.vertices.len(), x.edges.len(), x.faces.len()))
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    frac(rng.gen_range(-40..=40), rng.gen_range(1..=4))
}

fn criterion_two_points() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut unique, mut infinite) = (0, 0);
    for k in 0..1000 {
        let p = QPoint3::new(random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        let mut d = [random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng)];
        let special = k % 2 == 1;
        if special {
            // force a zero coordinate or a repeated one
            let i = rng.gen_range(0..3);
            d[i] = if rng.gen_bool(0.5) { int(0) } else { d[(i + 1) % 3].clone() };
        }
        let [dx, dy, dz] = d.clone();
        let q = QPoint3::new(&p.x + dx, &p.y + dy, &p.z + dz);
        if p == q {
            continue;
        }
        let degenerate = d.iter().any(|c| *c == int(0)) || d[0] == d[1] || d[1] == d[2] || d[0] == d[2];
        match lines_through(&p, &q).map_err(|e| e.to_string())? {
            Through::Unique(l) => {
                ensure(!degenerate, format!("{p} {q}: unique line for a special difference"))?;
                ensure(l.contains_point(&p) && l.contains_point(&q), format!("{p} {q}: {l} misses a point"))?;
                ensure(l.balancing_defects() == [[0; 3]; 2], format!("{l}: unbalanced"))?;
                unique += 1;
            }
            Through::Infinite(_) => {
                ensure(degenerate, format!("{p} {q}: infinite for a generic difference"))?;
                infinite += 1;
            }
        }
    }
    Ok(format!("{unique} unique, {infinite} infinite"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 cubic example pipeline", 5, criterion_g3),
        ("2 quartic example pipeline", 30, criterion_g4),
        ("3 quadric rulings", 60, criterion_quadrics),
        ("4 unique compact cell in degree two", 300, criterion_gamma2),
        ("5 builder soundness, degrees 1-6", 120, criterion_builder),
        ("6 even exceptions and odd witnesses", 120, criterion_exceptions),
        ("7 class-5 Diophantine equation", 60, criterion_diofant),
        ("8 balancing and duality on the cubic", 10, criterion_invariants),
        ("9 lines through two points", 30, criterion_two_points),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        match outcome {
            Ok(detail) if !over => println!("PASS  {name} ({:.2}s <= {budget}s): {detail}", elapsed.as_secs_f64()),
            Ok(detail) => {
                failed += 1;
                println!("FAIL  {name} ({:.2}s > {budget}s budget): {detail}", elapsed.as_secs_f64());
            }
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({:.2}s): {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
