//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a predicate subcommand answers "no",
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builder::build_family_surface;
use crate::exits::{search_even_exceptions, verify_odd_solutions};
use crate::lattice::{parse_rat, rat_to_string, QPoint3, Rat};
use crate::lines::{classify_line, contains_line, lines_through, FamilyWitness, LineClass, Through, TropicalLine};
use crate::poly::TropicalPolynomial;
use crate::quadric::two_lines_through;
use crate::subdivision::{enumerate_elementary_gamma2, gamma2_diagonals, smoothness_with_subdivision, triangulation_to_json, Lifting};
use crate::surface::SurfaceComplex;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "tropline", version, about = "Smooth tropical surfaces and the tropical lines on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the subdivision induced by a polynomial as triangulation JSON.
    Subdiv {
        poly: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check smoothness; exits with 1 when the surface is not smooth.
    Smooth { poly: PathBuf },
    /// Export the cell complex of a smooth surface.
    Surface {
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = Export::Json)]
        export: Export,
        /// Clip box `lo,hi` applied to OFF output.
        #[arg(long, allow_hyphen_values = true)]
        clip: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a line lies on the surface; exits with 1 when it does not.
    LineCheck { poly: PathBuf, line: PathBuf },
    /// Decide whether a line on a smooth surface is isolated or in a family.
    LineClassify { poly: PathBuf, line: PathBuf },
    /// The two lines through a point of the compact cell of a smooth quadric.
    QuadricLines {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Constructions of regular elementary triangulations.
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Searches over tetrahedra with four exits.
    Exits {
        #[command(subcommand)]
        what: ExitsCommand,
    },
    /// Exhaustive enumerations.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateCommand,
    },
    /// The tropical line through two points, when unique.
    LinesThrough {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// A smooth surface carrying a two-point family of lines.
    Family {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the polynomial in text form.
        #[arg(long)]
        poly_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ExitsCommand {
    /// Even degrees without an elementary class-6 tetrahedron.
    Search {
        #[arg(long)]
        max: u32,
        #[arg(long)]
        emit_witnesses: Option<PathBuf>,
    },
    /// Check the closed-form witnesses in odd degree; exits with 1 on failure.
    Odd {
        #[arg(long)]
        max: u32,
    },
}

#[derive(Subcommand, Debug)]
enum EnumerateCommand {
    /// Elementary triangulations of the simplex of degree two.
    Gamma2 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Export {
    Off,
    Json,
}

enum Outcome {
    Yes,
    No,
}

/// Runs the command line `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = io::stdout().lock();
    match execute(cli.command, &mut stdout) {
        Ok(Outcome::Yes) => 0,
        Ok(Outcome::No) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cmd: Command, out: &mut impl Write) -> Result<Outcome> {
    match cmd {
        Command::Subdiv { poly, out: path } => {
            let f = read_poly(&poly)?;
            let (sub, _) = smoothness_with_subdivision(&f)?;
            let v = triangulation_to_json(f.degree(), Some(&Lifting::of(&f)), &sub.cells);
            emit_json(out, path.as_deref(), &v)?;
        }
        Command::Smooth { poly } => {
            let f = read_poly(&poly)?;
            let (_, rep) = smoothness_with_subdivision(&f)?;
            if rep.smooth {
                say(out, format!("smooth, {} cells", rep.cell_count))?;
            } else {
                say(
                    out,
                    format!("not smooth, {} cells, volumes {}..{}", rep.cell_count, rat_to_string(&rep.min_vol), rat_to_string(&rep.max_vol)),
                )?;
                return Ok(Outcome::No);
            }
        }
        Command::Surface { poly, export, clip, out: path } => {
            let x = SurfaceComplex::build(&read_poly(&poly)?)?;
            match export {
                Export::Json => emit_json(out, path.as_deref(), &x.to_json())?,
                Export::Off => {
                    let clip = clip.as_deref().map(parse_clip).transpose()?;
                    emit_text(out, path.as_deref(), &x.to_off(clip))?;
                }
            }
        }
        Command::LineCheck { poly, line } => {
            let f = read_poly(&poly)?;
            let l = read_line(&line)?;
            let on = contains_line(&f, &l);
            say(out, if on { "on surface" } else { "not on surface" })?;
            if !on {
                return Ok(Outcome::No);
            }
        }
        Command::LineClassify { poly, line } => {
            let f = read_poly(&poly)?;
            let l = read_line(&line)?;
            if !contains_line(&f, &l) {
                return Err(Error::LineNotOnSurface);
            }
            let x = SurfaceComplex::build(&f)?;
            let c = classify_line(&x, &l)?;
            let v = match &c.class {
                LineClass::Isolated => json!({"case": c.case, "class": "isolated"}),
                LineClass::Family(w) => json!({"case": c.case, "class": "family", "witness": witness_json(w)}),
            };
            emit_json(out, None, &v)?;
        }
        Command::QuadricLines { poly, point } => {
            let x = SurfaceComplex::build(&read_poly(&poly)?)?;
            let p = parse_qpoint(&point)?;
            let q = two_lines_through(&x, &p)?;
            let v = json!({
                "lines": q.lines.iter().map(TropicalLine::to_json).collect::<Vec<_>>(),
                "apexes": q.apexes.iter().map(|a| a.iter().map(|p| json!([p.x, p.y, p.z])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            emit_json(out, None, &v)?;
        }
        Command::Build { what: BuildCommand::Family { degree, seed, out: path, poly_out } } => {
            let s = build_family_surface(degree, Some(seed))?;
            let mut v = s.triangulation.to_json(degree);
            v["omega"] = json!(s.omega.iter().map(|p| json!([p.x, p.y, p.z])).collect::<Vec<_>>());
            v["lambdas"] = json!(s.triangulation.lambdas.iter().map(rat_to_string).collect::<Vec<_>>());
            if let Some(p) = poly_out {
                write_file(&p, &format!("{}\n", s.polynomial.render()))?;
            }
            emit_json(out, path.as_deref(), &v)?;
        }
        Command::Exits { what: ExitsCommand::Search { max, emit_witnesses } } => {
            let s = search_even_exceptions(max);
            let list: Vec<String> = s.exceptions.iter().map(u32::to_string).collect();
            say(out, format!("even exceptions up to {max}: {}", list.join(" ")))?;
            if let Some(p) = emit_witnesses {
                let text = serde_json::to_string_pretty(&s).map_err(|e| Error::Invalid(e.to_string()))?;
                write_file(&p, &format!("{text}\n"))?;
            }
        }
        Command::Exits { what: ExitsCommand::Odd { max } } => {
            let r = verify_odd_solutions(max);
            say(out, format!("degree 3 solutions: {}", r.degree3_solutions.len()))?;
            say(out, format!("odd degrees 5..={max} with verified witness: {}", r.checks.len()))?;
            if !r.failures.is_empty() {
                say(out, format!("failures: {:?}", r.failures))?;
            }
            if !r.holds() {
                return Ok(Outcome::No);
            }
        }
        Command::Enumerate { what: EnumerateCommand::Gamma2 { out: path } } => {
            let all = enumerate_elementary_gamma2();
            let diagonals = gamma2_diagonals();
            let one_diagonal = all.iter().all(|t| diagonals.iter().filter(|(a, b)| t.has_edge(*a, *b)).count() == 1);
            say(out, format!("{} elementary triangulations, each with exactly one diagonal: {one_diagonal}", all.len()))?;
            if let Some(p) = path {
                let cells: Vec<Value> = all
                    .iter()
                    .map(|t| {
                        let cells: Vec<Vec<_>> = t.tetrahedra.iter().map(|c| c.to_vec()).collect();
                        triangulation_to_json(2, None, &cells)
                    })
                    .collect();
                write_file(&p, &format!("{}\n", Value::Array(cells)))?;
            }
        }
        Command::LinesThrough { p, q } => match lines_through(&parse_qpoint(&p)?, &parse_qpoint(&q)?)? {
            Through::Unique(l) => emit_json(out, None, &l.to_json())?,
            Through::Infinite(why) => say(out, format!("infinitely many lines: {why}"))?,
        },
    }
    Ok(Outcome::Yes)
}

fn witness_json(w: &FamilyWitness) -> Value {
    let q = |p: &QPoint3| json!([rat_to_string(&p.x), rat_to_string(&p.y), rat_to_string(&p.z)]);
    json!({
        "base": w.base.to_json(),
        "family_type": w.family_type.label(),
        "moving_vertex": w.moving_vertex,
        "direction": w.direction,
        "companion_direction": w.companion_direction.as_ref().map(q),
        "t_max": w.t_max.as_ref().map(rat_to_string),
        "common_points": w.common_points.iter().map(q).collect::<Vec<_>>(),
    })
}

fn read_input(path: &Path) -> Result<String> {
    let io_err = |e: io::Error| Error::Invalid(format!("{}: {e}", path.display()));
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(io_err)
}

fn read_poly(path: &Path) -> Result<TropicalPolynomial> {
    TropicalPolynomial::parse(&read_input(path)?)
}

fn read_line(path: &Path) -> Result<TropicalLine> {
    let text = read_input(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    TropicalLine::from_json(&v)
}

/// Parses `x,y,z` with integer or `p/q` coordinates.
fn parse_qpoint(s: &str) -> Result<QPoint3> {
    let parts: Vec<Rat> = s
        .split(',')
        .map(|c| parse_rat(c).ok_or_else(|| Error::Invalid(format!("bad coordinate {c:?} in {s:?}"))))
        .collect::<Result<_>>()?;
    match <[Rat; 3]>::try_from(parts) {
        Ok([x, y, z]) => Ok(QPoint3::new(x, y, z)),
        Err(_) => Err(Error::Invalid(format!("expected three coordinates, got {s:?}"))),
    }
}

fn parse_clip(s: &str) -> Result<(Rat, Rat)> {
    let bad = || Error::Invalid(format!("clip box must be lo,hi with lo < hi, got {s:?}"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (parse_rat(lo).ok_or_else(bad)?, parse_rat(hi).ok_or_else(bad)?);
    if lo >= hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn say(out: &mut impl Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| Error::Invalid(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn emit_text(out: &mut impl Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Invalid(e.to_string())),
    }
}

fn emit_json(out: &mut impl Write, path: Option<&Path>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))?;
    emit_text(out, path, &format!("{text}\n"))
}
