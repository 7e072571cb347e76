//! Command line front end. Every subcommand reads JSON documents and writes a
//! document (or SVG) to standard output.
//!
//! Exit status: 0 when the predicate holds or the construction succeeds, 1
//! when a predicate fails, 2 on malformed input or a failed precondition.

pub mod document;
pub mod render;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::complex::{complex_semistability_failures, reduce_complex};
use crate::cone::Cone;
use crate::error::Error;
use crate::fan::{
    base_change_along_alteration, cartesian_check, is_semistable, is_smooth_fan,
    is_smooth_stacky_fan, is_weakly_semistable, minimal_modification, toric_fiber_product,
    FanMorphism, SemistabilityCondition, SemistabilityReport, StackyFan,
};
use crate::lattice::{LatticeMap, Sublattice};
use crate::matrix::IntMatrix;
use crate::monoid::hilbert_basis;
use crate::reduction::{factor_through, reduce, reduce_stacky, universal_minimal_modification};

use document::{emit, int_rows, parse, parse_rows, Check, Document, Reduction, Report};

#[derive(Parser, Debug)]
#[command(name = "semistable", version, about = "Weak semistable reduction of toric and toroidal morphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run predicates on a fan, stacky fan, morphism or complex.
    Check(CheckArgs),
    /// Minimal modification of the source of a fan morphism over a refinement of its target.
    Minmod {
        input: PathBuf,
        /// A fan refining the target.
        #[arg(long)]
        over: PathBuf,
    },
    /// Toric fiber product of two fan morphisms with a common target.
    Fanprod {
        first: PathBuf,
        second: PathBuf,
        /// Report whether every chart of the product is cartesian.
        #[arg(long)]
        cartesian: bool,
    },
    /// Base change of a fan morphism along a finite index sublattice of its base.
    Basechange {
        input: PathBuf,
        /// Matrix of the sublattice inclusion, e.g. `[[2]]`.
        #[arg(long)]
        matrix: String,
    },
    /// Universal weak semistable reduction.
    Reduce { input: PathBuf },
    /// Factor the base change along an alteration through the reduction.
    Factor {
        input: PathBuf,
        /// A fan morphism document for the alteration.
        #[arg(long)]
        alteration: PathBuf,
    },
    /// Hilbert basis of a cone in a lattice.
    Hilbert {
        /// Ray generators, e.g. `[[1,0],[1,2]]`.
        #[arg(long)]
        rays: String,
        /// Generators of a sublattice; the full lattice when absent.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// SVG picture of a rank 2 fan or of the base of a reduction.
    Render {
        input: PathBuf,
        /// A reduction result whose base is drawn on top.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
pub struct CheckArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub validate: bool,
    #[arg(long)]
    pub proper: bool,
    #[arg(long)]
    pub surjective: bool,
    #[arg(long)]
    pub modification: bool,
    #[arg(long)]
    pub alteration: bool,
    #[arg(long)]
    pub weakly_semistable: bool,
    #[arg(long)]
    pub smooth: bool,
    #[arg(long)]
    pub semistable: bool,
    #[arg(long)]
    pub representable: bool,
}

/// What a subcommand produced.
pub struct Outcome {
    pub text: String,
    pub status: i32,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Library(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<Document, CliError> {
    let mut text = String::new();
    let io = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    let name = path.display().to_string();
    io.map_err(|e| CliError::Input { path: name.clone(), message: e.to_string() })?;
    parse(&text).map_err(|e| CliError::Input { path: name, message: e.to_string() })
}

fn matrix_arg(text: &str, what: &str) -> Result<Vec<crate::matrix::IVec>, CliError> {
    parse_rows(text).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn fan_morphism(doc: Document, path: &Path) -> Result<FanMorphism, CliError> {
    match doc {
        Document::FanMorphism(m) => Ok(m),
        other => Err(CliError::Input {
            path: path.display().to_string(),
            message: format!("expected a fan_morphism, found {:?}", other.kind()),
        }),
    }
}

pub fn describe(c: &Cone) -> String {
    if c.is_zero() {
        return "the zero cone".into();
    }
    let rays: Vec<String> = c
        .rays()
        .iter()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    if c.dim() == 1 {
        format!("ray {}", rays[0])
    } else {
        format!("cone <{}>", rays.join(", "))
    }
}

fn condition_text(c: SemistabilityCondition) -> &'static str {
    match c {
        SemistabilityCondition::ImageNotACone => "image is not a cone of the target",
        SemistabilityCondition::MonoidNotSurjective => "lattice points do not surject",
    }
}

fn semistability_check(r: &SemistabilityReport) -> Check {
    Check {
        name: "weakly_semistable".into(),
        holds: r.holds(),
        details: r
            .failures
            .iter()
            .map(|f| format!("{}: {}", describe(&f.cone), condition_text(f.condition)))
            .collect(),
    }
}

fn check(name: &str, holds: bool) -> Check {
    Check { name: name.into(), holds, details: Vec::new() }
}

fn report(command: &str, checks: Vec<Check>) -> Report {
    Report {
        command: command.into(),
        holds: checks.iter().all(|c| c.holds),
        checks,
        values: Default::default(),
    }
}

fn run_check(args: &CheckArgs) -> Result<Outcome, CliError> {
    let doc = read(&args.input)?;
    let requested: Vec<(&str, bool)> = vec![
        ("validate", args.validate),
        ("proper", args.proper),
        ("surjective", args.surjective),
        ("modification", args.modification),
        ("alteration", args.alteration),
        ("weakly_semistable", args.weakly_semistable),
        ("smooth", args.smooth),
        ("semistable", args.semistable),
        ("representable", args.representable),
    ];
    let available: &[&str] = match &doc {
        Document::Fan(_) | Document::StackyFan(_) => &["validate", "smooth"],
        Document::FanMorphism(_) => &[
            "validate",
            "proper",
            "surjective",
            "modification",
            "alteration",
            "weakly_semistable",
            "smooth",
            "semistable",
        ],
        Document::StackyMorphism(_) => {
            &["validate", "weakly_semistable", "smooth", "semistable", "representable"]
        }
        Document::ConeComplex(_) => &["validate"],
        Document::ComplexMorphism(_) => &["validate", "weakly_semistable"],
        other => {
            return Err(CliError::Usage(format!("nothing to check on a {:?}", other.kind())));
        }
    };
    let mut names: Vec<&str> = requested.iter().filter(|(_, on)| *on).map(|(n, _)| *n).collect();
    if names.is_empty() {
        names = available.to_vec();
    }
    if let Some(n) = names.iter().find(|n| !available.contains(n)) {
        return Err(CliError::Usage(format!("--{} does not apply to a {:?}", n.replace('_', "-"), doc.kind())));
    }
    let mut checks = Vec::new();
    for name in names {
        let c = match (&doc, name) {
            (_, "validate") => check("validate", true),
            (Document::Fan(f), "smooth") => check("smooth", is_smooth_fan(f)?),
            (Document::StackyFan(f), "smooth") => check("smooth", is_smooth_stacky_fan(f)?),
            (Document::FanMorphism(m), n) => match n {
                "proper" => check(n, m.is_proper()),
                "surjective" => check(n, m.is_surjective()),
                "modification" => check(n, m.is_modification()),
                "alteration" => check(n, m.is_alteration()),
                "weakly_semistable" => semistability_check(&is_weakly_semistable(m)?),
                "smooth" => check(n, is_smooth_fan(m.source())? && is_smooth_fan(m.target())?),
                _ => check(n, is_semistable(m)?),
            },
            (Document::StackyMorphism(m), n) => match n {
                "weakly_semistable" => semistability_check(&m.is_weakly_semistable()?),
                "smooth" => check(
                    n,
                    is_smooth_stacky_fan(m.source())? && is_smooth_stacky_fan(m.target())?,
                ),
                "representable" => check(n, m.is_representable()?),
                _ => check(n, m.is_semistable()?),
            },
            (Document::ComplexMorphism(m), _) => {
                let full = |c: &crate::complex::ConeComplex| -> Vec<Sublattice> {
                    c.cells().iter().map(|x| Sublattice::full(x.ambient())).collect()
                };
                let failures =
                    complex_semistability_failures(m, &full(m.source()), &full(m.target()))?;
                Check {
                    name: "weakly_semistable".into(),
                    holds: failures.is_empty(),
                    details: failures
                        .iter()
                        .map(|(i, c)| format!("cell {i}: {}", condition_text(*c)))
                        .collect(),
                }
            }
            _ => unreachable!("checked against the available list"),
        };
        checks.push(c);
    }
    let r = report("check", checks);
    let status = if r.holds { 0 } else { 1 };
    Ok(Outcome { text: emit(&Document::Report(r)), status })
}

fn success(doc: Document) -> Outcome {
    Outcome { text: emit(&doc), status: 0 }
}

fn run_reduce(path: &Path) -> Result<Outcome, CliError> {
    let reduction = match read(path)? {
        Document::FanMorphism(p) => {
            let result = reduce(&p)?;
            Reduction::Fan { input: p, result }
        }
        Document::StackyMorphism(m) => {
            let result = reduce_stacky(&m)?;
            Reduction::Fan { input: m.underlying().clone(), result }
        }
        Document::ComplexMorphism(m) => {
            let result = reduce_complex(&m)?;
            Reduction::Complex { input: m, result }
        }
        other => {
            return Err(CliError::Usage(format!("cannot reduce a {:?}", other.kind())));
        }
    };
    Ok(success(Document::ReductionResult(Box::new(reduction))))
}

fn run_factor(input: &Path, alteration: &Path) -> Result<Outcome, CliError> {
    let p = fan_morphism(read(input)?, input)?;
    let i = fan_morphism(read(alteration)?, alteration)?;
    let red = reduce(&p)?;
    let obj = universal_minimal_modification(&red, &p, &i)?;
    let f = factor_through(&obj, &red)?;
    let pairs = |v: &[(Cone, Cone)]| -> Value {
        Value::Array(
            v.iter()
                .map(|(a, b)| {
                    serde_json::json!({ "cone": int_rows(a.rays()), "image": int_rows(b.rays()) })
                })
                .collect(),
        )
    };
    let mut r = report("factor", vec![check("factors", true), check("unique", f.unique)]);
    r.values.insert("base_assignment".into(), pairs(&f.base_assignment));
    r.values.insert("total_assignment".into(), pairs(&f.total_assignment));
    r.values.insert(
        "fiber_fan_maximal_cones".into(),
        Value::Array(obj.j.source().maximal_cones().iter().map(|c| int_rows(c.rays())).collect()),
    );
    let status = if r.holds { 0 } else { 1 };
    Ok(Outcome { text: emit(&Document::Report(r)), status })
}

fn run_hilbert(rays: &str, lattice: Option<&str>) -> Result<Outcome, CliError> {
    let rays = matrix_arg(rays, "rays")?;
    let n = rays
        .first()
        .map(Vec::len)
        .ok_or_else(|| CliError::Usage("--rays needs at least one vector".into()))?;
    let c = Cone::from_generators(n, &rays)?;
    let sub = match lattice {
        Some(text) => {
            let g = matrix_arg(text, "lattice")?;
            if g.iter().any(|v| v.len() != n) {
                return Err(CliError::Usage("--lattice vectors have the wrong length".into()));
            }
            Sublattice::from_generators(n, &g)?
        }
        None => Sublattice::full(n),
    };
    let hb = hilbert_basis(&c, &sub)?;
    let mut r = report("hilbert", Vec::new());
    r.values.insert("cone".into(), int_rows(c.rays()));
    r.values.insert("hilbert_basis".into(), int_rows(&hb));
    Ok(success(Document::Report(r)))
}

fn run_render(input: &Path, overlay: Option<&Path>) -> Result<Outcome, CliError> {
    let overlay = match overlay.map(read).transpose()? {
        Some(Document::ReductionResult(r)) => match *r {
            Reduction::Fan { result, .. } => Some(result.base),
            Reduction::Complex { .. } => {
                return Err(CliError::Usage("complex reductions cannot be drawn".into()));
            }
        },
        Some(other) => {
            return Err(CliError::Usage(format!("overlay must be a reduction_result, not {:?}", other.kind())));
        }
        None => None,
    };
    let (fan, overlay): (_, Option<StackyFan>) = match read(input)? {
        Document::Fan(f) => (f, overlay),
        Document::StackyFan(f) => (f.fan().clone(), overlay.or(Some(f))),
        Document::FanMorphism(m) => (m.source().clone(), overlay),
        Document::ReductionResult(r) => match *r {
            Reduction::Fan { input, result } => (input.target().clone(), Some(result.base)),
            Reduction::Complex { .. } => {
                return Err(CliError::Usage("complex reductions cannot be drawn".into()));
            }
        },
        other => return Err(CliError::Usage(format!("cannot draw a {:?}", other.kind()))),
    };
    Ok(Outcome { text: render::render(&fan, overlay.as_ref())?, status: 0 })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Minmod { input, over } => {
            let p = fan_morphism(read(input)?, input)?;
            let g = match read(over)? {
                Document::Fan(g) => g,
                other => {
                    return Err(CliError::Usage(format!("--over must be a fan, not {:?}", other.kind())));
                }
            };
            let refines = FanMorphism::new(g.clone(), p.target().clone(), LatticeMap::identity(g.ambient()))
                .map(|m| m.is_modification())
                .unwrap_or(false);
            if !refines {
                return Err(Error::Precondition("--over does not refine the target".into()).into());
            }
            let (_, m) = minimal_modification(p.lattice_map(), p.source(), &g)?;
            Ok(success(Document::FanMorphism(m)))
        }
        Command::Fanprod { first, second, cartesian } => {
            let p = fan_morphism(read(first)?, first)?;
            let q = fan_morphism(read(second)?, second)?;
            if *cartesian {
                let triples = cartesian_check(&p, &q)?;
                let checks = triples
                    .iter()
                    .map(|t| Check {
                        name: "cartesian".into(),
                        holds: t.cartesian,
                        details: vec![format!(
                            "{} and {} over {}",
                            describe(&t.sigma),
                            describe(&t.lambda),
                            describe(&t.kappa)
                        )],
                    })
                    .collect();
                let r = report("fanprod", checks);
                let status = if r.holds { 0 } else { 1 };
                return Ok(Outcome { text: emit(&Document::Report(r)), status });
            }
            Ok(success(Document::Fan(toric_fiber_product(&p, &q)?.fan)))
        }
        Command::Basechange { input, matrix } => {
            let p = fan_morphism(read(input)?, input)?;
            let rows = matrix_arg(matrix, "matrix")?;
            let q = p.target().ambient();
            if rows.len() != q {
                return Err(CliError::Usage(format!("--matrix needs {q} rows")));
            }
            let cols = rows.first().map_or(0, Vec::len);
            let j = LatticeMap::new(IntMatrix::from_rows(rows, cols)?);
            let (_, m) = base_change_along_alteration(&p, &j)?;
            Ok(success(Document::FanMorphism(m)))
        }
        Command::Reduce { input } => run_reduce(input),
        Command::Factor { input, alteration } => run_factor(input, alteration),
        Command::Hilbert { rays, lattice } => run_hilbert(rays, lattice.as_deref()),
        Command::Render { input, overlay } => run_render(input, overlay.as_deref()),
    }
}

/// Parses arguments, runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
