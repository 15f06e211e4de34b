//! Command-line front end. All output goes through a writer so runs are
//! reproducible byte for byte.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::duality::Duality;
use crate::error::{Error, ErrorKind, Result};
use crate::lamination::{canonical_decompose, from_coords, parse_coords, CurveWord, IntegralLamination};
use crate::qtorus::{Generators, QLaurent};
use crate::surface::IdealTriangulation;

pub const EXIT_OK: i32 = 0;
/// A check ran to completion and reported a failure.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qduality", version, about = "Quantum traces and the quantum duality map for punctured surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Image of a lamination in the square-root quantum torus.
    Trace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lamination: LaminationArgs,
        /// Print the evaluation at ω = 1.
        #[arg(long)]
        classical: bool,
    },
    /// Image of an integral lamination in q and X_i = Z_i².
    Dual {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lamination: LaminationArgs,
    },
    /// Structure constants of the product of two laminations.
    Product {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        l1: String,
        #[arg(long, allow_hyphen_values = true)]
        l2: String,
    },
    /// Structural checks on the image of a lamination.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lamination: LaminationArgs,
        /// Append the elapsed time (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
    /// Frobenius identity at a primitive N-th root of unity.
    Frobenius {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lamination: LaminationArgs,
        #[arg(long)]
        root: i64,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Triangulation JSON file, or a bundled name: punctured_torus, sphere_4.
    #[arg(long, default_value = "punctured_torus")]
    pub surface: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for component evaluation.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LaminationArgs {
    /// Coordinates `a1,...,an`; half-integers as `p/2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "curve")]
    pub coords: Option<String>,
    /// Curve word such as `2L,3R` (1-based edges).
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub weight: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
    Csv,
}

/// Resolve a surface argument to a triangulation.
pub fn load_surface(arg: &str) -> Result<IdealTriangulation> {
    let stem = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    if Path::new(arg).exists() {
        return IdealTriangulation::load(arg);
    }
    match stem {
        "punctured_torus" => Ok(IdealTriangulation::punctured_torus()),
        "sphere_4" => Ok(IdealTriangulation::sphere_4()),
        _ => Err(Error::Parse(format!("no surface file or bundled surface named '{arg}'"))),
    }
}

fn lamination(tri: &IdealTriangulation, args: &LaminationArgs) -> Result<IntegralLamination> {
    match (&args.coords, &args.curve) {
        (Some(c), _) => read_coords(tri, c),
        (None, Some(w)) => canonical_decompose(tri, vec![(CurveWord::parse(w)?, args.weight)]),
        (None, None) => Err(Error::Parse("one of --coords or --curve is required".into())),
    }
}

fn read_coords(tri: &IdealTriangulation, text: &str) -> Result<IntegralLamination> {
    let mu = parse_coords(text)?;
    if mu.len() != tri.num_edges() {
        return Err(Error::DimensionMismatch { expected: tri.num_edges(), found: mu.len() });
    }
    from_coords(tri, &mu)
}

fn render(q: &QLaurent, format: Format) -> String {
    match format {
        Format::Text => q.to_text(),
        Format::Latex => q.to_latex(),
        Format::Json => q.to_json().to_string(),
        Format::Csv => polynomial_csv(q),
    }
}

fn polynomial_csv(q: &QLaurent) -> String {
    let var = if q.generators() == Generators::X { "q" } else { "w" };
    let header: Vec<String> = (1..=q.n()).map(|i| format!("e{i}")).collect();
    let mut out = format!("{},coefficient", header.join(","));
    for (e, c) in q.terms().rev() {
        let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("\n{},\"{}\"", e.join(","), c.render(var)));
    }
    out
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let common = match &cli.command {
        Command::Trace { common, .. }
        | Command::Dual { common, .. }
        | Command::Product { common, .. }
        | Command::Verify { common, .. }
        | Command::Frobenius { common, .. } => common,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(1))
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    let engine = Duality::new(load_surface(&common.surface)?);
    let format = common.format;
    let (text, code) = pool.install(|| compute(&engine, &cli.command, format))?;
    writeln!(out, "{text}").map_err(|e| Error::Parse(format!("write: {e}")))?;
    Ok(code)
}

fn compute(engine: &Duality, command: &Command, format: Format) -> Result<(String, i32)> {
    match command {
        Command::Trace { lamination: l, classical, .. } => {
            let l = lamination(engine.triangulation(), l)?;
            let q = engine.i_omega(&l)?;
            let q = if *classical { q.classical_limit() } else { q };
            Ok((render(&q, format), EXIT_OK))
        }
        Command::Dual { lamination: l, .. } => {
            let l = lamination(engine.triangulation(), l)?;
            Ok((render(&engine.i_hat_q(&l)?, format), EXIT_OK))
        }
        Command::Product { l1, l2, .. } => {
            let a = read_coords(engine.triangulation(), l1)?;
            let b = read_coords(engine.triangulation(), l2)?;
            let table = engine.product_expand(&a, &b)?;
            let text = match format {
                Format::Text => table.to_text().trim_end().to_string(),
                Format::Csv => table.to_csv().trim_end().to_string(),
                Format::Latex => table.to_latex().trim_end().to_string(),
                Format::Json => table.to_json().to_string(),
            };
            Ok((text, EXIT_OK))
        }
        Command::Verify { lamination: l, timing, .. } => {
            let l = lamination(engine.triangulation(), l)?;
            let report = engine.verify_bundle(&l);
            let text = match format {
                Format::Json => report.to_json(*timing).to_string(),
                _ => report.to_text(*timing).trim_end().to_string(),
            };
            Ok((text, if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
        Command::Frobenius { lamination: l, root, .. } => {
            let l = lamination(engine.triangulation(), l)?;
            let (lhs, rhs) = engine.frobenius_sides(&l, *root)?;
            let ok = lhs == rhs;
            let text = match format {
                Format::Json => json!({ "result": ok, "root": root, "lhs": lhs.to_json(), "rhs": rhs.to_json() }).to_string(),
                _ if ok => "true".to_string(),
                _ => format!("false\nlhs: {}\nrhs: {}", lhs.to_text(), rhs.to_text()),
            };
            Ok((text, if ok { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e.kind() {
                ErrorKind::Parse => EXIT_PARSE,
                ErrorKind::Domain => EXIT_DOMAIN,
                ErrorKind::Internal => EXIT_INTERNAL,
            }
        }
    }
}
