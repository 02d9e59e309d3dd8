//! Argument parsing and verb dispatch.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use hermann_core::alcove::{faces, reduce_to_alcove, AlcovePoint};
use hermann_core::exact::fmt_rational;
use hermann_core::geometry::{analyze, find_minimal, grid_points, is_austere, shape_spectrum, OrbitReport, TriState};
use hermann_core::interval::DEFAULT_PRECISION;
use hermann_core::triad::CATALOG;
use hermann_core::{catalog, CartanLabel, CatalogParams, Error, GradedRootDatum, Rational};

use crate::datum_file::{load_datum, parse_rational, serialize_datum, DatumError};
use crate::render::{classification_table, fmt_interval, spectrum_table, Format, Table};
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATUM: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hermann", version, about = "Orbit spaces of Hermann actions in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Browse built-in graded root data.
    #[command(subcommand)]
    Catalog(CatalogVerb),
    /// Classify the orbit through one point.
    Analyze {
        #[command(flatten)]
        triad: TriadArgs,
        /// Coefficients of π in the dual basis, e.g. `1/4,0,0`.
        #[arg(long)]
        point: String,
        /// Normal vector in dual-basis coordinates; prints the shape spectrum.
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Classify the faces of the fundamental alcove.
    Faces {
        #[command(flatten)]
        triad: TriadArgs,
        /// Every face, not only vertices.
        #[arg(long)]
        all_faces: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Austere test on the closed alcove grid with step π/N.
    ScanAustere {
        #[command(flatten)]
        triad: TriadArgs,
        #[arg(long)]
        denominator: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Newton search for the minimal orbit.
    FindMinimal {
        #[command(flatten)]
        triad: TriadArgs,
        #[arg(long, default_value = "1e-20")]
        tolerance: String,
    },
    /// Map a point into the fundamental alcove.
    Reduce {
        #[command(flatten)]
        triad: TriadArgs,
        #[arg(long)]
        point: String,
    },
    /// SVG picture of a rank one or two alcove with its classified vertices.
    Diagram {
        #[command(flatten)]
        triad: TriadArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 640)]
        width: u32,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogVerb {
    /// List catalog keys.
    List,
    /// Print a catalog datum as JSON.
    Show {
        #[command(flatten)]
        triad: TriadArgs,
    },
}

#[derive(Debug, Args)]
struct TriadArgs {
    /// Catalog key, or `@path` to a JSON datum.
    #[arg(long)]
    triad: String,
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
    /// Cartan label for `isotropy`, e.g. `BC1`.
    #[arg(long)]
    label: Option<String>,
    /// Multiplicities per root length, shortest first, e.g. `4,1`.
    #[arg(long)]
    mults: Option<String>,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalInconsistency(_) | Error::NonTermination(_) => EXIT_INTERNAL,
            Error::DimensionMismatch { .. } => EXIT_USAGE,
            _ => EXIT_DATUM,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<DatumError> for Failure {
    fn from(e: DatumError) -> Self {
        Self { code: EXIT_DATUM, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_DATUM, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

/// Runs one invocation; output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.verb, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(verb: Verb, out: &mut dyn Write) -> Outcome {
    match verb {
        Verb::Catalog(CatalogVerb::List) => {
            let mut t = Table::new(&["key", "parameters", "summary"]);
            for e in CATALOG.iter() {
                t.push(vec![e.key.into(), e.parameters.into(), e.summary.into()]);
            }
            out.write_all(t.render(Format::Plain).as_bytes())?;
        }
        Verb::Catalog(CatalogVerb::Show { triad }) => {
            let d = load(&triad)?;
            out.write_all(serialize_datum(&d).as_bytes())?;
        }
        Verb::Analyze { triad, point, xi, format } => {
            let d = load(&triad)?;
            let h = parse_point(&point, d.rank(), "--point")?;
            let rep = analyze(&d, &h)?;
            out.write_all(classification_table(std::slice::from_ref(&rep), None, format).render(format).as_bytes())?;
            if let Some(xi) = xi {
                let y = parse_vector(&xi, d.rank(), "--xi")?;
                let s = shape_spectrum(&d, &h, &y, DEFAULT_PRECISION)?;
                out.write_all(b"\n")?;
                out.write_all(spectrum_table(&s).render(format).as_bytes())?;
            }
        }
        Verb::Faces { triad, all_faces, format } => {
            let d = load(&triad)?;
            let fs: Vec<_> = faces(&d)?.into_iter().filter(|f| all_faces || f.is_vertex()).collect();
            let mut reports = Vec::with_capacity(fs.len());
            let mut labels = Vec::with_capacity(fs.len());
            for f in &fs {
                reports.push(analyze(&d, &f.representative)?);
                let idx: Vec<String> = f.delta.iter().map(|i| i.to_string()).collect();
                labels.push(format!("{{{}}}", idx.join(",")));
            }
            let t = classification_table(&reports, Some(("face", &labels)), format);
            out.write_all(t.render(format).as_bytes())?;
        }
        Verb::ScanAustere { triad, denominator, jobs, format } => {
            if denominator == 0 {
                return Err(Failure::usage("--denominator must be positive"));
            }
            let d = load(&triad)?;
            let pts = grid_points(&d, denominator)?;
            let verdicts = parallel_map(&pts, jobs.max(1), |h| is_austere(&d, h));
            let mut t = Table::new(&["point", "austere"]);
            for (h, v) in pts.iter().zip(verdicts) {
                if v != TriState::No {
                    t.push(vec![h.to_string(), v.to_string()]);
                }
            }
            out.write_all(t.render(format).as_bytes())?;
        }
        Verb::FindMinimal { triad, tolerance } => {
            let d = load(&triad)?;
            let tol = parse_decimal(&tolerance).filter(|t| *t > Rational::from_integer(0.into())).ok_or_else(|| {
                Failure::usage(format!("--tolerance: expected a positive number, found {tolerance:?}"))
            })?;
            let m = find_minimal(&d, &tol)?;
            let coords: Vec<String> = m.point.coeffs().iter().map(fmt_sci_rational).collect();
            writeln!(out, "datum\t{}", d.name())?;
            writeln!(out, "point\t({})·π", coords.join(","))?;
            writeln!(out, "norm_mH\t{}", fmt_interval(&m.norm))?;
            writeln!(out, "iterations\t{}", m.iterations)?;
        }
        Verb::Reduce { triad, point } => {
            let d = load(&triad)?;
            let h = parse_point(&point, d.rank(), "--point")?;
            let (x, word) = reduce_to_alcove(&d, &h)?;
            writeln!(out, "input\t{h}")?;
            writeln!(out, "output\t{x}")?;
            let w: Vec<String> = word.iter().map(|w| w.to_string()).collect();
            writeln!(out, "word\t{}", if w.is_empty() { "-".to_string() } else { w.join("; ") })?;
        }
        Verb::Diagram { triad, out: path, width } => {
            let d = load(&triad)?;
            let r = d.rank();
            if r > 2 {
                return Err(Error::RankTooHigh(r).into());
            }
            let mut reports: Vec<OrbitReport> = Vec::new();
            for f in faces(&d)?.into_iter().filter(|f| f.is_vertex()) {
                reports.push(analyze(&d, &f.representative)?);
            }
            let svg = render_svg(&d, &reports, width)?;
            std::fs::write(&path, svg)
                .map_err(|e| Failure { code: EXIT_DATUM, message: format!("cannot write {}: {e}", path.display()) })?;
            writeln!(out, "wrote\t{}", path.display())?;
            writeln!(out, "markers\t{}", reports.len())?;
        }
    }
    Ok(())
}

fn load(t: &TriadArgs) -> Result<GradedRootDatum, Failure> {
    if let Some(path) = t.triad.strip_prefix('@') {
        if t.p.is_some() || t.q.is_some() || t.label.is_some() || t.mults.is_some() {
            return Err(Failure::usage("--p, --q, --label and --mults apply to catalog keys only"));
        }
        return Ok(load_datum(std::path::Path::new(path))?);
    }
    let label = t
        .label
        .as_deref()
        .map(CartanLabel::from_str)
        .transpose()
        .map_err(|e| Failure::usage(format!("--label: {e}")))?;
    let mults = t
        .mults
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|m| m.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::usage(format!("--mults: expected comma-separated integers, found {s:?}")))
        })
        .transpose()?;
    let params = CatalogParams { p: t.p, q: t.q, label, mults };
    Ok(catalog(&t.triad, &params)?)
}

fn parse_vector(s: &str, rank: usize, flag: &str) -> Result<Vec<Rational>, Failure> {
    let v = s
        .split(',')
        .map(|c| parse_rational(c).ok_or_else(|| Failure::usage(format!("{flag}: bad rational {:?}", c.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != rank {
        return Err(Failure::usage(format!("{flag}: expected {rank} coordinates, found {}", v.len())));
    }
    Ok(v)
}

fn parse_point(s: &str, rank: usize, flag: &str) -> Result<AlcovePoint, Failure> {
    parse_vector(s, rank, flag).map(AlcovePoint::new)
}

/// Exact value of a decimal literal such as `1e-20`, `0.5` or `3/7`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some(q) = parse_rational(s) {
        return Some(q);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut q = Rational::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(10.into());
    let p = pow(&ten, shift.unsigned_abs());
    q = if shift >= 0 { q * p } else { q / p };
    Some(if neg { -q } else { q })
}

fn pow(b: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::from_integer(1.into()), |acc, _| acc * b)
}

/// Solver iterates are dyadic with long denominators; print them as decimals.
fn fmt_sci_rational(q: &Rational) -> String {
    if q.denom() <= &1_000_000.into() {
        fmt_rational(q)
    } else {
        hermann_core::interval::fmt_sci(q, 40)
    }
}

/// Order-preserving map over `jobs` scoped threads.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("scan worker panicked")).collect()
    })
}
