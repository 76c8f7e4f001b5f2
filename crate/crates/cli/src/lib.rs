//! Command-line front end for `torus-curves`.
//!
//! Every subcommand reads a JSON scheme document and writes a JSON document
//! to standard output. Exit codes: 0 on success (or a realizable scheme for
//! `check`), 1 when `check` or `render` meets a non-realizable scheme, 2 on
//! usage or input errors.

pub mod document;
mod error;
pub mod render;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use torus_curves::farey::max_packing_jobs;
use torus_curves::genus::{bounded_decomposition_search, decompose_3scheme, endemic_family};
use torus_curves::solver::{construct_witness, enumerate_orbits, kappa_constraints, solve_xy};
use torus_curves::{conditions, decide_torus, oracle_realizable, BigInt, EdgeRule, Scheme, ThreeSchemeSplit};

use document::*;
pub use error::CliError;
pub use render::render_svg;

const ENTRY_ORDER: &str = "Scheme files are JSON objects {\"n\": N, \"entries\": [...]} with the N(N-1)/2 \
intersection numbers in column order: m_12, m_13, m_23, m_14, m_24, m_34, ... \
An optional \"metadata\" object of strings is carried along and ignored.";

#[derive(Debug, Parser)]
#[command(name = "torus-curves", version, about = "Realizability of intersection schemes by curves on the torus", after_help = ENTRY_ORDER)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide torus realizability; exits 1 when the scheme is not realizable.
    Check {
        /// Scheme file, or - for standard input.
        file: PathBuf,
        /// Admissible κ listed in the output.
        #[arg(long, default_value_t = DEFAULT_ORBIT_LIMIT)]
        orbits: usize,
    },
    /// Witness systems and the admissible κ classes.
    Solve {
        file: PathBuf,
        /// Build the witness for this κ only.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<BigInt>,
        /// Maximum number of orbit representatives.
        #[arg(long, default_value_t = DEFAULT_ORBIT_LIMIT)]
        orbits: usize,
    },
    /// toz values of the scheme.
    Toz { file: PathBuf },
    /// Exhaustive search over normalized systems.
    Oracle { file: PathBuf },
    /// Split a 3-scheme into two torus-realizable summands.
    Decompose { file: PathBuf },
    /// The endemic 4-scheme (q; pq, pq; pq, pq, p).
    Endemic {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
        /// Also search for a decomposition with entries bounded by B.
        #[arg(long, value_name = "B")]
        search_bound: Option<u64>,
    },
    /// Largest set of curve classes with pairwise intersection between 1 and D.
    Farey {
        #[arg(long)]
        d: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draw the canonical witness on the flat torus as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the CLI with the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Runs the CLI writing documents to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_scheme(path: &Path) -> Result<Scheme, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::io(path, e))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
    };
    serde_json::from_str::<SchemeDocument>(&text)?.to_scheme()
}

fn emit<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out).map_err(|e| CliError::io("<stdout>", e))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Check { file, orbits } => {
            let s = read_scheme(&file)?;
            let v = decide_torus(&s)?;
            emit(out, &VerdictDocument::new(&v, orbits))?;
            Ok(if v.is_realizable() { 0 } else { 1 })
        }
        Command::Solve { file, kappa, orbits } => {
            let s = read_scheme(&file)?;
            emit(out, &solve(&s, kappa, orbits)?)?;
            Ok(0)
        }
        Command::Toz { file } => {
            let s = read_scheme(&file)?;
            emit(out, &TozDocument::from(&conditions::toz_report(&s)?))?;
            Ok(0)
        }
        Command::Oracle { file } => {
            let s = read_scheme(&file)?;
            let r = oracle_realizable(&s)?;
            let doc = OracleDocument {
                realizable: r.realizable,
                orbit_count: r.orbit_count,
                witnesses: r.witnesses.iter().map(|w| system_doc(&w.system)).collect(),
            };
            emit(out, &doc)?;
            Ok(0)
        }
        Command::Decompose { file } => {
            let s = read_scheme(&file)?;
            let doc = match decompose_3scheme(&s)? {
                ThreeSchemeSplit::AlreadyTorus(v) => DecomposeDocument {
                    kind: "already_torus".into(),
                    witness: v.witness.as_ref().map(system_doc),
                    left: None,
                    right: None,
                    left_witness: None,
                    right_witness: None,
                    degenerate: false,
                },
                ThreeSchemeSplit::Split(d) => DecomposeDocument {
                    kind: "split".into(),
                    witness: None,
                    left: Some(SchemeDocument::from_scheme(&d.left)),
                    right: Some(SchemeDocument::from_scheme(&d.right)),
                    left_witness: d.left_verdict.witness.as_ref().map(system_doc),
                    right_witness: d.right_verdict.witness.as_ref().map(system_doc),
                    degenerate: d.degenerate,
                },
            };
            emit(out, &doc)?;
            Ok(0)
        }
        Command::Endemic { p, q, search_bound } => {
            let s = endemic_family(&p, &q)?;
            let v = decide_torus(&s)?;
            let search = match search_bound {
                Some(bound) => {
                    let found = bounded_decomposition_search(&s, bound)?;
                    Some(SearchDoc {
                        bound,
                        found: found.is_some(),
                        left: found.as_ref().map(|d| SchemeDocument::from_scheme(&d.left)),
                        right: found.as_ref().map(|d| SchemeDocument::from_scheme(&d.right)),
                    })
                }
                None => None,
            };
            let doc = EndemicDocument {
                scheme: SchemeDocument::from_scheme(&s),
                verdict: VerdictDocument::new(&v, DEFAULT_ORBIT_LIMIT),
                search,
            };
            emit(out, &doc)?;
            Ok(0)
        }
        Command::Farey { d, jobs } => {
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let r = max_packing_jobs(EdgeRule::AtMost(d), jobs)?;
            let doc = FareyDocument { d, size: r.size, witness: r.witness.iter().map(|c| [c.p, c.q]).collect() };
            emit(out, &doc)?;
            Ok(0)
        }
        Command::Render { file, out: path } => {
            let s = read_scheme(&file)?;
            let v = decide_torus(&s)?;
            let Some(w) = v.witness else {
                return Err(CliError::NotRealizable(format!("{s} is not realizable on the torus; nothing to draw")));
            };
            render_svg(&w, &path)?;
            Ok(0)
        }
    }
}

fn solve(s: &Scheme, kappa: Option<BigInt>, limit: usize) -> Result<SolveDocument, CliError> {
    let v = decide_torus(s)?;
    let mut doc = SolveDocument {
        status: if v.is_realizable() { StatusDoc::Torus } else { StatusDoc::NotTorus },
        reasons: v.reasons.iter().map(ReasonDoc::from).collect(),
        reduced: None,
        xy: None,
        orbits: None,
        witnesses: Vec::new(),
    };
    let Some(log) = v.reduction.as_ref().filter(|_| v.is_realizable()) else {
        if kappa.is_some() {
            return Err(CliError::Usage(format!("{s} is not realizable on the torus; no witness for --kappa")));
        }
        return Ok(doc);
    };
    let r = &log.reduced;
    if r != s {
        doc.reduced = Some(SchemeDocument::from_scheme(r));
    }
    if r.n() >= 3 {
        let xy = solve_xy(r)?;
        let constraints = kappa_constraints(r, &xy)?;
        doc.orbits = Some(OrbitsDoc::new(&constraints, limit));
        doc.xy = Some(XyDoc { g: xy.g.into(), x: xy.x.into(), y: xy.y.into() });
    }
    let witnesses = match kappa {
        Some(k) => {
            if r.n() < 3 {
                return Err(CliError::Usage("--kappa needs at least three curves after reduction".into()));
            }
            vec![construct_witness(r, &k)?]
        }
        None => enumerate_orbits(r, limit)?,
    };
    for w in &witnesses {
        doc.witnesses.push(WitnessDoc::new(w, &log.lift(&w.system)?));
    }
    Ok(doc)
}
