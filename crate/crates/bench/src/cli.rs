//! Argument parsing and dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ppgmres::sparse::write_matrix_market;
use ppgmres::{OpCounter, PolyPreconditioner};

use crate::commands::{self, parse_degrees, parse_interval, parse_roots, Output, Status, DEFAULT_SPECTRUM_CAP};
use crate::error::{io_err, usage, Result};
use crate::run::{build_poly, PolyStart, Problem, RunConfig, SolverKind};
use crate::source::{GenSpec, Preset, PresetSpec, RhsSpec, Source};

/// Default directory for CSV files when `--out` is absent or relative.
pub const OUT_DIR_VAR: &str = "PPGMRES_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "ppgmres", version, about = "Polynomial preconditioned GMRES experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solve and print its row.
    Solve(SolveArgs),
    /// One row per degree.
    Sweep(SweepArgs),
    /// PP-GMRES without and with stability control at every degree.
    StabilityScan(SweepArgs),
    /// Sample phi on a real interval and list its roots.
    PolyGraph(PolyGraphArgs),
    /// Dense eigenvalues of A, A M^-1 and their images under phi.
    Spectrum(SpectrumArgs),
    /// Write the matrix in Matrix Market format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", multiple = false)]
pub struct SourceArgs {
    /// Generated matrix, `kind:key=value,...` (identity, diag_power, bidiag_power, biharmonic).
    #[arg(long = "gen", value_name = "KIND:PARAMS")]
    pub generator: Option<String>,
    /// Matrix Market file.
    #[arg(long, value_name = "FILE")]
    pub mm: Option<PathBuf>,
    /// Named experiment supplying the matrix and defaults.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    /// Polynomial degree (for fgmres, the inner cycle length).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub no_stability_control: bool,
    #[arg(long, value_enum, default_value = "random")]
    pub poly_start: PolyStart,
    /// Right-hand side: `random`, `ones` or a Matrix Market vector file.
    #[arg(long, value_name = "random|ones|FILE")]
    pub rhs: Option<String>,
    /// Right precondition with ILU(0) (preset shift, else 0).
    #[arg(long)]
    pub ilu: bool,
    /// ILU(0) of A + shift I; implies --ilu.
    #[arg(long, value_name = "SHIFT")]
    pub ilu_shift: Option<f64>,
    /// Turn off an ILU the preset enables.
    #[arg(long, conflicts_with_all = ["ilu", "ilu_shift"])]
    pub no_ilu: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,
    /// Outer degree for --solver double.
    #[arg(long)]
    pub d2: Option<usize>,
    /// Restart length.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_cycles: Option<usize>,
    /// Warn when the stability check exceeds this.
    #[arg(long)]
    pub stch_threshold: Option<f64>,
    /// Lower the degree by a fifth until the stability check passes.
    #[arg(long, requires = "stch_threshold")]
    pub reduce_degree: bool,
    /// CSV output file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma separated degrees; presets supply a default list.
    #[arg(long, value_name = "D,D,...")]
    pub degrees: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PolyGraphArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Use these roots instead of building from a matrix, e.g. `1,3+1i,3-1i`.
    #[arg(long, value_name = "ROOTS", allow_hyphen_values = true)]
    pub roots: Option<String>,
    /// `lo,hi`; defaults to [0, 1.05 max |root|].
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub interval: Option<String>,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// CSV output file for the samples.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// CSV output file for the roots; without it the root table follows the samples after a blank line.
    #[arg(long, value_name = "FILE")]
    pub roots_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Largest order accepted for the dense eigensolve.
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_CAP)]
    pub cap: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

/// Matrix source and the preset it came from, if any.
fn resolve_source(s: &SourceArgs) -> Result<(Source, Option<PresetSpec>)> {
    match (&s.generator, &s.mm, s.preset) {
        (Some(g), None, None) => Ok((Source::Gen(g.parse::<GenSpec>()?), None)),
        (None, Some(p), None) => Ok((Source::Mm(p.clone()), None)),
        (None, None, Some(p)) => {
            let spec = p.spec()?;
            Ok((spec.source.clone(), Some(spec)))
        }
        (None, None, None) => Err(usage("give one of --gen, --mm or --preset")),
        _ => Err(usage("give only one of --gen, --mm or --preset")),
    }
}

fn load_problem(source: &Source, preset: Option<&PresetSpec>, poly: &PolyArgs) -> Result<Problem> {
    let a = source.load()?;
    let rhs = match (&poly.rhs, preset.and_then(|p| p.rhs.clone())) {
        (Some(r), _) => r.parse::<RhsSpec>()?,
        (None, Some(path)) => RhsSpec::File(path),
        (None, None) => RhsSpec::Random,
    };
    let b = rhs.load(a.n(), poly.seed)?;
    let shift = if poly.no_ilu {
        None
    } else if let Some(s) = poly.ilu_shift {
        Some(s)
    } else if poly.ilu || preset.is_some_and(|p| p.ilu_default) {
        Some(preset.map_or(0.0, |p| p.ilu_shift))
    } else {
        None
    };
    if let Some(s) = shift {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(usage(format!("ILU shift must be a nonnegative number, got {s}")));
        }
    }
    Problem::new(a, b, shift)
}

fn run_config(args: &SolverArgs, preset: Option<&PresetSpec>) -> RunConfig {
    RunConfig {
        solver: args.solver.unwrap_or(SolverKind::PpGmres),
        degree: args.poly.d.or(preset.map(|p| p.degree)).unwrap_or(10),
        degree2: args.d2,
        m: args.m.or(preset.map(|p| p.m)).unwrap_or(50),
        tol: args.tol.or(preset.map(|p| p.tol)).unwrap_or(1e-10),
        seed: args.poly.seed,
        max_cycles: args.max_cycles.or(preset.map(|p| p.max_cycles)).unwrap_or(10_000),
        stability_control: !args.poly.no_stability_control,
        stch_threshold: args.stch_threshold,
        reduce_degree: args.reduce_degree,
        poly_start: args.poly.poly_start,
    }
}

fn poly_config(args: &PolyArgs, preset: Option<&PresetSpec>) -> RunConfig {
    RunConfig {
        solver: SolverKind::PpGmres,
        degree: args.d.or(preset.map(|p| p.degree)).unwrap_or(10),
        degree2: None,
        m: 1,
        tol: 1.0,
        seed: args.seed,
        max_cycles: 1,
        stability_control: !args.no_stability_control,
        stch_threshold: None,
        reduce_degree: false,
        poly_start: args.poly_start,
    }
}

fn describe(source: &Source, preset: Option<&PresetSpec>) -> String {
    match preset {
        Some(p) => format!("{source} [{}]", p.note),
        None => source.to_string(),
    }
}

/// Where a CSV goes: `--out` (relative paths under the output directory
/// variable when set), else `<dir>/<default_name>` when the variable is set.
fn out_path(out: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Prints the CSV on stdout and the summary on stderr, and writes files.
fn emit(out: &Output, csv_path: Option<PathBuf>, extra_path: Option<PathBuf>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut so = stdout.lock();
    let w = |e| io_err("<stdout>", e);
    so.write_all(out.csv.as_bytes()).map_err(w)?;
    if let Some(extra) = &out.extra {
        match &extra_path {
            Some(p) => write_file(p, extra)?,
            None => {
                so.write_all(b"\n").map_err(w)?;
                so.write_all(extra.as_bytes()).map_err(w)?;
            }
        }
    }
    so.flush().map_err(w)?;
    if let Some(p) = csv_path {
        write_file(&p, &out.csv)?;
    }
    eprint!("{}", out.summary);
    Ok(())
}

/// Runs a parsed command line and returns the process status.
pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Solve(a) => {
            let (source, preset) = resolve_source(&a.source)?;
            let cfg = run_config(&a.solver, preset.as_ref());
            let p = load_problem(&source, preset.as_ref(), &a.solver.poly)?;
            let out = commands::solve(&p, &cfg, &describe(&source, preset.as_ref()))?;
            emit(&out, out_path(a.solver.out.as_deref(), "solve.csv"), None)?;
            Ok(out.status)
        }
        Command::Sweep(a) => sweep_like(a, false),
        Command::StabilityScan(a) => sweep_like(a, true),
        Command::PolyGraph(a) => {
            let poly = match &a.roots {
                Some(r) => PolyPreconditioner::from_roots(parse_roots(r)?)?,
                None => {
                    let (source, preset) = resolve_source(&a.source)?;
                    let p = load_problem(&source, preset.as_ref(), &a.poly)?;
                    build_poly(&p, &poly_config(&a.poly, preset.as_ref()), &mut OpCounter::new())?.poly
                }
            };
            let interval = match &a.interval {
                Some(s) => parse_interval(s)?,
                None => {
                    let hi = poly.roots().iter().map(|z| z.norm()).fold(0.0, f64::max);
                    (0.0, 1.05 * hi)
                }
            };
            let out = commands::poly_graph(&poly, interval, a.samples)?;
            emit(
                &out,
                out_path(a.out.as_deref(), "poly_graph.csv"),
                a.roots_out.as_deref().and_then(|p| out_path(Some(p), "")),
            )?;
            Ok(out.status)
        }
        Command::Spectrum(a) => {
            let (source, preset) = resolve_source(&a.source)?;
            let p = load_problem(&source, preset.as_ref(), &a.poly)?;
            if p.a.n() > a.cap {
                return Err(usage(format!(
                    "matrix order {} exceeds the dense eigensolve cap {}; raise --cap to force it",
                    p.a.n(),
                    a.cap
                )));
            }
            let poly = match a.poly.d {
                Some(_) => Some(build_poly(&p, &poly_config(&a.poly, preset.as_ref()), &mut OpCounter::new())?.poly),
                None => None,
            };
            let out = commands::spectrum(&p, poly.as_ref(), a.cap, &describe(&source, preset.as_ref()))?;
            emit(&out, out_path(a.out.as_deref(), "spectrum.csv"), None)?;
            Ok(out.status)
        }
        Command::Export(a) => {
            let (source, _) = resolve_source(&a.source)?;
            let m = source.load()?;
            let path = out_path(Some(&a.out), "").unwrap_or(a.out);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            }
            write_matrix_market(&m, &path)?;
            eprintln!("wrote {} (n = {}, nnz = {})", path.display(), m.n(), m.nnz());
            Ok(Status::Converged)
        }
    }
}

fn sweep_like(a: SweepArgs, scan: bool) -> Result<Status> {
    let (source, preset) = resolve_source(&a.source)?;
    let degrees = match (&a.degrees, &preset) {
        (Some(s), _) => parse_degrees(s)?,
        (None, Some(p)) => p.degrees.clone(),
        (None, None) => return Err(usage("--degrees is required without a preset")),
    };
    let cfg = run_config(&a.solver, preset.as_ref());
    let p = load_problem(&source, preset.as_ref(), &a.solver.poly)?;
    let what = describe(&source, preset.as_ref());
    let (out, name) = if scan {
        (
            commands::stability_scan(&p, &cfg, &degrees, &what)?,
            "stability_scan.csv",
        )
    } else {
        (commands::sweep(&p, &cfg, &degrees, &what)?, "sweep.csv")
    };
    emit(&out, out_path(a.solver.out.as_deref(), name), None)?;
    Ok(out.status)
}
