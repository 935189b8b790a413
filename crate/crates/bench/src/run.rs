//! One configured solve and the table row it produces.

use std::time::Instant;

use clap::ValueEnum;
use ppgmres::poly::{build_polynomial_from, random_unit_vector, stability_check};
use ppgmres::solvers::{
    bicgstab, fgmres, gmres_restarted, gmres_right_preconditioned, pp_gmres, pp_gmres_changing, pp_gmres_double,
    pp_gmres_with, PpOptions,
};
use ppgmres::{
    ilu0_factor, BuiltPolynomial, CsrMatrix, GmresOptions, Ilu0Factors, LinearOperator, OpCounter, PolyOptions,
    Preconditioner, RightPreconditioned, SolveReport,
};

use crate::error::{usage, Result};
use crate::label::DegreeLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    /// Restarted GMRES(m).
    Gmres,
    /// GMRES(m) on phi(A); degree 1 runs plain GMRES.
    PpGmres,
    /// Flexible GMRES with one GMRES(d) cycle as preconditioner.
    Fgmres,
    /// PP-GMRES rebuilding the polynomial from every restart residual.
    Changing,
    Bicgstab,
    /// Composite polynomial of degrees d and d2.
    Double,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Gmres => "gmres",
            SolverKind::PpGmres => "pp-gmres",
            SolverKind::Fgmres => "fgmres",
            SolverKind::Changing => "changing",
            SolverKind::Bicgstab => "bicgstab",
            SolverKind::Double => "double",
        }
    }

    /// Degree shown for a run requested at `d`; solvers without a
    /// polynomial show 1.
    pub fn label_degree(self, d: usize) -> usize {
        match self {
            SolverKind::Gmres | SolverKind::Bicgstab => 1,
            _ => d,
        }
    }
}

/// Starting vector of the generating GMRES(d) cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyStart {
    /// Seeded random unit vector.
    Random,
    /// The right-hand side.
    Rhs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub solver: SolverKind,
    pub degree: usize,
    pub degree2: Option<usize>,
    pub m: usize,
    pub tol: f64,
    pub seed: u64,
    /// Cycles for the GMRES family; BiCGStab gets `max_cycles * m` iterations.
    pub max_cycles: usize,
    pub stability_control: bool,
    pub stch_threshold: Option<f64>,
    pub reduce_degree: bool,
    pub poly_start: PolyStart,
}

impl RunConfig {
    /// Checks the configuration against a problem with or without ILU.
    pub fn validate(&self, with_ilu: bool) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(usage(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.m == 0 || self.degree == 0 || self.max_cycles == 0 {
            return Err(usage("--m, --d and --max-cycles must be at least 1"));
        }
        if self.solver == SolverKind::Double && self.degree2.is_none() {
            return Err(usage("--solver double needs --d2"));
        }
        if self.poly_start == PolyStart::Rhs && self.solver != SolverKind::PpGmres {
            return Err(usage("--poly-start rhs only applies to pp-gmres"));
        }
        if with_ilu
            && matches!(
                self.solver,
                SolverKind::Fgmres | SolverKind::Changing | SolverKind::Double
            )
        {
            return Err(usage(format!(
                "{} does not take an ILU preconditioner",
                self.solver.name()
            )));
        }
        Ok(())
    }

    fn pp_options(&self, degree: usize) -> PpOptions {
        let mut o = PpOptions::new(degree, self.m, self.tol);
        o.gmres.max_cycles = self.max_cycles;
        o.seed = self.seed;
        o.stability_control = self.stability_control;
        o.stch_threshold = self.stch_threshold;
        o.reduce_degree = self.reduce_degree;
        o
    }

    fn gmres_options(&self) -> GmresOptions {
        let mut o = GmresOptions::new(self.m, self.tol);
        o.max_cycles = self.max_cycles;
        o
    }
}

/// Matrix, right-hand side and optional ILU(0) factors.
pub struct Problem {
    pub a: CsrMatrix,
    pub b: Vec<f64>,
    pub ilu: Option<Ilu0Factors>,
}

impl Problem {
    pub fn new(a: CsrMatrix, b: Vec<f64>, ilu_shift: Option<f64>) -> Result<Self> {
        let ilu = match ilu_shift {
            Some(s) => Some(ilu0_factor(&a, s)?),
            None => None,
        };
        Ok(Self { a, b, ilu })
    }

    fn precond(&self) -> Option<&dyn Preconditioner> {
        self.ilu.as_ref().map(|m| m as &dyn Preconditioner)
    }

    /// `A`, or `A M^{-1}` with ILU.
    pub fn base(&self) -> Base<'_> {
        match &self.ilu {
            Some(m) => Base::Preconditioned(RightPreconditioned::new(&self.a, m)),
            None => Base::Plain(&self.a),
        }
    }
}

pub enum Base<'a> {
    Plain(&'a CsrMatrix),
    Preconditioned(RightPreconditioned<'a>),
}

impl LinearOperator for Base<'_> {
    fn dim(&self) -> usize {
        match self {
            Base::Plain(a) => a.n(),
            Base::Preconditioned(op) => op.dim(),
        }
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        match self {
            Base::Plain(a) => a.apply_into(x, y, ctr),
            Base::Preconditioned(op) => op.apply_into(x, y, ctr),
        }
    }
}

/// Runs `cfg` with requested degree `degree` (overriding `cfg.degree`).
pub fn run_solver(p: &Problem, cfg: &RunConfig, degree: usize) -> Result<SolveReport> {
    let cfg = RunConfig { degree, ..cfg.clone() };
    cfg.validate(p.ilu.is_some())?;
    let (a, b, precond) = (&p.a, &p.b[..], p.precond());
    let mut ctr = OpCounter::new();
    let t0 = Instant::now();
    let mut rep = match cfg.solver {
        SolverKind::Gmres => plain_gmres(p, &cfg, &mut ctr)?,
        SolverKind::PpGmres if degree == 1 => plain_gmres(p, &cfg, &mut ctr)?,
        SolverKind::PpGmres => match cfg.poly_start {
            PolyStart::Random => pp_gmres(a, b, precond, &cfg.pp_options(degree), &mut ctr)?.1,
            PolyStart::Rhs => pp_from_rhs(p, &cfg, &mut ctr)?,
        },
        SolverKind::Fgmres => fgmres(a, b, degree, &cfg.gmres_options(), &mut ctr)?.1,
        SolverKind::Changing => pp_gmres_changing(a, b, &cfg.pp_options(degree), &mut ctr)?.1,
        SolverKind::Bicgstab => bicgstab(a, b, precond, cfg.tol, cfg.max_cycles.saturating_mul(cfg.m), &mut ctr)?.1,
        SolverKind::Double => {
            let d2 = cfg.degree2.unwrap_or(1);
            pp_gmres_double(a, b, degree, d2, &cfg.pp_options(degree * d2), &mut ctr)?.1
        }
    };
    rep.wall = t0.elapsed();
    Ok(rep)
}

fn plain_gmres(p: &Problem, cfg: &RunConfig, ctr: &mut OpCounter) -> Result<SolveReport> {
    let opts = cfg.gmres_options();
    Ok(match &p.ilu {
        Some(m) => gmres_right_preconditioned(&p.a, &p.b, m, &opts, ctr)?.1,
        None => gmres_restarted(&p.a, &p.b, &opts, ctr)?.1,
    })
}

/// The polynomial PP-GMRES would use for `cfg`, built over `A` or
/// `A M^{-1}`.
pub fn build_poly(p: &Problem, cfg: &RunConfig, ctr: &mut OpCounter) -> Result<BuiltPolynomial> {
    let start = match cfg.poly_start {
        PolyStart::Random => random_unit_vector(p.a.n(), cfg.seed),
        PolyStart::Rhs => {
            let bnorm = p.b.iter().map(|x| x * x).sum::<f64>().sqrt();
            if bnorm == 0.0 {
                return Err(usage("--poly-start rhs needs a nonzero right-hand side"));
            }
            p.b.iter().map(|x| x / bnorm).collect()
        }
    };
    let opts = PolyOptions {
        degree: cfg.degree,
        stability_control: cfg.stability_control,
    };
    Ok(build_polynomial_from(&p.base(), &start, &opts, ctr)?)
}

/// PP-GMRES with the polynomial generated from `b / ||b||`.
fn pp_from_rhs(p: &Problem, cfg: &RunConfig, ctr: &mut OpCounter) -> Result<SolveReport> {
    let built = build_poly(p, cfg, &mut OpCounter::new())?;
    let mut stch_cost = OpCounter::new();
    let stch = stability_check(&built.poly, &p.base(), &built.start, &mut stch_cost);
    let (_, mut rep) = pp_gmres_with(&p.a, &p.b, p.precond(), &built.poly, &cfg.gmres_options(), ctr)?;
    rep.counter += built.construction;
    rep.construction = built.construction;
    rep.stch = Some(stch);
    rep.stch_cost = stch_cost;
    rep.max_log10_pof = Some(built.report.max_log10_pof());
    Ok(rep)
}

pub const CSV_HEADER: [&str; 10] = [
    "degree",
    "added",
    "cycles",
    "mvps",
    "daxpys",
    "dots",
    "vops",
    "stch",
    "final_relres",
    "time_ms",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: DegreeLabel,
    pub converged: bool,
    pub cycles: usize,
    pub mvps: u64,
    pub daxpys: u64,
    pub dots: u64,
    pub vops: u64,
    pub stch: Option<f64>,
    pub final_relres: f64,
    pub time_ms: f64,
}

impl BenchRow {
    /// `requested` labels runs that report no polynomial.
    pub fn from_report(rep: &SolveReport, solver: SolverKind, requested: usize) -> Self {
        let (degree, added) = rep.degree.unwrap_or((solver.label_degree(requested), 0));
        Self {
            label: DegreeLabel::new(degree, added),
            converged: rep.converged,
            cycles: rep.cycles,
            mvps: rep.counter.mvps,
            daxpys: rep.counter.daxpys,
            dots: rep.counter.dots,
            vops: rep.vops(),
            stch: rep.stch,
            final_relres: rep.final_relres,
            time_ms: rep.wall.as_secs_f64() * 1e3,
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.label.to_string(),
            self.label.added.to_string(),
            self.cycles.to_string(),
            self.mvps.to_string(),
            self.daxpys.to_string(),
            self.dots.to_string(),
            self.vops.to_string(),
            self.stch.map(|s| format!("{s:e}")).unwrap_or_default(),
            format!("{:e}", self.final_relres),
            format!("{:.3}", self.time_ms),
        ]
    }

    /// A row for a run that raised an error: the label and blanks.
    pub fn failed_record(requested: usize) -> Vec<String> {
        let mut r = vec![String::new(); CSV_HEADER.len()];
        r[0] = requested.to_string();
        r
    }
}
