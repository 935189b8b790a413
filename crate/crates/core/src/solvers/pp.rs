use std::time::Instant;

use super::gmres::{gmres_core, true_residual, CoreRun};
use super::{check_rhs, check_tol, GmresOptions, SolveReport};
use crate::counter::{lincomb, norm2, OpCounter};
use crate::error::Result;
use crate::operator::{LinearOperator, Preconditioner, RightPreconditioned};
use crate::poly::{
    build_polynomial, compose_double, stability_check, BuiltPolynomial, DoubleOperator, PhiOperator, PolyOptions,
    PolyPreconditioner,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpOptions {
    pub degree: usize,
    pub gmres: GmresOptions,
    pub seed: u64,
    pub stability_control: bool,
    /// Warn when the stability check exceeds this.
    pub stch_threshold: Option<f64>,
    /// Above the threshold, rebuild with `floor(0.8 d)` until it passes.
    pub reduce_degree: bool,
}

impl PpOptions {
    pub fn new(degree: usize, m: usize, tol: f64) -> Self {
        Self {
            degree,
            gmres: GmresOptions::new(m, tol),
            seed: 1,
            stability_control: true,
            stch_threshold: None,
            reduce_degree: false,
        }
    }
}

/// Polynomial preconditioned GMRES.
///
/// Builds `phi` over `A` (or `A M^{-1}` when `precond` is given), checks
/// its stability, solves `phi y = b` with restarted GMRES and returns
/// `x = p y` (or `M^{-1} p y`).
pub fn pp_gmres(
    a: &dyn LinearOperator,
    b: &[f64],
    precond: Option<&dyn Preconditioner>,
    opts: &PpOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.gmres.tol)?;
    check_rhs(a.dim(), b)?;
    let t0 = Instant::now();
    let before = *ctr;
    let rp;
    let base: &dyn LinearOperator = match precond {
        Some(m) => {
            rp = RightPreconditioned::new(a, m);
            &rp
        }
        None => a,
    };

    let mut notes = Vec::new();
    let mut construction = OpCounter::new();
    let mut stch_cost = OpCounter::new();
    let mut degree = opts.degree;
    let (built, stch) = loop {
        let poly_opts = PolyOptions {
            degree,
            stability_control: opts.stability_control,
        };
        let built = build_polynomial(base, &poly_opts, opts.seed, &mut construction)?;
        let stch = stability_check(&built.poly, base, &built.start, &mut stch_cost);
        match opts.stch_threshold {
            Some(limit) if stch > limit => {
                notes.push(format!(
                    "stability check {stch:.3e} above {limit:.3e} at degree {degree}"
                ));
                if opts.reduce_degree && degree > 1 {
                    degree = (degree * 4 / 5).max(1);
                    continue;
                }
            }
            _ => {}
        }
        break (built, stch);
    };
    *ctr += construction;

    let BuiltPolynomial { poly, report: sr, .. } = &built;
    let (x, run, final_relres) = solve_phi(a, base, precond, b, poly, &opts.gmres, ctr)?;

    let report = SolveReport {
        converged: run.converged,
        cycles: run.cycles,
        iterations: run.iterations,
        counter: *ctr - before,
        construction,
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        stch: Some(stch),
        stch_cost,
        degree: Some((poly.degree_original(), poly.degree_added())),
        max_log10_pof: Some(sr.max_log10_pof()),
        wall: t0.elapsed(),
        notes,
    };
    Ok((x, report))
}

/// Solves `phi(B) y = b` for `B = A` or `A M^{-1}` and maps back to `x`.
fn solve_phi(
    a: &dyn LinearOperator,
    base: &dyn LinearOperator,
    precond: Option<&dyn Preconditioner>,
    b: &[f64],
    poly: &PolyPreconditioner,
    gmres: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, CoreRun, f64)> {
    let phi = PhiOperator::new(base, poly);
    let run = gmres_core(&phi, None, b, gmres, ctr)?;
    let mut x = poly.apply_p(base, &run.x, ctr);
    if let Some(m) = precond {
        x = m.apply_inverse(&x, ctr);
    }
    let final_relres = if run.bnorm == 0.0 {
        0.0
    } else {
        true_residual(a, b, &x, ctr) / run.bnorm
    };
    Ok((x, run, final_relres))
}

/// PP-GMRES with a polynomial built elsewhere, for instance from a chosen
/// start vector. Construction cost is not included and no stability check
/// is run.
pub fn pp_gmres_with(
    a: &dyn LinearOperator,
    b: &[f64],
    precond: Option<&dyn Preconditioner>,
    poly: &PolyPreconditioner,
    gmres: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(gmres.tol)?;
    check_rhs(a.dim(), b)?;
    let t0 = Instant::now();
    let before = *ctr;
    let rp;
    let base: &dyn LinearOperator = match precond {
        Some(m) => {
            rp = RightPreconditioned::new(a, m);
            &rp
        }
        None => a,
    };
    let (x, run, final_relres) = solve_phi(a, base, precond, b, poly, gmres, ctr)?;
    let report = SolveReport {
        converged: run.converged,
        cycles: run.cycles,
        iterations: run.iterations,
        counter: *ctr - before,
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        degree: Some((poly.degree_original(), poly.degree_added())),
        wall: t0.elapsed(),
        ..Default::default()
    };
    Ok((x, report))
}

/// GMRES preconditioned by the composite `phi_2(phi_1(A))`, with `phi_1` of
/// degree `d1` over `A` and `phi_2` of degree `d2` over `phi_1(A)`.
/// `opts.degree` and the degree reduction flag are not used.
pub fn pp_gmres_double(
    a: &dyn LinearOperator,
    b: &[f64],
    d1: usize,
    d2: usize,
    opts: &PpOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.gmres.tol)?;
    check_rhs(a.dim(), b)?;
    let t0 = Instant::now();
    let before = *ctr;
    let mut construction = OpCounter::new();
    let dp = compose_double(a, d1, d2, opts.seed, opts.stability_control, &mut construction)?;
    *ctr += construction;

    let mut stch_cost = OpCounter::new();
    let start = &dp.inner.start;
    let phib = dp.apply_phi(a, start, &mut stch_cost);
    let pb = dp.apply_p(a, start, &mut stch_cost);
    let apb = a.apply(&pb, &mut stch_cost);
    let gap = lincomb(1.0, &phib, -1.0, &apb, &mut stch_cost);
    let stch = norm2(&gap, &mut stch_cost);

    let op = DoubleOperator::new(a, &dp);
    let run = gmres_core(&op, None, b, &opts.gmres, ctr)?;
    let x = dp.apply_p(a, &run.x, ctr);
    let final_relres = if run.bnorm == 0.0 {
        0.0
    } else {
        true_residual(a, b, &x, ctr) / run.bnorm
    };

    let report = SolveReport {
        converged: run.converged,
        cycles: run.cycles,
        iterations: run.iterations,
        counter: *ctr - before,
        construction,
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        stch: Some(stch),
        stch_cost,
        degree: Some((dp.degree(), dp.inner.poly.degree_added() + dp.outer.poly.degree_added())),
        max_log10_pof: Some(dp.inner.report.max_log10_pof().max(dp.outer.report.max_log10_pof())),
        wall: t0.elapsed(),
        notes: Vec::new(),
    };
    Ok((x, report))
}
