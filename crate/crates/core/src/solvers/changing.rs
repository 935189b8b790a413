use std::time::Instant;

use super::gmres::gmres_core;
use super::pp::PpOptions;
use super::{check_rhs, check_tol, GmresOptions, Restart, SolveReport};
use crate::counter::{axpy, lincomb, norm2, OpCounter};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::poly::{build_polynomial, build_polynomial_from, PhiOperator, PolyOptions, PolyPreconditioner};

/// PP-GMRES that rebuilds the polynomial at every restart from the current
/// residual. Construction is charged every cycle.
///
/// When a rebuild fails the previous polynomial is reused; if the very
/// first build fails, a seeded random start vector is tried instead.
pub fn pp_gmres_changing(
    a: &dyn LinearOperator,
    b: &[f64],
    opts: &PpOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.gmres.tol)?;
    check_rhs(a.dim(), b)?;
    let Restart::Every(m) = opts.gmres.restart else {
        return Err(Error::InvalidArgument(
            "changing polynomial needs a finite restart length".into(),
        ));
    };
    let t0 = Instant::now();
    let before = *ctr;
    let poly_opts = PolyOptions {
        degree: opts.degree,
        stability_control: opts.stability_control,
    };
    let mut report = SolveReport::default();
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b, ctr);
    if bnorm == 0.0 {
        report.converged = true;
        report.counter = *ctr - before;
        return Ok((x, report));
    }
    let target = opts.gmres.tol * bnorm;
    let mut r = b.to_vec();
    let mut rnorm = bnorm;
    let mut poly: Option<PolyPreconditioner> = None;

    while report.cycles < opts.gmres.max_cycles.max(1) {
        let mut cons = OpCounter::new();
        match build_polynomial_from(a, &r, &poly_opts, &mut cons) {
            Ok(built) => poly = Some(built.poly),
            Err(e) => {
                report
                    .notes
                    .push(format!("cycle {}: rebuild failed ({e})", report.cycles + 1));
                if poly.is_none() {
                    poly = Some(build_polynomial(a, &poly_opts, opts.seed, &mut cons)?.poly);
                }
            }
        }
        report.construction += cons;
        *ctr += cons;
        let p = poly.as_ref().expect("set above");

        let phi = PhiOperator::new(a, p);
        let cycle_opts = GmresOptions {
            restart: Restart::Every(m),
            tol: target / rnorm,
            max_cycles: 1,
        };
        let run = gmres_core(&phi, None, &r, &cycle_opts, ctr)?;
        report.history.extend(run.history.iter().map(|h| h * rnorm / bnorm));
        report.iterations += run.iterations;
        report.cycles += 1;

        let dx = p.apply_p(a, &run.x, ctr);
        axpy(1.0, &dx, &mut x, ctr);
        let ax = a.apply(&x, ctr);
        r = lincomb(1.0, b, -1.0, &ax, ctr);
        rnorm = norm2(&r, ctr);
        report.cycle_history.push(rnorm / bnorm);
        report.degree = Some((p.degree_original(), p.degree_added()));
        if rnorm <= target {
            report.converged = true;
            break;
        }
    }

    report.final_relres = rnorm / bnorm;
    report.counter = *ctr - before;
    report.wall = t0.elapsed();
    Ok((x, report))
}
