use std::time::Instant;

use super::{check_rhs, check_tol, GmresOptions, Restart, SolveReport};
use crate::counter::{axpy, lincomb, norm2, scale, OpCounter};
use crate::error::{Error, Result};
use crate::krylov::{mgs_orthogonalize, GivensLstsq, BREAKDOWN_TOL};
use crate::operator::{LinearOperator, Preconditioner, RightPreconditioned};

pub(crate) struct CycleOutcome {
    pub iterations: usize,
    /// Shortcut residual norm at the end of the cycle.
    pub residual: f64,
    pub converged: bool,
}

/// One GMRES cycle of at most `m` steps from residual `r` (norm `rnorm`),
/// adding the correction to `x`.
///
/// With `precond`, the cycle is flexible: each basis vector is mapped by
/// the preconditioner, the images are kept, and the correction is built
/// from them.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gmres_cycle(
    op: &dyn LinearOperator,
    precond: Option<&dyn Preconditioner>,
    x: &mut [f64],
    r: &[f64],
    rnorm: f64,
    m: usize,
    target: f64,
    bnorm: f64,
    history: &mut Vec<f64>,
    ctr: &mut OpCounter,
) -> CycleOutcome {
    let mut v0 = r.to_vec();
    scale(1.0 / rnorm, &mut v0, ctr);
    let mut basis = vec![v0];
    let mut zs: Vec<Vec<f64>> = Vec::new();
    let mut ls = GivensLstsq::new(rnorm);
    let mut hnorm2 = 0.0;
    let mut residual = rnorm;
    let mut converged = false;

    for j in 0..m {
        let mut w = match precond {
            Some(p) => {
                let z = p.apply_inverse(&basis[j], ctr);
                let w = op.apply(&z, ctr);
                zs.push(z);
                w
            }
            None => op.apply(&basis[j], ctr),
        };
        let col = mgs_orthogonalize(&mut w, &basis, ctr);
        hnorm2 += col.iter().map(|h| h * h).sum::<f64>();
        let hn = col[j + 1];
        residual = ls.push_column(&col);
        history.push(residual / bnorm);
        if residual <= target {
            converged = true;
            break;
        }
        if hn <= BREAKDOWN_TOL * hnorm2.sqrt() || j + 1 == m {
            break;
        }
        scale(1.0 / hn, &mut w, ctr);
        basis.push(w);
    }

    let y = ls.solve();
    let dirs = if precond.is_some() { &zs } else { &basis };
    for (yi, d) in y.iter().zip(dirs) {
        axpy(*yi, d, x, ctr);
    }
    CycleOutcome {
        iterations: y.len(),
        residual,
        converged,
    }
}

pub(crate) struct CoreRun {
    pub x: Vec<f64>,
    pub cycles: usize,
    pub iterations: usize,
    pub history: Vec<f64>,
    pub cycle_history: Vec<f64>,
    pub converged: bool,
    /// `||b - Op x||` when the last thing computed was the true residual.
    pub true_rnorm: Option<f64>,
    pub bnorm: f64,
}

/// Restarted (optionally flexible) GMRES without the closing residual.
pub(crate) fn gmres_core(
    op: &dyn LinearOperator,
    precond: Option<&dyn Preconditioner>,
    b: &[f64],
    opts: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<CoreRun> {
    check_rhs(op.dim(), b)?;
    let n = b.len();
    let m = opts.restart.cycle_length();
    if m == 0 {
        return Err(Error::InvalidArgument("restart length must be at least 1".into()));
    }
    let max_cycles = match opts.restart {
        Restart::Every(_) => opts.max_cycles.max(1),
        Restart::Never { .. } => 1,
    };
    let bnorm = norm2(b, ctr);
    let mut run = CoreRun {
        x: vec![0.0; n],
        cycles: 0,
        iterations: 0,
        history: Vec::new(),
        cycle_history: Vec::new(),
        converged: bnorm == 0.0,
        true_rnorm: Some(bnorm),
        bnorm,
    };
    if bnorm == 0.0 {
        return Ok(run);
    }
    let target = opts.tol * bnorm;
    let mut r = b.to_vec();
    let mut rnorm = bnorm;

    loop {
        let out = gmres_cycle(
            op,
            precond,
            &mut run.x,
            &r,
            rnorm,
            m,
            target,
            bnorm,
            &mut run.history,
            ctr,
        );
        run.cycles += 1;
        run.iterations += out.iterations;
        run.cycle_history.push(out.residual / bnorm);
        run.true_rnorm = None;
        if out.converged {
            run.converged = true;
            break;
        }
        if let Restart::Never { max_basis } = opts.restart {
            return Err(Error::BasisCapExceeded { cap: max_basis });
        }
        if run.cycles >= max_cycles {
            break;
        }
        let ax = op.apply(&run.x, ctr);
        r = lincomb(1.0, b, -1.0, &ax, ctr);
        rnorm = norm2(&r, ctr);
        run.true_rnorm = Some(rnorm);
        if rnorm <= target {
            run.converged = true;
            break;
        }
    }
    Ok(run)
}

/// GMRES(m), or GMRES(inf) with a basis cap, for `Op y = b` from `y_0 = 0`.
pub fn gmres_restarted(
    op: &dyn LinearOperator,
    b: &[f64],
    opts: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.tol)?;
    let t0 = Instant::now();
    let before = *ctr;
    let run = gmres_core(op, None, b, opts, ctr)?;
    let final_relres = finish_residual(op, b, &run, ctr);
    let report = SolveReport {
        converged: run.converged,
        cycles: run.cycles,
        iterations: run.iterations,
        counter: *ctr - before,
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        wall: t0.elapsed(),
        ..Default::default()
    };
    Ok((run.x, report))
}

/// GMRES(m) on `A M^{-1} y = b` with `x = M^{-1} y`. The closing residual
/// is `b - A x`.
pub fn gmres_right_preconditioned(
    a: &dyn LinearOperator,
    b: &[f64],
    m: &dyn Preconditioner,
    opts: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.tol)?;
    check_rhs(m.dim(), b)?;
    let t0 = Instant::now();
    let before = *ctr;
    let op = RightPreconditioned::new(a, m);
    let run = gmres_core(&op, None, b, opts, ctr)?;
    let x = m.apply_inverse(&run.x, ctr);
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
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        wall: t0.elapsed(),
        ..Default::default()
    };
    Ok((x, report))
}

/// True relative residual at exit, reusing the last restart residual when
/// nothing changed since.
pub(crate) fn finish_residual(op: &dyn LinearOperator, b: &[f64], run: &CoreRun, ctr: &mut OpCounter) -> f64 {
    if run.bnorm == 0.0 {
        return 0.0;
    }
    match run.true_rnorm {
        Some(r) => r / run.bnorm,
        None => true_residual(op, b, &run.x, ctr) / run.bnorm,
    }
}

/// `||b - Op x||`, one product, one daxpy and one dot.
pub(crate) fn true_residual(op: &dyn LinearOperator, b: &[f64], x: &[f64], ctr: &mut OpCounter) -> f64 {
    let ax = op.apply(x, ctr);
    let r = lincomb(1.0, b, -1.0, &ax, ctr);
    norm2(&r, ctr)
}
