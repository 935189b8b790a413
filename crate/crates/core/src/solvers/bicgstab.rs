use std::time::Instant;

use super::gmres::true_residual;
use super::{check_rhs, check_tol, SolveReport};
use crate::counter::{axpy, dot, lincomb, norm2, OpCounter};
use crate::error::Result;
use crate::operator::{LinearOperator, Preconditioner};

/// `|rho|` or `|omega|` below this ends the iteration as a breakdown.
pub const BREAKDOWN: f64 = 1e-30;

/// BiCGStab from `x_0 = 0`, optionally right preconditioned.
///
/// Each full iteration costs two products, six dots and six daxpys.
pub fn bicgstab(
    a: &dyn LinearOperator,
    b: &[f64],
    precond: Option<&dyn Preconditioner>,
    tol: f64,
    max_iter: usize,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(tol)?;
    check_rhs(a.dim(), b)?;
    let t0 = Instant::now();
    let before = *ctr;
    let n = b.len();
    let mut report = SolveReport::default();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b, ctr);
    if bnorm == 0.0 {
        report.converged = true;
        report.counter = *ctr - before;
        return Ok((x, report));
    }
    let target = tol * bnorm;
    let minv = |v: &[f64], ctr: &mut OpCounter| match precond {
        Some(m) => m.apply_inverse(v, ctr),
        None => v.to_vec(),
    };

    let r_hat = b.to_vec();
    let mut r = b.to_vec();
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let (mut rho_prev, mut alpha, mut omega) = (1.0, 1.0, 1.0);

    for it in 0..max_iter {
        let rho = dot(&r_hat, &r, ctr);
        if rho.abs() < BREAKDOWN {
            report
                .notes
                .push(format!("breakdown: |rho| = {:.1e} at iteration {}", rho.abs(), it + 1));
            break;
        }
        let beta = (rho / rho_prev) * (alpha / omega);
        axpy(-omega, &v, &mut p, ctr);
        p = lincomb(1.0, &r, beta, &p, ctr);
        let p_hat = minv(&p, ctr);
        v = a.apply(&p_hat, ctr);
        alpha = rho / dot(&r_hat, &v, ctr);
        let s = lincomb(1.0, &r, -alpha, &v, ctr);
        let snorm = norm2(&s, ctr);
        report.iterations += 1;
        if snorm <= target {
            axpy(alpha, &p_hat, &mut x, ctr);
            report.history.push(snorm / bnorm);
            report.converged = true;
            break;
        }
        let s_hat = minv(&s, ctr);
        let t = a.apply(&s_hat, ctr);
        let tt = dot(&t, &t, ctr);
        omega = if tt == 0.0 { 0.0 } else { dot(&t, &s, ctr) / tt };
        axpy(alpha, &p_hat, &mut x, ctr);
        axpy(omega, &s_hat, &mut x, ctr);
        r = lincomb(1.0, &s, -omega, &t, ctr);
        let rnorm = norm2(&r, ctr);
        report.history.push(rnorm / bnorm);
        if rnorm <= target {
            report.converged = true;
            break;
        }
        if omega.abs() < BREAKDOWN {
            report.notes.push(format!(
                "breakdown: |omega| = {:.1e} at iteration {}",
                omega.abs(),
                it + 1
            ));
            break;
        }
        rho_prev = rho;
    }

    report.cycles = report.iterations;
    report.final_relres = true_residual(a, b, &x, ctr) / bnorm;
    report.counter = *ctr - before;
    report.wall = t0.elapsed();
    Ok((x, report))
}
