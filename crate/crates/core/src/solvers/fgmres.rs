use std::time::Instant;

use super::gmres::{finish_residual, gmres_core};
use super::{check_tol, GmresOptions, Restart, SolveReport};
use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::operator::{LinearOperator, Preconditioner};

/// One cycle of GMRES(d) on the bare operator from a zero guess, used as
/// a changing preconditioner.
struct InnerCycle<'a> {
    a: &'a dyn LinearOperator,
    d: usize,
}

impl Preconditioner for InnerCycle<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply_inverse(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let opts = GmresOptions {
            restart: Restart::Every(self.d),
            tol: 0.0,
            max_cycles: 1,
        };
        gmres_core(self.a, None, v, &opts, ctr)
            .expect("inner cycle dimensions match")
            .x
    }
}

/// Flexible GMRES whose preconditioner at every outer step is one
/// GMRES(`inner_d`) cycle. Each outer step costs `inner_d + 1` products.
pub fn fgmres(
    a: &dyn LinearOperator,
    b: &[f64],
    inner_d: usize,
    opts: &GmresOptions,
    ctr: &mut OpCounter,
) -> Result<(Vec<f64>, SolveReport)> {
    check_tol(opts.tol)?;
    if inner_d == 0 {
        return Err(Error::InvalidArgument("inner degree must be at least 1".into()));
    }
    let t0 = Instant::now();
    let before = *ctr;
    let inner = InnerCycle { a, d: inner_d };
    let run = gmres_core(a, Some(&inner), b, opts, ctr)?;
    let final_relres = finish_residual(a, b, &run, ctr);
    let report = SolveReport {
        converged: run.converged,
        cycles: run.cycles,
        iterations: run.iterations,
        counter: *ctr - before,
        final_relres,
        history: run.history,
        cycle_history: run.cycle_history,
        degree: Some((inner_d, 0)),
        wall: t0.elapsed(),
        ..Default::default()
    };
    Ok((run.x, report))
}
