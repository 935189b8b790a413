//! Krylov solvers: restarted GMRES, polynomial preconditioned GMRES and
//! its variants, flexible GMRES, BiCGStab, and the Chebyshev estimate.
//!
//! Every solver starts from `x_0 = 0`, tests `||r|| / ||b|| <= tol`, and
//! finishes by recomputing the true residual `b - A x` with one counted
//! product.

mod bicgstab;
mod changing;
mod cheby;
mod fgmres;
mod gmres;
mod pp;

use std::time::Duration;

use crate::counter::OpCounter;

pub use bicgstab::bicgstab;
pub use changing::pp_gmres_changing;
pub use cheby::{cheby_estimate, chebyshev_t_approx, ChebyEstimate};
pub use fgmres::fgmres;
pub use gmres::{gmres_restarted, gmres_right_preconditioned};
pub use pp::{pp_gmres, pp_gmres_double, pp_gmres_with, PpOptions};

/// When GMRES restarts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restart {
    /// GMRES(m).
    Every(usize),
    /// GMRES(inf): one cycle, failing once the basis reaches `max_basis`.
    Never { max_basis: usize },
}

impl Restart {
    pub(crate) fn cycle_length(&self) -> usize {
        match *self {
            Restart::Every(m) => m,
            Restart::Never { max_basis } => max_basis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub restart: Restart,
    pub tol: f64,
    /// Ignored for [`Restart::Never`].
    pub max_cycles: usize,
}

impl GmresOptions {
    pub fn new(m: usize, tol: f64) -> Self {
        Self {
            restart: Restart::Every(m),
            tol,
            max_cycles: 10_000,
        }
    }
}

/// Outcome and cost of one solve.
#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub converged: bool,
    pub cycles: usize,
    pub iterations: usize,
    /// All work, including polynomial construction and the final residual.
    pub counter: OpCounter,
    /// Part of `counter` spent building polynomials.
    pub construction: OpCounter,
    /// True relative residual `||b - A x|| / ||b||` at exit.
    pub final_relres: f64,
    /// Shortcut relative residual after every iteration.
    pub history: Vec<f64>,
    /// Relative residual at the end of every cycle.
    pub cycle_history: Vec<f64>,
    pub stch: Option<f64>,
    /// Work of the stability check; not part of `counter`.
    pub stch_cost: OpCounter,
    /// Original degree and added roots of the polynomial, when there is one.
    pub degree: Option<(usize, usize)>,
    pub max_log10_pof: Option<f64>,
    pub wall: Duration,
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn vops(&self) -> u64 {
        self.counter.vops()
    }
}

pub(crate) fn check_rhs(op_dim: usize, b: &[f64]) -> crate::error::Result<()> {
    if b.len() != op_dim {
        return Err(crate::error::Error::DimensionMismatch {
            expected: op_dim,
            got: b.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_tol(tol: f64) -> crate::error::Result<()> {
    if !(tol > 0.0) {
        return Err(crate::error::Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}
