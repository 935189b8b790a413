//! Arnoldi cycles, Hessenberg least squares, Hessenberg eigenvalues and
//! harmonic Ritz values.

mod arnoldi;
mod eigen;
mod harmonic;
mod lstsq;

pub(crate) use arnoldi::mgs_orthogonalize;
pub use arnoldi::{arnoldi_cycle, ArnoldiData, BREAKDOWN_TOL};
pub use eigen::{dense_eigenvalues, hessenberg_eigenvalues};
pub use harmonic::harmonic_ritz_values;
pub use lstsq::{hessenberg_lstsq, GivensLstsq};
