//! Restarted GMRES with a polynomial preconditioner built from the
//! harmonic Ritz values of one short GMRES cycle.
//!
//! The crate covers sparse storage and test matrices, the Krylov kernels
//! behind the polynomial, the polynomial itself (construction, ordering,
//! stabilization and application), ILU(0), and a set of solvers that
//! count every matrix-vector product, daxpy and dot product.

pub mod counter;
pub mod dense;
pub mod error;
pub mod ilu;
pub mod krylov;
pub mod operator;
pub mod poly;
pub mod solvers;
pub mod sparse;

pub use counter::OpCounter;
pub use error::{Error, Result};
pub use ilu::{ilu0_factor, Ilu0Factors};
pub use operator::{Identity, LinearOperator, Preconditioner, RightPreconditioned};
pub use poly::{BuiltPolynomial, PolyOptions, PolyPreconditioner};
pub use solvers::{GmresOptions, Restart, SolveReport};
pub use sparse::{CsrMatrix, TestMatrix};
