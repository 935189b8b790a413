//! Command-line harness for polynomial preconditioned GMRES: single
//! solves, degree sweeps, stability scans, polynomial graphs and spectra,
//! all written as CSV.

pub mod cli;
pub mod commands;
pub mod error;
pub mod label;
pub mod run;
pub mod source;

pub use error::{BenchError, Result};
pub use label::DegreeLabel;
