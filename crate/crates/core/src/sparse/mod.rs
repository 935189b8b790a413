//! Sparse matrix storage, generators and Matrix Market I/O.

mod csr;
pub mod gen;
pub mod mm;

pub use csr::CsrMatrix;
pub use gen::TestMatrix;
pub use mm::{read_matrix_market, read_matrix_market_vector, write_matrix_market};
