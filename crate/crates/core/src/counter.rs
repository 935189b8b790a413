//! Operation tallies and the counted vector kernels.
//!
//! Every kernel that touches a length-n vector bumps exactly one tally:
//! inner products and norms count as dot products, scaled vector updates
//! (including plain scaling) count as daxpys. Small dense work on Hessenberg
//! matrices is not counted.

use std::ops::{Add, AddAssign, Sub};

/// Running counts of matrix-vector products, daxpys and dot products.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub mvps: u64,
    pub daxpys: u64,
    pub dots: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total vector operations, daxpys plus dot products.
    pub fn vops(&self) -> u64 {
        self.daxpys + self.dots
    }
}

impl Add for OpCounter {
    type Output = OpCounter;

    fn add(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            mvps: self.mvps + rhs.mvps,
            daxpys: self.daxpys + rhs.daxpys,
            dots: self.dots + rhs.dots,
        }
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        *self = *self + rhs;
    }
}

impl Sub for OpCounter {
    type Output = OpCounter;

    fn sub(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            mvps: self.mvps - rhs.mvps,
            daxpys: self.daxpys - rhs.daxpys,
            dots: self.dots - rhs.dots,
        }
    }
}

pub fn dot(x: &[f64], y: &[f64], ctr: &mut OpCounter) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    ctr.dots += 1;
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64], ctr: &mut OpCounter) -> f64 {
    dot(x, x, ctr).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
    debug_assert_eq!(x.len(), y.len());
    ctr.daxpys += 1;
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `x *= alpha`
pub fn scale(alpha: f64, x: &mut [f64], ctr: &mut OpCounter) {
    ctr.daxpys += 1;
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

/// `z = alpha * x + beta * y`, counted as one daxpy.
pub fn lincomb(alpha: f64, x: &[f64], beta: f64, y: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    ctr.daxpys += 1;
    x.iter().zip(y).map(|(a, b)| alpha * a + beta * b).collect()
}

/// Uncounted Euclidean norm, for reporting and tests.
pub fn norm2_uncounted(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
