//! Linear operators and right preconditioners.

use crate::counter::OpCounter;

/// A square linear map `v -> Op v` of fixed dimension.
///
/// Implementations charge their own work to `ctr`; only applications of a
/// stored matrix count as matrix-vector products.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Writes `Op x` into `y`. Panics if either slice has the wrong length.
    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter);

    fn apply(&self, x: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y, ctr);
        y
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        (**self).apply_into(x, y, ctr)
    }
}

/// An approximate inverse `M^{-1}` applied on the right.
pub trait Preconditioner {
    fn dim(&self) -> usize;

    fn apply_inverse(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64>;
}

/// The identity map. Applications count as matrix-vector products.
#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        assert_eq!(x.len(), self.0);
        ctr.mvps += 1;
        y.copy_from_slice(x);
    }
}

/// `A M^{-1}` for a right preconditioner `M^{-1}`.
pub struct RightPreconditioned<'a> {
    pub a: &'a dyn LinearOperator,
    pub m: &'a dyn Preconditioner,
}

impl<'a> RightPreconditioned<'a> {
    pub fn new(a: &'a dyn LinearOperator, m: &'a dyn Preconditioner) -> Self {
        assert_eq!(a.dim(), m.dim(), "operator and preconditioner dimensions differ");
        Self { a, m }
    }
}

impl LinearOperator for RightPreconditioned<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        let z = self.m.apply_inverse(x, ctr);
        self.a.apply_into(&z, y, ctr);
    }
}
