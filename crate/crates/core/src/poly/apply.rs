use super::{Factor, PolyPreconditioner};
use crate::counter::{axpy, OpCounter};
use crate::operator::{LinearOperator, Preconditioner};

impl PolyPreconditioner {
    /// `pi(A) v`, walking the factors in order.
    ///
    /// A real root costs one product and one daxpy; a conjugate pair costs
    /// two products and two daxpys.
    pub fn apply_pi(&self, op: &dyn LinearOperator, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let mut poly = v.to_vec();
        for f in self.factors() {
            match *f {
                Factor::Real(theta) => {
                    let product = op.apply(&poly, ctr);
                    axpy(-1.0 / theta, &product, &mut poly, ctr);
                }
                Factor::Pair { a, modulus } => {
                    let product = op.apply(&poly, ctr);
                    let mut temp = op.apply(&product, ctr);
                    axpy(-2.0 * a, &product, &mut temp, ctr);
                    axpy(1.0 / modulus, &temp, &mut poly, ctr);
                }
            }
        }
        poly
    }

    /// `phi(A) v = v - pi(A) v`.
    pub fn apply_phi(&self, op: &dyn LinearOperator, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let poly = self.apply_pi(op, v, ctr);
        ctr.daxpys += 1;
        v.iter().zip(&poly).map(|(x, p)| x - p).collect()
    }

    /// `p(A) v` from the telescoped sum `p = sum_k u_k`,
    /// `u_k = (1/theta_k) prod_{i<k} (1 - a/theta_i)`.
    ///
    /// Uses `d - 1` products and `2r + (3/2)c - 1` daxpys for `r` real and
    /// `c` non-real roots.
    pub fn apply_p(&self, op: &dyn LinearOperator, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let factors = self.factors();
        let last = factors.len() - 1;
        let mut product = v.to_vec();
        let mut poly = vec![0.0; v.len()];
        for (k, f) in factors.iter().enumerate() {
            match *f {
                Factor::Real(theta) => {
                    axpy(1.0 / theta, &product, &mut poly, ctr);
                    if k < last {
                        let ap = op.apply(&product, ctr);
                        axpy(-1.0 / theta, &ap, &mut product, ctr);
                    }
                }
                Factor::Pair { a, modulus } => {
                    let mut temp = op.apply(&product, ctr);
                    // temp = 2a * product - A * product
                    ctr.daxpys += 1;
                    for (t, p) in temp.iter_mut().zip(&product) {
                        *t = 2.0 * a * p - *t;
                    }
                    axpy(1.0 / modulus, &temp, &mut poly, ctr);
                    if k < last {
                        let at = op.apply(&temp, ctr);
                        axpy(-1.0 / modulus, &at, &mut product, ctr);
                    }
                }
            }
        }
        poly
    }
}

/// The preconditioned operator `phi(B)` over a base operator `B`.
pub struct PhiOperator<'p, B> {
    base: B,
    poly: &'p PolyPreconditioner,
}

impl<'p, B: LinearOperator> PhiOperator<'p, B> {
    pub fn new(base: B, poly: &'p PolyPreconditioner) -> Self {
        Self { base, poly }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn poly(&self) -> &PolyPreconditioner {
        self.poly
    }
}

impl<B: LinearOperator> LinearOperator for PhiOperator<'_, B> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        let r = self.poly.apply_phi(&self.base, x, ctr);
        y.copy_from_slice(&r);
    }
}

/// `p(B)` used as a right preconditioner, so `B p(B) = phi(B)`.
pub struct PolyInverse<'p, B> {
    base: B,
    poly: &'p PolyPreconditioner,
}

impl<'p, B: LinearOperator> PolyInverse<'p, B> {
    pub fn new(base: B, poly: &'p PolyPreconditioner) -> Self {
        Self { base, poly }
    }
}

impl<B: LinearOperator> Preconditioner for PolyInverse<'_, B> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_inverse(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        self.poly.apply_p(&self.base, v, ctr)
    }
}
