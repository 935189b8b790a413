use super::apply::PhiOperator;
use super::build::{build_polynomial_from, random_unit_vector_stream, BuiltPolynomial, PolyOptions};
use crate::counter::OpCounter;
use crate::error::Result;
use crate::operator::{LinearOperator, Preconditioner};

/// Two nested polynomials: `phi_1` over `A`, then `phi_2` over `phi_1(A)`.
#[derive(Debug, Clone)]
pub struct DoublePolynomial {
    pub inner: BuiltPolynomial,
    pub outer: BuiltPolynomial,
}

/// Builds `phi_1` of degree `d1` over `op` and `phi_2` of degree `d2` over
/// `phi_1(op)`, each from its own random start vector.
pub fn compose_double(
    op: &dyn LinearOperator,
    d1: usize,
    d2: usize,
    seed: u64,
    stability_control: bool,
    ctr: &mut OpCounter,
) -> Result<DoublePolynomial> {
    let n = op.dim();
    let inner = build_polynomial_from(
        op,
        &random_unit_vector_stream(n, seed, 0),
        &PolyOptions {
            degree: d1,
            stability_control,
        },
        ctr,
    )?;
    let phi1 = PhiOperator::new(op, &inner.poly);
    let outer = build_polynomial_from(
        &phi1,
        &random_unit_vector_stream(n, seed, 1),
        &PolyOptions {
            degree: d2,
            stability_control,
        },
        ctr,
    )?;
    Ok(DoublePolynomial { inner, outer })
}

impl DoublePolynomial {
    /// Degree of the composite polynomial in `A`.
    pub fn degree(&self) -> usize {
        self.inner.poly.degree() * self.outer.poly.degree()
    }

    /// `phi_2(phi_1(A)) v`.
    pub fn apply_phi(&self, op: &dyn LinearOperator, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let phi1 = PhiOperator::new(op, &self.inner.poly);
        self.outer.poly.apply_phi(&phi1, v, ctr)
    }

    /// `p_1(A) p_2(phi_1(A)) v`, so that `A` times it is `phi_2(phi_1(A)) v`.
    pub fn apply_p(&self, op: &dyn LinearOperator, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let phi1 = PhiOperator::new(op, &self.inner.poly);
        let w = self.outer.poly.apply_p(&phi1, v, ctr);
        self.inner.poly.apply_p(op, &w, ctr)
    }
}

/// The composite operator `phi_2(phi_1(B))`.
pub struct DoubleOperator<'p, B> {
    base: B,
    poly: &'p DoublePolynomial,
}

impl<'p, B: LinearOperator> DoubleOperator<'p, B> {
    pub fn new(base: B, poly: &'p DoublePolynomial) -> Self {
        Self { base, poly }
    }
}

impl<B: LinearOperator> LinearOperator for DoubleOperator<'_, B> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64], ctr: &mut OpCounter) {
        let r = self.poly.apply_phi(&self.base, x, ctr);
        y.copy_from_slice(&r);
    }
}

/// The composite solution map as a right preconditioner.
pub struct DoubleInverse<'p, B> {
    base: B,
    poly: &'p DoublePolynomial,
}

impl<'p, B: LinearOperator> DoubleInverse<'p, B> {
    pub fn new(base: B, poly: &'p DoublePolynomial) -> Self {
        Self { base, poly }
    }
}

impl<B: LinearOperator> Preconditioner for DoubleInverse<'_, B> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_inverse(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        self.poly.apply_p(&self.base, v, ctr)
    }
}
