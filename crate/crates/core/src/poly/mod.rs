//! The GMRES polynomial preconditioner.
//!
//! The residual polynomial of one GMRES(d) cycle is kept in factored form,
//! `pi(a) = prod_i (1 - a / theta_i)`, over its roots `theta_i` (the
//! harmonic Ritz values). The preconditioned operator is
//! `phi(A) = I - pi(A) = A p(A)`, and `p(A)` recovers the solution.
//! Conjugate pairs are applied together so all arithmetic stays real.

mod apply;
mod build;
mod double;
mod leja;
mod stability;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use apply::{PhiOperator, PolyInverse};
pub use build::{
    build_polynomial, build_polynomial_from, random_unit_vector, stability_check, BuiltPolynomial, PolyOptions,
};
pub use double::{compose_double, DoubleInverse, DoubleOperator, DoublePolynomial};
pub use leja::modified_leja_order;
pub use stability::{add_stability_roots, added_root_count, compute_pof, log10_pof, AddedRoot, StabilityReport};

/// Imaginary parts at or below this fraction of the modulus are dropped.
pub const REAL_SNAP_TOL: f64 = 1e-13;

pub(crate) fn snap_real(z: Complex64) -> Complex64 {
    if z.im.abs() <= REAL_SNAP_TOL * z.norm() {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// One step of the factored product: a real root or a conjugate pair
/// `a +- b i` with `modulus = a^2 + b^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Factor {
    Real(f64),
    Pair { a: f64, modulus: f64 },
}

/// Ordered root list defining `pi`, `phi` and `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPreconditioner {
    roots: Vec<Complex64>,
    added: Vec<bool>,
    factors: Vec<Factor>,
}

impl PolyPreconditioner {
    /// Wraps an ordered root list. Near-real roots are snapped to the real
    /// axis; every remaining non-real root must be directly followed by
    /// its conjugate, and no root may be zero.
    pub fn from_roots(roots: Vec<Complex64>) -> Result<Self> {
        let n = roots.len();
        Self::with_flags(roots, vec![false; n])
    }

    /// Like [`from_roots`](Self::from_roots), with a flag per root marking
    /// copies added for stability.
    pub fn with_flags(roots: Vec<Complex64>, added: Vec<bool>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidArgument("polynomial needs at least one root".into()));
        }
        if added.len() != roots.len() {
            return Err(Error::DimensionMismatch {
                expected: roots.len(),
                got: added.len(),
            });
        }
        let mut roots: Vec<Complex64> = roots.into_iter().map(snap_real).collect();
        let mut factors = Vec::with_capacity(roots.len());
        let mut i = 0;
        while i < roots.len() {
            let z = roots[i];
            if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvariantViolation(format!("root {i} is zero or not finite")));
            }
            if z.im == 0.0 {
                factors.push(Factor::Real(z.re));
                i += 1;
                continue;
            }
            let partner = roots.get(i + 1).copied();
            match partner {
                Some(w) if (w - z.conj()).norm() <= REAL_SNAP_TOL * 16.0 * z.norm() => {
                    roots[i + 1] = z.conj();
                    factors.push(Factor::Pair {
                        a: z.re,
                        modulus: z.norm_sqr(),
                    });
                    i += 2;
                }
                _ => {
                    return Err(Error::InvariantViolation(format!(
                        "non-real root {i} is not followed by its conjugate"
                    )))
                }
            }
        }
        Ok(Self { roots, added, factors })
    }

    /// Total degree `d` of `phi` and `pi`.
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn degree_added(&self) -> usize {
        self.added.iter().filter(|&&a| a).count()
    }

    pub fn degree_original(&self) -> usize {
        self.degree() - self.degree_added()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn is_added(&self, i: usize) -> bool {
        self.added[i]
    }

    /// Real and non-real root counts.
    pub fn real_complex_counts(&self) -> (usize, usize) {
        let c = self.roots.iter().filter(|z| z.im != 0.0).count();
        (self.roots.len() - c, c)
    }

    /// The same polynomial without the roots added for stability.
    pub fn without_added(&self) -> PolyPreconditioner {
        let roots: Vec<Complex64> = self
            .roots
            .iter()
            .zip(&self.added)
            .filter(|(_, &a)| !a)
            .map(|(z, _)| *z)
            .collect();
        PolyPreconditioner::from_roots(roots).expect("subset of a valid list stays valid")
    }

    pub(crate) fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `pi(alpha)` in real arithmetic, pairs combined.
    pub fn eval_pi(&self, alpha: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| match *f {
                Factor::Real(t) => 1.0 - alpha / t,
                Factor::Pair { a, modulus } => 1.0 + (alpha * alpha - 2.0 * a * alpha) / modulus,
            })
            .product()
    }

    /// `phi(alpha) = 1 - pi(alpha)`; exactly zero at the origin.
    pub fn eval_phi(&self, alpha: f64) -> f64 {
        1.0 - self.eval_pi(alpha)
    }

    pub fn eval_pi_complex(&self, z: Complex64) -> Complex64 {
        self.roots.iter().map(|t| 1.0 - z / t).product()
    }

    pub fn eval_phi_complex(&self, z: Complex64) -> Complex64 {
        1.0 - self.eval_pi_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validates_pairing() {
        assert!(PolyPreconditioner::from_roots(vec![c(1.0, 1.0), c(1.0, -1.0), c(2.0, 0.0)]).is_ok());
        assert!(matches!(
            PolyPreconditioner::from_roots(vec![c(1.0, 1.0), c(2.0, 0.0), c(1.0, -1.0)]),
            Err(Error::InvariantViolation(_))
        ));
        assert!(matches!(
            PolyPreconditioner::from_roots(vec![c(0.0, 0.0)]),
            Err(Error::InvariantViolation(_))
        ));
        assert!(PolyPreconditioner::from_roots(vec![]).is_err());
    }

    #[test]
    fn near_real_roots_snap() {
        let p = PolyPreconditioner::from_roots(vec![c(2.0, 1e-15)]).unwrap();
        assert_eq!(p.roots()[0], c(2.0, 0.0));
        assert_eq!(p.real_complex_counts(), (1, 0));
    }

    #[test]
    fn scalar_forms_agree() {
        let p = PolyPreconditioner::from_roots(vec![c(3.0, 0.0), c(1.0, 2.0), c(1.0, -2.0), c(0.5, 0.0)]).unwrap();
        for &x in &[0.0, 0.3, 1.0, 2.7, -1.0] {
            let z = p.eval_phi_complex(c(x, 0.0));
            assert!((z.re - p.eval_phi(x)).abs() < 1e-13);
            assert!(z.im.abs() < 1e-13);
        }
        assert_eq!(p.eval_phi(0.0), 0.0);
    }

    #[test]
    fn identity_root_phi_is_alpha() {
        let p = PolyPreconditioner::from_roots(vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(p.eval_phi(0.0), 0.0);
        assert_eq!(p.eval_phi(1.0), 1.0);
        assert_eq!(p.eval_phi(2.0), 2.0);
    }
}
