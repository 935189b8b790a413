use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::stability::{add_stability_roots, added_root_count, log10_pof, StabilityReport};
use super::{modified_leja_order, PolyPreconditioner};
use crate::counter::{axpy, norm2, OpCounter};
use crate::error::{Error, Result};
use crate::krylov::{arnoldi_cycle, harmonic_ritz_values};
use crate::operator::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyOptions {
    /// Degree `d` of the generating GMRES cycle.
    pub degree: usize,
    /// Add extra copies of steep roots.
    pub stability_control: bool,
}

impl PolyOptions {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            stability_control: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuiltPolynomial {
    pub poly: PolyPreconditioner,
    pub report: StabilityReport,
    /// Unit starting vector of the generating cycle.
    pub start: Vec<f64>,
    /// Work spent in the generating cycle.
    pub construction: OpCounter,
    /// Harmonic Ritz values in the order the eigensolver returned them.
    pub harmonic_ritz: Vec<Complex64>,
}

/// Seeded standard normal vector scaled to unit length.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    random_unit_vector_stream(n, seed, 0)
}

pub(crate) fn random_unit_vector_stream(n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= nrm;
    }
    v
}

/// Builds the polynomial from one GMRES(d) cycle on a seeded random vector.
pub fn build_polynomial(
    op: &dyn LinearOperator,
    opts: &PolyOptions,
    seed: u64,
    ctr: &mut OpCounter,
) -> Result<BuiltPolynomial> {
    let start = random_unit_vector(op.dim(), seed);
    build_polynomial_from(op, &start, opts, ctr)
}

/// Builds the polynomial from one GMRES(d) cycle on `start`.
pub fn build_polynomial_from(
    op: &dyn LinearOperator,
    start: &[f64],
    opts: &PolyOptions,
    ctr: &mut OpCounter,
) -> Result<BuiltPolynomial> {
    if opts.degree == 0 {
        return Err(Error::InvalidArgument("polynomial degree must be at least 1".into()));
    }
    if start.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: start.len(),
        });
    }
    let mut construction = OpCounter::new();
    let ad = arnoldi_cycle(op, start, opts.degree, &mut construction)?;
    *ctr += construction;
    let harmonic_ritz = harmonic_ritz_values(&ad)?;
    let ordered = modified_leja_order(&harmonic_ritz);

    let (poly, report) = if opts.stability_control {
        let (roots, flags, report) = add_stability_roots(&ordered)?;
        (PolyPreconditioner::with_flags(roots, flags)?, report)
    } else {
        let log10 = (0..ordered.len())
            .map(|k| log10_pof(&ordered, k))
            .collect::<Result<Vec<_>>>()?;
        let report = StabilityReport {
            added_per_root: log10.iter().map(|&p| added_root_count(p)).collect(),
            log10_pof: log10,
            placements: Vec::new(),
            stch: None,
        };
        (PolyPreconditioner::from_roots(ordered)?, report)
    };

    Ok(BuiltPolynomial {
        poly,
        report,
        start: start.to_vec(),
        construction,
        harmonic_ritz,
    })
}

/// `||r1 - r2||` with `r1 = b - A p(A) b` and `r2 = pi(A) b`.
///
/// The two residuals agree in exact arithmetic; their gap estimates the
/// floor the preconditioned solve can reach.
pub fn stability_check(poly: &PolyPreconditioner, op: &dyn LinearOperator, b: &[f64], ctr: &mut OpCounter) -> f64 {
    let pb = poly.apply_p(op, b, ctr);
    let apb = op.apply(&pb, ctr);
    let mut r1 = b.to_vec();
    axpy(-1.0, &apb, &mut r1, ctr);
    let r2 = poly.apply_pi(op, b, ctr);
    axpy(-1.0, &r2, &mut r1, ctr);
    norm2(&r1, ctr)
}
