use crate::counter::{axpy, dot, norm2, scale, OpCounter};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operator::LinearOperator;

/// Relative size of `h_{j+1,j}` below which a generating cycle is treated
/// as having found an invariant subspace.
pub const BREAKDOWN_TOL: f64 = 1e-14;

/// Output of one Arnoldi cycle: `A V_d = V_{d+1} H`.
#[derive(Debug, Clone)]
pub struct ArnoldiData {
    /// `d + 1` basis vectors. The last one is all zeros after an exact
    /// breakdown on the final step.
    pub basis: Vec<Vec<f64>>,
    /// `(d + 1) x d` upper Hessenberg matrix.
    pub h: DenseMatrix,
    /// Norm of the starting vector.
    pub beta: f64,
    /// Degree that was asked for; `degree()` may be smaller after breakdown.
    pub requested: usize,
}

impl ArnoldiData {
    /// Effective degree `d_eff`.
    pub fn degree(&self) -> usize {
        self.h.cols()
    }

    pub fn broke_down(&self) -> bool {
        self.degree() < self.requested
    }

    /// Leading square block `H_{d,d}`.
    pub fn h_square(&self) -> DenseMatrix {
        let d = self.degree();
        self.h.block(d, d)
    }

    /// `h_{d+1,d}`.
    pub fn h_last(&self) -> f64 {
        let d = self.degree();
        self.h[(d, d - 1)]
    }
}

/// Orthogonalizes `w` against `basis` with modified Gram-Schmidt.
///
/// Returns the projection coefficients followed by the norm of what is
/// left of `w`. Costs one dot and one daxpy per basis vector plus one dot
/// for the norm.
pub(crate) fn mgs_orthogonalize(w: &mut [f64], basis: &[Vec<f64>], ctr: &mut OpCounter) -> Vec<f64> {
    let mut col = Vec::with_capacity(basis.len() + 1);
    for v in basis {
        let h = dot(w, v, ctr);
        axpy(-h, v, w, ctr);
        col.push(h);
    }
    col.push(norm2(w, ctr));
    col
}

/// Runs one cycle of Arnoldi with modified Gram-Schmidt (no
/// reorthogonalization) for up to `d` steps starting from `b`.
///
/// If `h_{j+1,j} <= 1e-14 ||H||_F` at a step `j < d` the cycle stops with
/// effective degree `j`.
pub fn arnoldi_cycle(op: &dyn LinearOperator, b: &[f64], d: usize, ctr: &mut OpCounter) -> Result<ArnoldiData> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut v0 = b.to_vec();
    let beta = norm2(&v0, ctr);
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument("starting vector is zero".into()));
    }
    scale(1.0 / beta, &mut v0, ctr);

    let mut basis = vec![v0];
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut fro2 = 0.0;
    for j in 0..d {
        let mut w = op.apply(&basis[j], ctr);
        let col = mgs_orthogonalize(&mut w, &basis, ctr);
        let hnext = col[j + 1];
        fro2 += col.iter().map(|x| x * x).sum::<f64>();
        cols.push(col);
        if hnext > 0.0 {
            scale(1.0 / hnext, &mut w, ctr);
            basis.push(w);
        } else {
            basis.push(vec![0.0; n]);
        }
        if j + 1 < d && hnext <= BREAKDOWN_TOL * fro2.sqrt() {
            break;
        }
    }

    let k = cols.len();
    let mut h = DenseMatrix::zeros(k + 1, k);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            h[(i, j)] = v;
        }
    }
    Ok(ArnoldiData {
        basis,
        h,
        beta,
        requested: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Identity;
    use crate::sparse::{gen, CsrMatrix};

    fn relation_residual(a: &CsrMatrix, ad: &ArnoldiData) -> f64 {
        let d = ad.degree();
        let mut worst: f64 = 0.0;
        for j in 0..d {
            let av = a.matvec(&ad.basis[j], &mut OpCounter::new()).unwrap();
            for (r, avr) in av.iter().enumerate() {
                let vh: f64 = (0..=d).map(|i| ad.basis[i][r] * ad.h[(i, j)]).sum();
                worst = worst.max((avr - vh).abs());
            }
        }
        worst
    }

    #[test]
    fn identity_breaks_down_after_one_step() {
        let mut ctr = OpCounter::new();
        let ad = arnoldi_cycle(&Identity(4), &[1.0, 2.0, 3.0, 4.0], 5, &mut ctr).unwrap();
        assert_eq!(ad.degree(), 1);
        assert!(ad.broke_down());
        assert!((ad.h[(0, 0)] - 1.0).abs() < 1e-15);
        assert!(ad.h[(1, 0)].abs() < 1e-15);
        assert_eq!(ctr.mvps, 1);
    }

    #[test]
    fn small_diagonal_full_cycle() {
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let s = 1.0 / 3f64.sqrt();
        let ad = arnoldi_cycle(&a, &[s, s, s], 3, &mut OpCounter::new()).unwrap();
        assert_eq!(ad.degree(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let ip: f64 = ad.basis[i].iter().zip(&ad.basis[j]).map(|(x, y)| x * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-12);
            }
        }
        assert!(relation_residual(&a, &ad) <= 1e-12);
    }

    #[test]
    fn counts_match_modified_gram_schmidt() {
        let a = gen::diag_power(100, 2.0).unwrap();
        let b: Vec<f64> = (0..100).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let mut ctr = OpCounter::new();
        let ad = arnoldi_cycle(&a, &b, 10, &mut ctr).unwrap();
        assert_eq!(ad.degree(), 10);
        assert_eq!(ctr.mvps, 10);
        // start: 1 norm + 1 scale; step j (1-based): j projections, 1 norm, 1 scale
        let steps: u64 = (1..=10).sum();
        assert_eq!(ctr.dots, 1 + steps + 10);
        assert_eq!(ctr.daxpys, 1 + steps + 10);
    }

    #[test]
    fn zero_start_vector_is_rejected() {
        let a = CsrMatrix::identity(3);
        assert!(arnoldi_cycle(&a, &[0.0; 3], 2, &mut OpCounter::new()).is_err());
        assert!(arnoldi_cycle(&a, &[1.0; 3], 0, &mut OpCounter::new()).is_err());
        assert!(arnoldi_cycle(&a, &[1.0; 2], 1, &mut OpCounter::new()).is_err());
    }
}
