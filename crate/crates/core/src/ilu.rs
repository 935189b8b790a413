//! ILU(0): incomplete LU on the sparsity pattern of `A + shift I`.

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::operator::Preconditioner;
use crate::sparse::CsrMatrix;

/// Pivots at or below this fraction of `||A||_inf` abort the factorization.
pub const PIVOT_TOL: f64 = 1e-14;

/// `L` (unit lower, implicit diagonal) and `U` stored together on the
/// pattern of the shifted matrix.
#[derive(Debug, Clone)]
pub struct Ilu0Factors {
    lu: CsrMatrix,
    diag_pos: Vec<usize>,
    shift: f64,
}

/// Factors `A + shift I` with no fill-in.
pub fn ilu0_factor(a: &CsrMatrix, shift: f64) -> Result<Ilu0Factors> {
    if !(shift >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ILU shift must be nonnegative, got {shift}"
        )));
    }
    let n = a.n();
    let tol = PIVOT_TOL * a.norm_inf();
    let shifted = a.shifted(shift);
    let row_ptr = shifted.row_ptr().to_vec();
    let col_idx = shifted.col_idx().to_vec();
    let mut vals = shifted.values().to_vec();

    let diag_pos: Vec<usize> = (0..n)
        .map(|i| {
            let s = row_ptr[i];
            s + col_idx[s..row_ptr[i + 1]]
                .binary_search(&i)
                .expect("shifted pattern has a diagonal")
        })
        .collect();

    // marker[j] = slot of column j in the current row
    let mut marker = vec![usize::MAX; n];
    for i in 0..n {
        let (start, end) = (row_ptr[i], row_ptr[i + 1]);
        for p in start..end {
            marker[col_idx[p]] = p;
        }
        for p in start..diag_pos[i] {
            let k = col_idx[p];
            let lik = vals[p] / vals[diag_pos[k]];
            vals[p] = lik;
            for q in diag_pos[k] + 1..row_ptr[k + 1] {
                let slot = marker[col_idx[q]];
                if slot != usize::MAX {
                    vals[slot] -= lik * vals[q];
                }
            }
        }
        for p in start..end {
            marker[col_idx[p]] = usize::MAX;
        }
        let piv = vals[diag_pos[i]];
        if !(piv.abs() > tol) {
            return Err(Error::ZeroPivot {
                row: i,
                value: piv.abs(),
            });
        }
    }

    Ok(Ilu0Factors {
        lu: CsrMatrix::from_raw(n, row_ptr, col_idx, vals)?,
        diag_pos,
        shift,
    })
}

impl Ilu0Factors {
    pub fn n(&self) -> usize {
        self.lu.n()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Unit lower triangular factor with its diagonal stored explicitly.
    pub fn l(&self) -> CsrMatrix {
        let mut trip: Vec<_> = self.lu.triplets().filter(|&(i, j, _)| j < i).collect();
        trip.extend((0..self.n()).map(|i| (i, i, 1.0)));
        CsrMatrix::from_triplets(self.n(), &trip).expect("valid pattern")
    }

    pub fn u(&self) -> CsrMatrix {
        let trip: Vec<_> = self.lu.triplets().filter(|&(i, j, _)| j >= i).collect();
        CsrMatrix::from_triplets(self.n(), &trip).expect("valid pattern")
    }

    /// `U^{-1} L^{-1} v`. Each triangular solve counts as one daxpy.
    pub fn apply(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        let n = self.n();
        assert_eq!(v.len(), n, "ILU apply dimension mismatch");
        let rp = self.lu.row_ptr();
        let ci = self.lu.col_idx();
        let va = self.lu.values();
        let mut x = v.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for p in rp[i]..self.diag_pos[i] {
                s -= va[p] * x[ci[p]];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for p in self.diag_pos[i] + 1..rp[i + 1] {
                s -= va[p] * x[ci[p]];
            }
            x[i] = s / va[self.diag_pos[i]];
        }
        ctr.daxpys += 2;
        x
    }
}

impl Preconditioner for Ilu0Factors {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply_inverse(&self, v: &[f64], ctr: &mut OpCounter) -> Vec<f64> {
        self.apply(v, ctr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_product(l: &CsrMatrix, u: &CsrMatrix) -> Vec<f64> {
        let n = l.n();
        let (ld, ud) = (l.to_dense(), u.to_dense());
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let lik = ld[i * n + k];
                if lik != 0.0 {
                    for j in 0..n {
                        out[i * n + j] += lik * ud[k * n + j];
                    }
                }
            }
        }
        out
    }

    fn tridiag(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0 + i as f64 * 0.1));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.5));
            }
        }
        CsrMatrix::from_triplets(n, &t).unwrap()
    }

    fn random_dominant(n: usize, seed: u64) -> CsrMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..n {
            let mut sum = 0.0;
            for _ in 0..4 {
                let j = rng.random_range(0..n);
                if j != i {
                    let v: f64 = rng.random_range(-1.0..1.0);
                    sum += v.abs();
                    t.push((i, j, v));
                }
            }
            t.push((i, i, sum + 1.0));
        }
        CsrMatrix::from_triplets(n, &t).unwrap()
    }

    #[test]
    fn tridiagonal_is_exact() {
        let a = tridiag(30);
        let f = ilu0_factor(&a, 0.25).unwrap();
        let lu = dense_product(&f.l(), &f.u());
        let target = a.shifted(0.25).to_dense();
        let err = lu.iter().zip(&target).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * a.norm_inf());

        let v: Vec<f64> = (0..30).map(|i| (i as f64).cos()).collect();
        let av = a.shifted(0.25).matvec(&v, &mut OpCounter::new()).unwrap();
        let back = f.apply(&av, &mut OpCounter::new());
        for (x, y) in back.iter().zip(&v) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn diagonal_gives_identity_l() {
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let f = ilu0_factor(&a, 0.5).unwrap();
        assert_eq!(f.l().to_dense(), CsrMatrix::identity(3).to_dense());
        assert_eq!(f.u().to_dense(), a.shifted(0.5).to_dense());
        let id = ilu0_factor(&CsrMatrix::identity(4), 0.0).unwrap();
        let v = [1.0, -2.0, 3.0, 0.5];
        assert_eq!(id.apply(&v, &mut OpCounter::new()), v.to_vec());
    }

    #[test]
    fn product_matches_on_pattern() {
        let a = random_dominant(50, 3);
        let f = ilu0_factor(&a, 0.0).unwrap();
        let lu = dense_product(&f.l(), &f.u());
        let s = a.shifted(0.0);
        for (i, j, v) in s.triplets() {
            assert!((lu[i * 50 + j] - v).abs() <= 1e-13 * (1.0 + v.abs()), "({i},{j})");
        }
    }

    #[test]
    fn apply_matches_dense_triangular_solves() {
        let a = random_dominant(40, 8);
        let f = ilu0_factor(&a, 0.0).unwrap();
        let (l, u) = (f.l().to_dense(), f.u().to_dense());
        let n = 40;
        let v: Vec<f64> = (0..n).map(|i| 1.0 / (i + 1) as f64).collect();
        let mut y = v.clone();
        for i in 0..n {
            for j in 0..i {
                y[i] -= l[i * n + j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= u[i * n + j] * y[j];
            }
            y[i] /= u[i * n + i];
        }
        let mut ctr = OpCounter::new();
        let got = f.apply(&v, &mut ctr);
        for (x, z) in got.iter().zip(&y) {
            assert!((x - z).abs() <= 1e-12 * z.abs().max(1.0));
        }
        assert_eq!(
            ctr,
            OpCounter {
                mvps: 0,
                daxpys: 2,
                dots: 0
            }
        );
    }

    #[test]
    fn zero_pivot_is_reported() {
        let a = CsrMatrix::from_triplets(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(ilu0_factor(&a, 0.0), Err(Error::ZeroPivot { row: 0, .. })));
        assert!(ilu0_factor(&a, 2.0).is_ok());
    }
}
