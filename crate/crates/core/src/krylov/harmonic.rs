use num_complex::Complex64;

use super::arnoldi::ArnoldiData;
use super::eigen::hessenberg_eigenvalues;
use crate::dense::lu_solve;
use crate::error::{Error, Result};

/// Pivots (and eigenvalues) this small relative to `||H||_F` are zero.
const SINGULAR_TOL: f64 = 1e-14;

/// Roots of the GMRES residual polynomial of the cycle in `ad`: the
/// eigenvalues of `H_d + h_{d+1,d}^2 f e_d^T` with `H_d^T f = e_d`.
pub fn harmonic_ritz_values(ad: &ArnoldiData) -> Result<Vec<Complex64>> {
    let d = ad.degree();
    if d == 0 {
        return Err(Error::InvalidArgument("empty Arnoldi decomposition".into()));
    }
    let hd = ad.h_square();
    let scale = ad.h.norm_fro();
    let hl = ad.h_last();

    let mut m = hd.clone();
    if hl != 0.0 {
        let mut ed = vec![0.0; d];
        ed[d - 1] = 1.0;
        let f = lu_solve(&hd.transpose(), &ed, SINGULAR_TOL * scale).ok_or(Error::HarmonicRitzUndefined)?;
        let h2 = hl * hl;
        for i in 0..d {
            m[(i, d - 1)] += h2 * f[i];
        }
    } else if lu_solve(&hd, &vec![1.0; d], SINGULAR_TOL * scale).is_none() {
        return Err(Error::HarmonicRitzUndefined);
    }

    let vals = hessenberg_eigenvalues(&m)?;
    if let Some(index) = vals.iter().position(|z| z.norm() <= SINGULAR_TOL * scale) {
        return Err(Error::ZeroHarmonicRitzValue { index });
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::OpCounter;
    use crate::krylov::arnoldi_cycle;
    use crate::operator::LinearOperator;
    use crate::sparse::{gen, CsrMatrix};

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn invariant_subspace_gives_exact_eigenvalues() {
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let ad = arnoldi_cycle(&a, &[1.0, -0.5, 2.0], 3, &mut OpCounter::new()).unwrap();
        let th = sorted_re(harmonic_ritz_values(&ad).unwrap());
        for (t, e) in th.iter().zip([1.0, 2.0, 3.0]) {
            assert!((t - e).abs() < 1e-10);
        }
    }

    #[test]
    fn scaled_identity() {
        let a = CsrMatrix::from_diagonal(&[2.0; 5]);
        let ad = arnoldi_cycle(&a, &[1.0, 2.0, 3.0, 4.0, 5.0], 1, &mut OpCounter::new()).unwrap();
        let th = harmonic_ritz_values(&ad).unwrap();
        assert_eq!(th.len(), 1);
        assert!((th[0] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    /// Roots of the degree-4 minimum residual polynomial computed from the
    /// power basis: minimize ||b - sum_k c_k A^k b|| by normal equations,
    /// then find the roots of 1 - sum c_k z^k.
    #[test]
    fn matches_power_basis_normal_equations() {
        let n = 50;
        let a = gen::diag_power(n, 1.0).unwrap();
        let b: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * ((i * 7 % 5) as f64)).collect();
        let d = 4;

        let mut k_vecs = vec![b.clone()];
        for _ in 0..d {
            let next = a.apply(k_vecs.last().unwrap(), &mut OpCounter::new());
            k_vecs.push(next);
        }
        // columns A b, A^2 b, ..., A^d b
        let cols = &k_vecs[1..];
        let mut g = crate::dense::DenseMatrix::zeros(d, d);
        let mut rhs = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
            }
            rhs[i] = cols[i].iter().zip(&b).map(|(x, y)| x * y).sum();
        }
        let c = lu_solve(&g, &rhs, 0.0).unwrap();
        // pi(z) = 1 - c0 z - c1 z^2 - c2 z^3 - c3 z^4; find roots via companion eigenvalues
        let mut comp = crate::dense::DenseMatrix::zeros(d, d);
        // monic: z^4 + (c2/c3) z^3 + (c1/c3) z^2 + (c0/c3) z - 1/c3
        let monic = [c[2] / c[3], c[1] / c[3], c[0] / c[3], -1.0 / c[3]];
        for j in 0..d {
            comp[(0, j)] = -monic[j];
        }
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        let oracle = sorted_re(crate::krylov::dense_eigenvalues(&comp).unwrap());

        let ad = arnoldi_cycle(&a, &b, d, &mut OpCounter::new()).unwrap();
        let th = sorted_re(harmonic_ritz_values(&ad).unwrap());
        for (t, o) in th.iter().zip(&oracle) {
            assert!((t - o).abs() <= 1e-6 * o.abs().max(1.0), "{t} vs {o}");
        }
    }

    #[test]
    fn singular_leading_block_is_an_error() {
        // A = [[0,1],[1,0]] from e_1: H_1 = [0]
        let a = CsrMatrix::from_triplets(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let ad = arnoldi_cycle(&a, &[1.0, 0.0], 1, &mut OpCounter::new()).unwrap();
        assert!(matches!(harmonic_ritz_values(&ad), Err(Error::HarmonicRitzUndefined)));
    }
}
