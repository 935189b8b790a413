//! Synthetic test matrices.

use super::CsrMatrix;
use crate::error::{Error, Result};

/// The synthetic matrix families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestMatrix {
    /// `I_n`.
    Identity { n: usize },
    /// Diagonal with entries `i^p / n`, `i = 1..n`.
    DiagPower { n: usize, p: f64 },
    /// `DiagPower` plus a constant superdiagonal `s`.
    BidiagPower { n: usize, p: f64, s: f64 },
    /// Finite differences for `-u_xxxx - u_yyyy + u_xxx` on the unit square
    /// with `nx * ny` interior nodes.
    Biharmonic { nx: usize, ny: usize },
}

impl TestMatrix {
    pub fn build(&self) -> Result<CsrMatrix> {
        match *self {
            TestMatrix::Identity { n } => {
                check_dim(n, "n")?;
                Ok(CsrMatrix::identity(n))
            }
            TestMatrix::DiagPower { n, p } => diag_power(n, p),
            TestMatrix::BidiagPower { n, p, s } => bidiag_power(n, p, s),
            TestMatrix::Biharmonic { nx, ny } => biharmonic(nx, ny),
        }
    }
}

fn check_dim(n: usize, name: &str) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn power_diagonal(n: usize, p: f64) -> Vec<f64> {
    (1..=n).map(|i| (i as f64).powf(p) / n as f64).collect()
}

pub fn diag_power(n: usize, p: f64) -> Result<CsrMatrix> {
    check_dim(n, "n")?;
    Ok(CsrMatrix::from_diagonal(&power_diagonal(n, p)))
}

pub fn bidiag_power(n: usize, p: f64, s: f64) -> Result<CsrMatrix> {
    check_dim(n, "n")?;
    let diag = power_diagonal(n, p);
    let mut trip: Vec<_> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
    trip.extend((0..n - 1).map(|i| (i, i + 1, s)));
    CsrMatrix::from_triplets(n, &trip)
}

/// Fourth differences `[1, -4, 6, -4, 1] / h^4` along each axis and the
/// centered third difference `[-1, 2, 0, -2, 1] / (2 h^3)` along x, with
/// zero Dirichlet values outside the interior grid. Nodes are numbered
/// row by row, x fastest. `h = 1 / (nx + 1)`.
pub fn biharmonic(nx: usize, ny: usize) -> Result<CsrMatrix> {
    check_dim(nx, "nx")?;
    check_dim(ny, "ny")?;
    let h = 1.0 / (nx as f64 + 1.0);
    let h3 = h * h * h;
    let h4 = h3 * h;
    const FOURTH: [f64; 5] = [1.0, -4.0, 6.0, -4.0, 1.0];
    const THIRD: [f64; 5] = [-1.0, 2.0, 0.0, -2.0, 1.0];

    let mut trip = Vec::with_capacity(nx * ny * 9);
    for j in 0..ny {
        for i in 0..nx {
            let row = j * nx + i;
            for (k, off) in (-2isize..=2).enumerate() {
                let xi = i as isize + off;
                if (0..nx as isize).contains(&xi) {
                    let v = -FOURTH[k] / h4 + THIRD[k] / (2.0 * h3);
                    trip.push((row, j * nx + xi as usize, v));
                }
                let yj = j as isize + off;
                if (0..ny as isize).contains(&yj) {
                    trip.push((row, yj as usize * nx + i, -FOURTH[k] / h4));
                }
            }
        }
    }
    CsrMatrix::from_triplets(nx * ny, &trip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_power_entries() {
        let a = diag_power(4, 2.0).unwrap();
        assert_eq!(a.diagonal(), vec![0.25, 1.0, 2.25, 4.0]);
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn bidiag_power_entries() {
        let a = bidiag_power(3, 1.0, 0.2).unwrap();
        assert_eq!(a.diagonal(), vec![1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert_eq!(a.get(0, 1), 0.2);
        assert_eq!(a.get(1, 2), 0.2);
        assert_eq!(a.get(1, 0), 0.0);
        assert_eq!(a.nnz(), 5);
    }

    #[test]
    fn nonzero_counts() {
        for n in [1, 2, 17, 100] {
            assert_eq!(diag_power(n, 1.5).unwrap().nnz(), n);
            assert_eq!(bidiag_power(n, 1.5, 0.2).unwrap().nnz(), 2 * n - 1);
        }
    }

    #[test]
    fn rejects_empty_sizes() {
        assert!(diag_power(0, 2.0).is_err());
        assert!(bidiag_power(0, 2.0, 0.2).is_err());
        assert!(biharmonic(0, 3).is_err());
        assert!(biharmonic(3, 0).is_err());
    }

    // Center node of the 3x3 grid, expanded by hand with h = 1/4:
    // u_xxxx and u_yyyy each give [1,-4,6,-4,1]/h^4 = 256 * [...], the
    // x-stencil also carries [-1,2,0,-2,1]/(2h^3) = 32 * [...]; the +-2
    // offsets fall outside the grid.
    #[test]
    fn biharmonic_center_row_matches_hand_expansion() {
        let a = biharmonic(3, 3).unwrap();
        assert_eq!(a.n(), 9);
        let (cols, vals) = a.row(4);
        let expected = [
            (1usize, 1024.0),
            (3, 1024.0 + 64.0),
            (4, -3072.0),
            (5, 1024.0 - 64.0),
            (7, 1024.0),
        ];
        assert_eq!(cols.len(), expected.len());
        for ((&c, &v), &(ec, ev)) in cols.iter().zip(vals).zip(&expected) {
            assert_eq!(c, ec);
            assert!((v - ev).abs() <= 1e-9 * ev.abs(), "col {c}: {v} vs {ev}");
        }
    }

    #[test]
    fn biharmonic_interior_rows_have_nine_entries() {
        let a = biharmonic(9, 9).unwrap();
        assert_eq!(a.row(4 * 9 + 4).0.len(), 9);
    }
}
