use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Incremental least-squares solve of `min || beta e_1 - H y ||` for an
/// upper Hessenberg `H`, one column at a time, with plane rotations.
///
/// After each column the current minimum residual is available, which is
/// what GMRES uses as its shortcut convergence test.
#[derive(Debug, Clone)]
pub struct GivensLstsq {
    /// Columns of the rotated, upper triangular factor.
    r: Vec<Vec<f64>>,
    rot: Vec<(f64, f64)>,
    g: Vec<f64>,
}

impl GivensLstsq {
    pub fn new(beta: f64) -> Self {
        Self {
            r: Vec::new(),
            rot: Vec::new(),
            g: vec![beta],
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Adds column `k` (`k + 2` entries, the last one the subdiagonal) and
    /// returns the new residual norm.
    pub fn push_column(&mut self, col: &[f64]) -> f64 {
        let k = self.r.len();
        assert_eq!(col.len(), k + 2, "Hessenberg column length");
        let mut c = col.to_vec();
        for (i, &(cs, sn)) in self.rot.iter().enumerate() {
            let t = cs * c[i] + sn * c[i + 1];
            c[i + 1] = -sn * c[i] + cs * c[i + 1];
            c[i] = t;
        }
        let (a, b) = (c[k], c[k + 1]);
        let r = a.hypot(b);
        let (cs, sn) = if r == 0.0 { (1.0, 0.0) } else { (a / r, b / r) };
        c[k] = r;
        c.pop();
        self.rot.push((cs, sn));
        let gk = self.g[k];
        self.g[k] = cs * gk;
        self.g.push(-sn * gk);
        self.r.push(c);
        self.residual()
    }

    pub fn residual(&self) -> f64 {
        self.g.last().copied().unwrap_or(0.0).abs()
    }

    /// Back substitution for the current coefficients.
    pub fn solve(&self) -> Vec<f64> {
        let k = self.r.len();
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| self.r[j][i] * y[j]).sum();
            let d = self.r[i][i];
            y[i] = if d == 0.0 { 0.0 } else { (self.g[i] - s) / d };
        }
        y
    }
}

/// Minimizes `|| beta e_1 - H y ||` for a `(j+1) x j` Hessenberg `H`.
/// Returns the coefficients and the minimum residual norm.
pub fn hessenberg_lstsq(h: &DenseMatrix, beta: f64) -> Result<(Vec<f64>, f64)> {
    let j = h.cols();
    if h.rows() != j + 1 {
        return Err(Error::DimensionMismatch {
            expected: j + 1,
            got: h.rows(),
        });
    }
    let mut ls = GivensLstsq::new(beta);
    let mut res = beta.abs();
    for k in 0..j {
        let col: Vec<f64> = (0..k + 2).map(|i| h[(i, k)]).collect();
        res = ls.push_column(&col);
    }
    Ok((ls.solve(), res))
}
