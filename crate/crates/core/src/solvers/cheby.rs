use crate::error::{Error, Result};

/// Predicted per-cycle residual reduction factors for a real positive
/// spectrum in `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyEstimate {
    /// `1 - 2 m^2 a / b` for GMRES(m).
    pub plain: f64,
    /// `1 - 2 d^2 m^2 a / b` with a degree `d` polynomial.
    pub pp: f64,
    /// Ratio of predicted products, unpreconditioned over preconditioned.
    pub speedup: f64,
}

/// `T_m(1 + delta) ~ 1 + m^2 delta` for small `delta`.
pub fn chebyshev_t_approx(m: usize, delta: f64) -> f64 {
    1.0 + (m * m) as f64 * delta
}

/// Estimates how much a degree `d` polynomial speeds up GMRES(m) when the
/// spectrum fills `[a, b]` with `b >> a`.
///
/// The preconditioned spectrum starts near `d^2 a / b` relative to its
/// width, so one cycle reduces the residual as much as `d^2` plain
/// cycles while costing `d` times the products: a net gain of `d`.
pub fn cheby_estimate(a: f64, b: f64, m: usize, d: usize) -> Result<ChebyEstimate> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "spectrum lower bound must be positive, got {a}"
        )));
    }
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("need a < b, got a = {a}, b = {b}")));
    }
    if m == 0 || d == 0 {
        return Err(Error::InvalidArgument(
            "restart length and degree must be at least 1".into(),
        ));
    }
    let (m, d) = (m as f64, d as f64);
    Ok(ChebyEstimate {
        plain: 1.0 - 2.0 * m * m * a / b,
        pp: 1.0 - 2.0 * d * d * m * m * a / b,
        speedup: d,
    })
}
