//! Root adding for stability.
//!
//! For each root `theta_k` the "product of other factors"
//! `pof(k) = prod_{i != k} |1 - theta_k / theta_i|` estimates the slope of
//! the residual polynomial near that root. Steep roots get extra copies.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Added-copy threshold: no copies while `pof <= 10^4`.
pub const POF_THRESHOLD_LOG10: f64 = 4.0;
/// One more copy for every further factor of `10^14`.
pub const POF_STEP_LOG10: f64 = 14.0;

/// `log10 pof(k)`, summed in log space.
pub fn log10_pof(roots: &[Complex64], k: usize) -> Result<f64> {
    if let Some(i) = roots.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::InvalidArgument(format!("root {i} is zero")));
    }
    let tk = roots[k];
    Ok(roots
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, &ti)| (1.0 - tk / ti).norm().log10())
        .sum())
}

/// `pof(k)`. Overflows to infinity for extreme root sets; use
/// [`log10_pof`] when the magnitude matters.
pub fn compute_pof(roots: &[Complex64], k: usize) -> Result<f64> {
    Ok(10f64.powf(log10_pof(roots, k)?))
}

/// Least integer greater than `(log10 pof - 4) / 14`, or zero when that
/// quotient is not positive.
pub fn added_root_count(log10_pof: f64) -> usize {
    let x = (log10_pof - POF_THRESHOLD_LOG10) / POF_STEP_LOG10;
    if x > 0.0 {
        x.floor() as usize + 1
    } else {
        0
    }
}

/// One inserted copy of a root.
#[derive(Debug, Clone, PartialEq)]
pub struct AddedRoot {
    pub root: Complex64,
    /// Index of the copied root in the original ordered list.
    pub source: usize,
    /// Position of the copy in the final augmented list.
    pub position: usize,
}

/// What the stability control measured and changed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StabilityReport {
    /// `log10 pof(k)` for every original root, in list order.
    pub log10_pof: Vec<f64>,
    /// Extra copies requested for every original root. Both members of a
    /// conjugate pair carry the pair's count; a pair copy adds two roots.
    pub added_per_root: Vec<usize>,
    pub placements: Vec<AddedRoot>,
    /// Stability check `||r1 - r2||`, once computed.
    pub stch: Option<f64>,
}

impl StabilityReport {
    pub fn max_log10_pof(&self) -> f64 {
        self.log10_pof.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_pof(&self) -> f64 {
        10f64.powf(self.max_log10_pof())
    }

    pub fn total_added(&self) -> usize {
        self.placements.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    root: Complex64,
    added: bool,
    source: usize,
}

/// Whether inserting before `pos` would separate a conjugate pair.
fn splits_pair(list: &[Entry], pos: usize) -> bool {
    let mut i = 0;
    while i < list.len() {
        if list[i].root.im != 0.0 {
            if pos == i + 1 {
                return true;
            }
            i += 2;
        } else {
            i += 1;
        }
    }
    false
}

/// Applies root adding to a Leja-ordered, conjugate-adjacent list.
///
/// Returns the augmented roots, a flag per root marking added copies, and
/// the report. For `c` copies of the root at position `q` of a list of
/// current length `L`, the first copy is appended and copy `j < c` is
/// inserted at `round(q + j (L - q) / c)`, moved past a conjugate pair it
/// would otherwise split.
pub fn add_stability_roots(roots: &[Complex64]) -> Result<(Vec<Complex64>, Vec<bool>, StabilityReport)> {
    let d = roots.len();
    let log10_pof = (0..d).map(|k| log10_pof(roots, k)).collect::<Result<Vec<_>>>()?;
    let added_per_root: Vec<usize> = log10_pof.iter().map(|&p| added_root_count(p)).collect();

    let mut list: Vec<Entry> = roots
        .iter()
        .enumerate()
        .map(|(k, &root)| Entry {
            root,
            added: false,
            source: k,
        })
        .collect();

    let mut k = 0;
    while k < d {
        let width = if roots[k].im != 0.0 { 2 } else { 1 };
        let copies = added_per_root[k];
        if copies > 0 {
            let q = list
                .iter()
                .position(|e| !e.added && e.source == k)
                .expect("original root present");
            let len = list.len();
            let unit: Vec<Entry> = (0..width)
                .map(|w| Entry {
                    root: roots[k + w],
                    added: true,
                    source: k + w,
                })
                .collect();
            let mut positions: Vec<usize> = (1..copies)
                .map(|j| {
                    let mut p = (q as f64 + j as f64 * (len - q) as f64 / copies as f64).round() as usize;
                    p = p.clamp(q + width, len);
                    if splits_pair(&list, p) {
                        p += 1;
                    }
                    p
                })
                .collect();
            list.extend(unit.iter().copied());
            positions.sort_unstable();
            for &p in positions.iter().rev() {
                for (w, e) in unit.iter().enumerate() {
                    list.insert(p + w, *e);
                }
            }
        }
        k += width;
    }

    let placements = list
        .iter()
        .enumerate()
        .filter(|(_, e)| e.added)
        .map(|(position, e)| AddedRoot {
            root: e.root,
            source: e.source,
            position,
        })
        .collect();
    let report = StabilityReport {
        log10_pof,
        added_per_root,
        placements,
        stch: None,
    };
    Ok((
        list.iter().map(|e| e.root).collect(),
        list.iter().map(|e| e.added).collect(),
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pof_two_roots_by_hand() {
        let roots = [r(1.0), r(2.0)];
        assert!((compute_pof(&roots, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((compute_pof(&roots, 1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(compute_pof(&[r(3.0)], 0).unwrap(), 1.0);
    }

    #[test]
    fn pof_rejects_zero_root() {
        assert!(compute_pof(&[r(1.0), r(0.0)], 0).is_err());
    }

    #[test]
    fn pof_log_space_matches_direct_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let roots: Vec<Complex64> = (0..10)
                .map(|_| Complex64::new(rng.random_range(0.1..3.0), rng.random_range(-1.0..1.0)))
                .collect();
            for k in 0..10 {
                let direct: f64 = (0..10)
                    .filter(|&i| i != k)
                    .map(|i| (1.0 - roots[k] / roots[i]).norm())
                    .product();
                let logged = compute_pof(&roots, k).unwrap();
                assert!((logged - direct).abs() <= 1e-12 * direct, "{logged} vs {direct}");
            }
        }
    }

    #[test]
    fn count_formula() {
        assert_eq!(added_root_count(3.0), 0);
        assert_eq!(added_root_count(4.0), 0);
        assert_eq!(added_root_count(5.0), 1);
        assert_eq!(added_root_count(18.0), 2);
        assert_eq!(added_root_count(19.0), 2);
        assert_eq!(added_root_count(33.0), 3);
        assert_eq!(added_root_count(f64::NEG_INFINITY), 0);
    }

    #[test]
    fn well_spread_roots_get_nothing() {
        let roots = [r(3.0), r(1.0), r(2.0)];
        let (aug, flags, rep) = add_stability_roots(&roots).unwrap();
        assert_eq!(aug, roots.to_vec());
        assert!(flags.iter().all(|f| !f));
        assert_eq!(rep.total_added(), 0);
    }

    #[test]
    fn outlier_gets_one_copy_at_the_end() {
        // 100 clustered near 1 pushes pof(100) to ~99^k
        let roots = [r(100.0), r(1.0), r(1.5), r(0.7)];
        let (aug, flags, rep) = add_stability_roots(&roots).unwrap();
        assert!(rep.log10_pof[0] > 5.0 && rep.log10_pof[0] < 18.0);
        assert_eq!(rep.added_per_root, vec![1, 0, 0, 0]);
        assert_eq!(aug.len(), 5);
        assert_eq!(aug[4], r(100.0));
        assert!(flags[4]);
    }

    #[test]
    fn multiple_copies_spread_into_the_interior() {
        // root 1e6 among ten roots near 1: log10 pof ~ 6*9 = 54 -> 4 copies
        let mut roots = vec![r(1e6)];
        roots.extend((0..9).map(|i| r(1.0 + 0.1 * i as f64)));
        let (aug, flags, rep) = add_stability_roots(&roots).unwrap();
        let c = rep.added_per_root[0];
        assert_eq!(c, added_root_count(rep.log10_pof[0]));
        assert!(c >= 2);
        assert_eq!(aug.len(), 10 + c);
        assert_eq!(*aug.last().unwrap(), r(1e6));
        let pos: Vec<usize> = flags.iter().enumerate().filter(|(_, f)| **f).map(|(i, _)| i).collect();
        assert_eq!(pos.len(), c);
        assert!(pos[0] > 0 && pos[0] < aug.len() - 1, "an interior copy exists");
    }

    #[test]
    fn pair_copies_stay_together() {
        let z = Complex64::new(50.0, 20.0);
        let mut roots = vec![z, z.conj()];
        roots.extend((0..12).map(|i| r(0.5 + 0.05 * i as f64)));
        let (aug, _, rep) = add_stability_roots(&roots).unwrap();
        assert_eq!(rep.added_per_root[0], rep.added_per_root[1]);
        assert_eq!(aug.len(), 14 + 2 * rep.added_per_root[0]);
        let mut i = 0;
        while i < aug.len() {
            if aug[i].im != 0.0 {
                assert_eq!(aug[i + 1], aug[i].conj());
                i += 2;
            } else {
                i += 1;
            }
        }
    }
}
