use num_complex::Complex64;

use super::snap_real;

/// Relative tolerance for treating two Leja scores as tied.
const TIE_TOL: f64 = 1e-12;

fn beats(score: f64, best: f64) -> bool {
    if best == f64::NEG_INFINITY {
        return score > best;
    }
    score > best + TIE_TOL * best.abs().max(1.0)
}

/// Modified Leja ordering of a conjugate-closed set of values.
///
/// The first value has the largest modulus; each later value maximizes the
/// sum of log distances to the values already chosen. A non-real value is
/// always followed by its conjugate. Ties go to the lower input index.
pub fn modified_leja_order(vals: &[Complex64]) -> Vec<Complex64> {
    let vals: Vec<Complex64> = vals.iter().map(|&z| snap_real(z)).collect();
    let n = vals.len();
    let mut taken = vec![false; n];
    let mut score = vec![0.0f64; n];
    let mut out = Vec::with_capacity(n);

    let take = |k: usize, taken: &mut Vec<bool>, score: &mut Vec<f64>, out: &mut Vec<Complex64>, z: Complex64| {
        taken[k] = true;
        out.push(z);
        for (i, s) in score.iter_mut().enumerate() {
            if !taken[i] {
                *s += (vals[i] - z).norm().ln();
            }
        }
    };

    while out.len() < n {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !taken[i]) {
            let s = if out.is_empty() { vals[i].norm() } else { score[i] };
            match best {
                None => best = Some((i, s)),
                Some((_, b)) if beats(s, b) => best = Some((i, s)),
                _ => {}
            }
        }
        let (k, _) = best.expect("at least one value remains");
        let z = vals[k];
        take(k, &mut taken, &mut score, &mut out, z);
        if z.im != 0.0 {
            let target = z.conj();
            let partner = (0..n)
                .filter(|&i| !taken[i] && vals[i].im != 0.0 && vals[i].im.signum() != z.im.signum())
                .min_by(|&i, &j| (vals[i] - target).norm().total_cmp(&(vals[j] - target).norm()));
            match partner {
                Some(p) => take(p, &mut taken, &mut score, &mut out, target),
                // not conjugate-closed; keep the ordering usable anyway
                None => out.push(target),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        let o = modified_leja_order(&[c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(o, vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn conjugates_stay_adjacent() {
        let o = modified_leja_order(&[c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0)]);
        assert_eq!(o, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0)]);
    }

    #[test]
    fn repeated_values_are_kept() {
        let o = modified_leja_order(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(o, vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    /// Greedy selection recomputed with direct products over every
    /// admissible candidate: at each step the chosen value (or the pair
    /// leader) must have the maximal product of distances.
    #[test]
    fn matches_brute_force_greedy() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let mut vals = Vec::new();
            while vals.len() < 6 {
                if vals.len() <= 4 && rng.random::<bool>() {
                    let z = c(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0));
                    vals.push(z);
                    vals.push(z.conj());
                } else {
                    vals.push(c(rng.random_range(-2.0..2.0), 0.0));
                }
            }
            let o = modified_leja_order(&vals);
            assert_eq!(o.len(), 6);

            let mut remaining = vals.clone();
            let mut chosen: Vec<Complex64> = Vec::new();
            let mut pos = 0;
            while pos < o.len() {
                let key = |z: &Complex64| -> f64 {
                    if chosen.is_empty() {
                        z.norm()
                    } else {
                        chosen.iter().map(|w| (z - w).norm()).product()
                    }
                };
                let best = remaining.iter().map(key).fold(f64::NEG_INFINITY, f64::max);
                let got = key(&o[pos]);
                assert!(
                    (got - best).abs() <= 1e-9 * best.abs().max(1.0),
                    "step {pos}: {got} < {best}"
                );
                let take = |z: Complex64, remaining: &mut Vec<Complex64>| {
                    let k = remaining.iter().position(|w| (w - z).norm() < 1e-15).unwrap();
                    remaining.remove(k);
                };
                take(o[pos], &mut remaining);
                chosen.push(o[pos]);
                if o[pos].im != 0.0 {
                    assert_eq!(o[pos + 1], o[pos].conj());
                    take(o[pos + 1], &mut remaining);
                    chosen.push(o[pos + 1]);
                    pos += 2;
                } else {
                    pos += 1;
                }
            }
        }
    }
}
