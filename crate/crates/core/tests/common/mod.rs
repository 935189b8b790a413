#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use ppgmres::counter::norm2_uncounted;
use ppgmres::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Diagonal in `[lo, hi]` plus `per_row` random off-diagonal entries of
/// size up to `off`.
pub fn random_sparse(n: usize, per_row: usize, lo: f64, hi: f64, off: f64, seed: u64) -> CsrMatrix {
    let mut r = rng(seed);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, r.random_range(lo..hi)));
        for _ in 0..per_row {
            let j = r.random_range(0..n);
            t.push((i, j, r.random_range(-off..off)));
        }
    }
    CsrMatrix::from_triplets(n, &t).unwrap()
}

/// Block diagonal with 2x2 rotation-scaling blocks `[[a, b], [-b, a]]`,
/// so most eigenvalues come in conjugate pairs, plus a light random
/// coupling.
pub fn complex_spectrum(n: usize, seed: u64) -> CsrMatrix {
    let mut r = rng(seed);
    let mut t = Vec::new();
    let mut i = 0;
    while i + 1 < n {
        let a = r.random_range(0.5..3.0);
        let b = r.random_range(0.1..1.5);
        t.extend([(i, i, a), (i, i + 1, b), (i + 1, i, -b), (i + 1, i + 1, a)]);
        i += 2;
    }
    if i < n {
        t.push((i, i, r.random_range(0.5..3.0)));
    }
    for _ in 0..n {
        let (p, q) = (r.random_range(0..n), r.random_range(0..n));
        t.push((p, q, r.random_range(-0.05..0.05)));
    }
    CsrMatrix::from_triplets(n, &t).unwrap()
}

pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(-1.0..1.0)).collect()
}

pub fn to_nalgebra(a: &CsrMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.n(), a.n(), &a.to_dense())
}

pub fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let x = to_nalgebra(a)
        .lu()
        .solve(&DVector::from_column_slice(b))
        .expect("nonsingular");
    x.as_slice().to_vec()
}

pub fn rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    norm2_uncounted(&d) / norm2_uncounted(y).max(f64::MIN_POSITIVE)
}

/// Directory holding optional Matrix Market inputs.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("PPGMRES_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

/// Finds `<name>.mtx` in the data directory, ignoring case.
pub fn find_matrix(name: &str) -> Option<PathBuf> {
    let want = format!("{}.mtx", name.to_lowercase());
    std::fs::read_dir(data_dir())
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .find(|p| {
            p.file_name()
                .and_then(|f| f.to_str())
                .is_some_and(|f| f.to_lowercase() == want)
        })
}
