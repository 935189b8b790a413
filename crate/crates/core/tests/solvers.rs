mod common;

use ppgmres::poly::{build_polynomial, random_unit_vector, stability_check, PolyOptions};
use ppgmres::solvers::{
    bicgstab, fgmres, gmres_restarted, pp_gmres, pp_gmres_changing, pp_gmres_double, GmresOptions, PpOptions, Restart,
};
use ppgmres::{CsrMatrix, OpCounter, TestMatrix};
use proptest::prelude::*;

use common::*;

#[test]
fn gmres_matches_dense_solve() {
    let a = TestMatrix::DiagPower { n: 300, p: 1.0 }.build().unwrap();
    let b = random_unit_vector(300, 1);
    let tol = 1e-10;
    let (x, rep) = gmres_restarted(&a, &b, &GmresOptions::new(20, tol), &mut OpCounter::new()).unwrap();
    assert!(rep.converged);
    // condition number is n
    assert!(rel_diff(&x, &dense_solve(&a, &b)) <= tol * 300.0);
}

#[test]
fn bicgstab_matches_dense_solve() {
    let a = TestMatrix::DiagPower { n: 300, p: 1.0 }.build().unwrap();
    let b = random_unit_vector(300, 2);
    let (x, rep) = bicgstab(&a, &b, None, 1e-10, 2000, &mut OpCounter::new()).unwrap();
    assert!(rep.converged);
    assert!(rel_diff(&x, &dense_solve(&a, &b)) <= 1e-10 * 300.0);
    let ratio = rep.vops() as f64 / rep.counter.mvps as f64;
    assert!((5.0..=8.0).contains(&ratio), "{ratio}");
}

#[test]
fn full_basis_gmres_finishes_in_one_cycle() {
    for seed in 0..5 {
        let a = random_sparse(60, 3, 2.0, 5.0, 0.5, seed);
        let b = random_vector(60, seed);
        let (_, rep) = gmres_restarted(&a, &b, &GmresOptions::new(60, 1e-10), &mut OpCounter::new()).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.cycles, 1);
        assert!(rep.final_relres <= 1e-10);
    }
}

#[test]
fn unrestarted_gmres() {
    let a = random_sparse(400, 4, 0.5, 4.0, 0.5, 3);
    let b = random_unit_vector(400, 3);
    let opts = GmresOptions {
        restart: Restart::Never { max_basis: 400 },
        tol: 1e-10,
        max_cycles: 1,
    };
    let (_, rep) = gmres_restarted(&a, &b, &opts, &mut OpCounter::new()).unwrap();
    assert!(rep.converged);
    assert_eq!(rep.cycles, 1);
    assert!(rep.iterations < 400);
}

#[test]
fn unrestarted_gmres_reports_basis_cap() {
    let a = random_sparse(400, 4, 0.5, 4.0, 0.5, 3);
    let b = random_unit_vector(400, 3);
    let opts = GmresOptions {
        restart: Restart::Never { max_basis: 5 },
        tol: 1e-10,
        max_cycles: 1,
    };
    let err = gmres_restarted(&a, &b, &opts, &mut OpCounter::new()).unwrap_err();
    assert!(matches!(err, ppgmres::Error::BasisCapExceeded { cap: 5 }), "{err:?}");
}

#[test]
fn fgmres_with_unit_inner_degree_tracks_gmres() {
    let a = TestMatrix::DiagPower { n: 300, p: 1.0 }.build().unwrap();
    let b = random_unit_vector(300, 4);
    let opts = GmresOptions::new(20, 1e-10);
    let (_, g) = gmres_restarted(&a, &b, &opts, &mut OpCounter::new()).unwrap();
    let (_, f) = fgmres(&a, &b, 1, &opts, &mut OpCounter::new()).unwrap();
    assert!(g.converged && f.converged);
    let (gi, fi) = (g.iterations as f64, f.iterations as f64);
    assert!((fi - gi).abs() <= 0.1 * gi, "gmres {gi} vs fgmres {fi}");
}

#[test]
fn vops_per_product_rule() {
    let a = TestMatrix::DiagPower { n: 2000, p: 2.0 }.build().unwrap();
    let b = random_unit_vector(2000, 5);
    let m = 50;
    for d in [8, 16, 32] {
        let (_, rep) = pp_gmres(&a, &b, None, &PpOptions::new(d, m, 1e-10), &mut OpCounter::new()).unwrap();
        assert!(rep.cycles >= 5);
        let got = rep.vops() as f64 / rep.counter.mvps as f64;
        let predicted = 1.0 + (m + 4) as f64 / d as f64;
        assert!((got / predicted - 1.0).abs() <= 0.25, "d = {d}: {got} vs {predicted}");
    }
}

#[test]
fn mvps_halve_with_degree() {
    let a = TestMatrix::DiagPower { n: 2000, p: 2.0 }.build().unwrap();
    let b = random_unit_vector(2000, 6);
    let mvps: Vec<f64> = [2, 4, 8, 16]
        .iter()
        .map(|&d| {
            pp_gmres(&a, &b, None, &PpOptions::new(d, 50, 1e-10), &mut OpCounter::new())
                .unwrap()
                .1
                .counter
                .mvps as f64
        })
        .collect();
    for w in mvps.windows(2) {
        assert!((1.4..=2.6).contains(&(w[0] / w[1])), "{mvps:?}");
    }
}

#[test]
fn changing_polynomial_beats_flexible_at_low_degree() {
    let a = TestMatrix::DiagPower { n: 2000, p: 2.0 }.build().unwrap();
    let b = random_unit_vector(2000, 7);
    let (_, ch) = pp_gmres_changing(&a, &b, &PpOptions::new(10, 50, 1e-10), &mut OpCounter::new()).unwrap();
    let (_, fg) = fgmres(&a, &b, 10, &GmresOptions::new(50, 1e-10), &mut OpCounter::new()).unwrap();
    assert!(ch.converged && fg.converged);
    assert!(ch.counter.mvps < fg.counter.mvps);
}

#[test]
fn changing_polynomial_costs_more_at_high_degree() {
    let a = TestMatrix::DiagPower { n: 2000, p: 2.0 }.build().unwrap();
    let b = random_unit_vector(2000, 8);
    let (_, ch) = pp_gmres_changing(&a, &b, &PpOptions::new(100, 50, 1e-10), &mut OpCounter::new()).unwrap();
    let (_, pp) = pp_gmres(&a, &b, None, &PpOptions::new(100, 50, 1e-10), &mut OpCounter::new()).unwrap();
    assert!(ch.converged && pp.converged);
    assert!(ch.counter.mvps >= pp.counter.mvps);
    assert!(ch.vops() > pp.vops());
}

#[test]
fn double_beats_single_on_dots() {
    let a = TestMatrix::Biharmonic { nx: 40, ny: 40 }.build().unwrap();
    let b = random_unit_vector(a.n(), 9);
    let opts = PpOptions::new(100, 50, 1e-10);
    let (_, dbl) = pp_gmres_double(&a, &b, 10, 10, &opts, &mut OpCounter::new()).unwrap();
    let (_, single) = pp_gmres(&a, &b, None, &opts, &mut OpCounter::new()).unwrap();
    assert!(dbl.converged);
    assert!(dbl.counter.dots < single.counter.dots);
}

#[test]
fn stability_check_small_for_single_root() {
    let a = CsrMatrix::from_diagonal(&(1..=100).map(|i| i as f64 / 50.0).collect::<Vec<_>>());
    let built = build_polynomial(&a, &PolyOptions::new(1), 3, &mut OpCounter::new()).unwrap();
    assert_eq!(built.poly.degree(), 1);
    assert!(stability_check(&built.poly, &a, &built.start, &mut OpCounter::new()) <= 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pp_final_residual_bounded_by_stability(seed in 0u64..1000, d in 2usize..40, m in 10usize..40) {
        let a = complex_spectrum(150, seed);
        let b = random_vector(150, seed + 11);
        let tol = 1e-10;
        let mut opts = PpOptions::new(d, m, tol);
        opts.seed = seed;
        opts.gmres.max_cycles = 200;
        let (_, rep) = pp_gmres(&a, &b, None, &opts, &mut OpCounter::new()).unwrap();
        prop_assert_eq!(rep.vops(), rep.counter.daxpys + rep.counter.dots);
        if rep.converged {
            prop_assert!(rep.final_relres <= tol.max(50.0 * rep.stch.unwrap()));
        }
    }

    #[test]
    fn shortcut_residual_nonincreasing(seed in 0u64..1000, m in 5usize..40) {
        let a = random_sparse(120, 4, 0.5, 4.0, 1.0, seed);
        let b = random_vector(120, seed);
        let mut opts = GmresOptions::new(m, 1e-12);
        opts.max_cycles = 3;
        let (_, rep) = gmres_restarted(&a, &b, &opts, &mut OpCounter::new()).unwrap();
        for cycle in rep.history.chunks(m) {
            for w in cycle.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }
}
