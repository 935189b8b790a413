//! The subcommands, each producing CSV text, a plain-text summary and a
//! status.

use std::fmt::Write as _;

use num_complex::Complex64;
use ppgmres::dense::DenseMatrix;
use ppgmres::krylov::dense_eigenvalues;
use ppgmres::{LinearOperator, OpCounter, PolyPreconditioner, Preconditioner};
use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::run::{run_solver, BenchRow, Problem, RunConfig, SolverKind, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Converged => 0,
            Status::NotConverged => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub csv: String,
    /// A second table, such as the root list of `poly-graph`.
    pub extra: Option<String>,
    pub summary: String,
    pub status: Status,
}

pub fn to_csv<I>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn describe(p: &Problem, what: &str) -> String {
    let mut s = format!("matrix   {what} (n = {}, nnz = {})\n", p.a.n(), p.a.nnz());
    if let Some(m) = &p.ilu {
        let _ = writeln!(s, "precond  ILU(0), shift {}", m.shift());
    }
    s
}

fn row_summary(row: &BenchRow) -> String {
    let verdict = if row.converged { "converged" } else { "NOT converged" };
    let mut s = format!(
        "d = {:<8} {verdict} after {} cycles: {} mvps, {} vops ({} dots), true relres {:.3e}",
        row.label.to_string(),
        row.cycles,
        row.mvps,
        row.vops,
        row.dots,
        row.final_relres
    );
    if let Some(st) = row.stch {
        let _ = write!(s, ", stch {st:.2e}");
    }
    s
}

pub fn solve(p: &Problem, cfg: &RunConfig, what: &str) -> Result<Output> {
    let rep = run_solver(p, cfg, cfg.degree)?;
    let row = BenchRow::from_report(&rep, cfg.solver, cfg.degree);
    let mut summary = describe(p, what);
    let _ = writeln!(
        summary,
        "solver   {}, m = {}, tol = {:e}",
        cfg.solver.name(),
        cfg.m,
        cfg.tol
    );
    let _ = writeln!(summary, "{}", row_summary(&row));
    for n in &rep.notes {
        let _ = writeln!(summary, "note     {n}");
    }
    let status = if row.converged {
        Status::Converged
    } else {
        Status::NotConverged
    };
    Ok(Output {
        csv: to_csv(&CSV_HEADER, [row.record()])?,
        extra: None,
        summary,
        status,
    })
}

/// Parses `1,2,4`. An empty list is a usage error.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let ds = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(d) if d >= 1 => Ok(d),
            _ => Err(usage(format!("bad degree `{t}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if ds.is_empty() {
        return Err(usage("degree list is empty"));
    }
    Ok(ds)
}

/// One row per degree, run in parallel, emitted in list order. A run that
/// raises an error leaves a blank row and a line in the summary.
pub fn sweep(p: &Problem, cfg: &RunConfig, degrees: &[usize], what: &str) -> Result<Output> {
    if degrees.is_empty() {
        return Err(usage("degree list is empty"));
    }
    cfg.validate(p.ilu.is_some())?;
    let results: Vec<_> = degrees.par_iter().map(|&d| run_solver(p, cfg, d)).collect();
    let mut summary = describe(p, what);
    let _ = writeln!(
        summary,
        "solver   {}, m = {}, tol = {:e}",
        cfg.solver.name(),
        cfg.m,
        cfg.tol
    );
    let mut records = Vec::new();
    let mut all_converged = true;
    for (&d, res) in degrees.iter().zip(results) {
        match res {
            Ok(rep) => {
                let row = BenchRow::from_report(&rep, cfg.solver, d);
                all_converged &= row.converged;
                let _ = writeln!(summary, "{}", row_summary(&row));
                records.push(row.record());
            }
            Err(e) => {
                all_converged = false;
                let _ = writeln!(summary, "d = {d:<8} failed: {e}");
                records.push(BenchRow::failed_record(d));
            }
        }
    }
    Ok(Output {
        csv: to_csv(&CSV_HEADER, records)?,
        extra: None,
        summary,
        status: if all_converged {
            Status::Converged
        } else {
            Status::NotConverged
        },
    })
}

pub const SCAN_HEADER: [&str; 8] = [
    "degree",
    "control",
    "added",
    "max_pof",
    "stch",
    "final_relres",
    "cycles",
    "converged",
];

/// PP-GMRES at every degree, first without and then with root adding.
/// Always reports success once the rows are written.
pub fn stability_scan(p: &Problem, cfg: &RunConfig, degrees: &[usize], what: &str) -> Result<Output> {
    if degrees.is_empty() {
        return Err(usage("degree list is empty"));
    }
    let base = RunConfig {
        solver: SolverKind::PpGmres,
        reduce_degree: false,
        ..cfg.clone()
    };
    base.validate(p.ilu.is_some())?;
    let jobs: Vec<(usize, bool)> = degrees.iter().flat_map(|&d| [(d, false), (d, true)]).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(d, control)| {
            let c = RunConfig {
                stability_control: control,
                ..base.clone()
            };
            run_solver(p, &c, d)
        })
        .collect();
    let mut summary = describe(p, what);
    let mut records = Vec::new();
    for (&(d, control), res) in jobs.iter().zip(results) {
        let arm = if control { "on" } else { "off" };
        match res {
            Ok(rep) => {
                let added = rep.degree.map_or(0, |(_, k)| k);
                let max_pof = rep.max_log10_pof.map(|l| 10f64.powf(l));
                let _ = writeln!(
                    summary,
                    "d = {d:<5} control {arm:<3} added {added:<3} max pof {}  stch {}  relres {:.3e}",
                    opt_e(max_pof),
                    opt_e(rep.stch),
                    rep.final_relres
                );
                records.push(vec![
                    d.to_string(),
                    arm.to_string(),
                    added.to_string(),
                    max_pof.map(|v| format!("{v:e}")).unwrap_or_default(),
                    rep.stch.map(|v| format!("{v:e}")).unwrap_or_default(),
                    format!("{:e}", rep.final_relres),
                    rep.cycles.to_string(),
                    rep.converged.to_string(),
                ]);
            }
            Err(e) => {
                let _ = writeln!(summary, "d = {d:<5} control {arm:<3} failed: {e}");
                let mut r = vec![String::new(); SCAN_HEADER.len()];
                r[0] = d.to_string();
                r[1] = arm.to_string();
                records.push(r);
            }
        }
    }
    Ok(Output {
        csv: to_csv(&SCAN_HEADER, records)?,
        extra: None,
        summary,
        status: Status::Converged,
    })
}

fn opt_e(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2e}")).unwrap_or_else(|| "-".into())
}

/// Parses `a,b` with `a < b`.
pub fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let bad = || usage(format!("interval `{s}` is not `lo,hi`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Parses a comma separated root list such as `1,2,3+1i,3-1i`.
pub fn parse_roots(s: &str) -> Result<Vec<Complex64>> {
    let roots = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Complex64>().map_err(|_| usage(format!("bad root `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if roots.is_empty() {
        return Err(usage("root list is empty"));
    }
    Ok(roots)
}

pub const GRAPH_HEADER: [&str; 3] = ["alpha", "phi", "phi_without_added"];
pub const ROOTS_HEADER: [&str; 4] = ["index", "re", "im", "is_added"];

/// `phi` sampled at `samples` evenly spaced points of `[lo, hi]` from the
/// scalar factored form, and the root list.
pub fn poly_graph(poly: &PolyPreconditioner, interval: (f64, f64), samples: usize) -> Result<Output> {
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let (lo, hi) = interval;
    let original = poly.without_added();
    let rows = (0..samples).map(|i| {
        let alpha = if samples == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (samples - 1) as f64
        };
        vec![
            format!("{alpha:e}"),
            format!("{:e}", poly.eval_phi(alpha)),
            format!("{:e}", original.eval_phi(alpha)),
        ]
    });
    let csv = to_csv(&GRAPH_HEADER, rows)?;
    let roots = poly.roots().iter().enumerate().map(|(i, z)| {
        vec![
            i.to_string(),
            format!("{:e}", z.re),
            format!("{:e}", z.im),
            poly.is_added(i).to_string(),
        ]
    });
    let extra = to_csv(&ROOTS_HEADER, roots)?;
    let summary = format!(
        "degree {} ({} original, {} added), {samples} samples on [{lo}, {hi}]\n",
        poly.degree(),
        poly.degree_original(),
        poly.degree_added()
    );
    Ok(Output {
        csv,
        extra: Some(extra),
        summary,
        status: Status::Converged,
    })
}

pub const DEFAULT_SPECTRUM_CAP: usize = 2500;

pub const SPECTRUM_HEADER: [&str; 14] = [
    "index",
    "re",
    "im",
    "abs",
    "pre_re",
    "pre_im",
    "pre_abs",
    "phi_re",
    "phi_im",
    "phi_abs",
    "abs_sorted",
    "pre_abs_sorted",
    "phi_abs_sorted",
    "cdf",
];

fn sorted_eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let mut ev = dense_eigenvalues(m)?;
    ev.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(ev)
}

fn sorted_abs(v: &[Complex64]) -> Vec<f64> {
    let mut a: Vec<f64> = v.iter().map(|z| z.norm()).collect();
    a.sort_by(f64::total_cmp);
    a
}

/// Dense eigenvalues of `A`, of `A M^{-1}` when ILU is configured, and
/// their images under `phi` (taken on `A M^{-1}` when present, else `A`).
/// The `*_sorted` columns with `cdf = (i + 1) / n` give the cumulative
/// distribution of the magnitudes.
pub fn spectrum(p: &Problem, poly: Option<&PolyPreconditioner>, cap: usize, what: &str) -> Result<Output> {
    let n = p.a.n();
    if n > cap {
        return Err(usage(format!(
            "matrix order {n} exceeds the dense eigensolve cap {cap}; raise --cap to force it"
        )));
    }
    let raw = sorted_eigenvalues(&DenseMatrix::from_row_major(n, n, p.a.to_dense()))?;
    let pre = match &p.ilu {
        Some(m) => {
            let mut data = vec![0.0; n * n];
            let mut ctr = OpCounter::new();
            let mut e = vec![0.0; n];
            for j in 0..n {
                e[j] = 1.0;
                let col = p.a.apply(&m.apply_inverse(&e, &mut ctr), &mut ctr);
                e[j] = 0.0;
                for (i, v) in col.into_iter().enumerate() {
                    data[i * n + j] = v;
                }
            }
            Some(sorted_eigenvalues(&DenseMatrix::from_row_major(n, n, data))?)
        }
        None => None,
    };
    let base = pre.as_ref().unwrap_or(&raw);
    let phi: Option<Vec<Complex64>> = poly.map(|q| base.iter().map(|&z| q.eval_phi_complex(z)).collect());

    let abs_sorted = sorted_abs(&raw);
    let pre_sorted = pre.as_deref().map(sorted_abs);
    let phi_sorted = phi.as_deref().map(sorted_abs);
    let e = |v: f64| format!("{v:e}");
    let rows = (0..n).map(|i| {
        let mut r = vec![i.to_string(), e(raw[i].re), e(raw[i].im), e(raw[i].norm())];
        for v in [&pre, &phi] {
            match v {
                Some(v) => r.extend([e(v[i].re), e(v[i].im), e(v[i].norm())]),
                None => r.extend([String::new(), String::new(), String::new()]),
            }
        }
        r.push(e(abs_sorted[i]));
        for v in [&pre_sorted, &phi_sorted] {
            r.push(v.as_ref().map(|v| e(v[i])).unwrap_or_default());
        }
        r.push(e((i + 1) as f64 / n as f64));
        r
    });
    let csv = to_csv(&SPECTRUM_HEADER, rows)?;

    let mut summary = describe(p, what);
    let left = |v: &[Complex64]| v.iter().filter(|z| z.re < 0.0).count();
    let _ = writeln!(
        summary,
        "A        |lambda| in [{:.3e}, {:.3e}], {} with negative real part",
        abs_sorted[0],
        abs_sorted[n - 1],
        left(&raw)
    );
    if let (Some(v), Some(s)) = (&pre, &pre_sorted) {
        let _ = writeln!(
            summary,
            "A M^-1   |lambda| in [{:.3e}, {:.3e}], {} with negative real part",
            s[0],
            s[n - 1],
            left(v)
        );
    }
    if let (Some(v), Some(s), Some(q)) = (&phi, &phi_sorted, poly) {
        let _ = writeln!(
            summary,
            "phi      degree {}, |phi(lambda)| in [{:.3e}, {:.3e}], {} with negative real part",
            q.degree(),
            s[0],
            s[n - 1],
            left(v)
        );
    }
    Ok(Output {
        csv,
        extra: None,
        summary,
        status: Status::Converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("1, 2,4").unwrap(), vec![1, 2, 4]);
        assert!(parse_degrees("").is_err());
        assert!(parse_degrees(" , ").is_err());
        assert!(parse_degrees("0").is_err());
        assert!(parse_degrees("3,x").is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(parse_interval("0,2").unwrap(), (0.0, 2.0));
        assert!(parse_interval("2,0").is_err());
        assert!(parse_interval("2").is_err());
    }

    #[test]
    fn root_lists() {
        let r = parse_roots("1, 3+1i,3-1i").unwrap();
        assert_eq!(
            r,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(3.0, 1.0),
                Complex64::new(3.0, -1.0)
            ]
        );
        assert!(parse_roots("").is_err());
        assert!(parse_roots("1,q").is_err());
    }

    #[test]
    fn csv_shape() {
        let s = to_csv(&["a", "b"], [vec!["1".into(), "".into()]]).unwrap();
        assert_eq!(s, "a,b\n1,\n");
    }
}
