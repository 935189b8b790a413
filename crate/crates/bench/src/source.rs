//! Where the matrix and right-hand side come from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use ppgmres::poly::random_unit_vector;
use ppgmres::sparse::{read_matrix_market, read_matrix_market_vector};
use ppgmres::{CsrMatrix, TestMatrix};

use crate::error::{io_err, usage, BenchError, Result};

/// Directory searched for preset Matrix Market files (default `./data`).
pub const DATA_DIR_VAR: &str = "PPGMRES_DATA_DIR";

/// Offset between the solver seed and the seed of a random right-hand side.
pub const RHS_SEED_OFFSET: u64 = 10_000;

/// A generator written `kind:key=value,...`, e.g. `diag_power:n=100,p=1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec(pub TestMatrix);

impl FromStr for GenSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        for item in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("generator parameter `{item}` is not key=value")))?;
            let k = k.trim().to_string();
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("generator parameter `{k}` is not a number")))?;
            if kv.insert(k.clone(), v).is_some() {
                return Err(usage(format!("generator parameter `{k}` given twice")));
            }
        }
        let kind = kind.trim();
        let tm = match kind.replace('-', "_").as_str() {
            "identity" => TestMatrix::Identity {
                n: dim(take(&mut kv, kind, "n", None)?)?,
            },
            "diag_power" => TestMatrix::DiagPower {
                n: dim(take(&mut kv, kind, "n", None)?)?,
                p: take(&mut kv, kind, "p", Some(1.0))?,
            },
            "bidiag_power" => TestMatrix::BidiagPower {
                n: dim(take(&mut kv, kind, "n", None)?)?,
                p: take(&mut kv, kind, "p", Some(1.0))?,
                s: take(&mut kv, kind, "s", Some(0.2))?,
            },
            "biharmonic" => {
                // `n` sets both sides
                let side = kv.remove("n");
                TestMatrix::Biharmonic {
                    nx: dim(take(&mut kv, kind, "nx", side)?)?,
                    ny: dim(take(&mut kv, kind, "ny", side)?)?,
                }
            }
            other => {
                return Err(usage(format!(
                    "unknown generator `{other}` (identity, diag_power, bidiag_power, biharmonic)"
                )))
            }
        };
        if let Some(k) = kv.keys().next() {
            return Err(usage(format!("generator `{kind}` has no parameter `{k}`")));
        }
        Ok(GenSpec(tm))
    }
}

fn take(kv: &mut BTreeMap<String, f64>, kind: &str, key: &str, default: Option<f64>) -> Result<f64> {
    kv.remove(key)
        .or(default)
        .ok_or_else(|| usage(format!("generator `{kind}` needs `{key}`")))
}

fn dim(v: f64) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(usage(format!("dimension {v} is not a positive integer")))
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            TestMatrix::Identity { n } => write!(f, "identity:n={n}"),
            TestMatrix::DiagPower { n, p } => write!(f, "diag_power:n={n},p={p}"),
            TestMatrix::BidiagPower { n, p, s } => write!(f, "bidiag_power:n={n},p={p},s={s}"),
            TestMatrix::Biharmonic { nx, ny } => write!(f, "biharmonic:nx={nx},ny={ny}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Gen(GenSpec),
    Mm(PathBuf),
}

impl Source {
    pub fn load(&self) -> Result<CsrMatrix> {
        match self {
            Source::Gen(g) => Ok(g.0.build()?),
            Source::Mm(p) => Ok(read_matrix_market(p)?),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Gen(g) => write!(f, "{g}"),
            Source::Mm(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RhsSpec {
    /// Seeded normal vector of unit length.
    Random,
    Ones,
    File(PathBuf),
}

impl FromStr for RhsSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "" => Err(usage("empty --rhs")),
            "random" => Ok(RhsSpec::Random),
            "ones" => Ok(RhsSpec::Ones),
            path => Ok(RhsSpec::File(PathBuf::from(path))),
        }
    }
}

impl RhsSpec {
    pub fn load(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let b = match self {
            RhsSpec::Random => random_unit_vector(n, seed.wrapping_add(RHS_SEED_OFFSET)),
            RhsSpec::Ones => vec![1.0; n],
            RhsSpec::File(p) => read_matrix_market_vector(p)?,
        };
        if b.len() != n {
            return Err(usage(format!(
                "right-hand side has length {}, matrix has order {n}",
                b.len()
            )));
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// E20r0100.mtx, GMRES(50), tol 1e-8, d = 150; ILU shift 0.01 with --ilu.
    #[value(name = "e20r0100")]
    E20r0100,
    /// OLM1000.mtx with unshifted ILU(0), GMRES(50), tol 1e-12, d = 10.
    #[value(name = "olm1000")]
    Olm1000,
    /// memplus.mtx with its problem right-hand side when present, d = 15.
    #[value(name = "memplus")]
    Memplus,
    /// 200 x 200 biharmonic grid, GMRES(50), tol 1e-10; ILU shift 0.5 with --ilu.
    #[value(name = "biharmonic")]
    Biharmonic,
    /// diag(i^2 / n), n = 20000, GMRES(50), tol 1e-10, degrees 1..1024.
    #[value(name = "diag-p")]
    DiagP,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresetSpec {
    pub source: Source,
    /// Problem right-hand side, used when found.
    pub rhs: Option<PathBuf>,
    pub m: usize,
    pub tol: f64,
    pub degree: usize,
    pub degrees: Vec<usize>,
    pub max_cycles: usize,
    pub ilu_shift: f64,
    pub ilu_default: bool,
    pub note: &'static str,
}

impl Preset {
    pub fn spec(self) -> Result<PresetSpec> {
        let doubling = |hi: usize| {
            std::iter::successors(Some(1usize), |d| Some(d * 2))
                .take_while(|&d| d <= hi)
                .collect()
        };
        Ok(match self {
            Preset::E20r0100 => PresetSpec {
                source: Source::Mm(find_data_file("E20r0100.mtx")?),
                rhs: None,
                m: 50,
                tol: 1e-8,
                degree: 150,
                degrees: vec![1, 25, 50, 100, 150, 200],
                max_cycles: 3000,
                ilu_shift: 0.01,
                ilu_default: false,
                note: "random right-hand side; add --ilu for the shifted ILU(0) runs",
            },
            Preset::Olm1000 => PresetSpec {
                source: Source::Mm(find_data_file("OLM1000.mtx")?),
                rhs: None,
                m: 50,
                tol: 1e-12,
                degree: 10,
                degrees: vec![10, 12, 16, 25, 30, 35],
                max_cycles: 200,
                ilu_shift: 0.0,
                ilu_default: true,
                note: "ILU(0) without shift; compare --no-stability-control",
            },
            Preset::Memplus => PresetSpec {
                source: Source::Mm(find_data_file("memplus.mtx")?),
                rhs: find_data_file("memplus_rhs1.mtx").ok(),
                m: 50,
                tol: 1e-10,
                degree: 15,
                degrees: vec![1, 15],
                max_cycles: 1000,
                ilu_shift: 0.0,
                ilu_default: false,
                note: "uses memplus_rhs1.mtx when present; which right-hand side file variant matches the original runs is not known",
            },
            Preset::Biharmonic => PresetSpec {
                source: Source::Gen(GenSpec(TestMatrix::Biharmonic { nx: 200, ny: 200 })),
                rhs: None,
                m: 50,
                tol: 1e-10,
                degree: 50,
                degrees: vec![1, 5, 10, 25, 50, 100, 200, 400, 800],
                max_cycles: 300_000,
                ilu_shift: 0.5,
                ilu_default: false,
                note: "n = 40000; the low degrees run for hours",
            },
            Preset::DiagP => PresetSpec {
                source: Source::Gen(GenSpec(TestMatrix::DiagPower { n: 20_000, p: 2.0 })),
                rhs: None,
                m: 50,
                tol: 1e-10,
                degree: 32,
                degrees: doubling(1024),
                max_cycles: 2_000_000,
                ilu_shift: 0.0,
                ilu_default: false,
                note: "n = 20000; the low degrees run for hours",
            },
        })
    }
}

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// Case-insensitive lookup of `name` in [`data_dir`].
pub fn find_data_file(name: &str) -> Result<PathBuf> {
    let dir = data_dir();
    let missing = || {
        io_err(
            dir.join(name),
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!(
                    "{name} not found; download it from Matrix Market into {} or set {DATA_DIR_VAR}",
                    dir.display()
                ),
            ),
        )
    };
    let entries = std::fs::read_dir(&dir).map_err(|_| missing())?;
    for entry in entries.flatten() {
        if entry.file_name().to_string_lossy().eq_ignore_ascii_case(name) {
            return Ok(entry.path());
        }
    }
    Err(missing())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!(
            "diag_power:n=100,p=1".parse::<GenSpec>().unwrap().0,
            TestMatrix::DiagPower { n: 100, p: 1.0 }
        );
        assert_eq!(
            "bidiag_power:n=10,p=1.5".parse::<GenSpec>().unwrap().0,
            TestMatrix::BidiagPower { n: 10, p: 1.5, s: 0.2 }
        );
        assert_eq!(
            "biharmonic:n=40".parse::<GenSpec>().unwrap().0,
            TestMatrix::Biharmonic { nx: 40, ny: 40 }
        );
        assert_eq!(
            "identity:n=3".parse::<GenSpec>().unwrap().0,
            TestMatrix::Identity { n: 3 }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "diag_power:n=100,p=2",
            "bidiag_power:n=5,p=1.25,s=0.2",
            "biharmonic:nx=4,ny=6",
        ] {
            let g: GenSpec = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<GenSpec>().unwrap(), g);
        }
    }

    #[test]
    fn rejects_bad_generators() {
        for s in [
            "",
            "diag_power",
            "diag_power:n=0",
            "diag_power:n=2.5",
            "diag_power:n=10,q=1",
            "nope:n=3",
            "identity:n",
        ] {
            assert!(matches!(s.parse::<GenSpec>(), Err(BenchError::Usage(_))), "{s}");
        }
    }
}
