//! Matrix Market coordinate files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

struct Lines<'a> {
    path: PathBuf,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn parse_err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    /// Next line that is neither blank nor a comment, with its 1-based number.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(k, l)| (k + 1, l.trim()))
            .find(|(_, l)| !l.is_empty() && !l.starts_with('%'))
    }
}

/// Checks the banner and returns the object format and symmetry.
fn parse_banner(lines: &mut Lines<'_>) -> Result<(String, Symmetry)> {
    let (_, banner) = lines.inner.next().ok_or_else(|| lines.parse_err(1, "empty file"))?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(lines.parse_err(1, "missing or malformed %%MatrixMarket banner"));
    }
    match fields[3].as_str() {
        "real" | "integer" | "double" => {}
        "complex" | "pattern" => return Err(Error::UnsupportedFormat(format!("field type '{}'", fields[3]))),
        other => return Err(lines.parse_err(1, format!("unknown field type '{other}'"))),
    }
    let sym = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => return Err(Error::UnsupportedFormat("hermitian symmetry".into())),
        other => return Err(lines.parse_err(1, format!("unknown symmetry '{other}'"))),
    };
    Ok((fields[2].clone(), sym))
}

fn parse_num<T: std::str::FromStr>(lines: &Lines<'_>, line: usize, tok: Option<&str>) -> Result<T> {
    let tok = tok.ok_or_else(|| lines.parse_err(line, "too few fields"))?;
    tok.parse()
        .map_err(|_| lines.parse_err(line, format!("cannot parse '{tok}'")))
}

/// Parses Matrix Market text. `path` is only used in error messages.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<CsrMatrix> {
    let mut lines = Lines {
        path: path.to_path_buf(),
        inner: text.lines().enumerate(),
    };
    let (format, sym) = parse_banner(&mut lines)?;
    if format != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("'{format}' matrix storage")));
    }
    let (ln, size) = lines
        .next_data()
        .ok_or_else(|| lines.parse_err(2, "missing size line"))?;
    let mut it = size.split_whitespace();
    let rows: usize = parse_num(&lines, ln, it.next())?;
    let cols: usize = parse_num(&lines, ln, it.next())?;
    let nnz: usize = parse_num(&lines, ln, it.next())?;
    if rows != cols {
        return Err(lines.parse_err(ln, format!("matrix is {rows} x {cols}, not square")));
    }
    if rows == 0 {
        return Err(lines.parse_err(ln, "matrix dimension is zero"));
    }

    let mut trip = Vec::with_capacity(if sym == Symmetry::General { nnz } else { 2 * nnz });
    for _ in 0..nnz {
        let (ln, entry) = lines
            .next_data()
            .ok_or_else(|| lines.parse_err(0, format!("expected {nnz} entries, file ended early")))?;
        let mut it = entry.split_whitespace();
        let i: usize = parse_num(&lines, ln, it.next())?;
        let j: usize = parse_num(&lines, ln, it.next())?;
        let v: f64 = parse_num(&lines, ln, it.next())?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(lines.parse_err(ln, format!("index ({i}, {j}) out of range")));
        }
        let (i, j) = (i - 1, j - 1);
        trip.push((i, j, v));
        if i != j {
            match sym {
                Symmetry::General => {}
                Symmetry::Symmetric => trip.push((j, i, v)),
                Symmetry::SkewSymmetric => trip.push((j, i, -v)),
            }
        }
    }
    let mut a = CsrMatrix::from_triplets(rows, &trip)?;
    a.set_symmetric_source(sym == Symmetry::Symmetric);
    Ok(a)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix_market(&text, path)
}

/// Reads a dense vector stored as an `array` file with one column, or as a
/// coordinate file with one column.
pub fn read_matrix_market_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = Lines {
        path: path.to_path_buf(),
        inner: text.lines().enumerate(),
    };
    let (format, _) = parse_banner(&mut lines)?;
    let (ln, size) = lines
        .next_data()
        .ok_or_else(|| lines.parse_err(2, "missing size line"))?;
    let mut it = size.split_whitespace();
    let rows: usize = parse_num(&lines, ln, it.next())?;
    let cols: usize = parse_num(&lines, ln, it.next())?;
    if cols != 1 {
        return Err(lines.parse_err(ln, format!("expected a single column, found {cols}")));
    }
    let mut out = vec![0.0; rows];
    match format.as_str() {
        "array" => {
            for slot in out.iter_mut() {
                let (ln, entry) = lines
                    .next_data()
                    .ok_or_else(|| lines.parse_err(0, "file ended early"))?;
                *slot = parse_num(&lines, ln, entry.split_whitespace().next())?;
            }
        }
        "coordinate" => {
            let nnz: usize = parse_num(&lines, ln, it.next())?;
            for _ in 0..nnz {
                let (ln, entry) = lines
                    .next_data()
                    .ok_or_else(|| lines.parse_err(0, "file ended early"))?;
                let mut it = entry.split_whitespace();
                let i: usize = parse_num(&lines, ln, it.next())?;
                let _j: usize = parse_num(&lines, ln, it.next())?;
                let v: f64 = parse_num(&lines, ln, it.next())?;
                if i == 0 || i > rows {
                    return Err(lines.parse_err(ln, format!("row {i} out of range")));
                }
                out[i - 1] += v;
            }
        }
        other => return Err(Error::UnsupportedFormat(format!("'{other}' storage"))),
    }
    Ok(out)
}

/// Writes every stored entry in `general` coordinate form. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_matrix_market(a: &CsrMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(a.nnz() * 32 + 64);
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    out.push_str(&format!("{} {} {}\n", a.n(), a.n(), a.nnz()));
    for (i, j, v) in a.triplets() {
        out.push_str(&format!("{} {} {:e}\n", i + 1, j + 1, v));
    }
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<CsrMatrix> {
        parse_matrix_market(text, Path::new("test.mtx"))
    }

    #[test]
    fn reads_general_diagonal() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 2.0\n2 2 3.0\n").unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(a.diagonal(), vec![2.0, 3.0]);
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn symmetric_expands_to_exact_transpose() {
        let a = parse("%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 4.0\n2 1 -1.5\n3 2 0.25\n3 3 7.0\n")
            .unwrap();
        assert!(a.is_symmetric_source());
        let d = a.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i * 3 + j].to_bits(), d[j * 3 + i].to_bits());
            }
        }
        assert_eq!(a.nnz(), 6);
        assert_eq!(a.get(0, 1), -1.5);
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1.0\n1 1 2.5\n").unwrap();
        assert_eq!(a.get(0, 0), 3.5);
    }

    #[test]
    fn complex_and_pattern_are_unsupported() {
        for field in ["complex", "pattern"] {
            let text = format!("%%MatrixMarket matrix coordinate {field} general\n1 1 1\n1 1 1\n");
            assert!(matches!(parse(&text), Err(Error::UnsupportedFormat(_))));
        }
    }

    #[test]
    fn malformed_header_is_a_parse_error() {
        assert!(matches!(
            parse("%%MatrixMarket matrix\n1 1 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse("1 1 1\n1 1 1.0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn write_then_read_round_trips() {
        let a = crate::sparse::gen::bidiag_power(7, 1.3, 0.2).unwrap();
        let dir = std::env::temp_dir().join(format!("ppgmres-mm-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.mtx");
        write_matrix_market(&a, &path).unwrap();
        let b = read_matrix_market(&path).unwrap();
        assert_eq!(a.triplets().collect::<Vec<_>>(), b.triplets().collect::<Vec<_>>());
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn reads_array_vector() {
        let dir = std::env::temp_dir().join(format!("ppgmres-mmv-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("b.mtx");
        fs::write(&path, "%%MatrixMarket matrix array real general\n3 1\n1.0\n-2.0\n0.5\n").unwrap();
        assert_eq!(read_matrix_market_vector(&path).unwrap(), vec![1.0, -2.0, 0.5]);
        fs::remove_dir_all(&dir).ok();
    }
}
