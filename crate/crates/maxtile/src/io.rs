//! Matrix file formats.
//!
//! - FIMI: one transaction per line, whitespace-separated item ids.
//! - Triples: one `i j` (binary) or `i j v` (valued) entry per line, 0-based.
//!   An optional first line `% m n` fixes the shape; otherwise it is one past
//!   the largest index seen.
//! - Dense CSV: comma-separated rows, `0`/`1` for binary data.
//!
//! Blank lines are empty transactions in FIMI files and are skipped in the
//! other formats. Lines starting with `#` are comments in triple files.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use maxtile_core::{SparseBinaryMatrix, ValuedMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> ReadError {
    ReadError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Fimi,
    Csv,
    Triples,
}

impl Format {
    /// Guesses from the extension: `.csv` is dense CSV, `.tsv`, `.txt`,
    /// `.triples` and `.mtx` are triples, anything else FIMI.
    pub fn from_path(path: &Path) -> Format {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Format::Csv,
            Some("tsv" | "txt" | "triples" | "mtx") => Format::Triples,
            _ => Format::Fimi,
        }
    }
}

/// Shape overrides for formats that do not carry one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Shape {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

fn index(token: &str, line: usize, what: &str) -> Result<usize, ReadError> {
    token.parse::<usize>().map_err(|_| {
        parse_err(
            line,
            format!("{what} `{token}` is not a nonnegative integer"),
        )
    })
}

fn resolve(seen: usize, given: Option<usize>, line: usize, what: &str) -> Result<usize, ReadError> {
    match given {
        Some(n) if n < seen => Err(parse_err(
            line,
            format!("{what} index {} exceeds declared size {n}", seen - 1),
        )),
        Some(n) => Ok(n),
        None => Ok(seen),
    }
}

pub fn read_fimi<R: BufRead>(reader: R, shape: Shape) -> Result<SparseBinaryMatrix, ReadError> {
    let mut rows = Vec::new();
    let mut n = 0;
    let mut widest_line = 0;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let mut row = line
            .split_whitespace()
            .map(|t| index(t, k + 1, "item"))
            .collect::<Result<Vec<_>, _>>()?;
        row.sort_unstable();
        row.dedup();
        if let Some(&last) = row.last() {
            if last + 1 > n {
                n = last + 1;
                widest_line = k + 1;
            }
        }
        rows.push(row);
    }
    let n = resolve(n, shape.cols, widest_line, "item")?;
    if let Some(m) = shape.rows {
        if m < rows.len() {
            return Err(parse_err(
                m + 1,
                format!("more than the declared {m} transactions"),
            ));
        }
        rows.resize(m, Vec::new());
    }
    Ok(SparseBinaryMatrix::from_rows(n, rows).expect("columns checked"))
}

struct Triples<V> {
    entries: Vec<(usize, usize, V)>,
    m: usize,
    n: usize,
}

fn read_triples_with<R: BufRead, V>(
    reader: R,
    shape: Shape,
    mut value: impl FnMut(Option<&str>, usize) -> Result<V, ReadError>,
) -> Result<Triples<V>, ReadError> {
    let mut entries = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let (mut m, mut n) = (0, 0);
    let (mut row_line, mut col_line) = (0, 0);
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = k + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(rest) = text.strip_prefix('%') {
            let dims: Vec<&str> = rest.split_whitespace().collect();
            if k != 0 || dims.len() != 2 {
                return Err(parse_err(
                    line_no,
                    "shape header must be the first line, `% rows cols`",
                ));
            }
            header = Some((
                index(dims[0], line_no, "row count")?,
                index(dims[1], line_no, "column count")?,
            ));
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(parse_err(
                line_no,
                format!("expected `i j` or `i j v`, got {} fields", tokens.len()),
            ));
        }
        let i = index(tokens[0], line_no, "row")?;
        let j = index(tokens[1], line_no, "column")?;
        let v = value(tokens.get(2).copied(), line_no)?;
        if i + 1 > m {
            m = i + 1;
            row_line = line_no;
        }
        if j + 1 > n {
            n = j + 1;
            col_line = line_no;
        }
        entries.push((i, j, v));
    }
    let m = resolve(m, shape.rows.or(header.map(|h| h.0)), row_line, "row")?;
    let n = resolve(n, shape.cols.or(header.map(|h| h.1)), col_line, "column")?;
    Ok(Triples { entries, m, n })
}

pub fn read_triples<R: BufRead>(reader: R, shape: Shape) -> Result<SparseBinaryMatrix, ReadError> {
    let t = read_triples_with(reader, shape, |v, line| match v {
        None | Some("1") => Ok(true),
        Some("0") => Ok(false),
        Some(other) => Err(parse_err(
            line,
            format!("binary entry `{other}` is not 0 or 1"),
        )),
    })?;
    let mut rows = vec![Vec::new(); t.m];
    for (i, j, one) in t.entries {
        if one {
            rows[i].push(j);
        }
    }
    Ok(SparseBinaryMatrix::from_rows(t.n, rows).expect("columns checked"))
}

fn real(token: &str, line: usize) -> Result<f64, ReadError> {
    match f64::from_str(token.trim()) {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(
            line,
            format!("`{}` is not a finite number", token.trim()),
        )),
    }
}

pub fn read_valued_triples<R: BufRead>(reader: R, shape: Shape) -> Result<ValuedMatrix, ReadError> {
    let t = read_triples_with(reader, shape, |v, line| match v {
        None => Ok(1.0),
        Some(tok) => real(tok, line),
    })?;
    let mut out = ValuedMatrix::zeros(t.m, t.n);
    for (i, j, v) in t.entries {
        out.set(i, j, v);
    }
    Ok(out)
}

fn read_csv_rows<R: BufRead, V>(
    reader: R,
    mut cell: impl FnMut(&str, usize) -> Result<V, ReadError>,
) -> Result<Vec<Vec<V>>, ReadError> {
    let mut rows: Vec<Vec<V>> = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| cell(t, k + 1))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    k + 1,
                    format!("{} fields, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_dense_csv<R: BufRead>(reader: R) -> Result<SparseBinaryMatrix, ReadError> {
    let rows = read_csv_rows(reader, |t, line| match t.trim() {
        "0" => Ok(0u8),
        "1" => Ok(1u8),
        other => Err(parse_err(
            line,
            format!("dense entry `{other}` is not 0 or 1"),
        )),
    })?;
    if rows.is_empty() {
        return Ok(SparseBinaryMatrix::zeros(0, 0));
    }
    Ok(SparseBinaryMatrix::from_dense(&rows).expect("rows checked"))
}

pub fn read_valued_csv<R: BufRead>(reader: R) -> Result<ValuedMatrix, ReadError> {
    let rows = read_csv_rows(reader, real)?;
    let n = rows.first().map_or(0, Vec::len);
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(ValuedMatrix::from_dense(rows.len(), n, &flat))
}

fn open(path: &Path) -> Result<BufReader<File>, ReadError> {
    Ok(BufReader::new(File::open(path)?))
}

pub fn load_binary(
    path: &Path,
    format: Format,
    shape: Shape,
) -> Result<SparseBinaryMatrix, ReadError> {
    let reader = open(path)?;
    match format {
        Format::Fimi => read_fimi(reader, shape),
        Format::Triples => read_triples(reader, shape),
        Format::Csv => read_dense_csv(reader),
    }
}

/// Loads integer or real data. FIMI files load as 0/1 values.
pub fn load_valued(path: &Path, format: Format, shape: Shape) -> Result<ValuedMatrix, ReadError> {
    let reader = open(path)?;
    match format {
        Format::Fimi => {
            let d = read_fimi(reader, shape)?;
            let mut out = ValuedMatrix::zeros(d.n_rows(), d.n_cols());
            for (i, j) in d.ones() {
                out.set(i, j, 1.0);
            }
            Ok(out)
        }
        Format::Triples => read_valued_triples(reader, shape),
        Format::Csv => read_valued_csv(reader),
    }
}

pub fn write_fimi<W: Write>(d: &SparseBinaryMatrix, mut w: W) -> io::Result<()> {
    for row in d.rows() {
        let mut first = true;
        for j in row {
            if !first {
                w.write_all(b" ")?;
            }
            write!(w, "{j}")?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Writes the shape header followed by one `i j` line per one.
pub fn write_triples<W: Write>(d: &SparseBinaryMatrix, mut w: W) -> io::Result<()> {
    writeln!(w, "% {} {}", d.n_rows(), d.n_cols())?;
    for (i, j) in d.ones() {
        writeln!(w, "{i} {j}")?;
    }
    w.flush()
}

pub fn write_valued_triples<W: Write>(d: &ValuedMatrix, mut w: W) -> io::Result<()> {
    writeln!(w, "% {} {}", d.n_rows(), d.n_cols())?;
    for i in 0..d.n_rows() {
        for &(j, v) in d.row(i) {
            writeln!(w, "{i} {j} {v}")?;
        }
    }
    w.flush()
}

pub fn write_dense_csv<W: Write>(d: &SparseBinaryMatrix, mut w: W) -> io::Result<()> {
    let mut line = Vec::with_capacity(2 * d.n_cols());
    for i in 0..d.n_rows() {
        line.clear();
        line.resize(2 * d.n_cols(), b',');
        for j in 0..d.n_cols() {
            line[2 * j] = b'0';
        }
        for &j in d.row(i) {
            line[2 * j] = b'1';
        }
        line.pop();
        line.push(b'\n');
        w.write_all(&line)?;
    }
    w.flush()
}

pub fn save_binary(d: &SparseBinaryMatrix, path: &Path, format: Format) -> io::Result<()> {
    let w = BufWriter::new(File::create(path)?);
    match format {
        Format::Fimi => write_fimi(d, w),
        Format::Triples => write_triples(d, w),
        Format::Csv => write_dense_csv(d, w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fimi(text: &str) -> Result<SparseBinaryMatrix, ReadError> {
        read_fimi(text.as_bytes(), Shape::default())
    }

    #[test]
    fn fimi_basic() {
        let d = fimi("0 1\n0 1\n0\n").unwrap();
        assert_eq!((d.n_rows(), d.n_cols(), d.nnz()), (3, 2, 5));
    }

    #[test]
    fn fimi_empty_and_duplicates() {
        let d = fimi("").unwrap();
        assert_eq!((d.n_rows(), d.n_cols(), d.nnz()), (0, 0, 0));
        let d = fimi("2 2 5\n").unwrap();
        assert_eq!(d.row(0), &[2, 5]);
        assert_eq!(d.n_cols(), 6);
    }

    #[test]
    fn fimi_errors_carry_line_numbers() {
        match fimi("0 1\n1 x\n") {
            Err(ReadError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            fimi("0 -1\n"),
            Err(ReadError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn fimi_column_override() {
        let d = read_fimi(
            "0 1\n".as_bytes(),
            Shape {
                rows: None,
                cols: Some(5),
            },
        )
        .unwrap();
        assert_eq!(d.n_cols(), 5);
        assert!(read_fimi(
            "0 7\n".as_bytes(),
            Shape {
                rows: None,
                cols: Some(5)
            }
        )
        .is_err());
    }

    #[test]
    fn triples_round_trip_keeps_empty_lines() {
        let mut d = SparseBinaryMatrix::zeros(4, 6);
        d.set(0, 2, true);
        d.set(2, 1, true);
        let mut buf = Vec::new();
        write_triples(&d, &mut buf).unwrap();
        assert_eq!(read_triples(buf.as_slice(), Shape::default()).unwrap(), d);
    }

    #[test]
    fn triples_reject_bad_values() {
        assert!(matches!(
            read_triples("0 0 2\n".as_bytes(), Shape::default()),
            Err(ReadError::Parse { line: 1, .. })
        ));
        assert!(read_triples("0 0\n% 3 3\n".as_bytes(), Shape::default()).is_err());
        assert!(read_triples("% 1 1\n0 3\n".as_bytes(), Shape::default()).is_err());
    }

    #[test]
    fn dense_csv() {
        let d = read_dense_csv("1,0,1\n0,0,1\n".as_bytes()).unwrap();
        assert_eq!(
            d,
            SparseBinaryMatrix::from_dense(&[[1u8, 0, 1], [0, 0, 1]]).unwrap()
        );
        assert!(matches!(
            read_dense_csv("1,0\n1,2\n".as_bytes()),
            Err(ReadError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_dense_csv("1,0\n1\n".as_bytes()),
            Err(ReadError::Parse { line: 2, .. })
        ));
        let mut buf = Vec::new();
        write_dense_csv(&d, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,0,1\n0,0,1\n");
    }

    #[test]
    fn valued_formats() {
        let v = read_valued_csv("1.5,0\n0,2\n".as_bytes()).unwrap();
        assert_eq!(v.get(0, 0), 1.5);
        assert_eq!(v.get(1, 1), 2.0);
        let mut buf = Vec::new();
        write_valued_triples(&v, &mut buf).unwrap();
        assert_eq!(
            read_valued_triples(buf.as_slice(), Shape::default()).unwrap(),
            v
        );
        assert!(read_valued_csv("1,inf\n".as_bytes()).is_err());
    }

    #[test]
    fn format_guess() {
        assert_eq!(Format::from_path(Path::new("a.csv")), Format::Csv);
        assert_eq!(Format::from_path(Path::new("a.TXT")), Format::Triples);
        assert_eq!(Format::from_path(Path::new("mushroom.dat")), Format::Fimi);
    }
}
