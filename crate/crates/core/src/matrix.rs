//! Sparse rectangular databases and their row/column marginals.
//!
//! A binary database is stored row-major: each row keeps the sorted column
//! indices of its ones. Zero rows and columns are kept, since they pin the
//! corresponding model probabilities to zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::MatrixError;

/// A binary `m × n` matrix stored as sorted per-row column lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseBinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    nnz: usize,
}

impl SparseBinaryMatrix {
    /// An all-zero matrix.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseBinaryMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
            nnz: 0,
        }
    }

    /// Builds a matrix from per-row column lists. Rows are sorted and
    /// duplicate items collapsed; any index `>= n_cols` is rejected.
    pub fn from_rows(n_cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let mut nnz = 0;
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&last) = row.last() {
                if last >= n_cols {
                    return Err(MatrixError::ColumnOutOfRange {
                        row: i,
                        col: last,
                        n_cols,
                    });
                }
            }
            nnz += row.len();
        }
        Ok(SparseBinaryMatrix {
            n_rows: rows.len(),
            n_cols,
            rows,
            nnz,
        })
    }

    /// Builds a matrix from dense 0/1 rows. All rows must have the same length.
    pub fn from_dense<R: AsRef<[u8]>>(dense: &[R]) -> Result<Self, MatrixError> {
        let n_cols = dense.first().map_or(0, |r| r.as_ref().len());
        let mut rows = Vec::with_capacity(dense.len());
        for (i, r) in dense.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    len: r.len(),
                    expected: n_cols,
                });
            }
            let mut row = Vec::new();
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => row.push(j),
                    _ => return Err(MatrixError::NotBinary { row: i, col: j }),
                }
            }
            rows.push(row);
        }
        Self::from_rows(n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    /// Fraction of cells equal to one; zero for an empty shape.
    pub fn density(&self) -> f64 {
        let cells = self.n_rows as f64 * self.n_cols as f64;
        if cells == 0.0 {
            0.0
        } else {
            self.nnz as f64 / cells
        }
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.rows.iter().map(Vec::as_slice)
    }

    /// All ones in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&j| (i, j)))
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    /// Sets a cell, returning its previous value.
    pub fn set(&mut self, i: usize, j: usize, value: bool) -> bool {
        assert!(j < self.n_cols, "column {j} out of range");
        let row = &mut self.rows[i];
        match (row.binary_search(&j), value) {
            (Ok(_), true) => true,
            (Ok(pos), false) => {
                row.remove(pos);
                self.nnz -= 1;
                true
            }
            (Err(pos), true) => {
                row.insert(pos, j);
                self.nnz += 1;
                false
            }
            (Err(_), false) => false,
        }
    }

    /// Vertical representation: for each column, the sorted rows holding a one.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                cols[j].push(i);
            }
        }
        cols
    }

    pub fn marginals(&self) -> Marginals {
        let mut col_sums = vec![0.0; self.n_cols];
        for row in &self.rows {
            for &j in row {
                col_sums[j] += 1.0;
            }
        }
        Marginals {
            row_sums: self.rows.iter().map(|r| r.len() as f64).collect(),
            col_sums,
        }
    }

    /// Consumes the matrix into its row lists.
    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }
}

/// A sparse matrix with nonnegative real entries, used for integer and
/// real-valued databases. Stored entries are nonzero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValuedMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl ValuedMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        ValuedMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Builds from row-major dense values.
    pub fn from_dense(n_rows: usize, n_cols: usize, values: &[f64]) -> Self {
        assert_eq!(
            values.len(),
            n_rows * n_cols,
            "dense buffer has wrong length"
        );
        let rows = values
            .chunks(n_cols.max(1))
            .take(n_rows)
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(j, &v)| (j, v))
                    .collect()
            })
            .collect();
        ValuedMatrix {
            n_rows,
            n_cols,
            rows,
        }
    }

    pub(crate) fn from_sorted_rows(n_cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        ValuedMatrix {
            n_rows: rows.len(),
            n_cols,
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(j < self.n_cols, "column {j} out of range");
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) if value == 0.0 => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = value,
            Err(_) if value == 0.0 => {}
            Err(pos) => row.insert(pos, (j, value)),
        }
    }

    pub fn marginals(&self) -> Marginals {
        let mut col_sums = vec![0.0; self.n_cols];
        let mut row_sums = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            let mut total = 0.0;
            for &(j, v) in row {
                col_sums[j] += v;
                total += v;
            }
            row_sums.push(total);
        }
        Marginals { row_sums, col_sums }
    }
}

/// Row and column sums, observed or expected.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Marginals {
    pub row_sums: Vec<f64>,
    pub col_sums: Vec<f64>,
}

impl Marginals {
    pub fn new(row_sums: Vec<f64>, col_sums: Vec<f64>) -> Self {
        Marginals { row_sums, col_sums }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_sums.len(), self.col_sums.len())
    }

    pub fn row_total(&self) -> f64 {
        self.row_sums.iter().sum()
    }

    pub fn col_total(&self) -> f64 {
        self.col_sums.iter().sum()
    }
}

/// Uniform cell access for the δ-swap machinery.
pub trait CellMatrix {
    fn shape(&self) -> (usize, usize);
    fn value(&self, i: usize, j: usize) -> f64;
    /// Writes a cell. Binary matrices reject anything but 0 and 1.
    fn set_value(&mut self, i: usize, j: usize, v: f64) -> Result<(), MatrixError>;
}

impl CellMatrix for SparseBinaryMatrix {
    fn shape(&self) -> (usize, usize) {
        SparseBinaryMatrix::shape(self)
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        if self.get(i, j) {
            1.0
        } else {
            0.0
        }
    }

    fn set_value(&mut self, i: usize, j: usize, v: f64) -> Result<(), MatrixError> {
        if v == 0.0 {
            self.set(i, j, false);
        } else if v == 1.0 {
            self.set(i, j, true);
        } else {
            return Err(MatrixError::NotBinary { row: i, col: j });
        }
        Ok(())
    }
}

impl CellMatrix for ValuedMatrix {
    fn shape(&self) -> (usize, usize) {
        ValuedMatrix::shape(self)
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }

    fn set_value(&mut self, i: usize, j: usize, v: f64) -> Result<(), MatrixError> {
        self.set(i, j, v);
        Ok(())
    }
}
