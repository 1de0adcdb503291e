//! The grouped Lagrange dual.
//!
//! With `K = m̃ + ñ` multipliers laid out as `[row groups.., col groups..]`,
//!
//! ```text
//! L(λ) = Σ_{k,l} m̃_k ñ_l A(λ_k + λ_l) − Σ_k m̃_k λ_k d̃_k − Σ_l ñ_l λ_l d̃_l
//! ```
//!
//! where `A` is the family's log-partition function. All sums run in a fixed
//! order so repeated evaluations are bit-identical.

use alloc::vec;
use alloc::vec::Vec;

use super::Family;
use crate::error::DomainError;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedDual {
    family: Family,
    row_mult: Vec<f64>,
    row_target: Vec<f64>,
    col_mult: Vec<f64>,
    col_target: Vec<f64>,
}

impl GroupedDual {
    /// `rows` and `cols` are `(multiplicity, target)` per group.
    pub fn new(
        family: Family,
        rows: impl IntoIterator<Item = (f64, f64)>,
        cols: impl IntoIterator<Item = (f64, f64)>,
    ) -> Self {
        let (row_mult, row_target) = rows.into_iter().unzip();
        let (col_mult, col_target) = cols.into_iter().unzip();
        GroupedDual {
            family,
            row_mult,
            row_target,
            col_mult,
            col_target,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_row_groups(&self) -> usize {
        self.row_mult.len()
    }

    pub fn n_col_groups(&self) -> usize {
        self.col_mult.len()
    }

    /// Number of free multipliers `m̃ + ñ`.
    pub fn dim(&self) -> usize {
        self.row_mult.len() + self.col_mult.len()
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        assert_eq!(x.len(), self.dim(), "multiplier vector has wrong length");
        x.split_at(self.row_mult.len())
    }

    fn check_domain(&self, x: &[f64]) -> Result<(), DomainError> {
        let (r, c) = self.split(x);
        if self.family == Family::Bernoulli {
            return Ok(());
        }
        // σ is largest at the largest row and column multipliers
        let rmax = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cmax = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if r.is_empty() || c.is_empty() || self.family.in_domain(rmax + cmax) {
            Ok(())
        } else {
            Err(DomainError(self.family))
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, DomainError> {
        self.check_domain(x)?;
        let (r, c) = self.split(x);
        let mut total = 0.0;
        for (k, &lr) in r.iter().enumerate() {
            let mut row = 0.0;
            for (l, &lc) in c.iter().enumerate() {
                row += self.col_mult[l] * self.family.log_partition(lr + lc);
            }
            total += self.row_mult[k] * row;
        }
        for (k, &lr) in r.iter().enumerate() {
            total -= self.row_mult[k] * lr * self.row_target[k];
        }
        for (l, &lc) in c.iter().enumerate() {
            total -= self.col_mult[l] * lc * self.col_target[l];
        }
        Ok(total)
    }

    /// `L(x + t·d) − L(x)`, accurate even when the change is tiny relative
    /// to `L` itself. Used by the line search.
    pub fn change(&self, x: &[f64], d: &[f64], t: f64) -> Result<f64, DomainError> {
        let (r, c) = self.split(x);
        let (dr, dc) = self.split(d);
        let mut total = 0.0;
        for k in 0..r.len() {
            let mut row = 0.0;
            for l in 0..c.len() {
                let delta = t * (dr[k] + dc[l]);
                row += self.col_mult[l]
                    * self
                        .family
                        .log_partition_change(r[k] + c[l], delta)
                        .ok_or(DomainError(self.family))?;
            }
            total += self.row_mult[k] * row;
        }
        for k in 0..r.len() {
            total -= self.row_mult[k] * t * dr[k] * self.row_target[k];
        }
        for l in 0..c.len() {
            total -= self.col_mult[l] * t * dc[l] * self.col_target[l];
        }
        Ok(total)
    }

    /// Expected row-group and column-group sums per member line.
    pub fn expected_sums(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>), DomainError> {
        self.check_domain(x)?;
        let (r, c) = self.split(x);
        let mut rows = vec![0.0; r.len()];
        let mut cols = vec![0.0; c.len()];
        for (k, &lr) in r.iter().enumerate() {
            for (l, &lc) in c.iter().enumerate() {
                let mean = self.family.mean(lr + lc);
                rows[k] += self.col_mult[l] * mean;
                cols[l] += self.row_mult[k] * mean;
            }
        }
        Ok((rows, cols))
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, DomainError> {
        let (rows, cols) = self.expected_sums(x)?;
        let mut g = Vec::with_capacity(self.dim());
        for (k, e) in rows.iter().enumerate() {
            g.push(self.row_mult[k] * (e - self.row_target[k]));
        }
        for (l, e) in cols.iter().enumerate() {
            g.push(self.col_mult[l] * (e - self.col_target[l]));
        }
        Ok(g)
    }

    /// Diagonal of the Hessian, for Jacobi preconditioning.
    pub fn hessian_diagonal(&self, x: &[f64]) -> Result<Vec<f64>, DomainError> {
        self.check_domain(x)?;
        let (r, c) = self.split(x);
        let mut diag = vec![0.0; self.dim()];
        let nr = r.len();
        for (k, &lr) in r.iter().enumerate() {
            for (l, &lc) in c.iter().enumerate() {
                let w = self.row_mult[k] * self.col_mult[l] * self.family.variance(lr + lc);
                diag[k] += w;
                diag[nr + l] += w;
            }
        }
        Ok(diag)
    }

    /// Dense row-major `K × K` Hessian.
    pub fn hessian(&self, x: &[f64]) -> Result<Vec<f64>, DomainError> {
        self.check_domain(x)?;
        let (r, c) = self.split(x);
        let dim = self.dim();
        let nr = r.len();
        let mut h = vec![0.0; dim * dim];
        for (k, &lr) in r.iter().enumerate() {
            for (l, &lc) in c.iter().enumerate() {
                let w = self.row_mult[k] * self.col_mult[l] * self.family.variance(lr + lc);
                h[k * dim + k] += w;
                h[(nr + l) * dim + nr + l] += w;
                h[k * dim + nr + l] = w;
                h[(nr + l) * dim + k] = w;
            }
        }
        Ok(h)
    }

    /// `‖∇L‖² / K`, the convergence measure.
    pub fn normalized_gradient_norm(g: &[f64]) -> f64 {
        if g.is_empty() {
            return 0.0;
        }
        g.iter().map(|v| v * v).sum::<f64>() / g.len() as f64
    }
}
