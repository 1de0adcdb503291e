//! Maximum-entropy distributions over `m × n` matrices with prescribed
//! expected row and column sums.
//!
//! The optimum factorizes into independent cells, cell `(i, j)` following the
//! [`Family`] distribution with natural parameter `λ_i + λ_j`. Lines with equal
//! targets share a multiplier, so a model stores one value per distinct
//! marginal plus the line-to-group map.
//!
//! Lines whose target is at the edge of the feasible range (an empty row, or a
//! binary row that must be all ones) would send their multiplier to ±∞. They
//! are taken out of the optimization and recorded as *fixed*: every cell they
//! determine is exactly 0 or 1. Fixing proceeds in rounds, and a cell lying on
//! both a fixed row and a fixed column takes the value of whichever line was
//! fixed first.

mod dual;
mod family;
mod fit;
mod linalg;

use alloc::vec;
use alloc::vec::Vec;

pub use dual::GroupedDual;
pub use family::Family;
pub use fit::{fit, fit_traced, FitOptions, Solver, TraceEntry};

use crate::error::{DomainError, ModelError};
use crate::groups::AxisGroups;
use crate::matrix::{CellMatrix, Marginals, SparseBinaryMatrix};

/// A line removed from the optimization, with every cell it determines
/// equal to `value` (always `false` outside the Bernoulli family).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedLine {
    pub index: usize,
    pub value: bool,
    /// Fixing round; lower rounds take precedence on shared cells.
    pub order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    pub iterations: usize,
    /// `‖∇L‖² / (m̃ + ñ)` at the final iterate.
    pub gradient_norm: f64,
    pub dual_value: f64,
    pub converged: bool,
}

/// State of one cell under a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Natural parameter `σ = λ_i + λ_j`.
    Free(f64),
    /// Deterministic value (one or zero).
    Fixed(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntModel {
    family: Family,
    n_rows: usize,
    n_cols: usize,
    row_groups: AxisGroups,
    col_groups: AxisGroups,
    row_lambdas: Vec<f64>,
    col_lambdas: Vec<f64>,
    fixed_rows: Vec<FixedLine>,
    fixed_cols: Vec<FixedLine>,
    row_fixed: Vec<Option<(bool, u32)>>,
    col_fixed: Vec<Option<(bool, u32)>>,
    convergence: Convergence,
}

fn fixed_lookup(n: usize, fixed: &[FixedLine]) -> Option<Vec<Option<(bool, u32)>>> {
    let mut out = vec![None; n];
    for f in fixed {
        if f.index >= n || out[f.index].is_some() {
            return None;
        }
        out[f.index] = Some((f.value, f.order));
    }
    Some(out)
}

impl MaxEntModel {
    /// Assembles a model from its stored parts, validating that every line is
    /// either in exactly one group or fixed.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        family: Family,
        row_groups: AxisGroups,
        col_groups: AxisGroups,
        row_lambdas: Vec<f64>,
        col_lambdas: Vec<f64>,
        fixed_rows: Vec<FixedLine>,
        fixed_cols: Vec<FixedLine>,
        convergence: Convergence,
    ) -> Result<Self, ModelError> {
        let n_rows = row_groups.n_lines();
        let n_cols = col_groups.n_lines();
        if row_lambdas.len() != row_groups.len() || col_lambdas.len() != col_groups.len() {
            return Err(ModelError::Malformed("one multiplier per group required"));
        }
        if family != Family::Bernoulli && fixed_rows.iter().chain(&fixed_cols).any(|f| f.value) {
            return Err(ModelError::Malformed("only binary models fix lines to one"));
        }
        let row_fixed =
            fixed_lookup(n_rows, &fixed_rows).ok_or(ModelError::Malformed("bad fixed row list"))?;
        let col_fixed = fixed_lookup(n_cols, &fixed_cols)
            .ok_or(ModelError::Malformed("bad fixed column list"))?;
        for i in 0..n_rows {
            if row_groups.group_of(i).is_some() == row_fixed[i].is_some() {
                return Err(ModelError::Malformed("row must be grouped or fixed"));
            }
        }
        for j in 0..n_cols {
            if col_groups.group_of(j).is_some() == col_fixed[j].is_some() {
                return Err(ModelError::Malformed("column must be grouped or fixed"));
            }
        }
        if family != Family::Bernoulli {
            let rmax = row_lambdas
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            let cmax = col_lambdas
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            if !row_lambdas.is_empty() && !col_lambdas.is_empty() && !family.in_domain(rmax + cmax)
            {
                return Err(ModelError::Malformed(
                    "multipliers outside the family domain",
                ));
            }
        }
        Ok(MaxEntModel {
            family,
            n_rows,
            n_cols,
            row_groups,
            col_groups,
            row_lambdas,
            col_lambdas,
            fixed_rows,
            fixed_cols,
            row_fixed,
            col_fixed,
            convergence,
        })
    }

    /// The same model structure with different group multipliers.
    pub fn with_multipliers(
        &self,
        row_lambdas: Vec<f64>,
        col_lambdas: Vec<f64>,
    ) -> Result<Self, ModelError> {
        Self::from_parts(
            self.family,
            self.row_groups.clone(),
            self.col_groups.clone(),
            row_lambdas,
            col_lambdas,
            self.fixed_rows.clone(),
            self.fixed_cols.clone(),
            self.convergence,
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn row_groups(&self) -> &AxisGroups {
        &self.row_groups
    }

    pub fn col_groups(&self) -> &AxisGroups {
        &self.col_groups
    }

    pub fn row_lambdas(&self) -> &[f64] {
        &self.row_lambdas
    }

    pub fn col_lambdas(&self) -> &[f64] {
        &self.col_lambdas
    }

    pub fn fixed_rows(&self) -> &[FixedLine] {
        &self.fixed_rows
    }

    pub fn fixed_cols(&self) -> &[FixedLine] {
        &self.fixed_cols
    }

    pub fn convergence(&self) -> &Convergence {
        &self.convergence
    }

    /// Number of stored multipliers, `m̃ + ñ`.
    pub fn n_multipliers(&self) -> usize {
        self.row_lambdas.len() + self.col_lambdas.len()
    }

    /// Group multipliers as one vector, rows first.
    pub fn multipliers(&self) -> Vec<f64> {
        let mut x = self.row_lambdas.clone();
        x.extend_from_slice(&self.col_lambdas);
        x
    }

    /// The grouped dual over this model's free groups and reduced targets.
    pub fn dual(&self) -> GroupedDual {
        GroupedDual::new(
            self.family,
            self.row_groups
                .groups()
                .iter()
                .map(|g| (g.multiplicity() as f64, g.value)),
            self.col_groups
                .groups()
                .iter()
                .map(|g| (g.multiplicity() as f64, g.value)),
        )
    }

    pub fn dual_value(&self) -> Result<f64, DomainError> {
        self.dual().value(&self.multipliers())
    }

    pub fn dual_gradient(&self) -> Result<Vec<f64>, DomainError> {
        self.dual().gradient(&self.multipliers())
    }

    /// Dense row-major Hessian of size `(m̃ + ñ)²`.
    pub fn dual_hessian(&self) -> Result<Vec<f64>, DomainError> {
        self.dual().hessian(&self.multipliers())
    }

    /// Natural parameter of a free row group / column group pair.
    pub fn block_sigma(&self, row_group: usize, col_group: usize) -> f64 {
        self.row_lambdas[row_group] + self.col_lambdas[col_group]
    }

    pub(crate) fn row_fixed(&self, i: usize) -> Option<(bool, u32)> {
        self.row_fixed[i]
    }

    /// Resolves a cell in O(1). Panics when out of range.
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        match (self.row_fixed[i], self.col_fixed[j]) {
            (Some((rv, ro)), Some((cv, co))) => Cell::Fixed(if ro <= co { rv } else { cv }),
            (Some((rv, _)), None) => Cell::Fixed(rv),
            (None, Some((cv, _))) => Cell::Fixed(cv),
            (None, None) => {
                let k = self.row_groups.group_of(i).expect("free row has a group");
                let l = self
                    .col_groups
                    .group_of(j)
                    .expect("free column has a group");
                Cell::Free(self.row_lambdas[k] + self.col_lambdas[l])
            }
        }
    }

    pub fn try_cell(&self, i: usize, j: usize) -> Result<Cell, ModelError> {
        if i >= self.n_rows || j >= self.n_cols {
            return Err(ModelError::IndexOutOfRange {
                row: i,
                col: j,
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        Ok(self.cell(i, j))
    }

    /// The family parameter of a cell: success probability (Bernoulli,
    /// geometric) or rate (exponential). Fixed cells give the degenerate
    /// limits: probability 0 or 1, or an infinite rate.
    pub fn cell_param(&self, i: usize, j: usize) -> Result<f64, ModelError> {
        Ok(match self.try_cell(i, j)? {
            Cell::Free(sigma) => self.family.parameter(sigma),
            Cell::Fixed(one) => match self.family {
                Family::Bernoulli => {
                    if one {
                        1.0
                    } else {
                        0.0
                    }
                }
                Family::Geometric => 1.0,
                Family::Exponential => f64::INFINITY,
            },
        })
    }

    /// Expected cell value.
    pub fn cell_mean(&self, i: usize, j: usize) -> f64 {
        match self.cell(i, j) {
            Cell::Free(sigma) => self.family.mean(sigma),
            Cell::Fixed(one) => {
                if one {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `log P(D(i, j) = x)`.
    pub fn cell_log_prob(&self, i: usize, j: usize, x: f64) -> f64 {
        match self.cell(i, j) {
            Cell::Free(sigma) => self.family.log_prob(sigma, x),
            Cell::Fixed(one) => {
                let v = if one { 1.0 } else { 0.0 };
                if x == v {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    fn check_shape(&self, shape: (usize, usize)) -> Result<(), ModelError> {
        if shape != (self.n_rows, self.n_cols) {
            return Err(ModelError::ShapeMismatch {
                expected_rows: self.n_rows,
                expected_cols: self.n_cols,
                rows: shape.0,
                cols: shape.1,
            });
        }
        Ok(())
    }

    /// `log P(D)` by visiting every cell.
    pub fn log_prob<M: CellMatrix>(&self, d: &M) -> Result<f64, ModelError> {
        self.check_shape(d.shape())?;
        let mut total = 0.0;
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                total += self.cell_log_prob(i, j, d.value(i, j));
            }
        }
        Ok(total)
    }

    /// `log P(D)` for a binary matrix in `O(m̃ñ + s)` plus fixed lines.
    pub fn log_prob_binary(&self, d: &SparseBinaryMatrix) -> Result<f64, ModelError> {
        self.check_shape(d.shape())?;
        if self.family != Family::Bernoulli {
            return self.log_prob(d);
        }
        // all-zero matrix first, then correct the cells holding a one
        let mut total = 0.0;
        for (k, rg) in self.row_groups.groups().iter().enumerate() {
            let mut row = 0.0;
            for (l, cg) in self.col_groups.groups().iter().enumerate() {
                row +=
                    cg.multiplicity() as f64 * -self.family.log_partition(self.block_sigma(k, l));
            }
            total += rg.multiplicity() as f64 * row;
        }
        for i in 0..self.n_rows {
            let row_is_fixed = self.row_fixed[i].is_some();
            for j in 0..self.n_cols {
                if row_is_fixed || self.col_fixed[j].is_some() {
                    if let Cell::Fixed(true) = self.cell(i, j) {
                        if !d.get(i, j) {
                            return Ok(f64::NEG_INFINITY);
                        }
                    }
                }
            }
        }
        for (i, j) in d.ones() {
            match self.cell(i, j) {
                Cell::Free(sigma) => total += sigma,
                Cell::Fixed(true) => {}
                Cell::Fixed(false) => return Ok(f64::NEG_INFINITY),
            }
        }
        Ok(total)
    }

    /// Expected row and column sums under the model.
    pub fn expected_marginals(&self) -> Marginals {
        let mut row_sums = vec![0.0; self.n_rows];
        let mut col_sums = vec![0.0; self.n_cols];
        for (k, rg) in self.row_groups.groups().iter().enumerate() {
            for (l, cg) in self.col_groups.groups().iter().enumerate() {
                let mean = self.family.mean(self.block_sigma(k, l));
                let to_row = cg.multiplicity() as f64 * mean;
                let to_col = rg.multiplicity() as f64 * mean;
                for &i in &rg.members {
                    row_sums[i] += to_row;
                }
                for &j in &cg.members {
                    col_sums[j] += to_col;
                }
            }
        }
        // fixed cells only contribute when they are ones
        for f in self.fixed_rows.iter().filter(|f| f.value) {
            for j in 0..self.n_cols {
                if self.cell(f.index, j) == Cell::Fixed(true) {
                    row_sums[f.index] += 1.0;
                    col_sums[j] += 1.0;
                }
            }
        }
        for f in self.fixed_cols.iter().filter(|f| f.value) {
            for i in 0..self.n_rows {
                // cells already counted through their row
                if self.row_fixed[i].is_some_and(|(v, _)| v) {
                    continue;
                }
                if self.cell(i, f.index) == Cell::Fixed(true) {
                    row_sums[i] += 1.0;
                    col_sums[f.index] += 1.0;
                }
            }
        }
        Marginals { row_sums, col_sums }
    }
}
