use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::maxent::{Family, MaxEntModel, TraceEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("row {row}: column index {col} out of range for {n_cols} columns")]
    ColumnOutOfRange {
        row: usize,
        col: usize,
        n_cols: usize,
    },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("cell ({row}, {col}) is not 0 or 1")]
    NotBinary { row: usize, col: usize },
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("row targets sum to {row_total} but column targets sum to {col_total}")]
    InconsistentTotals { row_total: f64, col_total: f64 },
    #[error("{line} target {index} = {value} is outside the feasible range [0, {max}]")]
    TargetOutOfRange {
        line: &'static str,
        index: usize,
        value: f64,
        max: f64,
    },
    #[error("targets are infeasible: {reason}")]
    Infeasible { reason: &'static str },
    #[error(
        "no convergence after {iterations} iterations (normalized squared gradient norm {gradient_norm:e})"
    )]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
        /// Best iterate reached; its convergence record is marked invalid.
        model: Box<MaxEntModel>,
        trace: Vec<TraceEntry>,
    },
}

/// Evaluation of the dual outside its domain (a multiplier sum `>= 0` for
/// the geometric and exponential families).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("multipliers outside the domain of the {0:?} partition function")]
pub struct DomainError(pub Family);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cell ({row}, {col}) out of range for a {n_rows}x{n_cols} model")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("operation requires the {expected:?} family, model is {actual:?}")]
    WrongFamily { expected: Family, actual: Family },
    #[error("model requires a {expected_rows}x{expected_cols} matrix, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("malformed model: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwapError {
    #[error("swap needs distinct rows and columns")]
    Degenerate,
    #[error("swap index out of range")]
    OutOfRange,
    #[error("swap is not allowed for this matrix")]
    NotAllowed,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("tile cell ({row}, {col}) out of range")]
    OutOfRange { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConfigError {
    #[error("description-length probability must lie in (0, 1), got {0}")]
    BadProbability(f64),
    #[error("swap multiplier must be positive, got {0}")]
    BadSwapMultiplier(f64),
    #[error("minimum support must be at least 1")]
    ZeroSupport,
    #[error("embedded tile size must be at least 1")]
    ZeroTileSize,
    #[error("budget must be positive, got {0}")]
    BadBudget(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tile(#[from] TileError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}
