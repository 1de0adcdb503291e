//! Subjective interestingness of tiles under a fitted Bernoulli model.
//!
//! A tile's self-information is the number of bits the model needs to learn
//! that all its cells are one; its description length is the cost of naming
//! its rows and columns. Their quotient, the compression ratio, ranks tiles,
//! and [`greedy_select`] builds a non-redundant list by counting each cell's
//! information only once.

mod assess;
mod greedy;

use alloc::vec::Vec;

pub use assess::{assess_closed_set_sizes, summarize_histograms, AssessConfig, SizeRow};
pub use greedy::{area_select, greedy_select, greedy_select_top, AreaRanked, RankedTile};

use crate::error::{ConfigError, ModelError, ScoreError};
use crate::math::{log2, softplus, LN_2};
use crate::matrix::SparseBinaryMatrix;
use crate::maxent::{Cell, Family, MaxEntModel};
use crate::tiles::Tile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterestingnessConfig {
    /// Membership probability of the row and column code, in `(0, 1)`.
    pub p: f64,
    /// Cap on the summed description length of selected tiles, in bits.
    pub budget: Option<f64>,
}

impl InterestingnessConfig {
    pub fn new(p: f64, budget: Option<f64>) -> Result<Self, ConfigError> {
        let config = InterestingnessConfig { p, budget };
        config.validate()?;
        Ok(config)
    }

    /// Uses the density of `d` as `p`.
    pub fn from_density(d: &SparseBinaryMatrix) -> Result<Self, ConfigError> {
        Self::new(d.density(), None)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(ConfigError::BadProbability(self.p));
        }
        if let Some(u) = self.budget {
            if !(u > 0.0) {
                return Err(ConfigError::BadBudget(u));
            }
        }
        Ok(())
    }
}

/// `−log₂ p` for one cell, `+∞` where the model rules out a one.
pub fn cell_information(model: &MaxEntModel, i: usize, j: usize) -> f64 {
    match model.cell(i, j) {
        Cell::Free(sigma) => softplus(-sigma) / LN_2,
        Cell::Fixed(true) => 0.0,
        Cell::Fixed(false) => f64::INFINITY,
    }
}

fn check(model: &MaxEntModel, tile: &Tile) -> Result<(), ScoreError> {
    if model.family() != Family::Bernoulli {
        return Err(ModelError::WrongFamily {
            expected: Family::Bernoulli,
            actual: model.family(),
        }
        .into());
    }
    tile.check_bounds(model.shape())?;
    Ok(())
}

/// Bits of self-information of the tile being present, summed in row-major
/// cell order.
pub fn self_information(model: &MaxEntModel, tile: &Tile) -> Result<f64, ScoreError> {
    check(model, tile)?;
    Ok(tile
        .cover_cells()
        .map(|(i, j)| cell_information(model, i, j))
        .sum())
}

/// `(|I| + |J|) log₂((1 − p)/p) + (m + n) log₂(1/(1 − p))` bits.
pub fn description_length(
    tile: &Tile,
    config: &InterestingnessConfig,
    shape: (usize, usize),
) -> Result<f64, ConfigError> {
    config.validate()?;
    Ok(dl(tile.circumference(), config.p, shape))
}

pub(crate) fn dl(circumference: usize, p: f64, (m, n): (usize, usize)) -> f64 {
    circumference as f64 * log2((1.0 - p) / p) - (m + n) as f64 * log2(1.0 - p)
}

pub fn compression_ratio(
    model: &MaxEntModel,
    tile: &Tile,
    config: &InterestingnessConfig,
) -> Result<f64, ScoreError> {
    let info = self_information(model, tile)?;
    let len = description_length(tile, config, model.shape())?;
    Ok(info / len)
}

/// Scores of each candidate on its own, in input order.
pub fn score_tiles(
    model: &MaxEntModel,
    candidates: &[Tile],
    config: &InterestingnessConfig,
) -> Result<Vec<(f64, f64, f64)>, ScoreError> {
    config.validate()?;
    candidates
        .iter()
        .map(|t| {
            let info = self_information(model, t)?;
            let len = dl(t.circumference(), config.p, model.shape());
            Ok((info, len, info / len))
        })
        .collect()
}
