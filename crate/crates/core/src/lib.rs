//! Maximum-entropy background models for rectangular databases.
//!
//! Given expected row and column sums, [`maxent::fit`] finds the
//! maximum-entropy distribution over `m × n` matrices with binary, integer or
//! nonnegative real cells. The model factorizes over cells, depends on the
//! data only through one multiplier per *distinct* marginal, and supports:
//!
//! - direct sampling of randomized databases in expected `O(s)` time
//!   ([`randomize::sample_fast`]), next to swap randomization;
//! - δ-swaps, which leave both the marginals and the model probability intact;
//! - scoring tiles by self-information per description bit and greedily
//!   picking a non-redundant tile set ([`interestingness`]);
//! - closed-itemset tile mining ([`tiles`]) and randomization-based assessment
//!   of mining results ([`assess`]).
//!
//! The crate is `no_std` and needs only `alloc`; file formats and the command
//! line live in the `maxtile` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod embed;
pub mod error;
pub mod groups;
pub mod interestingness;
pub mod matrix;
pub mod maxent;
pub mod randomize;
pub mod rng;
pub mod synth;
pub mod tiles;

mod math;

pub use error::{
    ConfigError, DomainError, FitError, MatrixError, ModelError, ScoreError, SwapError, TileError,
};
pub use groups::{group, AxisGroups, Group, MarginalGroups};
pub use matrix::{CellMatrix, Marginals, SparseBinaryMatrix, ValuedMatrix};
pub use maxent::{fit, fit_traced, Cell, Family, FitOptions, MaxEntModel, Solver};
