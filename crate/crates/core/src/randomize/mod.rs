//! Randomized databases: direct samples from a fitted model, swap
//! randomization, and δ-swaps.

mod delta;
mod sample;
mod swap;

pub use delta::{log_prob_delta, DeltaSwap};
pub use sample::{
    sample_fast, sample_fast_with_stats, sample_naive, sample_naive_with_stats, sample_valued,
    sample_valued_with_stats, SampleStats,
};
pub use swap::{swap_randomize, swap_randomize_with_stats, Method, SamplerConfig, SwapStats};
