use alloc::vec::Vec;

use rand::Rng;

use crate::error::ConfigError;
use crate::math::ceil;
use crate::matrix::SparseBinaryMatrix;
use crate::rng::stream;

/// How randomized databases are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// One Bernoulli draw per cell of the model.
    Naive,
    /// Geometric jumps between ones, per block of the model.
    GeometricGap,
    /// Swap randomization of the data itself.
    Swap,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::GeometricGap => "fast",
            Method::Swap => "swap",
        }
    }

    /// Accepts the names printed by [`Method::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "naive" => Some(Method::Naive),
            "fast" | "geometric-gap" => Some(Method::GeometricGap),
            "swap" => Some(Method::Swap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub method: Method,
    /// Swap attempts per one in the input.
    pub swap_multiplier: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            method: Method::GeometricGap,
            swap_multiplier: 5.0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.swap_multiplier > 0.0 && self.swap_multiplier.is_finite()) {
            return Err(ConfigError::BadSwapMultiplier(self.swap_multiplier));
        }
        Ok(())
    }

    /// `⌈multiplier · s⌉`.
    pub fn swap_attempts(&self, nnz: usize) -> u64 {
        ceil(self.swap_multiplier * nnz as f64) as u64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SwapStats {
    pub attempted: u64,
    pub accepted: u64,
}

pub fn swap_randomize(
    d: &SparseBinaryMatrix,
    config: &SamplerConfig,
) -> Result<SparseBinaryMatrix, ConfigError> {
    swap_randomize_with_stats(d, config).map(|(out, _)| out)
}

/// Runs the swap chain from `d`.
///
/// Each attempt picks two distinct ones `(i, j)` and `(k, l)` uniformly at
/// random and moves them to `(i, l)` and `(k, j)` when both of those are
/// zero. Rejected attempts leave the state unchanged.
pub fn swap_randomize_with_stats(
    d: &SparseBinaryMatrix,
    config: &SamplerConfig,
) -> Result<(SparseBinaryMatrix, SwapStats), ConfigError> {
    config.validate()?;
    let mut out = d.clone();
    let mut ones: Vec<(usize, usize)> = d.ones().collect();
    let s = ones.len();
    let mut stats = SwapStats {
        attempted: config.swap_attempts(s),
        accepted: 0,
    };
    if s < 2 {
        return Ok((out, stats));
    }
    let mut rng = stream(config.seed, 0);
    for _ in 0..stats.attempted {
        let a = rng.gen_range(0..s);
        let mut b = rng.gen_range(0..s - 1);
        if b >= a {
            b += 1;
        }
        let (i, j) = ones[a];
        let (k, l) = ones[b];
        if i == k || j == l || out.get(i, l) || out.get(k, j) {
            continue;
        }
        out.set(i, j, false);
        out.set(k, l, false);
        out.set(i, l, true);
        out.set(k, j, true);
        ones[a] = (i, l);
        ones[b] = (k, j);
        stats.accepted += 1;
    }
    Ok((out, stats))
}
