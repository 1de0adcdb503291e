use alloc::vec::Vec;

use crate::error::ScoreError;
use crate::matrix::SparseBinaryMatrix;
use crate::maxent::MaxEntModel;
use crate::randomize::{sample_fast, sample_naive, swap_randomize, Method, SamplerConfig};
use crate::rng::derive_seed;
use crate::tiles::{closed_size_histogram, MinerConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssessConfig {
    pub num_samples: usize,
    pub miner: MinerConfig,
    /// Sample `r` uses seed `derive_seed(sampler.seed, r)`.
    pub sampler: SamplerConfig,
}

/// Closed-itemset counts for one itemset size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeRow {
    pub size: usize,
    pub observed: u64,
    pub mean: f64,
    pub p5: f64,
    pub p95: f64,
}

/// Counts closed itemsets per size on `d` and on `num_samples` randomized
/// databases, drawn from `model` or by swapping `d`.
pub fn assess_closed_set_sizes(
    d: &SparseBinaryMatrix,
    model: &MaxEntModel,
    config: &AssessConfig,
) -> Result<Vec<SizeRow>, ScoreError> {
    config.miner.validate()?;
    config.sampler.validate()?;
    let observed = closed_size_histogram(d, &config.miner)?;
    let mut samples = Vec::with_capacity(config.num_samples);
    for r in 0..config.num_samples {
        let seed = derive_seed(config.sampler.seed, r as u64);
        let sample = match config.sampler.method {
            Method::Naive => sample_naive(model, seed)?,
            Method::GeometricGap => sample_fast(model, seed)?,
            Method::Swap => swap_randomize(
                d,
                &SamplerConfig {
                    seed,
                    ..config.sampler
                },
            )?,
        };
        samples.push(closed_size_histogram(&sample, &config.miner)?);
    }
    Ok(summarize_histograms(&observed, &samples))
}

/// One row per itemset size from 1 to the largest size seen anywhere;
/// percentiles interpolate linearly between order statistics.
pub fn summarize_histograms(observed: &[u64], samples: &[Vec<u64>]) -> Vec<SizeRow> {
    let max_size = samples
        .iter()
        .map(|h| h.len())
        .chain(core::iter::once(observed.len()))
        .max()
        .unwrap_or(0);
    let at = |h: &[u64], s: usize| h.get(s).copied().unwrap_or(0);
    (1..max_size)
        .map(|size| {
            let mut counts: Vec<f64> = samples.iter().map(|h| at(h, size) as f64).collect();
            counts.sort_by(f64::total_cmp);
            let mean = if counts.is_empty() {
                0.0
            } else {
                counts.iter().sum::<f64>() / counts.len() as f64
            };
            SizeRow {
                size,
                observed: at(observed, size),
                mean,
                p5: percentile(&counts, 0.05),
                p95: percentile(&counts, 0.95),
            }
        })
        .collect()
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => 0.0,
        1 => sorted[0],
        n => {
            let pos = q * (n - 1) as f64;
            let lo = pos as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}
