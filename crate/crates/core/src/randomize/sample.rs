use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::ModelError;
use crate::math::{floor, log, sigmoid, softplus};
use crate::matrix::{SparseBinaryMatrix, ValuedMatrix};
use crate::maxent::{Cell, Family, MaxEntModel};
use crate::rng::{open_unit, stream};

/// Counters from one model sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleStats {
    /// Uniform variates consumed.
    pub draws: u64,
    /// Ones (or nonzeros) emitted.
    pub ones: u64,
}

fn require(model: &MaxEntModel, bernoulli: bool) -> Result<(), ModelError> {
    let family = model.family();
    match (bernoulli, family) {
        (true, Family::Bernoulli) => Ok(()),
        (true, actual) => Err(ModelError::WrongFamily {
            expected: Family::Bernoulli,
            actual,
        }),
        (false, Family::Bernoulli) => Err(ModelError::WrongFamily {
            expected: Family::Geometric,
            actual: Family::Bernoulli,
        }),
        (false, _) => Ok(()),
    }
}

/// Draws every cell independently, one uniform per cell, in row-major order.
pub fn sample_naive(model: &MaxEntModel, seed: u64) -> Result<SparseBinaryMatrix, ModelError> {
    sample_naive_with_stats(model, seed).map(|(d, _)| d)
}

pub fn sample_naive_with_stats(
    model: &MaxEntModel,
    seed: u64,
) -> Result<(SparseBinaryMatrix, SampleStats), ModelError> {
    require(model, true)?;
    let (m, n) = model.shape();
    let mut rng = stream(seed, 0);
    let mut stats = SampleStats::default();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::new();
        for j in 0..n {
            let p = model.cell_param(i, j)?;
            stats.draws += 1;
            if rng.gen::<f64>() < p {
                row.push(j);
            }
        }
        stats.ones += row.len() as u64;
        rows.push(row);
    }
    let d = SparseBinaryMatrix::from_rows(n, rows).expect("sampled columns are in range");
    Ok((d, stats))
}

/// Samples in expected `O(s)` time by jumping between ones.
///
/// Cells sharing a row group and a column group have the same success
/// probability, so each such block is walked in row-major order (group
/// members of the row group major, of the column group minor) and the gap
/// to the next one is drawn from the geometric distribution. Block `(k, l)`
/// uses stream `k · ñ + l`. Cells on fixed lines are emitted without draws.
pub fn sample_fast(model: &MaxEntModel, seed: u64) -> Result<SparseBinaryMatrix, ModelError> {
    sample_fast_with_stats(model, seed).map(|(d, _)| d)
}

pub fn sample_fast_with_stats(
    model: &MaxEntModel,
    seed: u64,
) -> Result<(SparseBinaryMatrix, SampleStats), ModelError> {
    require(model, true)?;
    let (m, n) = model.shape();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut stats = SampleStats::default();

    let col_groups = model.col_groups().groups();
    let n_col_groups = col_groups.len() as u64;
    for (k, rg) in model.row_groups().groups().iter().enumerate() {
        for (l, cg) in col_groups.iter().enumerate() {
            let sigma = model.block_sigma(k, l);
            let width = cg.members.len() as u64;
            let size = rg.members.len() as u64 * width;
            let p = sigmoid(sigma);
            if p <= 0.0 {
                continue;
            }
            if p >= 1.0 {
                for &i in &rg.members {
                    rows[i].extend_from_slice(&cg.members);
                }
                stats.ones += size;
                continue;
            }
            // ln(1 − p) without cancellation
            let log_q = -softplus(sigma);
            let mut rng = stream(seed, k as u64 * n_col_groups + l as u64);
            let mut pos = 0u64;
            loop {
                let u = open_unit(&mut rng);
                stats.draws += 1;
                let gap = floor(log(u) / log_q);
                if gap >= (size - pos) as f64 {
                    break;
                }
                pos += gap as u64;
                rows[rg.members[(pos / width) as usize]].push(cg.members[(pos % width) as usize]);
                stats.ones += 1;
                pos += 1;
                if pos >= size {
                    break;
                }
            }
        }
    }

    for f in model.fixed_rows().iter().filter(|f| f.value) {
        for j in 0..n {
            if model.cell(f.index, j) == Cell::Fixed(true) {
                rows[f.index].push(j);
                stats.ones += 1;
            }
        }
    }
    for f in model.fixed_cols().iter().filter(|f| f.value) {
        for (i, row) in rows.iter_mut().enumerate() {
            if model.row_fixed(i).is_some_and(|(one, _)| one) {
                continue;
            }
            if model.cell(i, f.index) == Cell::Fixed(true) {
                row.push(f.index);
                stats.ones += 1;
            }
        }
    }

    let d = SparseBinaryMatrix::from_rows(n, rows).expect("sampled columns are in range");
    Ok((d, stats))
}

/// Samples a geometric or exponential model cell by cell; row `i` uses
/// stream `i`. Geometric cells use the inverse CDF `⌊ln U / ln q⌋` with
/// `q = e^σ`, exponential cells `−ln U / rate`.
pub fn sample_valued(model: &MaxEntModel, seed: u64) -> Result<ValuedMatrix, ModelError> {
    sample_valued_with_stats(model, seed).map(|(d, _)| d)
}

pub fn sample_valued_with_stats(
    model: &MaxEntModel,
    seed: u64,
) -> Result<(ValuedMatrix, SampleStats), ModelError> {
    require(model, false)?;
    let family = model.family();
    let (m, n) = model.shape();
    let mut stats = SampleStats::default();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut rng = stream(seed, i as u64);
        let mut row = Vec::new();
        for j in 0..n {
            let Cell::Free(sigma) = model.cell(i, j) else {
                continue;
            };
            let u = open_unit(&mut rng);
            stats.draws += 1;
            let x = match family {
                Family::Geometric => floor(log(u) / sigma),
                _ => log(u) / sigma,
            };
            if x != 0.0 {
                row.push((j, x));
            }
        }
        stats.ones += row.len() as u64;
        rows.push(row);
    }
    Ok((ValuedMatrix::from_sorted_rows(n, rows), stats))
}
