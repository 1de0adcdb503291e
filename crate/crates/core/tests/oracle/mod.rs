//! Independent reference implementations used by the property tests and the
//! acceptance harness. None of them reuse the fitting, mining or greedy code
//! they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use maxtile_core::interestingness::{cell_information, description_length, InterestingnessConfig};
use maxtile_core::tiles::Tile;
use maxtile_core::{MaxEntModel, SparseBinaryMatrix};
use nalgebra::{DMatrix, DVector};

/// Cell probabilities of the maximum-entropy distribution over all `2^{mn}`
/// binary `m × n` matrices whose expected row and column sums equal the
/// targets.
///
/// One multiplier per row and per column, no grouping; the partition function
/// is summed over every outcome, and the dual is minimized by damped Newton
/// with a pseudo-inverse for the gauge direction.
pub fn brute_force_probabilities(rows: &[f64], cols: &[f64]) -> Vec<Vec<f64>> {
    let (m, n) = (rows.len(), cols.len());
    let k = m + n;
    let outcomes = 1usize << (m * n);
    // sufficient statistics of every outcome
    let stats: Vec<Vec<f64>> = (0..outcomes)
        .map(|bits| {
            let mut t = vec![0.0; k];
            for i in 0..m {
                for j in 0..n {
                    if bits >> (i * n + j) & 1 == 1 {
                        t[i] += 1.0;
                        t[m + j] += 1.0;
                    }
                }
            }
            t
        })
        .collect();
    let target: Vec<f64> = rows.iter().chain(cols).copied().collect();

    // L(x) = log Σ exp(x·t) − x·target, with log-sum-exp stabilization
    let weights = |x: &[f64]| -> (f64, Vec<f64>) {
        let e: Vec<f64> = stats
            .iter()
            .map(|t| t.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = e.iter().map(|v| (v - top).exp()).collect();
        let z: f64 = w.iter().sum();
        let lin: f64 = x.iter().zip(&target).map(|(a, b)| a * b).sum();
        (top + z.ln() - lin, w.into_iter().map(|v| v / z).collect())
    };
    let moments = |w: &[f64]| -> (DVector<f64>, DMatrix<f64>) {
        let mut mean = DVector::zeros(k);
        for (p, t) in w.iter().zip(&stats) {
            for a in 0..k {
                mean[a] += p * t[a];
            }
        }
        let mut cov = DMatrix::zeros(k, k);
        for (p, t) in w.iter().zip(&stats) {
            for a in 0..k {
                for b in 0..k {
                    cov[(a, b)] += p * (t[a] - mean[a]) * (t[b] - mean[b]);
                }
            }
        }
        (mean, cov)
    };

    let mut x = vec![0.0; k];
    for _ in 0..500 {
        let (value, w) = weights(&x);
        let (mean, cov) = moments(&w);
        let grad = mean - DVector::from_column_slice(&target);
        if grad.norm() < 1e-13 {
            break;
        }
        let step = cov.pseudo_inverse(1e-12).expect("pseudo-inverse") * &grad;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            if weights(&trial).0 <= value - 1e-4 * t * grad.dot(&step) || t < 1e-12 {
                x = trial;
                break;
            }
            t *= 0.5;
        }
    }

    let (_, w) = weights(&x);
    let mut p = vec![vec![0.0; n]; m];
    for (bits, q) in w.iter().enumerate() {
        for (i, row) in p.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if bits >> (i * n + j) & 1 == 1 {
                    *cell += q;
                }
            }
        }
    }
    p
}

/// Closed tiles with at least `min_support` rows and a nonempty column set,
/// found by checking every column subset.
pub fn brute_force_closed_tiles(d: &SparseBinaryMatrix, min_support: usize) -> BTreeSet<Tile> {
    let n = d.n_cols();
    assert!(n <= 16, "exhaustive enumeration needs a small column count");
    let support = |items: &[usize]| -> Vec<usize> {
        (0..d.n_rows())
            .filter(|&i| items.iter().all(|&j| d.get(i, j)))
            .collect()
    };
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let items: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let rows = support(&items);
        if rows.len() < min_support {
            continue;
        }
        // closed: no column outside the itemset is shared by all supporting rows
        let closed = (0..n)
            .filter(|j| !items.contains(j))
            .all(|j| !rows.iter().all(|&i| d.get(i, j)));
        if closed {
            out.insert(Tile::new(rows, items));
        }
    }
    out
}

/// One entry of the naive greedy ranking: tile, self-information,
/// description length, incremental information, ratio.
pub type NaiveEntry = (Tile, f64, f64, f64, f64);

/// Greedy selection that re-scores every remaining candidate in every round.
///
/// Ties on the ratio go to the larger incremental information, then to the
/// smaller `(I, J)`, then to the earlier input position. With a budget the
/// list stops before the first pick that would exceed it.
pub fn naive_greedy(
    model: &MaxEntModel,
    candidates: &[Tile],
    config: &InterestingnessConfig,
) -> Vec<NaiveEntry> {
    let shape = model.shape();
    let info = |t: &Tile, covered: &BTreeSet<(usize, usize)>| -> f64 {
        t.cover_cells()
            .filter(|c| !covered.contains(c))
            .map(|(i, j)| cell_information(model, i, j))
            .sum()
    };
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut covered = BTreeSet::new();
    let mut spent = 0.0;
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, f64, f64)> = None;
        for (pos, &c) in remaining.iter().enumerate() {
            let tile = &candidates[c];
            let gain = info(tile, &covered);
            let ratio = gain / description_length(tile, config, shape).unwrap();
            let better = match best {
                None => true,
                Some((bpos, bgain, bratio)) => {
                    let b = remaining[bpos];
                    ratio
                        .total_cmp(&bratio)
                        .then(gain.total_cmp(&bgain))
                        .then(candidates[b].cmp(tile))
                        .then(b.cmp(&c))
                        .is_gt()
                }
            };
            if better {
                best = Some((pos, gain, ratio));
            }
        }
        let (pos, gain, ratio) = best.unwrap();
        let tile = candidates[remaining.remove(pos)].clone();
        let len = description_length(&tile, config, shape).unwrap();
        if config.budget.is_some_and(|u| spent + len > u) {
            break;
        }
        spent += len;
        let self_info = info(&tile, &BTreeSet::new());
        covered.extend(tile.cover_cells());
        out.push((tile, self_info, len, gain, ratio));
    }
    out
}
