//! Planting a known tile in a database.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::ConfigError;
use crate::matrix::SparseBinaryMatrix;
use crate::rng::stream;
use crate::tiles::Tile;

/// Appends `k` rows and `k` columns to `d` whose intersection is all ones.
///
/// Outside the block, a new row holds each old column with that column's
/// density, and a new column holds each old row with that row's density, so
/// old column and row frequencies are kept in expectation. New row `r` draws
/// from stream `r`, new column `c` from stream `k + c`.
pub fn embed_tile(
    d: &SparseBinaryMatrix,
    k: usize,
    seed: u64,
) -> Result<(SparseBinaryMatrix, Tile), ConfigError> {
    if k == 0 {
        return Err(ConfigError::ZeroTileSize);
    }
    let (m, n) = d.shape();
    let marg = d.marginals();
    let new_cols: Vec<usize> = (n..n + k).collect();

    let mut rows = d.rows().map(<[usize]>::to_vec).collect::<Vec<_>>();
    for c in 0..k {
        let mut rng = stream(seed, (k + c) as u64);
        for (i, row) in rows.iter_mut().enumerate() {
            let p = if n == 0 {
                0.0
            } else {
                marg.row_sums[i] / n as f64
            };
            if rng.gen::<f64>() < p {
                row.push(n + c);
            }
        }
    }
    for r in 0..k {
        let mut rng = stream(seed, r as u64);
        let mut row: Vec<usize> = (0..n)
            .filter(|&j| {
                let p = if m == 0 {
                    0.0
                } else {
                    marg.col_sums[j] / m as f64
                };
                rng.gen::<f64>() < p
            })
            .collect();
        row.extend_from_slice(&new_cols);
        rows.push(row);
    }
    let out = SparseBinaryMatrix::from_rows(n + k, rows).expect("embedded columns are in range");
    Ok((out, Tile::new((m..m + k).collect(), new_cols)))
}
