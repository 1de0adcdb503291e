//! Tiles and closed-itemset tile mining.
//!
//! Rows are transactions and columns are items. Every closed itemset `C`
//! with enough support yields the tile `(supp(C), C)`, whose rows are all
//! transactions containing `C`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{ConfigError, TileError};
use crate::matrix::SparseBinaryMatrix;

/// A row set `I` and a column set `J`, both sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Tile {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Tile { rows, cols }
    }

    /// `|I| · |J|`.
    pub fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    /// `|I| + |J|`.
    pub fn circumference(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }

    /// Covered cells in row-major order.
    pub fn cover_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(move |&i| self.cols.iter().map(move |&j| (i, j)))
    }

    /// Whether `other` covers every cell of `self`.
    pub fn is_subtile_of(&self, other: &Tile) -> bool {
        is_sorted_subset(&self.rows, &other.rows) && is_sorted_subset(&self.cols, &other.cols)
    }

    pub fn check_bounds(&self, shape: (usize, usize)) -> Result<(), TileError> {
        let row = self.rows.last().copied().unwrap_or(0);
        let col = self.cols.last().copied().unwrap_or(0);
        let bad_row = self.rows.last().is_some_and(|&i| i >= shape.0);
        let bad_col = self.cols.last().is_some_and(|&j| j >= shape.1);
        if bad_row || bad_col {
            return Err(TileError::OutOfRange { row, col });
        }
        Ok(())
    }

    /// Every covered cell of `d` is one. Degenerate tiles are vacuously
    /// present.
    pub fn is_present(&self, d: &SparseBinaryMatrix) -> Result<bool, TileError> {
        self.check_bounds(d.shape())?;
        Ok(self
            .rows
            .iter()
            .all(|&i| is_sorted_subset(&self.cols, d.row(i))))
    }
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    'outer: for &x in small {
        for &y in it.by_ref() {
            match y.cmp(&x) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinerConfig {
    /// Minimum number of supporting rows.
    pub min_support: usize,
}

impl MinerConfig {
    pub fn new(min_support: usize) -> Result<Self, ConfigError> {
        let config = MinerConfig { min_support };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.min_support == 0 {
            return Err(ConfigError::ZeroSupport);
        }
        Ok(())
    }
}

/// All closed tiles with support at least `min_support`, ordered by
/// descending support and then lexicographically by column set.
pub fn mine_closed_tiles(
    d: &SparseBinaryMatrix,
    config: &MinerConfig,
) -> Result<Vec<Tile>, ConfigError> {
    let mut tiles = Vec::new();
    visit_closed(d, config, |rows, cols| {
        tiles.push(Tile::new(rows.to_vec(), cols.to_vec()))
    })?;
    tiles.sort_by(|a, b| {
        b.rows
            .len()
            .cmp(&a.rows.len())
            .then_with(|| a.cols.cmp(&b.cols))
    });
    Ok(tiles)
}

/// Calls `visit(support, itemset)` once per nonempty closed itemset, in
/// depth-first order.
///
/// The search extends each closed set `P` only by items after its core item
/// and keeps an extension only if its closure adds no item before the new
/// one (prefix-preserving closure), so every closed set is reached exactly
/// once. Support sets of all extensions are gathered in one pass over the
/// transactions of `P`.
pub fn visit_closed<F>(
    d: &SparseBinaryMatrix,
    config: &MinerConfig,
    mut visit: F,
) -> Result<(), ConfigError>
where
    F: FnMut(&[usize], &[usize]),
{
    config.validate()?;
    let m = d.n_rows();
    if m < config.min_support {
        return Ok(());
    }
    let miner = Miner {
        d,
        min_support: config.min_support,
    };
    let all: Vec<usize> = (0..m).collect();
    miner.expand(Vec::new(), &all, None, &mut visit);
    Ok(())
}

struct Miner<'a> {
    d: &'a SparseBinaryMatrix,
    min_support: usize,
}

impl Miner<'_> {
    /// `prefix` is `P ∩ {..=core}`; the rest of the closure is found here.
    fn expand<F: FnMut(&[usize], &[usize])>(
        &self,
        mut itemset: Vec<usize>,
        tids: &[usize],
        core: Option<usize>,
        visit: &mut F,
    ) {
        let first = core.map_or(0, |c| c + 1);
        let mut occ: Vec<(usize, usize)> = Vec::new();
        for &t in tids {
            let row = self.d.row(t);
            let start = row.partition_point(|&x| x < first);
            occ.extend(row[start..].iter().map(|&e| (e, t)));
        }
        // stable, so tids stay sorted within each item
        occ.sort_by_key(|&(e, _)| e);

        let mut buckets: Vec<(usize, &[(usize, usize)])> = Vec::new();
        for chunk in occ.chunk_by(|a, b| a.0 == b.0) {
            let e = chunk[0].0;
            if chunk.len() == tids.len() {
                itemset.push(e);
            } else if chunk.len() >= self.min_support {
                buckets.push((e, chunk));
            }
        }
        if !itemset.is_empty() {
            visit(tids, &itemset);
        }

        for (e, chunk) in buckets {
            let child: Vec<usize> = chunk.iter().map(|&(_, t)| t).collect();
            if self.breaks_prefix(&itemset, &child, e) {
                continue;
            }
            let mut next = Vec::with_capacity(itemset.len() + 1);
            next.extend(itemset.iter().copied().filter(|&x| x < e));
            next.push(e);
            self.expand(next, &child, Some(e), visit);
        }
    }

    /// Whether some item before `e` outside `itemset` occurs in all of `tids`.
    fn breaks_prefix(&self, itemset: &[usize], tids: &[usize], e: usize) -> bool {
        let (head, rest) = tids.split_first().expect("extensions have support");
        let row = self.d.row(*head);
        let mut inside = itemset.iter().peekable();
        for &x in row.iter().take_while(|&&x| x < e) {
            while inside.next_if(|&&y| y < x).is_some() {}
            if inside.peek() == Some(&&x) {
                continue;
            }
            if rest
                .iter()
                .all(|&t| self.d.row(t).binary_search(&x).is_ok())
            {
                return true;
            }
        }
        false
    }
}

/// Number of closed itemsets per itemset size; index 0 is always 0.
pub fn closed_size_histogram(
    d: &SparseBinaryMatrix,
    config: &MinerConfig,
) -> Result<Vec<u64>, ConfigError> {
    let mut hist: Vec<u64> = Vec::new();
    visit_closed(d, config, |_, items| {
        if hist.len() <= items.len() {
            hist.resize(items.len() + 1, 0);
        }
        hist[items.len()] += 1;
    })?;
    Ok(hist)
}
