use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{cell_information, check, dl, InterestingnessConfig};
use crate::error::ScoreError;
use crate::maxent::MaxEntModel;
use crate::tiles::Tile;

/// One entry of a greedy ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedTile {
    pub tile: Tile,
    /// Bits for all covered cells.
    pub self_info: f64,
    pub desc_len: f64,
    /// Bits for the cells no earlier tile covers.
    pub incremental_self_info: f64,
    /// `incremental_self_info / desc_len`.
    pub ratio: f64,
    /// 1-based.
    pub rank: usize,
}

/// One entry of the area-coverage baseline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaRanked {
    pub tile: Tile,
    pub area: usize,
    /// Cells no earlier tile covers.
    pub new_cells: usize,
    pub rank: usize,
}

struct Entry {
    key: f64,
    gain: f64,
    /// Position of the candidate in `(I, J)` order.
    order: usize,
    round: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| self.gain.total_cmp(&other.gain))
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Lazy greedy over candidates sorted in `(I, J)` order.
///
/// `gain(c, covered)` must not increase as `covered` grows, and
/// `key = gain / cost`. Stale heap keys are then upper bounds, so a head that
/// is fresh for the current round is the exact maximizer. `visit` returns
/// false to stop.
fn lazy_greedy<G, V>(tiles: &[&Tile], cost: &[f64], mut gain: G, mut visit: V)
where
    G: FnMut(&Tile, &BTreeSet<(usize, usize)>) -> f64,
    V: FnMut(usize, f64) -> bool,
{
    let mut covered = BTreeSet::new();
    let mut heap: BinaryHeap<Entry> = tiles
        .iter()
        .enumerate()
        .map(|(order, t)| {
            let g = gain(t, &covered);
            Entry {
                key: g / cost[order],
                gain: g,
                order,
                round: 0,
            }
        })
        .collect();
    let mut round = 0;
    while let Some(mut head) = heap.pop() {
        if head.round != round {
            head.gain = gain(tiles[head.order], &covered);
            head.key = head.gain / cost[head.order];
            head.round = round;
            heap.push(head);
            continue;
        }
        if !visit(head.order, head.gain) {
            return;
        }
        covered.extend(tiles[head.order].cover_cells());
        round += 1;
    }
}

/// Candidate indices sorted by `(I, J)`, ties by input position.
fn canonical_order(candidates: &[Tile]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    idx.sort_by(|&a, &b| candidates[a].cmp(&candidates[b]).then(a.cmp(&b)));
    idx
}

/// Orders the candidates greedily by compression ratio of their not yet
/// covered cells.
///
/// Each round picks the tile with the highest incremental ratio; ties go to
/// the larger incremental information and then to the smaller `(I, J)`.
/// Candidates are never dropped, so without a budget every candidate is
/// returned. With a budget the list ends before the first tile whose
/// description length would exceed it.
pub fn greedy_select(
    model: &MaxEntModel,
    candidates: &[Tile],
    config: &InterestingnessConfig,
) -> Result<Vec<RankedTile>, ScoreError> {
    greedy_select_top(model, candidates, config, usize::MAX)
}

/// The first `top` entries of [`greedy_select`], without ranking the rest.
pub fn greedy_select_top(
    model: &MaxEntModel,
    candidates: &[Tile],
    config: &InterestingnessConfig,
    top: usize,
) -> Result<Vec<RankedTile>, ScoreError> {
    config.validate()?;
    for t in candidates {
        check(model, t)?;
    }
    let order = canonical_order(candidates);
    let tiles: Vec<&Tile> = order.iter().map(|&c| &candidates[c]).collect();
    let cost: Vec<f64> = tiles
        .iter()
        .map(|t| dl(t.circumference(), config.p, model.shape()))
        .collect();

    let info = |t: &Tile, covered: &BTreeSet<(usize, usize)>| -> f64 {
        t.cover_cells()
            .filter(|c| !covered.contains(c))
            .map(|(i, j)| cell_information(model, i, j))
            .sum()
    };

    let mut out = Vec::new();
    let mut spent = 0.0;
    lazy_greedy(&tiles, &cost, info, |k, gain| {
        let len = cost[k];
        if out.len() == top || config.budget.is_some_and(|u| spent + len > u) {
            return false;
        }
        spent += len;
        let tile = tiles[k].clone();
        let self_info = info(&tile, &BTreeSet::new());
        out.push(RankedTile {
            tile,
            self_info,
            desc_len: len,
            incremental_self_info: gain,
            ratio: gain / len,
            rank: out.len() + 1,
        });
        true
    });
    Ok(out)
}

/// Baseline ranking by covered area: greedily picks the tile covering the
/// most cells not covered before, ties to the smaller `(I, J)`. Stops after
/// `top` tiles.
pub fn area_select(candidates: &[Tile], top: usize) -> Vec<AreaRanked> {
    let order = canonical_order(candidates);
    let tiles: Vec<&Tile> = order.iter().map(|&c| &candidates[c]).collect();
    let cost = alloc::vec![1.0; tiles.len()];
    let fresh = |t: &Tile, covered: &BTreeSet<(usize, usize)>| -> f64 {
        t.cover_cells().filter(|c| !covered.contains(c)).count() as f64
    };
    let mut out = Vec::new();
    lazy_greedy(&tiles, &cost, fresh, |k, gain| {
        if out.len() == top {
            return false;
        }
        out.push(AreaRanked {
            tile: tiles[k].clone(),
            area: tiles[k].area(),
            new_cells: gain as usize,
            rank: out.len() + 1,
        });
        true
    });
    out
}
