//! Synthetic databases shaped like common benchmark data.

use alloc::vec::Vec;

use rand::Rng;

use crate::math::exp;
use crate::math::log;
use crate::matrix::SparseBinaryMatrix;
use crate::rng::stream;

/// Shape of a bag-of-words database: documents are rows, words columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextLike {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Expected number of words per document.
    pub mean_len: f64,
    /// Number of frequent words whose frequencies decay slowly.
    pub head: usize,
    /// Decay exponent of word frequency by rank, within the head.
    pub head_exponent: f64,
    /// Decay exponent past the head.
    pub tail_exponent: f64,
    /// Document lengths scale uniformly within `[1 − spread, 1 + spread]`.
    pub spread: f64,
}

impl TextLike {
    /// 900 abstracts over 5000 words, about 49 words each.
    pub fn abstracts() -> Self {
        TextLike {
            n_rows: 900,
            n_cols: 5000,
            mean_len: 48.9,
            head: 60,
            head_exponent: 0.35,
            tail_exponent: 1.0,
            spread: 0.5,
        }
    }

    /// Word frequencies by column, decreasing, scaled to `mean_len`.
    pub fn column_frequencies(&self) -> Vec<f64> {
        let head = self.head.max(1) as f64;
        let weights: Vec<f64> = (1..=self.n_cols)
            .map(|r| {
                let r = r as f64;
                if r <= head {
                    exp(-self.head_exponent * log(r))
                } else {
                    exp(-self.head_exponent * log(head) - self.tail_exponent * log(r / head))
                }
            })
            .collect();
        // scale so that the capped frequencies sum to the mean length
        let (mut lo, mut hi) = (0.0, self.n_cols as f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            let total: f64 = weights.iter().map(|w| (mid * w).min(1.0)).sum();
            if total < self.mean_len {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        weights.iter().map(|w| (lo * w).min(1.0)).collect()
    }

    /// Independent cells with `P(i, j) = min(1, a_i f_j)`; row `i` uses
    /// stream `i`.
    pub fn generate(&self, seed: u64) -> SparseBinaryMatrix {
        let freqs = self.column_frequencies();
        let rows = (0..self.n_rows)
            .map(|i| {
                let mut rng = stream(seed, i as u64);
                let scale = 1.0 + self.spread * (2.0 * rng.gen::<f64>() - 1.0);
                freqs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &f)| rng.gen::<f64>() < scale * f)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        SparseBinaryMatrix::from_rows(self.n_cols, rows).expect("generated columns are in range")
    }
}

/// A categorical table turned into items: every row holds exactly one item
/// per attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct Categorical {
    pub n_rows: usize,
    /// Number of values of each attribute.
    pub arity: Vec<usize>,
    /// Value `v` of an attribute is drawn with weight `(v + 1)^−skew`.
    pub skew: f64,
}

impl Categorical {
    /// 8124 rows, 23 attributes, 120 items.
    pub fn mushroom() -> Self {
        let arity =
            alloc::vec![2, 6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5, 4, 4, 9, 9, 2, 4, 3, 5, 9, 6, 7];
        Categorical {
            n_rows: 8124,
            arity,
            skew: 1.2,
        }
    }

    pub fn n_cols(&self) -> usize {
        self.arity.iter().sum()
    }

    pub fn generate(&self, seed: u64) -> SparseBinaryMatrix {
        let cumulative: Vec<Vec<f64>> = self
            .arity
            .iter()
            .map(|&a| {
                let w: Vec<f64> = (0..a)
                    .map(|v| exp(-self.skew * log((v + 1) as f64)))
                    .collect();
                let total: f64 = w.iter().sum();
                let mut acc = 0.0;
                w.iter()
                    .map(|x| {
                        acc += x / total;
                        acc
                    })
                    .collect()
            })
            .collect();
        let rows = (0..self.n_rows)
            .map(|i| {
                let mut rng = stream(seed, i as u64);
                let mut offset = 0;
                let mut row = Vec::with_capacity(self.arity.len());
                for (a, cum) in self.arity.iter().zip(&cumulative) {
                    let u: f64 = rng.gen();
                    let v = cum.iter().position(|&c| u < c).unwrap_or(a - 1);
                    row.push(offset + v);
                    offset += a;
                }
                row
            })
            .collect();
        SparseBinaryMatrix::from_rows(self.n_cols(), rows).expect("generated columns are in range")
    }
}
