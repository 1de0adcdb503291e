use crate::error::SwapError;
use crate::matrix::CellMatrix;
use crate::maxent::{Family, MaxEntModel};

/// Adds `delta` to `(i, j)` and `(k, l)` and subtracts it from `(i, l)` and
/// `(k, j)`, where `rows = (i, k)` and `cols = (j, l)`. Row and column sums
/// are unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSwap {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub delta: f64,
}

impl DeltaSwap {
    pub fn new(rows: (usize, usize), cols: (usize, usize), delta: f64) -> Self {
        DeltaSwap { rows, cols, delta }
    }

    /// The four cells with the sign of their change.
    pub fn cells(&self) -> [(usize, usize, f64); 4] {
        let (i, k) = self.rows;
        let (j, l) = self.cols;
        [(i, j, 1.0), (k, l, 1.0), (i, l, -1.0), (k, j, -1.0)]
    }

    fn check<M: CellMatrix>(&self, d: &M) -> Result<(), SwapError> {
        let (m, n) = d.shape();
        let (i, k) = self.rows;
        let (j, l) = self.cols;
        if i >= m || k >= m || j >= n || l >= n {
            return Err(SwapError::OutOfRange);
        }
        if i == k || j == l {
            return Err(SwapError::Degenerate);
        }
        Ok(())
    }

    /// Whether all four updated cells stay in the value domain of `family`.
    pub fn is_allowed<M: CellMatrix>(&self, d: &M, family: Family) -> Result<bool, SwapError> {
        self.check(d)?;
        Ok(self.delta.is_finite()
            && self
                .cells()
                .iter()
                .all(|&(r, c, sign)| family.contains(d.value(r, c) + sign * self.delta)))
    }

    /// Applies the swap in place, after checking that it is allowed.
    pub fn apply<M: CellMatrix>(&self, d: &mut M, family: Family) -> Result<(), SwapError> {
        if !self.is_allowed(d, family)? {
            return Err(SwapError::NotAllowed);
        }
        if self.delta == 0.0 {
            return Ok(());
        }
        for (r, c, sign) in self.cells() {
            let v = d.value(r, c) + sign * self.delta;
            d.set_value(r, c, v)?;
        }
        Ok(())
    }
}

/// `log P(D′) − log P(D)` where `D′` is `d` after `swap`, from the four
/// touched cells only. Zero up to rounding for every allowed swap.
///
/// If `d` itself has probability zero under the model the result is NaN.
pub fn log_prob_delta<M: CellMatrix>(
    model: &MaxEntModel,
    d: &M,
    swap: &DeltaSwap,
) -> Result<f64, SwapError> {
    let (m, n) = model.shape();
    if d.shape() != (m, n) {
        return Err(SwapError::OutOfRange);
    }
    if !swap.is_allowed(d, model.family())? {
        return Err(SwapError::NotAllowed);
    }
    let mut total = 0.0;
    for (r, c, sign) in swap.cells() {
        let old = d.value(r, c);
        let new = old + sign * swap.delta;
        total += model.cell_log_prob(r, c, new) - model.cell_log_prob(r, c, old);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Marginals, SparseBinaryMatrix, ValuedMatrix};
    use crate::maxent::{fit, FitOptions};

    #[test]
    fn binary_examples() {
        let d = SparseBinaryMatrix::from_dense(&[[1u8, 0], [0, 1]]).unwrap();
        let down = DeltaSwap::new((0, 1), (0, 1), -1.0);
        assert!(down.is_allowed(&d, Family::Bernoulli).unwrap());
        let mut e = d.clone();
        down.apply(&mut e, Family::Bernoulli).unwrap();
        assert_eq!(
            e,
            SparseBinaryMatrix::from_dense(&[[0u8, 1], [1, 0]]).unwrap()
        );

        let blocked = SparseBinaryMatrix::from_dense(&[[1u8, 1], [0, 1]]).unwrap();
        assert!(!down.is_allowed(&blocked, Family::Bernoulli).unwrap());
        let mut b = blocked.clone();
        assert_eq!(
            down.apply(&mut b, Family::Bernoulli),
            Err(SwapError::NotAllowed)
        );
        assert_eq!(b, blocked);
    }

    #[test]
    fn zero_delta_is_identity() {
        let d = SparseBinaryMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1]]).unwrap();
        let swap = DeltaSwap::new((1, 0), (2, 0), 0.0);
        let mut e = d.clone();
        swap.apply(&mut e, Family::Bernoulli).unwrap();
        assert_eq!(e, d);
    }

    #[test]
    fn degenerate_and_out_of_range() {
        let d = SparseBinaryMatrix::zeros(3, 3);
        assert_eq!(
            DeltaSwap::new((0, 0), (0, 1), 1.0).is_allowed(&d, Family::Bernoulli),
            Err(SwapError::Degenerate)
        );
        assert_eq!(
            DeltaSwap::new((0, 3), (0, 1), 1.0).is_allowed(&d, Family::Bernoulli),
            Err(SwapError::OutOfRange)
        );
    }

    #[test]
    fn valued_swap_keeps_marginals_and_probability() {
        let d = ValuedMatrix::from_dense(2, 3, &[2.0, 0.0, 1.0, 3.0, 4.0, 0.5]);
        let model = fit(&d.marginals(), Family::Exponential, &FitOptions::default()).unwrap();
        let swap = DeltaSwap::new((0, 1), (0, 2), 0.75);
        let mut e = d.clone();
        let delta = log_prob_delta(&model, &d, &swap).unwrap();
        swap.apply(&mut e, Family::Exponential).unwrap();
        assert_eq!(e.marginals(), d.marginals());
        assert!(delta.abs() < 1e-12);
        let full = model.log_prob(&e).unwrap() - model.log_prob(&d).unwrap();
        assert!(full.abs() < 1e-10);
        // 0.5 − 0.75 < 0
        assert!(!DeltaSwap::new((0, 1), (0, 2), -0.75)
            .is_allowed(&d, Family::Exponential)
            .unwrap());
    }

    #[test]
    fn geometric_needs_integer_delta() {
        let d = ValuedMatrix::from_dense(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!(DeltaSwap::new((0, 1), (0, 1), -1.0)
            .is_allowed(&d, Family::Geometric)
            .unwrap());
        assert!(!DeltaSwap::new((0, 1), (0, 1), 0.5)
            .is_allowed(&d, Family::Geometric)
            .unwrap());
        assert!(!DeltaSwap::new((0, 1), (0, 1), -3.0)
            .is_allowed(&d, Family::Geometric)
            .unwrap());
    }

    #[test]
    fn model_rejects_shape_mismatch() {
        let model = fit(
            &Marginals::new(alloc::vec![1.0, 1.0], alloc::vec![1.0, 1.0]),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap();
        let d = SparseBinaryMatrix::zeros(3, 3);
        assert!(log_prob_delta(&model, &d, &DeltaSwap::new((0, 1), (0, 1), 1.0)).is_err());
    }
}
