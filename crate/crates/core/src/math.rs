//! Scalar helpers on top of `libm`, so results are identical with or without `std`.

pub(crate) use libm::{exp, expm1, floor, log, log1p, sqrt};

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// `ln(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + log1p(exp(-x))
    } else {
        log1p(exp(x))
    }
}

/// `e^x / (1 + e^x)`.
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

pub(crate) fn log2(x: f64) -> f64 {
    log(x) / LN_2
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softplus_is_stable_at_extremes() {
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0 && softplus(-1000.0) < 1e-300);
        assert!((softplus(0.0) - LN_2).abs() < 1e-16);
    }

    #[test]
    fn sigmoid_symmetry() {
        for &x in &[-30.0, -2.5, 0.0, 0.7, 40.0] {
            assert!((sigmoid(x) + sigmoid(-x) - 1.0).abs() < 1e-15);
        }
        assert_eq!(sigmoid(0.0), 0.5);
    }
}
