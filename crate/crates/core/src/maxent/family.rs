use crate::math::{exp, expm1, floor, log, log1p, sigmoid, softplus};

/// Value domain of the matrix cells and the matching per-cell distribution.
///
/// Every family is an exponential family in the cell value `x` with natural
/// parameter `σ = λ_row + λ_col`, so `log P(x) = σx − A(σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Cells in {0, 1}.
    Bernoulli,
    /// Cells in ℕ; requires `σ < 0`.
    Geometric,
    /// Cells in ℝ⁺; requires `σ < 0`.
    Exponential,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Geometric => "geometric",
            Family::Exponential => "exponential",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "bernoulli" => Some(Family::Bernoulli),
            "geometric" => Some(Family::Geometric),
            "exponential" => Some(Family::Exponential),
            _ => None,
        }
    }

    /// Whether the partition function converges at `σ`.
    pub fn in_domain(self, sigma: f64) -> bool {
        match self {
            Family::Bernoulli => sigma.is_finite(),
            Family::Geometric | Family::Exponential => sigma < 0.0,
        }
    }

    /// Whether `x` is a possible cell value.
    pub fn contains(self, x: f64) -> bool {
        match self {
            Family::Bernoulli => x == 0.0 || x == 1.0,
            Family::Geometric => x >= 0.0 && x.is_finite() && floor(x) == x,
            Family::Exponential => x >= 0.0 && x.is_finite(),
        }
    }

    /// `A(σ) = log Z(σ)`, natural log. Caller ensures `in_domain(σ)`.
    pub fn log_partition(self, sigma: f64) -> f64 {
        match self {
            Family::Bernoulli => softplus(sigma),
            Family::Geometric => -log(-expm1(sigma)),
            Family::Exponential => -log(-sigma),
        }
    }

    /// `A(σ + δ) − A(σ)`, computed without forming either term so that small
    /// changes keep full relative precision. `None` if `σ + δ` leaves the domain.
    pub fn log_partition_change(self, sigma: f64, delta: f64) -> Option<f64> {
        if !self.in_domain(sigma + delta) {
            return None;
        }
        let change = match self {
            Family::Bernoulli => {
                if delta.abs() > 30.0 {
                    softplus(sigma + delta) - softplus(sigma)
                } else {
                    log1p(sigmoid(sigma) * expm1(delta))
                }
            }
            Family::Geometric => {
                let arg = -self.mean(sigma) * expm1(delta);
                if arg <= -1.0 {
                    return None;
                }
                -log1p(arg)
            }
            Family::Exponential => -log1p(delta / sigma),
        };
        if change.is_finite() {
            Some(change)
        } else {
            None
        }
    }

    /// `A'(σ)`, the expected cell value.
    pub fn mean(self, sigma: f64) -> f64 {
        match self {
            Family::Bernoulli => sigmoid(sigma),
            Family::Geometric => exp(sigma) / -expm1(sigma),
            Family::Exponential => -1.0 / sigma,
        }
    }

    /// `A''(σ)`, the cell variance.
    pub fn variance(self, sigma: f64) -> f64 {
        match self {
            Family::Bernoulli => {
                let p = sigmoid(sigma);
                p * (1.0 - p)
            }
            Family::Geometric => {
                let m = self.mean(sigma);
                m * (1.0 + m)
            }
            Family::Exponential => 1.0 / (sigma * sigma),
        }
    }

    /// The family's usual parameter: success probability for Bernoulli and
    /// geometric cells, rate for exponential cells.
    pub fn parameter(self, sigma: f64) -> f64 {
        match self {
            Family::Bernoulli => sigmoid(sigma),
            Family::Geometric => -expm1(sigma),
            Family::Exponential => -sigma,
        }
    }

    /// `log P(x)` (a log density for the exponential family).
    pub fn log_prob(self, sigma: f64, x: f64) -> f64 {
        if !self.contains(x) {
            return f64::NEG_INFINITY;
        }
        sigma * x - self.log_partition(sigma)
    }
}
