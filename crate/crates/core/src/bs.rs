//! Zero-rate Black-Scholes call price and the standard normal CDF.
//!
//! Supplies the auxiliary surrogate input: the price a lognormal model with
//! volatility `√σ₀²` would assign to the same contract.

use crate::error::{BnsError, Result};

/// Inputs to the zero-rate Black-Scholes call formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsInputs {
    pub s0: f64,
    pub sigma: f64,
    pub strike: f64,
    pub maturity: f64,
}

impl BsInputs {
    pub fn new(s0: f64, sigma: f64, strike: f64, maturity: f64) -> Result<Self> {
        for (name, v) in [
            ("s0", s0),
            ("sigma", sigma),
            ("strike", strike),
            ("maturity", maturity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(BnsError::InvalidInput(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self {
            s0,
            sigma,
            strike,
            maturity,
        })
    }
}

/// Standard normal CDF via the complementary error function.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Zero-rate Black-Scholes call `S₀Φ(d₊) - KΦ(d₋)` with
/// `d± = (ln S₀ - ln K)/(σ√T) ± σ√T/2`.
pub fn bs_call(inputs: &BsInputs) -> f64 {
    let sv = inputs.sigma * inputs.maturity.sqrt();
    let log_moneyness = inputs.s0.ln() - inputs.strike.ln();
    let d_plus = log_moneyness / sv + 0.5 * sv;
    let d_minus = d_plus - sv;
    inputs.s0 * norm_cdf(d_plus) - inputs.strike * norm_cdf(d_minus)
}
