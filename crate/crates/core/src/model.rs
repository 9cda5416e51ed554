//! Model parameters, the IG-OU Lévy measure, its closed-form integrals,
//! admissibility checking and the minimal-martingale-measure coefficients.
//!
//! The variance process follows `dσ²_t = -λσ²_t dt + dH_{λt}` where `H` is a
//! driftless subordinator whose Lévy measure is of inverse-Gaussian OU type:
//!
//! ```text
//! ν(dz) = λa / (2√(2π)) · z^{-3/2} (1 + b²z) e^{-b²z/2} dz,   z > 0.
//! ```
//!
//! The measure has infinite total mass (infinite activity), so jumps are
//! truncated downstream; everything here is exact.

use crate::error::{BnsError, Result};

/// Model parameters of the asset/variance pair under the physical measure.
///
/// `alpha` is the drift of the discounted asset; the exponential-form drift
/// `mu` is derived, not stored (see [`mu_from_alpha`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnsParams {
    /// Initial asset price, > 0.
    pub s0: f64,
    /// Drift of the asset under the physical measure.
    pub alpha: f64,
    /// Jump-leverage coefficient, ≤ 0.
    pub rho: f64,
    /// Mean-reversion rate of the variance, > 0.
    pub lambda: f64,
    /// Inverse-Gaussian shape, > 0.
    pub a: f64,
    /// Inverse-Gaussian rate, > 0.
    pub b: f64,
    /// Initial variance, > 0.
    pub sigma0_sq: f64,
}

impl BnsParams {
    pub fn new(
        s0: f64,
        alpha: f64,
        rho: f64,
        lambda: f64,
        a: f64,
        b: f64,
        sigma0_sq: f64,
    ) -> Result<Self> {
        let p = Self {
            s0,
            alpha,
            rho,
            lambda,
            a,
            b,
            sigma0_sq,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(BnsError::InvalidInput(msg.to_string()))
            }
        };
        check(self.s0.is_finite() && self.s0 > 0.0, "s0 must be > 0")?;
        check(self.alpha.is_finite(), "alpha must be finite")?;
        check(self.rho.is_finite() && self.rho <= 0.0, "rho must be <= 0")?;
        check(
            self.lambda.is_finite() && self.lambda > 0.0,
            "lambda must be > 0",
        )?;
        check(self.a.is_finite() && self.a > 0.0, "a must be > 0")?;
        check(self.b.is_finite() && self.b > 0.0, "b must be > 0")?;
        check(
            self.sigma0_sq.is_finite() && self.sigma0_sq > 0.0,
            "sigma0_sq must be > 0",
        )?;
        // Automatic for rho <= 0, asserted so C^rho stays real.
        check(
            self.b * self.b - 4.0 * self.rho > 0.0,
            "b^2 - 4 rho must be > 0",
        )?;
        Ok(())
    }
}

/// European call contract: strike and maturity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub strike: f64,
    pub maturity: f64,
}

impl OptionSpec {
    pub fn new(strike: f64, maturity: f64) -> Result<Self> {
        if !(strike.is_finite() && strike > 0.0) {
            return Err(BnsError::InvalidInput("strike must be > 0".into()));
        }
        if !(maturity.is_finite() && maturity > 0.0) {
            return Err(BnsError::InvalidInput("maturity must be > 0".into()));
        }
        Ok(Self { strike, maturity })
    }
}

/// Outcome of the admissibility check, carrying both condition values so a
/// failure can be reported with numbers rather than a bare verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    /// `b²/2`.
    pub cond1_lhs: f64,
    /// `2·max((1-e^{-λT})/λ, |ρ|)`.
    pub cond1_rhs: f64,
    /// `α / (e^{-λT}σ₀² + C^ρ)`, compared against -1.
    pub cond2_lhs: f64,
    pub pass: bool,
}

/// Lévy density of the IG-OU subordinator at jump size `x > 0`.
///
/// Strictly positive on its domain and divergent as `x → 0⁺` (the measure
/// has infinite activity).
pub fn levy_density(x: f64, p: &BnsParams) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(BnsError::InvalidInput(format!(
            "levy_density requires x > 0, got {x}"
        )));
    }
    Ok(levy_density_unchecked(x, p))
}

#[inline]
pub(crate) fn levy_density_unchecked(x: f64, p: &BnsParams) -> f64 {
    let b_sq = p.b * p.b;
    p.lambda * p.a / (2.0 * (2.0 * std::f64::consts::PI).sqrt())
        * x.powf(-1.5)
        * (1.0 + b_sq * x)
        * (-0.5 * b_sq * x).exp()
}

/// `C^ρ = ∫_0^∞ (e^{ρx} - 1)² ν(dx) = 2ρλa (1/√(b²-4ρ) - 1/√(b²-2ρ))`.
///
/// Non-negative for ρ ≤ 0 and exactly zero at ρ = 0.
pub fn c_rho(p: &BnsParams) -> f64 {
    let b_sq = p.b * p.b;
    2.0 * p.rho * p.lambda * p.a
        * (1.0 / (b_sq - 4.0 * p.rho).sqrt() - 1.0 / (b_sq - 2.0 * p.rho).sqrt())
}

/// `∫_0^∞ (e^{ρx} - 1) ν(dx) = λaρ/√(b²-2ρ)`, the jump contribution to the
/// drift gap between α and μ. Non-positive for ρ ≤ 0.
///
/// The closed form is the standard IG-OU cumulant; the test suite pins it
/// against direct quadrature of the defining integral.
pub fn kappa_bar(p: &BnsParams) -> f64 {
    p.lambda * p.a * p.rho / (p.b * p.b - 2.0 * p.rho).sqrt()
}

/// Exponential-form drift `μ = α - ∫_0^∞ (e^{ρx} - 1) ν(dx)`.
pub fn mu_from_alpha(p: &BnsParams) -> f64 {
    p.alpha - kappa_bar(p)
}

/// Evaluates both admissibility conditions for maturity `t`:
/// `b²/2 > 2((1-e^{-λT})/λ ∨ |ρ|)` and `α/(e^{-λT}σ₀² + C^ρ) > -1`.
pub fn check_assumption(p: &BnsParams, t: f64) -> AdmissibilityReport {
    let cond1_lhs = 0.5 * p.b * p.b;
    let decay = (1.0 - (-p.lambda * t).exp()) / p.lambda;
    let cond1_rhs = 2.0 * decay.max(p.rho.abs());
    let cond2_lhs = p.alpha / ((-p.lambda * t).exp() * p.sigma0_sq + c_rho(p));
    AdmissibilityReport {
        cond1_lhs,
        cond1_rhs,
        cond2_lhs,
        pass: cond1_lhs > cond1_rhs && cond2_lhs > -1.0,
    }
}

/// Market-price-of-risk coefficient `u = α√σ² / (σ² + C^ρ)` of the MMM
/// density's Brownian part.
#[inline]
pub fn mmm_u(sigma_sq: f64, alpha: f64, c_rho: f64) -> f64 {
    alpha * sigma_sq.sqrt() / (sigma_sq + c_rho)
}

/// Jump coefficient `θ = α(e^{ρx} - 1) / (σ² + C^ρ)` of the MMM density.
///
/// Takes the precomputed factor `expm1_rho_x = e^{ρx} - 1`, which the caller
/// caches per jump (it also enters the log-price and the compensator).
/// Along admissible paths `θ < 1`; a value ≥ 1 means the density would lose
/// positivity and is reported as an error.
#[inline]
pub fn mmm_theta(sigma_sq: f64, alpha: f64, c_rho: f64, expm1_rho_x: f64) -> Result<f64> {
    let theta = alpha * expm1_rho_x / (sigma_sq + c_rho);
    if theta >= 1.0 {
        return Err(BnsError::Admissibility(format!(
            "theta = {theta} >= 1 (sigma_sq = {sigma_sq}, alpha = {alpha})"
        )));
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::CalibrationAnchor;
    use approx::assert_relative_eq;

    fn table1(alpha: f64) -> BnsParams {
        CalibrationAnchor::default().params_with_alpha(alpha)
    }

    #[test]
    fn params_reject_bad_values() {
        assert!(BnsParams::new(0.0, 0.5, -1.0, 1.0, 0.1, 10.0, 0.01).is_err());
        assert!(BnsParams::new(1.0, 0.5, 0.1, 1.0, 0.1, 10.0, 0.01).is_err());
        assert!(BnsParams::new(1.0, 0.5, -1.0, 0.0, 0.1, 10.0, 0.01).is_err());
        assert!(BnsParams::new(1.0, 0.5, -1.0, 1.0, 0.1, 10.0, 0.01).is_ok());
    }

    #[test]
    fn levy_density_domain_and_tail() {
        let p = table1(0.5);
        assert!(levy_density(0.0, &p).is_err());
        assert!(levy_density(-1.0, &p).is_err());
        // Exponential tail decay.
        assert!(levy_density(1e3, &p).unwrap() < 1e-300);
        // Divergence toward the origin.
        assert!(levy_density(1e-12, &p).unwrap() > levy_density(1e-6, &p).unwrap());
    }

    #[test]
    fn c_rho_reference_value() {
        let p = table1(0.5);
        assert_relative_eq!(c_rho(&p), 3.7186e-3, max_relative = 1e-3);
        let mut p0 = p;
        p0.rho = 0.0;
        assert_eq!(c_rho(&p0), 0.0);
    }

    #[test]
    fn kappa_bar_reference_value_and_sign() {
        let p = table1(0.5);
        assert_relative_eq!(kappa_bar(&p), -0.071993, max_relative = 1e-4);
        let mut p0 = p;
        p0.rho = 0.0;
        assert_eq!(kappa_bar(&p0), 0.0);
    }

    #[test]
    fn mu_alpha_round_trip() {
        let p = table1(0.5);
        let mu = mu_from_alpha(&p);
        assert_relative_eq!(mu, 0.571993, max_relative = 1e-4);
        assert_relative_eq!(mu + kappa_bar(&p), p.alpha, epsilon = 1e-15);

        let mut p0 = p;
        p0.rho = 0.0;
        assert_eq!(mu_from_alpha(&p0), p0.alpha);
    }

    #[test]
    fn assumption_table1_examples() {
        let rep = check_assumption(&table1(0.5), 1.0);
        assert_relative_eq!(rep.cond1_lhs, 71.7602, max_relative = 1e-5);
        assert_relative_eq!(rep.cond1_rhs, 8.1478, max_relative = 1e-5);
        assert!(rep.cond2_lhs > -1.0);
        assert!(rep.pass);

        let rep = check_assumption(&table1(-0.01), 1.0);
        assert_relative_eq!(rep.cond2_lhs, -2.46, max_relative = 2e-2);
        assert!(!rep.pass);

        // Both conditions slack.
        let p = BnsParams::new(1.0, 0.0, 0.0, 1.0, 0.1, 100.0, 0.01).unwrap();
        assert!(check_assumption(&p, 1.0).pass);
    }

    #[test]
    fn assumption_monotone_in_b() {
        let mut p = table1(0.5);
        let mut prev = check_assumption(&p, 1.0).pass;
        for _ in 0..40 {
            p.b *= 1.2;
            let now = check_assumption(&p, 1.0).pass;
            assert!(!(prev && !now), "raising b flipped the check to fail");
            prev = now;
        }
    }

    #[test]
    fn mmm_u_examples() {
        assert_eq!(mmm_u(0.01, 0.0, 0.001), 0.0);
        assert_relative_eq!(mmm_u(0.0041, 0.5, 0.00372), 4.094, max_relative = 1e-3);
        // Linear in alpha.
        let one = mmm_u(0.02, 0.7, 0.003);
        let two = mmm_u(0.02, 1.4, 0.003);
        assert_relative_eq!(two, 2.0 * one, epsilon = 1e-15);
    }

    #[test]
    fn mmm_theta_signs_and_guard() {
        let g = (-0.5f64).exp_m1(); // e^{ρx}-1 for some ρx < 0
        assert_eq!(mmm_theta(0.01, 0.0, 0.001, g).unwrap(), 0.0);
        assert_eq!(mmm_theta(0.01, 0.5, 0.001, 0.0).unwrap(), 0.0);
        assert!(mmm_theta(0.01, 0.5, 0.001, g).unwrap() <= 0.0);
        // alpha < 0 with a large magnitude trips the positivity guard.
        assert!(mmm_theta(0.0001, -1.0, 0.0001, g).is_err());
    }
}
