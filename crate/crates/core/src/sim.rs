//! Random-variate generation and path construction for the IG-OU variance
//! process with a small-jump-truncated subordinator representation.
//!
//! Jumps below the truncation level `ε` are deleted and (by default)
//! replaced by their mean drift in the variance dynamics; jumps above `ε`
//! form a compound Poisson process with rate `Λ_ε = ∫_ε^∞ ν(dx)` and sizes
//! drawn by inverse-CDF lookup against the exact truncated tail mass.
//!
//! Every path owns an independent ChaCha8 substream derived from
//! `(seed, path index)`, so path-level parallelism is reproducible
//! regardless of thread schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{BnsError, Result};
use crate::model::BnsParams;

/// Monte Carlo controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Number of simulated paths.
    pub n_paths: usize,
    /// Time step of the pricing grid.
    pub dt: f64,
    /// Jump-size truncation level (variance units).
    pub eps_trunc: f64,
    /// Replace deleted small jumps by their mean drift in the variance.
    pub small_jump_drift: bool,
    /// Fixed-node count of the density compensator quadrature.
    pub quad_nodes: usize,
    /// Base seed; per-path substreams derive from it.
    pub seed: u64,
    /// Inverse-CDF table resolution of the jump sampler.
    pub inv_cdf_table_size: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_paths: 1000,
            dt: 0.01,
            eps_trunc: 1e-4,
            small_jump_drift: true,
            quad_nodes: 200,
            seed: 1,
            inv_cdf_table_size: 4096,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(BnsError::Config("n_paths must be >= 1".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(BnsError::Config("dt must be > 0".into()));
        }
        if !(self.eps_trunc.is_finite() && self.eps_trunc > 0.0) {
            return Err(BnsError::Config("eps_trunc must be > 0".into()));
        }
        if self.quad_nodes < 8 {
            return Err(BnsError::Config("quad_nodes must be >= 8".into()));
        }
        if self.inv_cdf_table_size < 16 {
            return Err(BnsError::Config("inv_cdf_table_size must be >= 16".into()));
        }
        Ok(())
    }
}

/// One realized subordinator atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub size: f64,
}

/// Realized jumps of one path, sorted by time, all sizes above the
/// truncation level.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JumpList {
    pub events: Vec<Jump>,
}

/// SplitMix64 step, used to derive independent substreams.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derives the substream seed for `(seed, stream index)`.
#[inline]
pub fn derive_stream(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x517cc1b727220a95)))
}

/// Seeded ChaCha8 generator for one substream.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_stream(seed, index))
}

// Incomplete integrals of x^p e^{-cx} used by the truncated-measure closed
// forms, expressed through the (complementary) error function.

#[inline]
fn int_tail_neg_half(eps: f64, c: f64) -> f64 {
    (std::f64::consts::PI / c).sqrt() * libm::erfc((c * eps).sqrt())
}

#[inline]
fn int_tail_neg_three_half(eps: f64, c: f64) -> f64 {
    2.0 * (-c * eps).exp() / eps.sqrt()
        - 2.0 * (std::f64::consts::PI * c).sqrt() * libm::erfc((c * eps).sqrt())
}

#[inline]
fn int_head_neg_half(eps: f64, c: f64) -> f64 {
    (std::f64::consts::PI / c).sqrt() * libm::erf((c * eps).sqrt())
}

#[inline]
fn int_head_pos_half(eps: f64, c: f64) -> f64 {
    (int_head_neg_half(eps, c) - 2.0 * eps.sqrt() * (-c * eps).exp()) / (2.0 * c)
}

/// Truncated-measure rate `Λ_ε = ∫_ε^∞ ν(dx)`, in closed form.
/// Diverges as ε → 0 (the measure has infinite activity).
pub fn tail_mass(eps: f64, p: &BnsParams) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(BnsError::InvalidInput(format!(
            "tail_mass requires eps > 0, got {eps}"
        )));
    }
    let c = 0.5 * p.b * p.b;
    let coef = p.lambda * p.a / (2.0 * (2.0 * std::f64::consts::PI).sqrt());
    Ok(coef * (int_tail_neg_three_half(eps, c) + p.b * p.b * int_tail_neg_half(eps, c)))
}

/// Deleted-mass drift rate `μ_ε = ∫_0^ε x ν(dx)`, finite despite the
/// infinite activity. The total `∫_0^∞ x ν(dx)` is `λa/b`.
pub fn small_jump_mean(eps: f64, p: &BnsParams) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(BnsError::InvalidInput(format!(
            "small_jump_mean requires eps > 0, got {eps}"
        )));
    }
    let c = 0.5 * p.b * p.b;
    let coef = p.lambda * p.a / (2.0 * (2.0 * std::f64::consts::PI).sqrt());
    Ok(coef * (int_head_neg_half(eps, c) + p.b * p.b * int_head_pos_half(eps, c)))
}

/// Mean size of one sampled jump, `(∫_ε^∞ x ν(dx)) / Λ_ε`.
pub fn truncated_jump_mean(eps: f64, p: &BnsParams) -> Result<f64> {
    let total = p.lambda * p.a / p.b;
    Ok((total - small_jump_mean(eps, p)?) / tail_mass(eps, p)?)
}

/// Inverse-CDF sampler for the normalized truncated density `ν/Λ_ε` on
/// `(ε, x_max]`, where `x_max` leaves tail mass below `1e-12 · Λ_ε`.
///
/// Table nodes are log-spaced in jump size; the CDF at each node comes from
/// the closed-form tail mass, and sampling uses binary search plus monotone
/// cubic (Fritsch-Carlson) interpolation.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    pub eps: f64,
    pub x_max: f64,
    pub lambda_eps: f64,
    /// CDF values, strictly increasing from 0.
    u: Vec<f64>,
    /// Jump sizes at the CDF nodes.
    x: Vec<f64>,
    /// PCHIP tangents dx/du at the nodes.
    slope: Vec<f64>,
}

impl JumpSampler {
    pub fn build(eps: f64, p: &BnsParams, table_size: usize) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(BnsError::InvalidInput(format!(
                "jump sampler requires eps > 0, got {eps}"
            )));
        }
        if table_size < 16 {
            return Err(BnsError::Config(format!(
                "inv_cdf_table_size must be >= 16, got {table_size}"
            )));
        }
        let lambda_eps = tail_mass(eps, p)?;
        let mut x_max = eps.max(1e-6);
        while tail_mass(x_max, p)? > 1e-12 * lambda_eps && x_max < 1e9 {
            x_max *= 2.0;
        }

        let ln_lo = eps.ln();
        let ln_hi = x_max.ln();
        let mut x = Vec::with_capacity(table_size);
        let mut u = Vec::with_capacity(table_size);
        for j in 0..table_size {
            let xx = (ln_lo + (ln_hi - ln_lo) * j as f64 / (table_size - 1) as f64).exp();
            let uu = if j == 0 {
                0.0
            } else {
                (lambda_eps - tail_mass(xx, p)?) / lambda_eps
            };
            // Drop nodes once the CDF saturates; the residual is collapsed
            // onto x_max at sampling time.
            if let Some(&last) = u.last() {
                if uu <= last + 1e-15 {
                    break;
                }
            }
            x.push(xx);
            u.push(uu);
        }
        if x.len() < 4 {
            return Err(BnsError::Config(
                "jump sampler table degenerated; eps too close to x_max".into(),
            ));
        }

        let n = x.len();
        let mut slope = vec![0.0; n];
        let h: Vec<f64> = (0..n - 1).map(|j| u[j + 1] - u[j]).collect();
        let d: Vec<f64> = (0..n - 1).map(|j| (x[j + 1] - x[j]) / h[j]).collect();
        slope[0] = d[0];
        slope[n - 1] = d[n - 2];
        for j in 1..n - 1 {
            // Secants are all positive here, so the weighted harmonic mean
            // keeps the interpolant monotone.
            let w1 = 2.0 * h[j] + h[j - 1];
            let w2 = h[j] + 2.0 * h[j - 1];
            slope[j] = (w1 + w2) / (w1 / d[j - 1] + w2 / d[j]);
        }

        Ok(Self {
            eps,
            x_max,
            lambda_eps,
            u,
            x,
            slope,
        })
    }

    /// Maps a uniform variate in `[0, 1)` to a jump size in `(ε, x_max]`.
    pub fn sample_from_uniform(&self, uniform: f64) -> f64 {
        let n = self.u.len();
        if uniform >= self.u[n - 1] {
            return *self.x.last().unwrap();
        }
        if uniform <= 0.0 {
            return self.eps;
        }
        // Last index with u[i] <= uniform.
        let i = self.u.partition_point(|&v| v <= uniform) - 1;
        let h = self.u[i + 1] - self.u[i];
        let s = (uniform - self.u[i]) / h;
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * x0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * x1
            + (s3 - s2) * m1
    }

    /// CDF of the sampler's nominal distribution (closed-form tail mass),
    /// for distribution tests.
    pub fn cdf(&self, p: &BnsParams, x: f64) -> Result<f64> {
        if x <= self.eps {
            return Ok(0.0);
        }
        Ok((self.lambda_eps - tail_mass(x, p)?) / self.lambda_eps)
    }

    /// Draws a jump realization on `[0, t_max]`: Poisson count with rate
    /// `Λ_ε · t_max`, uniform times (then sorted), i.i.d. sizes.
    pub fn draw_jumps(&self, t_max: f64, rng: &mut ChaCha8Rng) -> JumpList {
        let lam = self.lambda_eps * t_max;
        if lam <= 0.0 {
            return JumpList::default();
        }
        let count = Poisson::new(lam).expect("positive rate").sample(rng) as usize;
        let times: Vec<f64> = (0..count).map(|_| rng.gen::<f64>() * t_max).collect();
        let mut events: Vec<Jump> = times
            .into_iter()
            .map(|time| Jump {
                time,
                size: self.sample_from_uniform(rng.gen::<f64>()),
            })
            .collect();
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        JumpList { events }
    }
}

/// Pricing/diagnostic grid `{0, dt, 2dt, .., T}` with the final step
/// shortened to land exactly on `T`.
pub fn time_grid(t: f64, dt: f64) -> Vec<f64> {
    let mut ts = vec![0.0];
    let mut k = 1u64;
    while (k as f64) * dt < t - 1e-9 * dt {
        ts.push(k as f64 * dt);
        k += 1;
    }
    ts.push(t);
    ts
}

/// Per-unit-time drift compensation added to the variance when small jumps
/// are deleted.
pub fn drift_rate(p: &BnsParams, cfg: &SimConfig) -> Result<f64> {
    if cfg.small_jump_drift {
        small_jump_mean(cfg.eps_trunc, p)
    } else {
        Ok(0.0)
    }
}

/// Evaluates the variance path at the grid times of `time_grid(t, cfg.dt)`.
///
/// The affine one-step recursion reproduces the closed-form solution
/// `σ²_t = e^{-λt}σ₀² + Σ_{t_i ≤ t} e^{-λ(t-t_i)} x_i + (μ_ε/λ)(1-e^{-λt})`
/// exactly at every grid point: there is no Euler error in σ².
pub fn simulate_variance_path(
    p: &BnsParams,
    t: f64,
    jumps: &JumpList,
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let grid = time_grid(t, cfg.dt);
    let mu_eps = drift_rate(p, cfg)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut sigma_sq = p.sigma0_sq;
    out.push(sigma_sq);
    let mut jmp = 0usize;
    for w in grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let dlt = t1 - t0;
        let decay = (-p.lambda * dlt).exp();
        let mut jump_sum = 0.0;
        while jmp < jumps.events.len() && jumps.events[jmp].time <= t1 {
            let j = &jumps.events[jmp];
            jump_sum += j.size * (-p.lambda * (t1 - j.time)).exp();
            jmp += 1;
        }
        sigma_sq = sigma_sq * decay + mu_eps / p.lambda * (1.0 - decay) + jump_sum;
        out.push(sigma_sq);
    }
    Ok(out)
}
