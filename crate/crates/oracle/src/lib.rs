//! Independent numerical references for the test suites.
//!
//! Everything here is deliberately written from first principles (adaptive
//! Simpson quadrature, bit-reversal sequences, empirical CDF distances) so
//! that closed-form results in the main crate are checked against a second,
//! unrelated computational route. Nothing in this crate depends on the code
//! under test.

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Classic recursive scheme with Richardson correction; `tol` is an absolute
/// tolerance for the whole interval and is split in half at each subdivision.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// `∫_lo^∞ f(x) dx` for integrands with (at worst) an `x^{-1/2}`-type
/// singularity at zero and exponential decay at infinity.
///
/// The substitution `x = t^2` removes the endpoint singularity; the upper
/// limit is extended by doubling panels until two consecutive extensions
/// are negligible against the accumulated value.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: &F, lo: f64, tol: f64) -> f64 {
    assert!(lo >= 0.0);
    let g = |t: f64| 2.0 * t * f(t * t);
    let mut upper = (lo.max(1e-12) * 2.0).max(1.0);
    let mut total = adaptive_simpson(&g, lo.sqrt(), upper.sqrt(), tol);
    let mut quiet = 0;
    while quiet < 2 && upper < 1e12 {
        let next = upper * 2.0;
        let inc = adaptive_simpson(&g, upper.sqrt(), next.sqrt(), tol);
        total += inc;
        if inc.abs() <= tol.max(1e-16 * total.abs()) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        upper = next;
    }
    total
}

/// `∫_0^hi f(x) dx` with the same `x = t^2` treatment of the origin.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: &F, hi: f64, tol: f64) -> f64 {
    assert!(hi > 0.0);
    let g = |t: f64| 2.0 * t * f(t * t);
    adaptive_simpson(&g, 0.0, hi.sqrt(), tol)
}

/// Standard normal CDF evaluated by quadrature of the density (no erf).
pub fn norm_cdf_by_quadrature(x: f64) -> f64 {
    let phi = |y: f64| (-0.5 * y * y).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x >= 0.0 {
        0.5 + adaptive_simpson(&phi, 0.0, x.min(40.0), 1e-14)
    } else {
        0.5 - adaptive_simpson(&phi, 0.0, (-x).min(40.0), 1e-14)
    }
}

/// Zero-rate lognormal call expectation `E[(S e^{-σ²T/2 + σ√T Z} - K)^+]`
/// by quadrature over the Gaussian density.
pub fn lognormal_call_by_quadrature(s0: f64, sigma: f64, strike: f64, maturity: f64) -> f64 {
    let sv = sigma * maturity.sqrt();
    if sv <= 0.0 {
        return (s0 - strike).max(0.0);
    }
    // (S e^{...} - K)^+ is zero below z*, smooth above.
    let z_star = ((strike / s0).ln() + 0.5 * sv * sv) / sv;
    let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let integrand = |z: f64| (s0 * (-0.5 * sv * sv + sv * z).exp() - strike) * phi(z);
    let lo = z_star.max(-40.0);
    if lo >= 40.0 {
        return 0.0;
    }
    adaptive_simpson(&integrand, lo, 40.0, 1e-13)
}

/// Central finite difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Kolmogorov–Smirnov statistic of a sample against a reference CDF.
/// `samples` must be sorted ascending.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: &F) -> f64 {
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        let lo = i as f64 / n;
        let hi = (i as f64 + 1.0) / n;
        sup = sup.max((c - lo).abs()).max((hi - c).abs());
    }
    sup
}

/// Van der Corput base-2 radical inverse of `gray(n)`, the reference for the
/// first Sobol dimension in Gray-code order.
pub fn van_der_corput_gray(n: u32) -> f64 {
    let g = n ^ (n >> 1);
    (g.reverse_bits() as f64) / (u32::MAX as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_near_exact() {
        let f = |x: f64| 3.0 * x * x;
        let v = adaptive_simpson(&f, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn tail_integral_of_gaussian_kernel() {
        // ∫_0^∞ e^{-x} dx = 1
        let v = integrate_tail(&|x: f64| (-x).exp(), 0.0, 1e-13);
        assert!((v - 1.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn singular_integral() {
        // ∫_0^1 x^{-1/2} dx = 2
        let v = integrate_from_zero(&|x: f64| 1.0 / x.sqrt(), 1.0, 1e-13);
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn norm_cdf_reference_points() {
        assert!((norm_cdf_by_quadrature(0.0) - 0.5).abs() < 1e-14);
        assert!((norm_cdf_by_quadrature(1.96) - 0.975_002_104_851_78).abs() < 1e-10);
    }

    #[test]
    fn van_der_corput_first_values() {
        let expect = [0.5, 0.75, 0.25, 0.375, 0.875, 0.625, 0.125];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(van_der_corput_gray(i as u32 + 1), *e);
        }
    }
}
