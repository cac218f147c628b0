//! Exact error of the degree process on Erdos-Renyi graphs.
//!
//! Started from `z_a(0) = 1`, vertex `i` is still in state `a` at time `t`
//! with probability `e_i = exp(-c delta_i)` given the graph, independently
//! of the other vertices, while the block-level solution is `x = exp(-t)`.
//! Hence
//!
//! ```text
//! E (xbar - x)^2 = E1 / N + (1 - 1/N) E12 - 2 x E1 + x^2
//! ```
//!
//! with `E1 = E e_1` and `E12 = E e_1 e_2`. Both moments are binomial
//! generating functions: `delta_1 ~ Bin(N - 1, p)` and `delta_1`, `delta_2`
//! share only the indicator of the edge `12`.

use crate::error::{invalid, Result};

/// `E exp(-c delta)` for `delta ~ Bin(m, p)`, as a logarithm.
fn ln_binomial_mgf(m: f64, p: f64, c: f64) -> f64 {
    // 1 - p (1 - e^{-c})
    m * (p * (-c).exp_m1()).ln_1p()
}

/// `E exp(-c delta_1)` on `G(N, p)`.
pub fn degree_survival_moment(n: usize, p: f64, c: f64) -> f64 {
    ln_binomial_mgf((n - 1) as f64, p, c).exp()
}

/// Root mean squared error of the degree process at time `t` on `G(N, p)`,
/// where a vertex of degree `delta` leaves `a` at rate `delta * scale`.
///
/// Evaluated as `E1 = x (1 + u)` and `E12 = x^2 (1 + v)` with `u`, `v`
/// obtained through `expm1`, so the small differences between the
/// stochastic and the mean-field values keep full relative precision.
pub fn degree_error_exact(n: usize, p: f64, t: f64, scale: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("need at least two vertices, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("edge probability must lie in (0, 1], got {p}")));
    }
    if !(t >= 0.0 && t.is_finite()) || !(scale >= 0.0 && scale.is_finite()) {
        return Err(invalid(format!("time and rate scale must be finite and nonnegative, got {t}, {scale}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let c = t * scale;
    let nf = n as f64;
    let one = ln_binomial_mgf(1.0, p, c);
    let u = ((nf - 1.0) * one + t).exp_m1();
    let v = (2.0 * (nf - 2.0) * one + ln_binomial_mgf(1.0, p, 2.0 * c) + 2.0 * t).exp_m1();
    let x = (-t).exp();
    let sq = x * (1.0 + u) / nf + x * x * (v - 2.0 * u - (1.0 + v) / nf);
    Ok(sq.max(0.0).sqrt())
}

/// [`degree_error_exact`] with the degree normalized by `d = (N - 1) rho`,
/// i.e. rate `delta / d`.
pub fn degree_error_closed_form(n: usize, d: f64, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("need at least two vertices, got {n}")));
    }
    let p = d / (n - 1) as f64;
    if !(d > 0.0 && p <= 1.0 + 1e-12) {
        return Err(invalid(format!("d = {d} is not (N - 1) rho for rho in (0, 1] with N = {n}")));
    }
    degree_error_exact(n, p.min(1.0), t, 1.0 / d)
}
