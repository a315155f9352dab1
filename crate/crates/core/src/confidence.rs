//! Confidence-coefficient schedules and upper confidence bounds.
//!
//! An upper confidence bound for an arm with `t` rewards and sample mean
//! `xbar` is the smallest `u >= xbar` with `t * I_u(xbar) >= b`, where `I` is
//! the family's rate function and `b` the confidence coefficient. The normal
//! families have closed forms; Bernoulli bounds are found by a fixed-point
//! iteration; [`generic_ucb`] solves any monotone kernel by bisection and
//! serves as the reference the closed forms are checked against.

use crate::error::{domain, Result};
use crate::reward_models::bernoulli_kl_unchecked;

/// Residual tolerance on `t * I_U(xbar) - b`, relative to `max(1, b)`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Step size at which the Bernoulli fixed-point iteration stops.
pub const STEP_TOL: f64 = 1e-12;
/// Iteration cap for the Bernoulli fixed-point iteration.
pub const MAX_ITERATIONS: usize = 200;

/// A confidence-coefficient schedule `m -> b_m`, evaluated at `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `chi * log m`, with `0 < chi <= 1`.
    ChiLog { chi: f64 },
    /// `log(e - 1 + m) - sqrt(log(e - 1 + m))`.
    LogMinusSqrtLog,
    /// `log m + alpha * log(1 + log m)`, with `alpha > 1`.
    LogPlusAlphaLogLog { alpha: f64 },
}

impl Schedule {
    pub fn chi_log(chi: f64) -> Result<Self> {
        let s = Schedule::ChiLog { chi };
        s.validate()?;
        Ok(s)
    }

    /// `log m`, the classical choice.
    pub fn log() -> Self {
        Schedule::ChiLog { chi: 1.0 }
    }

    pub fn log_plus_alpha_log_log(alpha: f64) -> Result<Self> {
        let s = Schedule::LogPlusAlphaLogLog { alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::ChiLog { chi } if !(chi > 0.0 && chi <= 1.0) => {
                Err(domain(format!("chi must lie in (0, 1], got {chi}")))
            }
            Schedule::LogPlusAlphaLogLog { alpha } if !(alpha > 1.0 && alpha.is_finite()) => {
                Err(domain(format!("alpha must exceed 1, got {alpha}")))
            }
            _ => Ok(()),
        }
    }

    /// `b_m`. Fails for `m < 1` (or NaN).
    pub fn value(&self, m: f64) -> Result<f64> {
        if !(m >= 1.0) {
            return Err(domain(format!("schedule argument must be at least 1, got {m}")));
        }
        Ok(self.value_unchecked(m))
    }

    pub(crate) fn value_unchecked(&self, m: f64) -> f64 {
        match *self {
            Schedule::ChiLog { chi } => chi * m.ln(),
            Schedule::LogMinusSqrtLog => {
                let l = (std::f64::consts::E - 1.0 + m).ln();
                (l - l.sqrt()).max(0.0)
            }
            Schedule::LogPlusAlphaLogLog { alpha } => {
                let l = m.ln();
                l + alpha * l.ln_1p()
            }
        }
    }
}

fn check_coefficient(b: f64) -> Result<()> {
    if b >= 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("confidence coefficient must be finite and >= 0, got {b}")))
    }
}

fn check_count(t: u64, min: u64) -> Result<()> {
    if t >= min {
        Ok(())
    } else {
        Err(domain(format!("sample count must be at least {min}, got {t}")))
    }
}

fn check_sigma(sigma_hat: f64) -> Result<()> {
    if sigma_hat >= 0.0 && sigma_hat.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("sigma_hat must be finite and >= 0, got {sigma_hat}")))
    }
}

/// Unit-variance normal bound `xbar + sqrt(2b/t)`.
pub fn ucb_normal_known(xbar: f64, t: u64, b: f64) -> Result<f64> {
    check_count(t, 1)?;
    check_coefficient(b)?;
    Ok(normal_known_index(xbar, t, b))
}

#[inline]
pub(crate) fn normal_known_index(xbar: f64, t: u64, b: f64) -> f64 {
    xbar + (2.0 * b / t as f64).sqrt()
}

/// Unknown-variance normal bound with effective sample size `t - 1`:
/// `xbar + sigma_hat * sqrt(exp(2b/(t-1)) - 1)`.
pub fn ucb_normal_unknown(xbar: f64, sigma_hat: f64, t: u64, b: f64) -> Result<f64> {
    check_count(t, 2)?;
    check_sigma(sigma_hat)?;
    check_coefficient(b)?;
    Ok(t_index(xbar, sigma_hat, (t - 1) as f64, b))
}

/// Burnetas-Katehakis bound with divisor `t`:
/// `xbar + sigma_hat * sqrt(exp(2b/t) - 1)`. Callers pass `b = log n`.
pub fn ucb_bk_unknown(xbar: f64, sigma_hat: f64, t: u64, b: f64) -> Result<f64> {
    check_count(t, 1)?;
    check_sigma(sigma_hat)?;
    check_coefficient(b)?;
    Ok(t_index(xbar, sigma_hat, t as f64, b))
}

#[inline]
pub(crate) fn t_index(xbar: f64, sigma_hat: f64, effective: f64, b: f64) -> f64 {
    xbar + sigma_hat * (2.0 * b / effective).exp_m1().sqrt()
}

/// Bernoulli bound: the larger root `u` of `t * I_u(xbar) = b`, or 1 if none.
///
/// Solves `v = 1 - (d / v^x)^(1/(1-x))`, `d = x^x (1-x)^(1-x) e^(-b/t)`,
/// starting from an upper bound on the root, with Aitken extrapolation on
/// successive iterates.
/// The result is checked against the residual tolerance and recomputed by
/// bisection if the iteration did not meet it.
pub fn ucb_bernoulli(xbar: f64, t: u64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&xbar) {
        return Err(domain(format!("Bernoulli sample mean must lie in [0, 1], got {xbar}")));
    }
    check_count(t, 1)?;
    check_coefficient(b)?;
    Ok(bernoulli_index(xbar, t, b))
}

pub(crate) fn bernoulli_index(x: f64, t: u64, b: f64) -> f64 {
    if b == 0.0 {
        return x;
    }
    if x == 1.0 {
        return 1.0;
    }
    let y = b / t as f64;
    if x == 0.0 {
        return (-(-y).exp_m1()).min(1.0);
    }
    let v = xv_fixed_point(x, y, bernoulli_upper_bound(x, y));
    if v < 1.0 && bernoulli_residual_ok(v, x, t, b) {
        return v;
    }
    bisect(|u| bernoulli_kl_unchecked(u, x), x, t as f64, b, x, 1.0)
}

fn bernoulli_residual_ok(u: f64, x: f64, t: u64, b: f64) -> bool {
    (t as f64 * bernoulli_kl_unchecked(u, x) - b).abs() <= RESIDUAL_TOL * b.max(1.0)
}

/// Upper bound on the root of `I_u(x) = y`, `u >= x`.
///
/// `I_u(x)` is the integral over `s` in `[x, u]` of `(s - x) / (s (1 - s))`, so
/// `I_u(x) >= (u - x)^2 / (2V)` with `V` the largest `s (1 - s)` on `[x, u]`.
/// Starting from Pinsker's `V = 1/4`, each pass shrinks the interval and
/// with it `V`; two passes are enough to be sharp away from `x = 1/2`.
pub(crate) fn bernoulli_upper_bound(x: f64, y: f64) -> f64 {
    let max_var = |lo: f64, hi: f64| {
        let s = 0.5f64.clamp(lo, hi);
        s * (1.0 - s)
    };
    let mut u = (x + (0.5 * y).sqrt()).min(1.0);
    for _ in 0..2 {
        u = (x + (2.0 * max_var(x, u) * y).sqrt()).min(u);
    }
    u
}

/// Fixed point of the Bernoulli bound iteration for `0 < x < 1`, `y > 0`,
/// started from `v0` in `[x, 1]`.
fn xv_fixed_point(x: f64, y: f64, v0: f64) -> f64 {
    let log_d = x * x.ln() + (1.0 - x) * (-x).ln_1p() - y;
    let inv = 1.0 / (1.0 - x);
    // Maps [x, 1] into itself and is increasing; the root is its only fixed
    // point there, approached from above when starting at 1.
    let g = |v: f64| (-((log_d - x * v.ln()) * inv).exp_m1()).clamp(x, 1.0);

    let mut v = v0;
    for _ in 0..MAX_ITERATIONS {
        let v1 = g(v);
        if (v1 - v).abs() <= STEP_TOL {
            return v1;
        }
        let v2 = g(v1);
        let denom = v2 - 2.0 * v1 + v;
        let mut next = v - (v1 - v) * (v1 - v) / denom;
        if !(next.is_finite() && next >= x && next <= 1.0) {
            next = v2;
        }
        let step = (next - v).abs();
        v = next;
        if step <= STEP_TOL {
            break;
        }
    }
    v
}

/// `inf { u in [xbar, upper] : t * kernel(u, xbar) >= b }` by bisection.
///
/// `kernel(u, xbar)` must be nondecreasing in `u` on `[xbar, upper]`. An
/// infinite kernel value counts as satisfying the constraint. Returns
/// `upper` if the constraint is not met there and `xbar` when `b == 0`.
/// Bisection runs until the bracket is two adjacent floats, so the result
/// is the constraint boundary to floating-point resolution.
pub fn generic_ucb<K>(kernel: K, xbar: f64, t: u64, b: f64, upper: f64) -> Result<f64>
where
    K: Fn(f64, f64) -> f64,
{
    check_count(t, 1)?;
    check_coefficient(b)?;
    if !xbar.is_finite() || !(upper >= xbar) || !upper.is_finite() {
        return Err(domain(format!(
            "bisection needs finite xbar <= upper, got xbar={xbar}, upper={upper}"
        )));
    }
    if b == 0.0 {
        return Ok(xbar);
    }
    Ok(bisect(|u| kernel(u, xbar), xbar, t as f64, b, xbar, upper))
}

fn bisect<F: Fn(f64) -> f64>(f: F, xbar: f64, t: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let hit = |u: f64| t * f(u) >= b;
    if !hit(hi) {
        return hi;
    }
    let (mut lo, mut hi) = (lo.max(xbar), hi);
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Search cap for unbounded (normal-type) kernels: `xbar + 10 sqrt(2b/t) + 1`.
pub fn normal_search_cap(xbar: f64, t: u64, b: f64) -> f64 {
    xbar + 10.0 * (2.0 * b / t as f64).sqrt() + 1.0
}
