//! Arm distributions, reward sampling, and the large-deviations rate kernels.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{domain, Result};

/// Reward family of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Normal rewards with variance 1.
    NormalKnownVar,
    /// Normal rewards with unknown, arm-specific variance.
    NormalUnknownVar,
    /// Rewards in {0, 1}.
    Bernoulli,
}

/// Parameters of one arm. Only constructible through the validating
/// constructors on [`ArmDistribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArmParams {
    NormalKnownVar { mu: f64 },
    NormalUnknownVar { mu: f64, sigma2: f64 },
    Bernoulli { p: f64 },
}

/// A reward-generating arm with its true parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmDistribution {
    params: ArmParams,
}

impl ArmDistribution {
    pub fn normal(mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(domain(format!("normal mean must be finite, got {mu}")));
        }
        Ok(Self {
            params: ArmParams::NormalKnownVar { mu },
        })
    }

    pub fn normal_unknown_var(mu: f64, sigma2: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(domain(format!("normal mean must be finite, got {mu}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(domain(format!("variance must be positive, got {sigma2}")));
        }
        Ok(Self {
            params: ArmParams::NormalUnknownVar { mu, sigma2 },
        })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("Bernoulli p must lie in [0, 1], got {p}")));
        }
        Ok(Self {
            params: ArmParams::Bernoulli { p },
        })
    }

    pub fn params(&self) -> ArmParams {
        self.params
    }

    pub fn family(&self) -> Family {
        match self.params {
            ArmParams::NormalKnownVar { .. } => Family::NormalKnownVar,
            ArmParams::NormalUnknownVar { .. } => Family::NormalUnknownVar,
            ArmParams::Bernoulli { .. } => Family::Bernoulli,
        }
    }

    /// Mean reward.
    pub fn mean(&self) -> f64 {
        match self.params {
            ArmParams::NormalKnownVar { mu } | ArmParams::NormalUnknownVar { mu, .. } => mu,
            ArmParams::Bernoulli { p } => p,
        }
    }

    /// Reward variance.
    pub fn variance(&self) -> f64 {
        match self.params {
            ArmParams::NormalKnownVar { .. } => 1.0,
            ArmParams::NormalUnknownVar { sigma2, .. } => sigma2,
            ArmParams::Bernoulli { p } => p * (1.0 - p),
        }
    }

    /// Draws one reward. Normal variants consume exactly two uniforms,
    /// Bernoulli exactly one.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.params {
            ArmParams::NormalKnownVar { mu } => mu + standard_normal(rng),
            ArmParams::NormalUnknownVar { mu, sigma2 } => mu + sigma2.sqrt() * standard_normal(rng),
            ArmParams::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Standard normal variate by the Box-Muller transform (cosine branch only).
///
/// Always consumes two uniforms, so the position of a stream after `n` draws
/// does not depend on the values drawn.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], keeping the logarithm finite.
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Exponential variate with mean 1 by inversion, one uniform per draw.
pub fn standard_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Rate function of unit-variance normal rewards, `(u - x)^2 / 2`.
pub fn rate_normal_known(u: f64, x: f64) -> f64 {
    let d = u - x;
    0.5 * d * d
}

/// Bernoulli rate function `x log(x/u) + (1-x) log((1-x)/(1-u))`, which is
/// also the Kullback-Leibler divergence of Bernoulli(x) from Bernoulli(u).
///
/// Uses `0 log 0 = 0`. Returns `f64::INFINITY` when the divergence is
/// infinite (`u` on the boundary with `x` not equal to it).
pub fn rate_bernoulli(u: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&u) {
        return Err(domain(format!(
            "Bernoulli rate needs u, x in [0, 1], got u={u}, x={x}"
        )));
    }
    Ok(bernoulli_kl_unchecked(u, x))
}

pub(crate) fn bernoulli_kl_unchecked(u: f64, x: f64) -> f64 {
    let head = if x == 0.0 {
        0.0
    } else if u == 0.0 {
        return f64::INFINITY;
    } else {
        x * (x / u).ln()
    };
    let tail = if x == 1.0 {
        0.0
    } else if u == 1.0 {
        return f64::INFINITY;
    } else {
        (1.0 - x) * ((1.0 - x) / (1.0 - u)).ln()
    };
    // Rounding can leave a tiny negative value when u is very close to x.
    (head + tail).max(0.0)
}

/// `M(z) = log(1 + z^2) / 2`, the rate kernel of normal rewards with
/// unknown variance in standardized units.
pub fn m_function(z: f64) -> f64 {
    0.5 * (z * z).ln_1p()
}
