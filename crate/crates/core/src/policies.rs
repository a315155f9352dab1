//! Sequential arm-selection policies.
//!
//! Each policy starts with a forced allocation (one reward per arm, two for
//! normal rewards with unknown variance) and then pulls the arm with the
//! largest index. UCB-Large evaluates its schedule at `n / K^(1-q)`, the
//! classical UCB-Agrawal rule at `n`, and the Burnetas-Katehakis rule uses
//! `log n` with divisor `n_k`. Thompson sampling draws one posterior sample
//! per arm. Ties go to the smallest arm index. Arms are indexed from 0.

use std::collections::VecDeque;

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};

use crate::confidence::{bernoulli_index, bernoulli_upper_bound, normal_known_index, t_index, Schedule};
use crate::error::{config, domain, Error, Result};
use crate::reward_models::{standard_normal, Family};

/// Sufficient statistics of the rewards observed on one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl ArmStats {
    pub fn record(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    /// Sample mean; 0 for an empty arm.
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Biased sample variance (divisor `count`), floored at 0.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let mean = self.mean();
        (self.sum_sq / self.count as f64 - mean * mean).max(0.0)
    }

    pub fn sigma_hat(&self) -> f64 {
        self.variance().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    UcbLarge,
    UcbAgrawal,
    UcbBk,
    Thompson,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::UcbLarge => "ucb-large",
            PolicyKind::UcbAgrawal => "ucb-agrawal",
            PolicyKind::UcbBk => "ucb-bk",
            PolicyKind::Thompson => "thompson",
        }
    }
}

/// A policy identity with its tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySpec {
    kind: PolicyKind,
    family: Family,
    schedule: Schedule,
    q: f64,
}

impl PolicySpec {
    /// UCB-Large with confidence coefficient `schedule(n / K)`.
    pub fn ucb_large(family: Family, schedule: Schedule) -> Result<Self> {
        schedule.validate()?;
        Ok(Self {
            kind: PolicyKind::UcbLarge,
            family,
            schedule,
            q: 0.0,
        })
    }

    /// Classical UCB with confidence coefficient `schedule(n)`.
    pub fn ucb_agrawal(family: Family, schedule: Schedule) -> Result<Self> {
        schedule.validate()?;
        Ok(Self {
            kind: PolicyKind::UcbAgrawal,
            family,
            schedule,
            q: 0.0,
        })
    }

    /// Burnetas-Katehakis bounds; normal rewards with unknown variance only.
    pub fn ucb_bk() -> Self {
        Self {
            kind: PolicyKind::UcbBk,
            family: Family::NormalUnknownVar,
            schedule: Schedule::log(),
            q: 0.0,
        }
    }

    pub fn thompson(family: Family) -> Self {
        Self {
            kind: PolicyKind::Thompson,
            family,
            schedule: Schedule::log(),
            q: 0.0,
        }
    }

    /// Sets the perturbation exponent `q` in `n / K^(1-q)`. UCB-Large only.
    pub fn with_q(mut self, q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(domain(format!("q must lie in [0, 1), got {q}")));
        }
        if q != 0.0 && self.kind != PolicyKind::UcbLarge {
            return Err(config(format!("q applies to ucb-large only, not {}", self.kind.name())));
        }
        self.q = q;
        Ok(self)
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Number of forced initial rewards per arm.
    pub fn init_per_arm(&self) -> u64 {
        match self.family {
            Family::NormalUnknownVar => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Tuning parameters in the `key=value[:key=value]` form the CLI accepts.
    pub fn params(&self) -> String {
        let mut parts = Vec::new();
        if matches!(self.kind, PolicyKind::UcbLarge | PolicyKind::UcbAgrawal) {
            match self.schedule {
                Schedule::ChiLog { chi } => parts.push(format!("chi={chi}")),
                Schedule::LogMinusSqrtLog => parts.push("schedule=log-sqrt".to_string()),
                Schedule::LogPlusAlphaLogLog { alpha } => {
                    parts.push("schedule=log-alpha".to_string());
                    parts.push(format!("alpha={alpha}"));
                }
            }
        }
        if self.q != 0.0 {
            parts.push(format!("q={}", self.q));
        }
        parts.join(":")
    }

    /// Confidence coefficient after `n` total rewards on `k` arms.
    fn coefficient(&self, n: u64, k: usize) -> f64 {
        let n = n as f64;
        match self.kind {
            PolicyKind::UcbLarge => {
                let m = (n / (k as f64).powf(1.0 - self.q)).max(1.0);
                self.schedule.value_unchecked(m)
            }
            PolicyKind::UcbAgrawal => self.schedule.value_unchecked(n.max(1.0)),
            PolicyKind::UcbBk => n.max(1.0).ln(),
            PolicyKind::Thompson => 0.0,
        }
    }

    fn index(&self, stats: &ArmStats, b: f64) -> f64 {
        self.index_from(&Moments::of(stats), stats.count, b)
    }

    #[inline]
    fn index_from(&self, m: &Moments, t: u64, b: f64) -> f64 {
        match (self.family, self.kind) {
            (Family::NormalKnownVar, _) => normal_known_index(m.mean, t, b),
            (Family::NormalUnknownVar, PolicyKind::UcbBk) => t_index(m.mean, m.sigma_hat, t as f64, b),
            (Family::NormalUnknownVar, _) => t_index(m.mean, m.sigma_hat, (t - 1) as f64, b),
            (Family::Bernoulli, _) => bernoulli_index(m.mean, t, b),
        }
    }
}

/// Mean and `sigma_hat` of an arm, refreshed only when the arm is pulled.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    mean: f64,
    sigma_hat: f64,
}

impl Moments {
    fn of(stats: &ArmStats) -> Self {
        Self {
            mean: stats.mean(),
            sigma_hat: stats.sigma_hat(),
        }
    }
}

/// Index of the first maximum. NaN entries never win.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// Per-run state of one policy.
#[derive(Debug, Clone)]
pub struct PolicyState {
    spec: PolicySpec,
    stats: Vec<ArmStats>,
    forced: VecDeque<usize>,
    total: u64,
    moments: Vec<Moments>,
    upper: Vec<f64>,
    cache: Vec<Option<CachedIndex>>,
}

/// An exactly solved Bernoulli index and its derivative in `b`.
#[derive(Debug, Clone, Copy)]
struct CachedIndex {
    b: f64,
    value: f64,
    slope: f64,
}

impl CachedIndex {
    fn new(stats: &ArmStats, b: f64, value: f64) -> Self {
        // dU/db = 1 / (t dI/du) = U (1 - U) / (t (U - x)).
        let x = stats.mean();
        let slope = if value >= 1.0 {
            0.0
        } else if value > x {
            value * (1.0 - value) / (stats.count as f64 * (value - x))
        } else {
            f64::INFINITY
        };
        Self { b, value, slope }
    }

    /// The index is concave in `b` (it inverts a convex increasing
    /// function), so the tangent at `self.b` bounds it everywhere.
    fn bound_at(&self, b: f64) -> f64 {
        if self.slope.is_infinite() {
            f64::INFINITY
        } else {
            self.value + (b - self.b) * self.slope
        }
    }
}

impl PolicyState {
    pub fn new(spec: PolicySpec, arms: usize) -> Result<Self> {
        if arms < 1 {
            return Err(config("a bandit needs at least one arm"));
        }
        if spec.kind == PolicyKind::UcbBk && spec.family != Family::NormalUnknownVar {
            return Err(config("ucb-bk is defined for normal rewards with unknown variance"));
        }
        let init = spec.init_per_arm() as usize;
        let forced = (0..arms)
            .flat_map(|k| std::iter::repeat_n(k, init))
            .collect();
        Ok(Self {
            spec,
            stats: vec![ArmStats::default(); arms],
            forced,
            total: 0,
            moments: vec![Moments::default(); arms],
            upper: Vec::new(),
            cache: vec![None; arms],
        })
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn arms(&self) -> usize {
        self.stats.len()
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    /// Total rewards recorded so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Remaining forced pulls, head first.
    pub fn forced_queue(&self) -> impl Iterator<Item = usize> + '_ {
        self.forced.iter().copied()
    }

    /// Chooses the next arm. Forced pulls come first; then the arm with the
    /// largest index (or posterior sample, for Thompson).
    pub fn choose_arm<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<usize> {
        if let Some(k) = self.forced.pop_front() {
            return Ok(k);
        }
        self.check_initialized()?;
        match (self.spec.kind, self.spec.family) {
            (PolicyKind::Thompson, _) => {
                let mut best = 0;
                let mut best_value = f64::NEG_INFINITY;
                for (k, s) in self.stats.iter().enumerate() {
                    let v = posterior_draw(&self.spec, s, rng)?;
                    if v > best_value {
                        best = k;
                        best_value = v;
                    }
                }
                Ok(best)
            }
            (_, Family::Bernoulli) => Ok(self.bernoulli_argmax()),
            _ => {
                let b = self.spec.coefficient(self.total, self.arms());
                let mut best = 0;
                let mut best_value = f64::NEG_INFINITY;
                for (k, (s, m)) in self.stats.iter().zip(&self.moments).enumerate() {
                    let v = self.spec.index_from(m, s.count, b);
                    if v > best_value {
                        best = k;
                        best_value = v;
                    }
                }
                Ok(best)
            }
        }
    }

    /// Bernoulli argmax that only solves for arms whose upper bound could
    /// reach the best index found so far. Bounds come from the tangent of a
    /// cached solution when one exists, else from [`bernoulli_upper_bound`].
    /// Returns the same arm as a full evaluation.
    fn bernoulli_argmax(&mut self) -> usize {
        // Covers the solver's error relative to the exact root.
        const MARGIN: f64 = 1e-7;
        let b = self.spec.coefficient(self.total, self.arms());
        self.upper.clear();
        self.upper
            .extend(self.stats.iter().zip(&self.cache).map(|(s, c)| {
                let cheap = c.map_or(f64::INFINITY, |c| c.bound_at(b));
                let bound = if cheap.is_finite() {
                    cheap
                } else {
                    bernoulli_upper_bound(s.mean(), b / s.count as f64)
                };
                bound.min(1.0) + MARGIN
            }));
        let solve = |k: usize, stats: &[ArmStats], cache: &mut [Option<CachedIndex>]| {
            let v = self.spec.index(&stats[k], b);
            cache[k] = Some(CachedIndex::new(&stats[k], b, v));
            v
        };
        let first = argmax(&self.upper);
        let mut best = first;
        let mut best_value = solve(first, &self.stats, &mut self.cache);
        for k in 0..self.stats.len() {
            if k == first || self.upper[k] < best_value {
                continue;
            }
            let v = solve(k, &self.stats, &mut self.cache);
            if v > best_value || (v == best_value && k < best) {
                best = k;
                best_value = v;
            }
        }
        best
    }

    /// Current index of every arm (UCB kinds, after initialization).
    pub fn indices(&self) -> Result<Vec<f64>> {
        if self.spec.kind == PolicyKind::Thompson {
            return Err(config("thompson sampling has no deterministic index"));
        }
        self.check_initialized()?;
        let b = self.spec.coefficient(self.total, self.arms());
        Ok(self.stats.iter().map(|s| self.spec.index(s, b)).collect())
    }

    fn check_initialized(&self) -> Result<()> {
        let init = self.spec.init_per_arm();
        if self.stats.iter().any(|s| s.count < init) {
            return Err(domain(format!(
                "every arm needs {init} reward(s) before indices are defined"
            )));
        }
        Ok(())
    }

    pub fn record_reward(&mut self, k: usize, x: f64) -> Result<()> {
        let arms = self.arms();
        let stats = self
            .stats
            .get_mut(k)
            .ok_or(Error::ArmIndex { index: k, arms })?;
        stats.record(x);
        self.moments[k] = Moments::of(stats);
        self.cache[k] = None;
        self.total += 1;
        Ok(())
    }
}

/// One draw from the Thompson posterior of an arm.
///
/// - unit-variance normal, N(0, 1) prior: `N(S / (n+1), 1 / (n+1))`;
/// - normal with unknown variance, normal-gamma prior: precision from
///   `Gamma(1 + n/2, rate 1 + n sigma_hat^2 / 2 + n xbar^2 / (1+n))`, then
///   `N(n xbar / (1+n), sigma^2 / (1+n))`;
/// - Bernoulli, uniform prior: `Beta(1 + S, 1 + n - S)`.
pub fn posterior_draw<R: Rng + ?Sized>(
    spec: &PolicySpec,
    stats: &ArmStats,
    rng: &mut R,
) -> Result<f64> {
    let min = match spec.family {
        Family::NormalUnknownVar => 2,
        _ => 1,
    };
    if stats.count < min {
        return Err(domain(format!(
            "posterior draw needs at least {min} reward(s), got {}",
            stats.count
        )));
    }
    let n = stats.count as f64;
    match spec.family {
        Family::NormalKnownVar => Ok(stats.sum / (n + 1.0) + standard_normal(rng) / (n + 1.0).sqrt()),
        Family::NormalUnknownVar => {
            let xbar = stats.mean();
            let rate = 1.0 + 0.5 * n * stats.variance() + n * xbar * xbar / (1.0 + n);
            let precision = Gamma::new(1.0 + 0.5 * n, 1.0 / rate)
                .map_err(|e| domain(format!("gamma posterior: {e}")))?
                .sample(rng);
            let sigma2 = 1.0 / precision;
            let centre = n * xbar / (1.0 + n);
            Ok(centre + (sigma2 / (1.0 + n)).sqrt() * standard_normal(rng))
        }
        Family::Bernoulli => {
            let successes = stats.sum;
            Ok(Beta::new(1.0 + successes, 1.0 + n - successes)
                .map_err(|e| domain(format!("beta posterior: {e}")))?
                .sample(rng))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::{ucb_bernoulli, ucb_normal_known};
    use crate::rng::{stream, StreamRole};
    use proptest::prelude::*;

    fn large(family: Family, chi: f64) -> PolicySpec {
        PolicySpec::ucb_large(family, Schedule::chi_log(chi).unwrap()).unwrap()
    }

    #[test]
    fn forced_queues() {
        let s = PolicyState::new(large(Family::NormalKnownVar, 1.0), 3).unwrap();
        assert_eq!(s.forced_queue().collect::<Vec<_>>(), vec![0, 1, 2]);
        let s = PolicyState::new(large(Family::NormalUnknownVar, 1.0), 2).unwrap();
        assert_eq!(s.forced_queue().collect::<Vec<_>>(), vec![0, 0, 1, 1]);
        let s = PolicyState::new(PolicySpec::thompson(Family::Bernoulli), 1).unwrap();
        assert_eq!(s.forced_queue().collect::<Vec<_>>(), vec![0]);
        assert!(PolicyState::new(PolicySpec::thompson(Family::Bernoulli), 0).is_err());
    }

    #[test]
    fn spec_validation() {
        let spec = large(Family::NormalKnownVar, 1.0);
        assert!(spec.with_q(1.0).is_err());
        assert!(spec.with_q(-0.1).is_err());
        assert_eq!(spec.with_q(0.2).unwrap().q(), 0.2);
        assert!(PolicySpec::thompson(Family::Bernoulli).with_q(0.2).is_err());
        assert_eq!(PolicySpec::thompson(Family::NormalUnknownVar).init_per_arm(), 2);
        assert_eq!(PolicySpec::ucb_bk().init_per_arm(), 2);
        assert_eq!(large(Family::NormalKnownVar, 0.5).params(), "chi=0.5");
        assert_eq!(
            PolicySpec::ucb_large(Family::Bernoulli, Schedule::LogMinusSqrtLog)
                .unwrap()
                .with_q(0.1)
                .unwrap()
                .params(),
            "schedule=log-sqrt:q=0.1"
        );
    }

    #[test]
    fn zero_coefficient_is_greedy() {
        let mut rng = stream(0, StreamRole::Policy, 0);
        let mut s = PolicyState::new(large(Family::NormalKnownVar, 1.0), 2).unwrap();
        assert_eq!(s.choose_arm(&mut rng).unwrap(), 0);
        s.record_reward(0, 0.9).unwrap();
        assert_eq!(s.choose_arm(&mut rng).unwrap(), 1);
        s.record_reward(1, 0.1).unwrap();
        // n/K = 1 so b = 0 and indices equal sample means.
        assert_eq!(s.indices().unwrap(), vec![0.9, 0.1]);
        assert_eq!(s.choose_arm(&mut rng).unwrap(), 0);
    }

    #[test]
    fn ties_break_to_smallest_index() {
        let mut rng = stream(0, StreamRole::Policy, 0);
        let mut s = PolicyState::new(large(Family::NormalKnownVar, 1.0), 2).unwrap();
        for k in 0..2 {
            s.choose_arm(&mut rng).unwrap();
            s.record_reward(k, 0.4).unwrap();
        }
        assert_eq!(s.choose_arm(&mut rng).unwrap(), 0);
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), 1);
    }

    #[test]
    fn record_reward_updates_one_arm() {
        let mut s = PolicyState::new(PolicySpec::thompson(Family::NormalKnownVar), 2).unwrap();
        s.record_reward(0, 0.5).unwrap();
        s.record_reward(0, 1.5).unwrap();
        let a = s.stats()[0];
        assert_eq!((a.count, a.sum, a.sum_sq), (2, 2.0, 2.5));
        assert_eq!(a.variance(), 0.25);
        s.record_reward(1, 7.0).unwrap();
        assert_eq!(s.stats()[0], a);
        assert_eq!(
            s.record_reward(2, 1.0),
            Err(Error::ArmIndex { index: 2, arms: 2 })
        );
    }

    #[test]
    fn indices_match_closed_forms() {
        let spec = large(Family::Bernoulli, 1.0);
        let mut s = PolicyState::new(spec, 4).unwrap();
        let rewards = [[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]];
        for (k, rs) in rewards.iter().enumerate() {
            for &r in rs {
                s.record_reward(k, r).unwrap();
            }
        }
        let b = (12.0f64 / 4.0).ln();
        let expected: Vec<f64> = s
            .stats()
            .iter()
            .map(|a| ucb_bernoulli(a.mean(), a.count, b).unwrap())
            .collect();
        assert_eq!(s.indices().unwrap(), expected);

        let mut s = PolicyState::new(large(Family::NormalKnownVar, 1.0), 3).unwrap();
        for (k, r) in [0.3, -0.2, 1.1, 0.4, 0.0].iter().enumerate() {
            s.record_reward(k % 3, *r).unwrap();
        }
        let b = (5.0f64 / 3.0).ln();
        for (a, v) in s.stats().iter().zip(s.indices().unwrap()) {
            assert_eq!(v, ucb_normal_known(a.mean(), a.count, b).unwrap());
        }
    }

    #[test]
    fn indices_require_initialization() {
        let s = PolicyState::new(large(Family::NormalUnknownVar, 1.0), 2).unwrap();
        assert!(s.indices().is_err());
    }

    #[test]
    fn posterior_normal_known_moments() {
        let spec = PolicySpec::thompson(Family::NormalKnownVar);
        let stats = ArmStats { count: 1, sum: 0.0, sum_sq: 0.0 };
        let mut rng = stream(21, StreamRole::Policy, 0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| posterior_draw(&spec, &stats, &mut rng).unwrap()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() <= 0.01, "mean {mean}");
        assert!((var - 0.5).abs() <= 0.02, "var {var}");
    }

    #[test]
    fn posterior_beta_moments() {
        let spec = PolicySpec::thompson(Family::Bernoulli);
        let mut rng = stream(22, StreamRole::Policy, 0);
        let n = 100_000;
        for (stats, expected) in [
            (ArmStats { count: 3, sum: 3.0, sum_sq: 3.0 }, 0.8),
            (ArmStats { count: 1, sum: 0.0, sum_sq: 0.0 }, 1.0 / 3.0),
        ] {
            let mut total = 0.0;
            for _ in 0..n {
                let d = posterior_draw(&spec, &stats, &mut rng).unwrap();
                assert!(d > 0.0 && d < 1.0);
                total += d;
            }
            let mean = total / n as f64;
            assert!((mean - expected).abs() <= 0.005, "mean {mean} vs {expected}");
        }
        let empty = ArmStats::default();
        assert!(posterior_draw(&spec, &empty, &mut rng).is_err());
    }

    #[test]
    fn posterior_normal_gamma_moments() {
        // count 4, xbar 1, sigma_hat^2 0.5: rate = 1 + 1 + 4/5 = 2.8, shape 3,
        // so E[sigma^2] = 2.8 / 2 = 1.4 and the draw has mean 4/5 and
        // variance E[sigma^2] / 5 = 0.28.
        let spec = PolicySpec::thompson(Family::NormalUnknownVar);
        let stats = ArmStats { count: 4, sum: 4.0, sum_sq: 4.0 * 1.5 };
        let mut rng = stream(23, StreamRole::Policy, 0);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| posterior_draw(&spec, &stats, &mut rng).unwrap()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 0.8).abs() <= 0.005, "mean {mean}");
        assert!((var - 0.28).abs() <= 0.01, "var {var}");
        let one = ArmStats { count: 1, sum: 1.0, sum_sq: 1.0 };
        assert!(posterior_draw(&spec, &one, &mut rng).is_err());
    }

    proptest! {
        #[test]
        fn argmax_shift_invariant(
            values in proptest::collection::vec(-1000i32..1000, 1..40),
            c in -1000i32..1000,
        ) {
            // Integer-valued reals, so the shift is exact and ties survive it.
            let plain: Vec<f64> = values.iter().map(|&v| v as f64).collect();
            let shifted: Vec<f64> = values.iter().map(|&v| (v + c) as f64).collect();
            prop_assert_eq!(argmax(&plain), argmax(&shifted));
        }

        #[test]
        fn pruned_bernoulli_argmax_matches_full(
            counts in proptest::collection::vec((1u64..400, 0.0f64..1.0), 2..30),
            extra in 0u64..20_000,
        ) {
            let spec = large(Family::Bernoulli, 0.5);
            let mut s = PolicyState::new(spec, counts.len()).unwrap();
            s.forced.clear();
            for (k, &(t, frac)) in counts.iter().enumerate() {
                let successes = (frac * t as f64).floor();
                s.stats[k] = ArmStats { count: t, sum: successes, sum_sq: successes };
            }
            s.total = s.stats.iter().map(|a| a.count).sum::<u64>() + extra;
            let full = argmax(&s.indices().unwrap());
            let mut rng = stream(0, StreamRole::Policy, 0);
            prop_assert_eq!(s.choose_arm(&mut rng).unwrap(), full);
        }
    }
}
