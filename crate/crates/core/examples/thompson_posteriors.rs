//! Posterior draws used by Thompson sampling, against their exact moments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ucb_large::policies::{posterior_draw, ArmStats, PolicySpec};
use ucb_large::reward_models::Family;

fn moments(family: Family, rewards: &[f64], draws: usize) -> (f64, f64) {
    let mut stats = ArmStats::default();
    for &x in rewards {
        stats.record(x);
    }
    let spec = PolicySpec::thompson(family);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<f64> = (0..draws).map(|_| posterior_draw(&spec, &stats, &mut rng).unwrap()).collect();
    let mean = samples.iter().sum::<f64>() / draws as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    (mean, var)
}

fn main() {
    let draws = 200_000;

    // N(0,1) prior, unit variance: posterior N(S/(n+1), 1/(n+1)).
    let (m, v) = moments(Family::NormalKnownVar, &[1.0, 0.5, 1.5], draws);
    println!("normal known:   mean {m:.4} (exact {:.4}), var {v:.4} (exact {:.4})", 3.0 / 4.0, 1.0 / 4.0);

    // Beta(1+S, 1+n-S).
    let (m, v) = moments(Family::Bernoulli, &[1.0, 1.0, 0.0, 1.0], draws);
    let (a, b) = (4.0f64, 2.0);
    println!(
        "bernoulli:      mean {m:.4} (exact {:.4}), var {v:.4} (exact {:.4})",
        a / (a + b),
        a * b / ((a + b).powi(2) * (a + b + 1.0))
    );

    // Normal-gamma: the mean is n xbar / (1 + n); the spread also reflects
    // the unknown precision.
    let rewards = [2.0, 0.0, 1.0, 3.0];
    let (m, v) = moments(Family::NormalUnknownVar, &rewards, draws);
    println!("normal-gamma:   mean {m:.4} (exact {:.4}), var {v:.4}", 4.0 * 1.5 / 5.0);
}
