//! Driving a policy by hand against rewards that come from outside the
//! simulator, here a toy click-through process.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ucb_large::confidence::Schedule;
use ucb_large::policies::{PolicySpec, PolicyState};
use ucb_large::reward_models::Family;

fn main() -> ucb_large::Result<()> {
    let rates = [0.040, 0.050, 0.045, 0.062, 0.030, 0.055];
    let spec = PolicySpec::ucb_large(Family::Bernoulli, Schedule::chi_log(0.5)?)?;
    let mut policy = PolicyState::new(spec, rates.len())?;
    let mut world = ChaCha8Rng::seed_from_u64(2024);
    let mut policy_rng = ChaCha8Rng::seed_from_u64(1);

    let mut clicks = 0u64;
    for step in 1..=50_000u64 {
        let arm = policy.choose_arm(&mut policy_rng)?;
        let click = world.random::<f64>() < rates[arm];
        clicks += click as u64;
        policy.record_reward(arm, if click { 1.0 } else { 0.0 })?;

        if step % 10_000 == 0 {
            let pulls: Vec<u64> = policy.stats().iter().map(|s| s.count).collect();
            println!("step {step:>6}: clicks {clicks:>5}, pulls {pulls:?}");
        }
    }
    let best = rates.iter().cloned().fold(f64::MIN, f64::max);
    println!("best arm rate {best}, realized rate {:.4}", clicks as f64 / 50_000.0);
    println!("current indices {:?}", policy.indices()?.iter().map(|u| (u * 1e4).round() / 1e4).collect::<Vec<_>>());
    Ok(())
}
