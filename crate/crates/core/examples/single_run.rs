//! One environment, several policies, identical reward streams per arm.
//!
//! Usage: single_run [bernoulli|normal-known|normal-unknown] [K] [N] [seed]

use ucb_large::confidence::Schedule;
use ucb_large::policies::PolicySpec;
use ucb_large::reward_models::Family;
use ucb_large::rng::{run_seed, stream, StreamRole};
use ucb_large::simulator::{
    best_mean, draw_environment, lower_bound_constant, run_single_observed, PriorSpec, RunStreams,
};

fn main() -> ucb_large::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let prior = PriorSpec::from_name(args.first().map_or("bernoulli", String::as_str)).expect("unknown example");
    let arms: usize = args.get(1).map_or(10, |s| s.parse().unwrap());
    let horizon: u64 = args.get(2).map_or(5000, |s| s.parse().unwrap());
    let seed = run_seed(args.get(3).map_or(1, |s| s.parse().unwrap()), 0);

    let env = draw_environment(prior, arms, &mut stream(seed, StreamRole::Environment, 0))?;
    let best = best_mean(&env);
    println!("means: {:?}", env.iter().map(|a| (a.mean() * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("lower bound constant r = {:.3}\n", lower_bound_constant(&env)?);

    let family = prior.family();
    let mut policies = [
        PolicySpec::ucb_large(family, Schedule::chi_log(0.5)?)?,
        PolicySpec::ucb_agrawal(family, Schedule::log())?,
        PolicySpec::thompson(family),
    ];
    if family == Family::NormalUnknownVar {
        policies[1] = PolicySpec::ucb_bk();
    }

    let checkpoints: Vec<u64> = (1..=5).map(|i| horizon * i / 5).collect();
    for (i, spec) in policies.iter().enumerate() {
        let mut regret = 0.0;
        let mut trace = Vec::new();
        let out = run_single_observed(&env, spec, horizon, &mut RunStreams::new(seed, i, arms), |step, arm, _| {
            regret += best - env[arm].mean();
            if checkpoints.contains(&(step + 1)) {
                trace.push(format!("{regret:.1}"));
            }
        })?;
        println!("{} {}", spec.name(), spec.params());
        println!("  pulls {:?}", out.pulls);
        println!("  regret at {checkpoints:?}: {}", trace.join(", "));
        println!("  regret {:.2}, without initial pulls {:.2}", out.regret, out.tilde_regret);
    }
    Ok(())
}
