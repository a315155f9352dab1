//! The lower-bound constant `r` for a few environments, and its median over
//! environments drawn from each prior.

use ucb_large::reward_models::ArmDistribution;
use ucb_large::rng::{run_seed, stream, StreamRole};
use ucb_large::simulator::{draw_environment, lower_bound_constant, PriorSpec};

fn main() -> ucb_large::Result<()> {
    let normal = [0.0, -1.0, -2.0].map(|m| ArmDistribution::normal(m).unwrap());
    println!("normal means 0, -1, -2:       r = {:.4}", lower_bound_constant(&normal)?);
    let bern = [0.9, 0.8, 0.5].map(|p| ArmDistribution::bernoulli(p).unwrap());
    println!("bernoulli 0.9, 0.8, 0.5:      r = {:.4}", lower_bound_constant(&bern)?);
    let unknown = [(0.0, 1.0), (-1.0, 4.0)].map(|(m, s)| ArmDistribution::normal_unknown_var(m, s).unwrap());
    println!("normal (0, 1), (-1, 4):       r = {:.4}", lower_bound_constant(&unknown)?);

    // r grows with K; regret over N rewards is at least about r log N.
    println!("\nmedian r over 500 draws");
    for prior in [PriorSpec::NormalMeansUnitVar, PriorSpec::NormalMeansExpVar, PriorSpec::UniformBernoulli] {
        print!("  {:<15}", prior.name());
        for arms in [10, 100] {
            let mut rs: Vec<f64> = (0..500)
                .map(|j| {
                    let mut rng = stream(run_seed(3, j), StreamRole::Environment, 0);
                    lower_bound_constant(&draw_environment(prior, arms, &mut rng).unwrap()).unwrap()
                })
                .collect();
            rs.sort_by(f64::total_cmp);
            print!("  K={arms}: {:>9.1}", 0.5 * (rs[249] + rs[250]));
        }
        println!();
    }
    Ok(())
}
