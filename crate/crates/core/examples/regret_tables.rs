//! A small-scale version of the regret comparison tables.
//!
//! Usage: regret_tables [example] [runs] [N] [K...]
//! e.g. `cargo run --release --example regret_tables -- bernoulli 100 20000 10 100`

use ucb_large::cli::{default_policies, parse_csv, render_csv, render_tables};
use ucb_large::simulator::{run_batch, PriorSpec, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let prior = PriorSpec::from_name(args.first().map_or("normal-known", String::as_str)).ok_or("unknown example")?;
    let runs: usize = args.get(1).map_or(Ok(50), |s| s.parse())?;
    let horizon: u64 = args.get(2).map_or(Ok(5000), |s| s.parse())?;
    let ks: Vec<usize> = if args.len() > 3 {
        args[3..].iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    } else {
        vec![10]
    };

    let mut summaries = Vec::new();
    for arms in ks {
        let config = RunConfig {
            prior,
            arms,
            horizon,
            runs,
            base_seed: 1,
            policies: default_policies(prior.family()),
            threads: 0,
        };
        summaries.extend(run_batch(&config)?.summaries);
    }
    // Going through the CSV text keeps the cells exactly as `sim` writes them.
    print!("{}", render_tables(&parse_csv(&render_csv(&summaries)?)?));
    Ok(())
}
