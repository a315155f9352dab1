//! Upper confidence bounds for each reward family, next to the generic
//! bisection they are checked against.

use ucb_large::confidence::{
    generic_ucb, normal_search_cap, ucb_bernoulli, ucb_bk_unknown, ucb_normal_known, ucb_normal_unknown,
};
use ucb_large::reward_models::{m_function, rate_bernoulli, rate_normal_known};

fn main() -> ucb_large::Result<()> {
    println!("Bernoulli, b = log 2");
    println!("{:>6} {:>5} {:>12} {:>12}", "xbar", "t", "solver", "bisection");
    for (xbar, t) in [(0.5, 1), (0.5, 10), (0.9, 10), (0.0, 10), (1.0, 10), (0.3, 1000)] {
        let b = 2f64.ln();
        let fast = ucb_bernoulli(xbar, t, b)?;
        let slow = generic_ucb(|u, x| rate_bernoulli(u, x).unwrap(), xbar, t, b, 1.0)?;
        println!("{xbar:>6} {t:>5} {fast:>12.9} {slow:>12.9}");
    }

    println!("\nnormal, unit variance, xbar = 0");
    for (t, b) in [(1, 1.0), (2, 1.0), (50, 3.0)] {
        let closed = ucb_normal_known(0.0, t, b)?;
        let cap = normal_search_cap(0.0, t, b);
        let slow = generic_ucb(rate_normal_known, 0.0, t, b, cap)?;
        println!("  t={t:<3} b={b}: {closed:.9} (bisection {slow:.9})");
    }

    // Unknown variance: the effective sample size is t - 1 for UCB-Large and
    // t for the Burnetas-Katehakis rule, so the former is always wider.
    println!("\nnormal, unknown variance, xbar = 0, sigma_hat = 1");
    for (t, b) in [(2, 0.5), (5, 3.0), (40, 4.0)] {
        let large = ucb_normal_unknown(0.0, 1.0, t, b)?;
        let bk = ucb_bk_unknown(0.0, 1.0, t, b)?;
        let cap = 1e3;
        let slow = generic_ucb(|u, x| m_function(u - x), 0.0, t - 1, b, cap)?;
        println!("  t={t:<3} b={b}: large {large:.9} (bisection {slow:.9}), bk {bk:.9}");
    }
    Ok(())
}
