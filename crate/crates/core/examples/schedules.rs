//! Confidence coefficients: the classical `b_n` against the arm-size
//! corrected `b_{n/K}` used by UCB-Large.

use ucb_large::confidence::Schedule;

fn main() -> ucb_large::Result<()> {
    let schedules = [
        ("log", Schedule::log()),
        ("0.5 log", Schedule::chi_log(0.5)?),
        ("log - sqrt(log)", Schedule::LogMinusSqrtLog),
        ("log + 2 loglog", Schedule::log_plus_alpha_log_log(2.0)?),
    ];
    print!("{:>8}", "m");
    for (name, _) in &schedules {
        print!("{name:>17}");
    }
    println!();
    for m in [1.0, 2.0, 10.0, 100.0, 2000.0, 20000.0] {
        print!("{m:>8}");
        for (_, s) in &schedules {
            print!("{:>17.4}", s.value(m)?);
        }
        println!();
    }

    // With many arms the corrected coefficient is much smaller early on.
    let n = 20_000.0;
    println!("\nn = {n}");
    for k in [1.0, 10.0, 100.0] {
        println!(
            "  K={k:<4} b_n = {:.3}   b_(n/K) = {:.3}",
            Schedule::log().value(n)?,
            Schedule::log().value(n / k)?
        );
    }
    Ok(())
}
