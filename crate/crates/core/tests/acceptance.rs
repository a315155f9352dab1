//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion, with
//! the supporting numbers indented underneath, and exits non-zero if any
//! criterion fails.
//!
//! The Monte-Carlo batches take several minutes on a single core.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ucb_large::confidence::{generic_ucb, ucb_bernoulli, Schedule};
use ucb_large::policies::{PolicySpec, PolicyState};
use ucb_large::reward_models::{rate_bernoulli, ArmDistribution, Family};
use ucb_large::rng::{stream, StreamRole};
use ucb_large::simulator::{
    best_mean, mean_and_se, paired_difference, run_batch, run_single, BatchResult, PriorSpec, RunConfig,
    RunStreams,
};

const SEED: u64 = 1;
const HORIZON: u64 = 20_000;

struct Report {
    failed: Vec<&'static str>,
}

impl Report {
    fn criterion(&mut self, id: &'static str, title: &str, pass: bool, details: &[String]) {
        println!("[{}] {id}: {title}", if pass { "PASS" } else { "FAIL" });
        for d in details {
            println!("        {d}");
        }
        if !pass {
            self.failed.push(id);
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Label {
    Chi1,
    Chi075,
    Chi05,
    LogSqrt,
    Agrawal,
    Bk,
    Thompson,
}

impl Label {
    fn spec(self, family: Family) -> PolicySpec {
        let large = |chi| PolicySpec::ucb_large(family, Schedule::chi_log(chi).unwrap()).unwrap();
        match self {
            Label::Chi1 => large(1.0),
            Label::Chi075 => large(0.75),
            Label::Chi05 => large(0.5),
            Label::LogSqrt => PolicySpec::ucb_large(family, Schedule::LogMinusSqrtLog).unwrap(),
            Label::Agrawal => PolicySpec::ucb_agrawal(family, Schedule::log()).unwrap(),
            Label::Bk => PolicySpec::ucb_bk(),
            Label::Thompson => PolicySpec::thompson(family),
        }
    }

    fn text(self) -> &'static str {
        match self {
            Label::Chi1 => "UCB-Large chi=1",
            Label::Chi075 => "UCB-Large chi=0.75",
            Label::Chi05 => "UCB-Large chi=0.5",
            Label::LogSqrt => "UCB-Large log-sqrt(log)",
            Label::Agrawal => "UCB-Agrawal",
            Label::Bk => "UCB-BK",
            Label::Thompson => "Thompson",
        }
    }
}

struct Batch {
    prior: PriorSpec,
    arms: usize,
    labels: Vec<Label>,
    result: BatchResult,
    seconds: f64,
}

impl Batch {
    fn run(prior: PriorSpec, arms: usize, runs: usize, labels: &[Label]) -> Batch {
        let config = RunConfig {
            prior,
            arms,
            horizon: HORIZON,
            runs,
            base_seed: SEED,
            policies: labels.iter().map(|l| l.spec(prior.family())).collect(),
            threads: 0,
        };
        let start = Instant::now();
        let result = run_batch(&config).expect("valid acceptance config");
        let seconds = start.elapsed().as_secs_f64();
        eprintln!("batch {} K={arms} J={runs}: {seconds:.0}s", prior.name());
        Batch {
            prior,
            arms,
            labels: labels.to_vec(),
            result,
            seconds,
        }
    }

    /// Per-run regrets of `label` over the first `runs` runs.
    fn regrets(&self, label: Label, runs: usize) -> Vec<f64> {
        let i = self.labels.iter().position(|&l| l == label).expect("policy in batch");
        self.result.records[..runs].iter().map(|r| r.outcomes[i].regret).collect()
    }
}

fn table_criterion(report: &mut Report, id: &'static str, title: &str, batch: &Batch, targets: &[(Label, f64)], tol: f64) {
    let runs = batch.result.records.len();
    let mut pass = true;
    let mut details = Vec::new();
    for &(label, target) in targets {
        let (mean, se) = mean_and_se(&batch.regrets(label, runs));
        let rel = (mean - target) / target;
        let ok = rel.abs() <= tol;
        pass &= ok;
        details.push(format!(
            "{:<24} {mean:>8.1} ± {se:>5.1}   target {target:>6.1}   {:+.1}%  {}",
            label.text(),
            100.0 * rel,
            if ok { "ok" } else { "OUT OF TOLERANCE" }
        ));
    }
    details.push(format!(
        "{} K={} N={HORIZON} J={runs} seed={SEED}, {:.0}s",
        batch.prior.name(),
        batch.arms,
        batch.seconds
    ));
    report.criterion(id, title, pass, &details);
}

/// Checks `a < b` on the first `runs` paired runs; the gap must exceed three
/// standard errors of the run-by-run differences.
fn ordering(batch: &Batch, a: Label, b: Label, runs: usize, details: &mut Vec<String>) -> bool {
    let ra = batch.regrets(a, runs);
    let rb = batch.regrets(b, runs);
    let (gap, se) = paired_difference(&rb, &ra);
    let unpaired = (mean_and_se(&ra).1.powi(2) + mean_and_se(&rb).1.powi(2)).sqrt();
    let ok = gap > 3.0 * se;
    details.push(format!(
        "{:<8} K={:<3} {:<19} < {:<19} gap {gap:>7.2}  paired se {se:>5.2} ({:>5.1} se)  unpaired se {unpaired:>5.2}  {}",
        batch.prior.name(),
        batch.arms,
        a.text(),
        b.text(),
        gap / se,
        if ok { "ok" } else { "NOT SEPARATED" }
    ));
    ok
}

fn conservation(batches: &[&Batch]) -> (bool, Vec<String>) {
    let mut pass = true;
    let mut details = Vec::new();
    for batch in batches {
        let mut checked = 0usize;
        let mut worst: f64 = 0.0;
        for record in &batch.result.records {
            let best = best_mean(&record.env);
            for (label, out) in batch.labels.iter().zip(&record.outcomes) {
                let init = label.spec(batch.prior.family()).init_per_arm();
                let total: u64 = out.pulls.iter().sum();
                let forced: f64 = record
                    .env
                    .iter()
                    .zip(&out.pulls)
                    .map(|(arm, &n)| (best - arm.mean()) * n.min(init) as f64)
                    .sum();
                let err = ((out.regret - out.tilde_regret) - forced).abs() / out.regret.max(1.0);
                worst = worst.max(err);
                pass &= total == HORIZON && out.pulls.iter().all(|&n| n >= init) && err <= 1e-9;
                checked += 1;
            }
        }
        details.push(format!(
            "{:<15} K={:<3} {checked:>6} runs: sum N_k = N, worst relative regret residual {worst:.1e}",
            batch.prior.name(),
            batch.arms
        ));
    }
    (pass, details)
}

fn solver_oracles() -> (bool, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let mut worst_diff: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut interior = 0;
    for _ in 0..1000 {
        let t: u64 = rng.random_range(1..=1000);
        let s: u64 = rng.random_range(0..=t);
        let x = s as f64 / t as f64;
        let b: f64 = rng.random_range(0.0..10.0);
        let fast = ucb_bernoulli(x, t, b).unwrap();
        let slow = generic_ucb(|u, x| rate_bernoulli(u, x).unwrap(), x, t, b, 1.0).unwrap();
        worst_diff = worst_diff.max((fast - slow).abs());
        if fast < 1.0 {
            interior += 1;
            let residual = (t as f64 * rate_bernoulli(fast, x).unwrap() - b).abs() / b.max(1.0);
            worst_residual = worst_residual.max(residual);
        }
    }
    let mut boundary = true;
    for t in [1u64, 2, 7, 100, 5000] {
        for b in [0.0, 0.3, 1.0, 4.0, 25.0] {
            boundary &= ucb_bernoulli(1.0, t, b).unwrap() == 1.0;
            boundary &= ucb_bernoulli(0.0, t, b).unwrap() == (-(-b / t as f64).exp_m1()).min(1.0);
        }
        for s in 0..=t.min(50) {
            let x = s as f64 / t as f64;
            boundary &= ucb_bernoulli(x, t, 0.0).unwrap() == x;
        }
    }
    let pass = worst_diff <= 1e-8 && worst_residual <= 1e-9 && boundary;
    (
        pass,
        vec![
            format!("1000 random queries: max |fast - bisection| = {worst_diff:.1e} (tol 1e-8)"),
            format!("{interior} interior roots: max residual / max(1,b) = {worst_residual:.1e} (tol 1e-9)"),
            format!("boundary closed forms exact: {boundary}"),
        ],
    )
}

fn equivalence() -> (bool, Vec<String>) {
    // K = 1: the arm-size correction vanishes, so both rules see the same
    // coefficient at every step and must replay identically.
    let mut replay = true;
    let mut steps = 0u64;
    for family in [Family::NormalKnownVar, Family::NormalUnknownVar, Family::Bernoulli] {
        for seed in 0..100u64 {
            let env = vec![match family {
                Family::NormalKnownVar => ArmDistribution::normal(0.3),
                Family::NormalUnknownVar => ArmDistribution::normal_unknown_var(0.3, 1.7),
                Family::Bernoulli => ArmDistribution::bernoulli(0.4),
            }
            .unwrap()];
            let large = PolicySpec::ucb_large(family, Schedule::chi_log(1.0).unwrap()).unwrap();
            let agrawal = PolicySpec::ucb_agrawal(family, Schedule::log()).unwrap();
            let mut a = PolicyState::new(large, 1).unwrap();
            let mut b = PolicyState::new(agrawal, 1).unwrap();
            let mut rewards = stream(seed, StreamRole::Rewards, 0);
            let mut rng = stream(seed, StreamRole::Policy, 0);
            for _ in 0..300 {
                let (ka, kb) = (a.choose_arm(&mut rng).unwrap(), b.choose_arm(&mut rng).unwrap());
                let x = env[0].draw(&mut rewards);
                a.record_reward(ka, x).unwrap();
                b.record_reward(kb, x).unwrap();
                replay &= ka == kb;
                if a.forced_queue().next().is_none() {
                    replay &= a.indices().unwrap() == b.indices().unwrap();
                }
                steps += 1;
            }
            let ra = run_single(&env, &large, 2000, &mut RunStreams::new(seed, 0, 1)).unwrap();
            let rb = run_single(&env, &agrawal, 2000, &mut RunStreams::new(seed, 0, 1)).unwrap();
            replay &= ra == rb;
        }
    }

    // Normal-unknown UCB-Large index versus the closed form
    // xbar + sigma_hat * sqrt(exp(2b/(t-1)) - 1), b = log(n/K).
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    while compared < 1000 {
        let arms: usize = rng.random_range(1..=12);
        let spec = PolicySpec::ucb_large(Family::NormalUnknownVar, Schedule::chi_log(1.0).unwrap()).unwrap();
        let mut state = PolicyState::new(spec, arms).unwrap();
        let mut samples = vec![Vec::new(); arms];
        for k in 0..arms {
            let count = rng.random_range(2..=40);
            let mu: f64 = rng.random_range(-3.0..3.0);
            let sd: f64 = rng.random_range(0.1..4.0);
            for _ in 0..count {
                let x = mu + sd * rng.random_range(-1.7..1.7);
                samples[k].push(x);
                state.record_reward(k, x).unwrap();
            }
        }
        let n: usize = samples.iter().map(Vec::len).sum();
        let b = (n as f64 / arms as f64).max(1.0).ln();
        for (k, value) in state.indices().unwrap().into_iter().enumerate() {
            let t = samples[k].len() as f64;
            let xbar = samples[k].iter().sum::<f64>() / t;
            let var = samples[k].iter().map(|x| (x - xbar) * (x - xbar)).sum::<f64>() / t;
            let closed = xbar + var.sqrt() * (2.0 * b / (t - 1.0)).exp_m1().sqrt();
            worst = worst.max((value - closed).abs() / closed.abs().max(1.0));
            compared += 1;
        }
    }
    let pass = replay && worst <= 1e-12;
    (
        pass,
        vec![
            format!("K=1 replay over 100 seeds x 3 families ({steps} stepwise index checks + full runs): {replay}"),
            format!("{compared} normal-unknown indices vs closed form: max relative difference {worst:.1e} (tol 1e-12)"),
        ],
    )
}

fn cli_determinism() -> (bool, Vec<String>) {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for example in ["normal-known", "normal-unknown", "bernoulli"] {
        let mut files = Vec::new();
        for (i, threads) in ["1", "1", "0", "3"].iter().enumerate() {
            let path = dir.path().join(format!("{example}-{i}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_ucb-large"))
                .args(["sim", "--example", example, "--K", "10", "--N", "5000", "--runs", "24"])
                .args(["--seed", "11", "--threads", threads, "--out"])
                .arg(&path)
                .output()
                .expect("binary runs")
                .status;
            pass &= status.success();
            let text = std::fs::read_to_string(&path).unwrap_or_default();
            let stripped: Vec<String> = text
                .lines()
                .map(|l| l.rsplit_once(',').map(|(h, _)| h.to_string()).unwrap_or_default())
                .collect();
            files.push(stripped);
        }
        let same = files.iter().all(|f| f == &files[0] && f.len() > 1);
        pass &= same;
        details.push(format!(
            "{example}: --threads 1, 1, 0, 3 give identical CSV apart from wall_seconds: {same}"
        ));
    }
    (pass, details)
}

fn main() {
    let mut report = Report { failed: Vec::new() };
    let started = Instant::now();

    let (pass, details) = solver_oracles();
    report.criterion("C5", "Bernoulli solver agrees with bisection; residuals and boundary forms", pass, &details);
    let (pass, details) = equivalence();
    report.criterion("C6", "K=1 equivalence with UCB-Agrawal; unknown-variance closed form", pass, &details);
    let (pass, details) = cli_determinism();
    report.criterion("C7", "sim output independent of reruns and --threads", pass, &details);

    use Label::*;
    let ex4 = Batch::run(PriorSpec::NormalMeansUnitVar, 10, 2000, &[Chi1, Chi075, Chi05, LogSqrt, Agrawal, Thompson]);
    table_criterion(
        &mut report,
        "C1",
        "normal known variance, K=10, J=2000, within 10%",
        &ex4,
        &[(Chi1, 144.0), (Chi075, 119.0), (Chi05, 113.0), (LogSqrt, 118.0), (Agrawal, 176.0), (Thompson, 123.0)],
        0.10,
    );
    let ex6 = Batch::run(PriorSpec::UniformBernoulli, 10, 2000, &[Chi1, Chi075, Chi05, Agrawal, Thompson]);
    table_criterion(
        &mut report,
        "C2",
        "Bernoulli, K=10, J=2000, within 10%",
        &ex6,
        &[(Chi05, 43.4), (Agrawal, 76.3), (Thompson, 53.3)],
        0.10,
    );
    let ex5 = Batch::run(PriorSpec::NormalMeansExpVar, 10, 2000, &[Chi05, Bk, Thompson]);
    table_criterion(
        &mut report,
        "C3",
        "normal unknown variance, K=10, J=2000, within 15%",
        &ex5,
        &[(Chi05, 177.0), (Bk, 273.0), (Thompson, 191.0)],
        0.15,
    );

    let ex4_100 = Batch::run(PriorSpec::NormalMeansUnitVar, 100, 1000, &[Chi1, Chi075, Chi05, Agrawal]);
    let ex6_100 = Batch::run(PriorSpec::UniformBernoulli, 100, 1000, &[Chi1, Chi075, Chi05, Agrawal]);
    let ex5_100 = Batch::run(PriorSpec::NormalMeansExpVar, 100, 1000, &[Chi05, Bk]);
    let mut pass = true;
    let mut details = Vec::new();
    let mut unresolved = Vec::new();
    for batch in [&ex4, &ex4_100, &ex6, &ex6_100] {
        for (a, b) in [(Chi05, Chi075), (Chi075, Chi1), (Chi1, Agrawal)] {
            let ok = ordering(batch, a, b, 1000, &mut details);
            if !ok && batch.result.records.len() > 1000 {
                unresolved.push((batch, a, b));
            }
            pass &= ok;
        }
    }
    for batch in [&ex5, &ex5_100] {
        pass &= ordering(batch, Chi05, Bk, 1000, &mut details);
    }
    details.push("J=1000 paired runs per K (K=10 uses the first 1000 runs of the batches above)".into());
    for (batch, a, b) in unresolved {
        // Not part of the verdict: shows whether the gap is real but under-resolved at J=1000.
        let mut info = Vec::new();
        ordering(batch, a, b, batch.result.records.len(), &mut info);
        details.push(format!("for reference, all {} runs: {}", batch.result.records.len(), info[0].trim_end()));
    }
    report.criterion("C4", "regret orderings separated by more than 3 standard errors", pass, &details);

    let (pass, details) = conservation(&[&ex4, &ex6, &ex5, &ex4_100, &ex6_100, &ex5_100]);
    report.criterion("C8", "pull and regret conservation in every run", pass, &details);

    println!(
        "acceptance: {} of 8 criteria passed in {:.0}s",
        8 - report.failed.len(),
        started.elapsed().as_secs_f64()
    );
    if !report.failed.is_empty() {
        println!("failed: {}", report.failed.join(", "));
        std::process::exit(1);
    }
}
