//! The `ucb-large` command line and its CSV format.
//!
//! Subcommands:
//!
//! - `sim` runs a batch of paired Monte-Carlo runs and writes one CSV row per
//!   policy;
//! - `bound` evaluates a single upper confidence bound from explicit
//!   statistics;
//! - `table` re-renders one or more `sim` CSV files as aligned text tables,
//!   one block per example with a column per arm count.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors. Data
//! goes to files or standard output; progress goes to standard error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::confidence::{
    generic_ucb, normal_search_cap, ucb_bernoulli, ucb_bk_unknown, ucb_normal_known,
    ucb_normal_unknown, Schedule,
};
use crate::policies::{PolicyKind, PolicySpec};
use crate::reward_models::{bernoulli_kl_unchecked, m_function, rate_normal_known, Family};
use crate::simulator::{run_batch, PriorSpec, RunConfig, RunSummary};

/// Header of every CSV file written by `sim`.
pub const CSV_HEADER: [&str; 12] = [
    "example",
    "policy",
    "params",
    "K",
    "N",
    "runs",
    "seed",
    "mean_regret",
    "se_regret",
    "mean_tilde_regret",
    "lower_bound_r",
    "wall_seconds",
];

#[derive(Debug, Parser)]
#[command(name = "ucb-large", version, about = "UCB-Large bandit simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a regret simulation and write one summary row per policy.
    Sim(SimArgs),
    /// Evaluate one upper confidence bound.
    Bound(BoundArgs),
    /// Render sim CSV output as aligned tables.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Example {
    NormalKnown,
    NormalUnknown,
    Bernoulli,
}

impl Example {
    fn prior(self) -> PriorSpec {
        match self {
            Example::NormalKnown => PriorSpec::NormalMeansUnitVar,
            Example::NormalUnknown => PriorSpec::NormalMeansExpVar,
            Example::Bernoulli => PriorSpec::UniformBernoulli,
        }
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Reward model and prior.
    #[arg(long, value_enum, default_value = "normal-known")]
    example: Example,
    /// Number of arms.
    #[arg(long = "K", default_value_t = 10)]
    arms: usize,
    /// Rewards per run.
    #[arg(long = "N", default_value_t = 20_000)]
    horizon: u64,
    /// Number of independent runs.
    #[arg(long, default_value_t = 200)]
    runs: usize,
    /// Comma-separated `name[:key=value...]` list; defaults to the full
    /// comparison for the example.
    #[arg(long)]
    policies: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV output path; CSV goes to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the summaries as a JSON array to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundRule {
    /// Effective sample size `t - 1` for unknown variance.
    Large,
    /// Burnetas-Katehakis, divisor `t`.
    Bk,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    family: Example,
    #[arg(long, allow_negative_numbers = true)]
    xbar: f64,
    /// Rewards observed on the arm.
    #[arg(long)]
    t: u64,
    /// Confidence coefficient.
    #[arg(long)]
    b: f64,
    /// Biased sample standard deviation (normal-unknown only).
    #[arg(long)]
    sigma_hat: Option<f64>,
    #[arg(long, value_enum, default_value = "large")]
    rule: BoundRule,
    /// Solve by bisection instead of the closed form or iteration.
    #[arg(long)]
    generic: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// CSV files written by `sim`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Sim(args) => sim(args),
        Command::Bound(args) => bound(args),
        Command::Table(args) => table(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Runtime(msg) => eprintln!("error: {msg}"),
            }
            e.code()
        }
    }
}

fn sim(args: SimArgs) -> Result<(), CliError> {
    let prior = args.example.prior();
    let policies = match &args.policies {
        Some(text) => parse_policies(text, prior.family()).map_err(CliError::Usage)?,
        None => default_policies(prior.family()),
    };
    let config = RunConfig {
        prior,
        arms: args.arms,
        horizon: args.horizon,
        runs: args.runs,
        base_seed: args.seed,
        policies,
        threads: args.threads,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    eprintln!(
        "sim: {} K={} N={} runs={} policies={}",
        prior.name(),
        config.arms,
        config.horizon,
        config.runs,
        config.policies.len()
    );
    let start = Instant::now();
    let batch = run_batch(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
    eprintln!("sim: finished in {:.1}s", start.elapsed().as_secs_f64());

    if let Some(path) = &args.json {
        write_json(&batch.summaries, path)?;
    }
    match &args.out {
        Some(path) => {
            write_csv(&batch.summaries, path)?;
            let rows = parse_csv(&render_csv(&batch.summaries)?)?;
            print!("{}", render_tables(&rows));
        }
        None => print!("{}", render_csv(&batch.summaries)?),
    }
    Ok(())
}

/// The comparison each example reports: UCB-Large with chi = 1, 0.75, 0.5
/// and `log - sqrt(log)`, the classical baseline, and Thompson sampling.
pub fn default_policies(family: Family) -> Vec<PolicySpec> {
    let large = |s: Schedule| PolicySpec::ucb_large(family, s).expect("valid schedule");
    let mut out = vec![
        large(Schedule::ChiLog { chi: 1.0 }),
        large(Schedule::ChiLog { chi: 0.75 }),
        large(Schedule::ChiLog { chi: 0.5 }),
        large(Schedule::LogMinusSqrtLog),
    ];
    out.push(match family {
        Family::NormalUnknownVar => PolicySpec::ucb_bk(),
        _ => PolicySpec::ucb_agrawal(family, Schedule::log()).expect("valid schedule"),
    });
    out.push(PolicySpec::thompson(family));
    out
}

/// Parses a comma-separated policy list such as
/// `ucb-large:chi=0.5,ucb-large:schedule=log-sqrt,ucb-agrawal,thompson`.
pub fn parse_policies(text: &str, family: Family) -> Result<Vec<PolicySpec>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| parse_policy(item, family))
        .collect()
}

fn parse_policy(item: &str, family: Family) -> Result<PolicySpec, String> {
    let mut parts = item.split(':');
    let name = parts.next().unwrap_or_default();
    let kind = match name {
        "ucb-large" => PolicyKind::UcbLarge,
        "ucb-agrawal" => PolicyKind::UcbAgrawal,
        "ucb-bk" => PolicyKind::UcbBk,
        "thompson" => PolicyKind::Thompson,
        other => return Err(format!("unknown policy '{other}' in --policies")),
    };

    let mut schedule_name = None;
    let mut chi = None;
    let mut alpha = None;
    let mut q = None;
    for kv in parts {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in --policies item '{item}', got '{kv}'"))?;
        let number = || {
            value
                .parse::<f64>()
                .map_err(|_| format!("'{value}' is not a number in --policies item '{item}'"))
        };
        match key {
            "schedule" => schedule_name = Some(value.to_string()),
            "chi" => chi = Some(number()?),
            "alpha" => alpha = Some(number()?),
            "q" => q = Some(number()?),
            other => return Err(format!("unknown key '{other}' in --policies item '{item}'")),
        }
    }

    let ucb = matches!(kind, PolicyKind::UcbLarge | PolicyKind::UcbAgrawal);
    if !ucb && (schedule_name.is_some() || chi.is_some() || alpha.is_some()) {
        return Err(format!("{name} takes no schedule parameters"));
    }
    let spec = match kind {
        PolicyKind::UcbBk => {
            if family != Family::NormalUnknownVar {
                return Err("ucb-bk requires --example normal-unknown".to_string());
            }
            PolicySpec::ucb_bk()
        }
        PolicyKind::Thompson => PolicySpec::thompson(family),
        _ => {
            let schedule = match schedule_name.as_deref().unwrap_or("chi-log") {
                "chi-log" => {
                    if alpha.is_some() {
                        return Err(format!("alpha needs schedule=log-alpha in '{item}'"));
                    }
                    Schedule::chi_log(chi.unwrap_or(1.0)).map_err(|e| e.to_string())?
                }
                "log-sqrt" if chi.is_none() && alpha.is_none() => Schedule::LogMinusSqrtLog,
                "log-alpha" if chi.is_none() => {
                    Schedule::log_plus_alpha_log_log(alpha.unwrap_or(2.0)).map_err(|e| e.to_string())?
                }
                "log-sqrt" | "log-alpha" => {
                    return Err(format!("conflicting schedule parameters in '{item}'"))
                }
                other => return Err(format!("unknown schedule '{other}' in '{item}'")),
            };
            if kind == PolicyKind::UcbLarge {
                PolicySpec::ucb_large(family, schedule)
            } else {
                PolicySpec::ucb_agrawal(family, schedule)
            }
            .map_err(|e| e.to_string())?
        }
    };
    match q {
        Some(q) => spec.with_q(q).map_err(|e| e.to_string()),
        None => Ok(spec),
    }
}

fn bound(args: BoundArgs) -> Result<(), CliError> {
    let usage = |e: crate::Error| CliError::Usage(e.to_string());
    let (xbar, t, b) = (args.xbar, args.t, args.b);
    let value = match args.family {
        Example::NormalKnown => {
            if args.generic {
                generic_ucb(rate_normal_known, xbar, t, b, normal_search_cap(xbar, t, b))
            } else {
                ucb_normal_known(xbar, t, b)
            }
        }
        Example::Bernoulli => {
            if args.generic {
                if !(0.0..=1.0).contains(&xbar) {
                    return Err(CliError::Usage(format!("--xbar must lie in [0, 1], got {xbar}")));
                }
                generic_ucb(bernoulli_kl_unchecked, xbar, t, b, 1.0)
            } else {
                ucb_bernoulli(xbar, t, b)
            }
        }
        Example::NormalUnknown => {
            let sigma = args
                .sigma_hat
                .ok_or_else(|| CliError::Usage("--sigma-hat is required for normal-unknown".into()))?;
            let effective = match args.rule {
                BoundRule::Large => t.saturating_sub(1),
                BoundRule::Bk => t,
            };
            if args.generic {
                if !(sigma > 0.0) || effective < 1 {
                    return Err(CliError::Usage(
                        "--generic needs --sigma-hat > 0 and an effective sample size >= 1".into(),
                    ));
                }
                // exp(2b/t) - 1 grows quickly; search up to the closed form's reach.
                let cap = xbar + sigma * (2.0 * b / effective as f64).exp().sqrt() + 1.0;
                generic_ucb(|u, x| m_function((u - x) / sigma), xbar, effective, b, cap)
            } else {
                match args.rule {
                    BoundRule::Large => ucb_normal_unknown(xbar, sigma, t, b),
                    BoundRule::Bk => ucb_bk_unknown(xbar, sigma, t, b),
                }
            }
        }
    }
    .map_err(usage)?;
    println!("{value:.7}");
    Ok(())
}

/// Formats a real with 6 significant digits, like C's `%g`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan" } else if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn summary_record(s: &RunSummary) -> [String; 12] {
    [
        s.example.to_string(),
        s.policy.to_string(),
        s.params.clone(),
        s.arms.to_string(),
        s.horizon.to_string(),
        s.runs.to_string(),
        s.base_seed.to_string(),
        format_sig6(s.mean_regret),
        format_sig6(s.se_regret),
        format_sig6(s.mean_tilde_regret),
        format_sig6(s.lower_bound_r),
        format_sig6(s.wall_seconds),
    ]
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_records<W: Write>(summaries: &[RunSummary], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for s in summaries {
        w.write_record(summary_record(s)).map_err(csv_error)?;
    }
    w.flush()
}

/// Renders summaries in the CSV format, header first, one row per summary.
pub fn render_csv(summaries: &[RunSummary]) -> io::Result<String> {
    let mut buf = Vec::new();
    write_records(summaries, &mut buf)?;
    String::from_utf8(buf).map_err(io::Error::other)
}

/// Writes the CSV atomically: a temporary file in the target directory is
/// renamed over `path`, so a failed write leaves nothing behind.
pub fn write_csv(summaries: &[RunSummary], path: &Path) -> io::Result<()> {
    write_atomic(path, |f| write_records(summaries, f))
}

/// Summaries as a JSON array of objects keyed like the CSV columns, with
/// full-precision numbers.
pub fn render_json(summaries: &[RunSummary]) -> String {
    let rows: Vec<serde_json::Value> = summaries
        .iter()
        .map(|s| {
            serde_json::json!({
                "example": s.example,
                "policy": s.policy,
                "params": s.params,
                "K": s.arms,
                "N": s.horizon,
                "runs": s.runs,
                "seed": s.base_seed,
                "mean_regret": s.mean_regret,
                "se_regret": s.se_regret,
                "mean_tilde_regret": s.mean_tilde_regret,
                "lower_bound_r": s.lower_bound_r,
                "wall_seconds": s.wall_seconds,
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("plain values serialize");
    text.push('\n');
    text
}

/// Writes [`render_json`] atomically, like [`write_csv`].
pub fn write_json(summaries: &[RunSummary], path: &Path) -> io::Result<()> {
    let text = render_json(summaries);
    write_atomic(path, |f| f.write_all(text.as_bytes()))
}

fn write_atomic(path: &Path, fill: impl FnOnce(&mut std::fs::File) -> io::Result<()>) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    fill(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// One CSV row, with every cell kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub example: String,
    pub policy: String,
    pub params: String,
    pub arms: String,
    pub horizon: String,
    pub runs: String,
    pub seed: String,
    pub mean_regret: String,
    pub se_regret: String,
    pub mean_tilde_regret: String,
    pub lower_bound_r: String,
    pub wall_seconds: String,
}

/// Parses CSV text written by `sim`. The header must match [`CSV_HEADER`].
pub fn parse_csv(text: &str) -> io::Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected CSV header: {}", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    reader
        .records()
        .map(|r| {
            let r = r.map_err(csv_error)?;
            let f = |i: usize| r.get(i).unwrap_or_default().to_string();
            Ok(CsvRow {
                example: f(0),
                policy: f(1),
                params: f(2),
                arms: f(3),
                horizon: f(4),
                runs: f(5),
                seed: f(6),
                mean_regret: f(7),
                se_regret: f(8),
                mean_tilde_regret: f(9),
                lower_bound_r: f(10),
                wall_seconds: f(11),
            })
        })
        .collect()
}

/// Aligned text tables: one block per (example, N, runs, seed), rows per
/// policy in first-seen order, one column per K. The main table shows
/// `mean±se` plus a row of median lower-bound constants; two smaller tables
/// follow with the initialization-free regret and the wall time.
pub fn render_tables(rows: &[CsvRow]) -> String {
    let mut groups: Vec<[&str; 4]> = Vec::new();
    for r in rows {
        let key = [r.example.as_str(), &r.horizon, &r.runs, &r.seed];
        if !groups.contains(&key) {
            groups.push(key);
        }
    }

    let mut out = String::new();
    for [example, horizon, runs, seed] in groups {
        let block: Vec<&CsvRow> = rows
            .iter()
            .filter(|r| [r.example.as_str(), &r.horizon, &r.runs, &r.seed] == [example, horizon, runs, seed])
            .collect();
        let ks: BTreeSet<(u64, &str)> = block
            .iter()
            .map(|r| (r.arms.parse().unwrap_or(u64::MAX), r.arms.as_str()))
            .collect();
        let mut labels: Vec<(&str, &str)> = Vec::new();
        for r in &block {
            let l = (r.policy.as_str(), r.params.as_str());
            if !labels.contains(&l) {
                labels.push(l);
            }
        }

        let section = |title: &str, cell: &dyn Fn(&CsvRow) -> String, footer: bool| {
            let mut grid: Vec<Vec<String>> = Vec::new();
            let mut head = vec![title.to_string(), "params".to_string()];
            head.extend(ks.iter().map(|(_, k)| format!("K={k}")));
            grid.push(head);
            for &(policy, params) in &labels {
                let mut line = vec![policy.to_string(), params.to_string()];
                for &(_, k) in &ks {
                    line.push(
                        block
                            .iter()
                            .find(|r| r.policy == policy && r.params == params && r.arms == k)
                            .map(|r| cell(r))
                            .unwrap_or_else(|| "-".to_string()),
                    );
                }
                grid.push(line);
            }
            if footer {
                let mut line = vec!["lower bound r".to_string(), "(median)".to_string()];
                for &(_, k) in &ks {
                    line.push(
                        block
                            .iter()
                            .find(|r| r.arms == k)
                            .map(|r| r.lower_bound_r.clone())
                            .unwrap_or_else(|| "-".to_string()),
                    );
                }
                grid.push(line);
            }
            align(&grid, footer)
        };

        out.push_str(&format!("{example}  N={horizon}  runs={runs}  seed={seed}\n"));
        out.push_str(&section("regret", &|r| format!("{}±{}", r.mean_regret, r.se_regret), true));
        out.push('\n');
        out.push_str(&section("tilde regret", &|r| r.mean_tilde_regret.clone(), false));
        out.push('\n');
        out.push_str(&section("seconds", &|r| r.wall_seconds.clone(), false));
        out.push('\n');
    }
    out
}

fn align(grid: &[Vec<String>], footer: bool) -> String {
    let columns = grid[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let rule = "-".repeat(widths.iter().sum::<usize>() + 2 * (columns - 1));
    let mut out = String::new();
    for (i, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                let pad = " ".repeat(widths[c] - cell.chars().count());
                if c < 2 {
                    format!("{cell}{pad}")
                } else {
                    format!("{pad}{cell}")
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
        if i == 0 || (footer && i + 2 == grid.len()) {
            out.push_str(&rule);
            out.push('\n');
        }
    }
    out
}

fn table(args: TableArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for path in &args.inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        rows.extend(
            parse_csv(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?,
        );
    }
    print!("{}", render_tables(&rows));
    Ok(())
}
