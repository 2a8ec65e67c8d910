use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use sawkit::enumerate::{self, EnumerationConfig};
use sawkit::montecarlo::{self, ExperimentConfig};
use sawkit::surgery::SurgeryTrace;
use sawkit::verify::{self, Fault};
use sawkit::{structure, Bridge, Error, SelfAvoidingWalk, Walk};

/// Self-avoiding walks and bridges: exact counts, structure, surgery and
/// sampling.
#[derive(Parser)]
#[command(name = "sawkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of walks, bridges and irreducible bridges.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Renewal points, diamond points, zigzags and level profile of a walk.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        walk: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Unfold a zigzag or stickbreak a bridge, printing a trace.
    Surgery {
        #[arg(long, allow_hyphen_values = true)]
        walk: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        op: Op,
        /// The zigzag `i,j` or the diamond indices `d_i,d_j`.
        #[arg(long)]
        params: String,
    },
    /// Run the exhaustive lemma suite over all bridges up to a length.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Sample walks from the truncated irreducible-bridge law.
    Sample {
        /// Flat `key = value` file; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        mu_hat: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        blocks: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Diamond-rank window for the first cut, as `lo,hi`.
        #[arg(long)]
        window_i: Option<String>,
        /// Diamond-rank window for the second cut, as `lo,hi`.
        #[arg(long)]
        window_j: Option<String>,
        #[arg(long)]
        threads: Option<usize>,
        /// Run the stickbreak experiment instead of the walk statistics.
        #[arg(long)]
        stickbreak: bool,
        /// CSV instead of JSON (walk statistics only).
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Unfold,
    Stickbreak,
}

/// A problem with the command line itself rather than with the data.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<Error>(),
                    Some(Error::MalformedToken { .. } | Error::AxisOutOfRange { .. } | Error::InvalidDimension(_))
                );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Count { max_n, d, out, threads, csv } => count(max_n as usize, d, out, threads, csv),
        Command::Analyze { walk, d } => {
            let w = SelfAvoidingWalk::new(Walk::parse(&walk, d)?)?;
            let report = structure::analyze(&w);
            if report.renewal.is_none() {
                eprintln!("note: not a bridge; renewal points and zigzags omitted");
            }
            println!("{}", report.to_json());
            Ok(())
        }
        Command::Surgery { walk, d, op, params } => {
            let b = Bridge::new(Walk::parse(&walk, d)?)?;
            let (i, j) = parse_pair::<usize>("params", &params)?;
            let trace = match op {
                Op::Unfold => SurgeryTrace::unfold(&b, (i, j))?,
                Op::Stickbreak => SurgeryTrace::stickbreak(&b, i, j)?,
            };
            println!("{}", trace.to_json());
            Ok(())
        }
        Command::Verify { max_n, d, threads, inject_fault } => {
            let fault = inject_fault.then_some(Fault::DiamondScan);
            let report = with_threads(threads, || verify::run_with_fault(max_n, d, fault))?
                .map_err(|e| match e {
                    Error::BudgetExceeded { .. } => anyhow::Error::new(Usage(e.to_string())),
                    e => e.into(),
                })?;
            for lemma in &report.lemmas {
                println!("{lemma}");
            }
            if let Some(bad) = report.first_failure() {
                let (w, why) = bad.counterexample.as_ref().expect("failed lemma");
                bail!("{} fails on {}: {why}", bad.name, serde_json::to_string(w)?);
            }
            eprintln!("all {} lemmas hold for d = {d}, n ≤ {max_n}", report.lemmas.len());
            Ok(())
        }
        Command::Sample {
            config,
            l,
            mu_hat,
            d,
            blocks,
            samples,
            seed,
            window_i,
            window_j,
            threads,
            stickbreak,
            csv,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    ExperimentConfig::parse(&text).map_err(|e| Usage(e.to_string()))?
                }
                None => ExperimentConfig::default(),
            };
            let overrides = [
                ("L", l.map(|v| v.to_string())),
                ("mu_hat", mu_hat.map(|v| v.to_string())),
                ("d", d.map(|v| v.to_string())),
                ("blocks", blocks.map(|v| v.to_string())),
                ("samples", samples.map(|v| v.to_string())),
                ("seed", seed.map(|v| v.to_string())),
                ("window_i", window_i),
                ("window_j", window_j),
            ];
            for (key, raw) in overrides {
                if let Some(raw) = raw {
                    cfg.set(key, &raw).map_err(|e| Usage(e.to_string()))?;
                }
            }
            cfg.windows.validate().map_err(|e| Usage(e.to_string()))?;
            sample(&cfg, threads, stickbreak, csv)
        }
    }
}

fn with_threads<R: Send>(threads: Option<usize>, op: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    match threads {
        None => Ok(op()),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build()?.install(op)),
    }
}

fn parse_pair<T: std::str::FromStr>(name: &str, raw: &str) -> anyhow::Result<(T, T)> {
    let parsed = raw
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    parsed.ok_or_else(|| Usage(format!("--{name} expects two comma-separated integers, got {raw:?}")).into())
}

fn count(max_n: usize, d: usize, out: Option<PathBuf>, threads: Option<usize>, csv: bool) -> anyhow::Result<()> {
    let cfg = EnumerationConfig {
        threads,
        ..EnumerationConfig::default()
    };
    let table = enumerate::build_counts_table_with(max_n, d, &cfg)?;
    let body = if csv { table.to_csv() } else { table.to_json() + "\n" };
    match out {
        Some(path) => fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }

    let c_n = table.c[max_n].to_f64().unwrap_or(f64::INFINITY);
    let mu_hat = c_n.powf(1.0 / max_n as f64);
    let mut err = std::io::stderr().lock();
    if mu_hat > 1.0 {
        let audit = enumerate::kesten_partial_sums(&table, mu_hat)?;
        writeln!(err, "Kesten partial sums with mu_hat = c_{max_n}^(1/{max_n}) = {mu_hat:.6}")?;
        for (k, s) in audit.partial_sums.iter().enumerate() {
            writeln!(err, "  S_{} = {s:.9}", k + 1)?;
        }
        writeln!(
            err,
            "  strictly increasing: {}, all below 1: {}",
            audit.is_strictly_increasing(),
            audit.all_below_one()
        )?;
    }
    if max_n >= 2 {
        writeln!(err, "connective constant estimates")?;
        for e in enumerate::connective_estimates(&table)? {
            let ratio = e.ratio.map_or_else(|| "-".to_string(), |r| format!("{r:.6}"));
            writeln!(err, "  n = {:>2}  c_n^(1/n) = {:.6}  c_(n+1)/c_n = {ratio}", e.n, e.upper_bound)?;
        }
    }
    Ok(())
}

fn sample(cfg: &ExperimentConfig, threads: Option<usize>, stickbreak: bool, csv: bool) -> anyhow::Result<()> {
    let mu_hat = match cfg.mu_hat {
        Some(m) => m,
        None => montecarlo::default_mu_hat(cfg.d)?,
    };
    let law = montecarlo::build_truncated_law(cfg.l, mu_hat, cfg.d)?;
    eprintln!(
        "law: L = {}, d = {}, mu_hat = {mu_hat:.6}, support size {}, Z_L = {:.9}",
        cfg.l,
        cfg.d,
        law.support.len(),
        law.z
    );
    if stickbreak {
        let report =
            montecarlo::stickbreak_experiment(&law, cfg.blocks, cfg.windows, cfg.samples, cfg.seed, threads)?;
        println!("{}", serde_json::to_string_pretty(&report)?);
        if report.applied > 0 && (report.self_avoiding_rate < 1.0 || !report.all_length_plus_two) {
            bail!("stickbreak produced an invalid walk");
        }
        return Ok(());
    }
    let stats = montecarlo::run_stats(&law, cfg.blocks, cfg.samples, cfg.seed, threads)?;
    if csv {
        print!("{}", stats.to_csv());
    } else {
        println!("{}", stats.to_json());
    }
    let m = stats.mean_block_length;
    eprintln!(
        "mean block length {:.6} ± {:.6}, exact {:.6} ({} 3 standard errors)",
        m.mean,
        m.stderr,
        stats.exact_mean_block_length,
        if m.within(stats.exact_mean_block_length, 3.0) { "within" } else { "outside" }
    );
    if stats.structural_failures > 0 {
        bail!("{} sampled walks failed a structural check", stats.structural_failures);
    }
    Ok(())
}
