//! `tgrand-sim`: decoding probability versus `N` for RLC, RLC+SD and
//! RLC+T-GRAND over a burst-error channel, written as CSV.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::Parser;
use tgrand_core::pipeline::Decoder;
use tgrand_core::sim::{run_experiment, write_csv, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "tgrand-sim", version, about)]
struct Args {
    /// Key=value file with the same keys as the long flags (`k`, `n-min`, …).
    /// Flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Source packets.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Bits per packet.
    #[arg(long)]
    b: Option<usize>,
    /// Bit error rate.
    #[arg(long)]
    eps: Option<f64>,
    /// Mean burst length.
    #[arg(long)]
    burst_len: Option<f64>,
    /// Comma-separated subset of rlc,sd,tgrand.
    #[arg(long)]
    decoders: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Candidates tested per bit position before giving up.
    #[arg(long)]
    query_cap: Option<u64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

/// Settings after merging defaults, config file and flags.
#[derive(Debug, Default)]
struct Overrides {
    k: Option<usize>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    b: Option<usize>,
    eps: Option<f64>,
    burst_len: Option<f64>,
    decoders: Option<String>,
    trials: Option<usize>,
    seed: Option<u64>,
    query_cap: Option<u64>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow::anyhow!("bad value '{value}' for '{key}': {e}"))
}

fn read_config(path: &PathBuf) -> Result<Overrides> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut seen = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), lineno + 1);
        };
        let key = key.trim().replace('_', "-");
        seen.insert(key, value.trim().to_string());
    }

    let mut o = Overrides::default();
    for (key, v) in &seen {
        match key.as_str() {
            "k" => o.k = Some(parse_value(key, v)?),
            "n-min" => o.n_min = Some(parse_value(key, v)?),
            "n-max" => o.n_max = Some(parse_value(key, v)?),
            "b" => o.b = Some(parse_value(key, v)?),
            "eps" => o.eps = Some(parse_value(key, v)?),
            "burst-len" | "lambda" => o.burst_len = Some(parse_value(key, v)?),
            "decoders" => o.decoders = Some(v.clone()),
            "trials" => o.trials = Some(parse_value(key, v)?),
            "seed" => o.seed = Some(parse_value(key, v)?),
            "query-cap" => o.query_cap = Some(parse_value(key, v)?),
            "out" => o.out = Some(PathBuf::from(v)),
            "threads" => o.threads = Some(parse_value(key, v)?),
            other => bail!("{}: unknown key '{other}'", path.display()),
        }
    }
    Ok(o)
}

fn build_config(args: Args) -> Result<SimConfig> {
    let file = match &args.config {
        Some(p) => read_config(p)?,
        None => Overrides::default(),
    };
    let defaults = SimConfig::default();
    let k = args.k.or(file.k).unwrap_or(defaults.k);
    let n_min = args.n_min.or(file.n_min).unwrap_or(*defaults.n_list.first().unwrap());
    let n_max = args.n_max.or(file.n_max).unwrap_or(*defaults.n_list.last().unwrap());
    if n_min > n_max {
        bail!("n-min ({n_min}) exceeds n-max ({n_max})");
    }
    let decoders = match args.decoders.or(file.decoders) {
        Some(list) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Decoder::from_str)
            .collect::<std::result::Result<Vec<_>, _>>()?,
        None => defaults.decoders,
    };
    let config = SimConfig {
        k,
        n_list: (n_min..=n_max).collect(),
        b: args.b.or(file.b).unwrap_or(defaults.b),
        eps: args.eps.or(file.eps).unwrap_or(defaults.eps),
        lambda: args.burst_len.or(file.burst_len).unwrap_or(defaults.lambda),
        decoders,
        trials: args.trials.or(file.trials).unwrap_or(defaults.trials),
        master_seed: args.seed.or(file.seed).unwrap_or(defaults.master_seed),
        query_cap: args.query_cap.or(file.query_cap).unwrap_or(defaults.query_cap),
        out_path: args.out.or(file.out),
        threads: args.threads.or(file.threads),
    };
    config.validate()?;
    Ok(config)
}

fn run(args: Args) -> Result<()> {
    let config = build_config(args)?;
    let records = run_experiment(&config)?;
    if config.out_path.is_none() {
        write_csv(&records, std::io::stdout().lock())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
