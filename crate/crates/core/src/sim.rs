//! Monte Carlo driver: decoding probability versus `N` for each receiver.
//!
//! Trial randomness is keyed on `(master_seed, N, trial_index)`:
//!
//! ```text
//! trial_seed   = derive(derive(master_seed, N), trial_index)
//! generator    = derive(trial_seed, 0)   // P
//! source       = derive(trial_seed, 1)   // U, one bit per output, row-major
//! channel      = derive(trial_seed, 2)   // E, then per-row substreams
//! ```
//!
//! Every decoder therefore sees the same `(G, U, E)` for a given trial, and
//! results do not depend on how trials are spread over worker threads.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelParams};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pipeline::{classify, decode, DecodeOutcome, Decoder, ReceivedBatch};
use crate::rlc::{encode, make_generator, parity_check, Generator, ParityCheck};
use crate::rng::{derive, SplitMix64};
use crate::syndrome::DEFAULT_QUERY_CAP;

pub const CSV_HEADER: &str = "decoder,K,N,B,eps,lambda,trials,successes,decoding_probability,mean_queries,wall_seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub k: usize,
    pub n_list: Vec<usize>,
    /// Bits per packet.
    pub b: usize,
    pub eps: f64,
    /// Mean burst length.
    pub lambda: f64,
    pub decoders: Vec<Decoder>,
    pub trials: usize,
    pub master_seed: u64,
    pub query_cap: u64,
    pub out_path: Option<PathBuf>,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            k: 10,
            n_list: (10..=20).collect(),
            b: 64,
            eps: 0.05,
            lambda: 4.0,
            decoders: Decoder::ALL.to_vec(),
            trials: 10_000,
            master_seed: 1,
            query_cap: DEFAULT_QUERY_CAP,
            out_path: None,
            threads: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.k == 0 {
            return bad("K must be at least 1".into());
        }
        if self.n_list.is_empty() {
            return bad("no N values given".into());
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n < self.k) {
            return bad(format!("N = {n} is below K = {}", self.k));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.decoders.is_empty() {
            return bad("no decoders selected".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        self.channel()?;
        Ok(())
    }

    pub fn channel(&self) -> Result<ChannelParams> {
        ChannelParams::from_eps_lambda(self.eps, self.lambda)
    }
}

/// Everything one trial draws, shared by all decoders.
#[derive(Debug, Clone)]
pub struct TrialSetup {
    pub generator: Generator,
    pub parity: ParityCheck,
    pub u: BitMatrix,
    pub errors: BitMatrix,
    pub batch: ReceivedBatch,
}

pub fn trial_seed(master_seed: u64, n: usize, trial_index: u64) -> u64 {
    derive(derive(master_seed, n as u64), trial_index)
}

/// Draws `(G, U, E)` for one trial and classifies the received packets.
pub fn prepare_trial(config: &SimConfig, n: usize, trial_index: u64) -> Result<TrialSetup> {
    let params = config.channel()?;
    let seed = trial_seed(config.master_seed, n, trial_index);
    let generator = make_generator(config.k, n, derive(seed, 0))?;
    let parity = parity_check(&generator);

    let mut rng = SplitMix64::new(derive(seed, 1));
    let mut u = BitMatrix::zeros(config.k, config.b);
    for i in 0..config.k {
        for j in 0..config.b {
            u.set(i, j, rng.next_bit());
        }
    }
    let x = encode(&generator, &u)?;
    let (y, errors) = channel::apply(&params, &x, derive(seed, 2));
    let batch = classify(y, x)?;
    Ok(TrialSetup {
        generator,
        parity,
        u,
        errors,
        batch,
    })
}

pub fn run_trial(config: &SimConfig, n: usize, decoder: Decoder, trial_index: u64) -> Result<DecodeOutcome> {
    let setup = prepare_trial(config, n, trial_index)?;
    decode(
        &setup.batch,
        &setup.generator,
        &setup.parity,
        decoder,
        &config.channel()?,
        config.query_cap,
    )
}

/// Aggregate over all trials of one `(decoder, N)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub decoder: Decoder,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub eps: f64,
    pub lambda: f64,
    pub trials: usize,
    pub successes: usize,
    pub decoding_probability: f64,
    pub mean_queries: f64,
    pub wall_seconds: f64,
}

fn run_cell(config: &SimConfig, n: usize, decoder: Decoder) -> Result<SimRecord> {
    let start = Instant::now();
    let (successes, queries) = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, n, decoder, t).map(|o| (usize::from(o.success), o.queries_total)))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(SimRecord {
        decoder,
        k: config.k,
        n,
        b: config.b,
        eps: config.eps,
        lambda: config.lambda,
        trials: config.trials,
        successes,
        decoding_probability: successes as f64 / config.trials as f64,
        mean_queries: queries as f64 / config.trials as f64,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// One record per `(decoder, N)`, ordered by decoder then ascending `N`.
/// Writes the CSV to `out_path` when one is configured.
pub fn run_experiment(config: &SimConfig) -> Result<Vec<SimRecord>> {
    config.validate()?;
    // Fail on an unwritable path before spending the compute.
    let out = config.out_path.as_deref().map(File::create).transpose()?;

    let mut decoders = config.decoders.clone();
    decoders.sort();
    decoders.dedup();
    let mut ns = config.n_list.clone();
    ns.sort_unstable();
    ns.dedup();

    let cells = || -> Result<Vec<SimRecord>> {
        decoders
            .iter()
            .flat_map(|&d| ns.iter().map(move |&n| (d, n)))
            .map(|(d, n)| run_cell(config, n, d))
            .collect()
    };
    let records = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(cells)?,
        None => cells()?,
    };
    if let Some(file) = out {
        write_csv(&records, file)?;
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[SimRecord], mut writer: W) -> Result<()> {
    writeln!(writer, "{CSV_HEADER}")?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[SimRecord], path: &Path) -> Result<()> {
    write_csv(records, File::create(path)?)
}

pub fn read_csv(path: &Path) -> Result<Vec<SimRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<&str> = r.headers()?.iter().collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::InvalidParameter(format!(
            "unexpected CSV header: {}",
            header.join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
