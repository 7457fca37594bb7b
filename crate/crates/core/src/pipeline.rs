//! Receiver: classify packets, try RLC decoding, and on failure run one
//! repair pass (syndrome decoding or transversal GRAND) before decoding
//! again with the repaired packets added.
//!
//! Packet verification is genie-aided: a row counts as correct iff it equals
//! the transmitted row, standing in for an ideal CRC.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{mismatch, Error, Result};
use crate::gf2::BitMatrix;
use crate::rlc::{rlc_decode, Generator, ParityCheck};
use crate::syndrome::{sd_repair, SyndromeSystem};
use crate::tgrand::tg_repair;

/// The three receivers being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    /// Plain RLC decoding on clean packets.
    Rlc,
    /// RLC plus syndrome decoding repair.
    Sd,
    /// RLC plus transversal GRAND repair.
    TGrand,
}

impl Decoder {
    pub const ALL: [Decoder; 3] = [Decoder::Rlc, Decoder::Sd, Decoder::TGrand];

    pub fn name(self) -> &'static str {
        match self {
            Decoder::Rlc => "rlc",
            Decoder::Sd => "sd",
            Decoder::TGrand => "tgrand",
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rlc" => Ok(Decoder::Rlc),
            "sd" => Ok(Decoder::Sd),
            "tgrand" | "t-grand" => Ok(Decoder::TGrand),
            other => Err(Error::InvalidParameter(format!("unknown decoder '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairMethod {
    Sd,
    TGrand,
}

/// Received packets with their clean/erroneous partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedBatch {
    y: BitMatrix,
    truth_x: BitMatrix,
    clean: Vec<usize>,
    erroneous: Vec<usize>,
}

impl ReceivedBatch {
    pub fn y(&self) -> &BitMatrix {
        &self.y
    }

    pub fn truth_x(&self) -> &BitMatrix {
        &self.truth_x
    }

    /// Indices of error-free rows (`R`), ascending.
    pub fn clean(&self) -> &[usize] {
        &self.clean
    }

    /// Indices of erroneous rows (`R̄`), ascending.
    pub fn erroneous(&self) -> &[usize] {
        &self.erroneous
    }

    pub fn n_clean(&self) -> usize {
        self.clean.len()
    }
}

/// Partitions rows of `y` by comparison with the transmitted `truth_x`.
pub fn classify(y: BitMatrix, truth_x: BitMatrix) -> Result<ReceivedBatch> {
    if y.shape() != truth_x.shape() {
        return Err(mismatch(
            "classify",
            format!("{:?} vs {:?}", y.shape(), truth_x.shape()),
        ));
    }
    let (clean, erroneous) = (0..y.rows()).partition(|&i| y.row_words(i) == truth_x.row_words(i));
    Ok(ReceivedBatch {
        y,
        truth_x,
        clean,
        erroneous,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub success: bool,
    pub u_hat: Option<BitMatrix>,
    /// Repaired packets that passed verification (ν).
    pub nu: usize,
    /// Rows promoted from `R̄` to `R`, ascending.
    pub promoted: Vec<usize>,
    pub queries_total: u64,
    /// Bit positions whose guessing search hit the query cap.
    pub unrepaired_columns: usize,
    pub rank_before: usize,
    pub rank_after: usize,
}

fn solve_from_rows(g: &Generator, y: &BitMatrix, rows: &[usize]) -> (usize, Option<BitMatrix>) {
    let g_rows = g.matrix().select_rows(rows);
    let rank = g_rows.rank();
    if rank < g.k() {
        return (rank, None);
    }
    // Clean rows are consistent by construction, so this cannot fail.
    (rank, rlc_decode(&g_rows, &y.select_rows(rows)).ok())
}

/// Decodes from the clean packets alone.
pub fn attempt_rlc(batch: &ReceivedBatch, g: &Generator) -> DecodeOutcome {
    let (rank, u_hat) = solve_from_rows(g, &batch.y, &batch.clean);
    DecodeOutcome {
        success: u_hat.is_some(),
        u_hat,
        nu: 0,
        promoted: Vec::new(),
        queries_total: 0,
        unrepaired_columns: 0,
        rank_before: rank,
        rank_after: rank,
    }
}

/// One repair pass over the erroneous packets followed by a second decode.
///
/// A batch that already decodes is returned as-is. With `N == K` there are no
/// parity equations to work with and the plain RLC outcome is returned.
pub fn repair_and_redecode(
    batch: &ReceivedBatch,
    g: &Generator,
    h: &ParityCheck,
    method: RepairMethod,
    params: &ChannelParams,
    query_cap: u64,
) -> Result<DecodeOutcome> {
    let before = attempt_rlc(batch, g);
    if before.success || h.checks() == 0 || batch.erroneous.is_empty() {
        return Ok(before);
    }
    let system = SyndromeSystem::from_received(h, &batch.y, &batch.erroneous)?;
    let repair = match method {
        RepairMethod::Sd => sd_repair(&system, query_cap),
        RepairMethod::TGrand => tg_repair(&system, params, query_cap),
    };
    let x_hat = batch.y.select_rows(&batch.erroneous).add(&repair.estimate)?;

    let mut y = batch.y.clone();
    let mut promoted = Vec::new();
    for (k, &row) in batch.erroneous.iter().enumerate() {
        let candidate = x_hat.row(k);
        if candidate.words() == batch.truth_x.row_words(row) {
            promoted.push(row);
            y.row_words_mut(row).copy_from_slice(candidate.words());
        }
    }
    let mut rows = batch.clean.clone();
    rows.extend_from_slice(&promoted);
    let (rank_after, u_hat) = solve_from_rows(g, &y, &rows);
    Ok(DecodeOutcome {
        success: u_hat.is_some(),
        u_hat,
        nu: promoted.len(),
        promoted,
        queries_total: repair.queries,
        unrepaired_columns: repair.unrepaired.len(),
        rank_before: before.rank_before,
        rank_after,
    })
}

/// Runs the given receiver end to end.
pub fn decode(
    batch: &ReceivedBatch,
    g: &Generator,
    h: &ParityCheck,
    decoder: Decoder,
    params: &ChannelParams,
    query_cap: u64,
) -> Result<DecodeOutcome> {
    match decoder {
        Decoder::Rlc => Ok(attempt_rlc(batch, g)),
        Decoder::Sd => repair_and_redecode(batch, g, h, RepairMethod::Sd, params, query_cap),
        Decoder::TGrand => repair_and_redecode(batch, g, h, RepairMethod::TGrand, params, query_cap),
    }
}
