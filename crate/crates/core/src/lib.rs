//! Random linear coding over burst-error channels, with two ways of
//! repairing corrupted packets before decoding: minimum-weight syndrome
//! decoding and transversal GRAND, which guesses error columns in order of
//! their likelihood under a two-state Markov channel.
//!
//! The layers, bottom up:
//! - [`gf2`]: packed GF(2) matrices and vectors;
//! - [`rlc`]: systematic generators, encoding, parity checks, decoding;
//! - [`channel`]: the Gilbert burst-error channel;
//! - [`syndrome`] and [`tgrand`]: the two repair searches;
//! - [`pipeline`]: the receiver that ties them together;
//! - [`sim`]: the Monte Carlo driver and CSV output.

pub mod channel;
pub mod combin;
pub mod error;
pub mod gf2;
pub mod pipeline;
pub mod rlc;
pub mod rng;
pub mod sim;
pub mod syndrome;
pub mod tgrand;

pub use channel::ChannelParams;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use pipeline::{DecodeOutcome, Decoder, ReceivedBatch, RepairMethod};
pub use rlc::{Generator, ParityCheck};
pub use sim::{SimConfig, SimRecord};
pub use syndrome::{ColumnSearch, Repair, SyndromeSystem, DEFAULT_QUERY_CAP};
pub use tgrand::{ColumnPrior, TransitionClass};
