//! Transversal GRAND.
//!
//! Each erroneous packet is modelled as its own two-state Markov chain. The
//! estimate of column `b − 1` of `Ê_R̄` is the current state of those `L`
//! chains, and candidates for column `b` are queried in descending order of
//! their transition probability from that state until one satisfies the
//! syndrome constraint.
//!
//! With `L0` chains in state 0 and `L1` in state 1, flipping `ℓ0` of the
//! zeros and `ℓ1` of the ones has probability
//! `p01^ℓ0 (1−p01)^(L0−ℓ0) p10^ℓ1 (1−p10)^(L1−ℓ1)`, shared by all
//! `C(L0,ℓ0)·C(L1,ℓ1)` vectors in that class.
//!
//! Ordering rules (fixed for reproducibility):
//! - classes by probability, descending; probabilities within a relative
//!   1e-12 of each other (compared in the log domain) are tied, and ties go
//!   to smaller `ℓ0 + ℓ1`, then smaller `ℓ0`;
//! - within a class, subsets of the zero positions in lexicographic order
//!   (outer loop) crossed with subsets of the one positions in lexicographic
//!   order (inner loop).

use std::cmp::Ordering;

use crate::channel::ChannelParams;
use crate::combin::{binomial, Combinations};
use crate::error::{mismatch, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::syndrome::{ColumnSearch, ColumnTable, Repair, SyndromeSystem};

const TIE_TOLERANCE: f64 = 1e-12;

/// One `(ℓ0, ℓ1)` likelihood class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionClass {
    /// Zeros that flip to one.
    pub l0: usize,
    /// Ones that flip to zero.
    pub l1: usize,
    /// Probability of each vector in the class.
    pub prob: f64,
    /// Natural log of `prob`; `-inf` when `prob == 0`.
    pub log_prob: f64,
    /// Number of vectors in the class, saturating.
    pub count: u128,
}

/// `p^k (1-p)^(n-k)` with `0^0 = 1`.
fn bernoulli_run(p: f64, n: usize, k: usize) -> f64 {
    p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

fn ln_bernoulli_run(p: f64, n: usize, k: usize) -> f64 {
    let term = |x: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * x.ln() };
    term(p, k) + term(1.0 - p, n - k)
}

/// Per-vector probability of the `(l0, l1)` class.
pub fn class_probability(params: &ChannelParams, zeros: usize, ones: usize, l0: usize, l1: usize) -> f64 {
    assert!(l0 <= zeros && l1 <= ones, "class ({l0},{l1}) outside ({zeros},{ones})");
    bernoulli_run(params.p01(), zeros, l0) * bernoulli_run(params.p10(), ones, l1)
}

fn class_log_probability(params: &ChannelParams, zeros: usize, ones: usize, l0: usize, l1: usize) -> f64 {
    ln_bernoulli_run(params.p01(), zeros, l0) + ln_bernoulli_run(params.p10(), ones, l1)
}

fn log_tied(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn tie_rule(a: &TransitionClass, b: &TransitionClass) -> Ordering {
    (a.l0 + a.l1, a.l0).cmp(&(b.l0 + b.l1, b.l0))
}

/// All `(zeros+1)(ones+1)` classes in query order.
pub fn sorted_classes(params: &ChannelParams, zeros: usize, ones: usize) -> Vec<TransitionClass> {
    let mut classes: Vec<TransitionClass> = (0..=zeros)
        .flat_map(|l0| (0..=ones).map(move |l1| (l0, l1)))
        .map(|(l0, l1)| TransitionClass {
            l0,
            l1,
            prob: class_probability(params, zeros, ones, l0, l1),
            log_prob: class_log_probability(params, zeros, ones, l0, l1),
            count: binomial(zeros, l0).saturating_mul(binomial(ones, l1)),
        })
        .collect();
    classes.sort_by(|a, b| b.log_prob.total_cmp(&a.log_prob).then_with(|| tie_rule(a, b)));
    // Re-order runs of (numerically) equal probability by the tie rule.
    let mut start = 0;
    while start < classes.len() {
        let head = classes[start].log_prob;
        let end = (start + 1..classes.len())
            .find(|&i| !log_tied(head, classes[i].log_prob))
            .unwrap_or(classes.len());
        classes[start..end].sort_by(tie_rule);
        start = end;
    }
    classes
}

/// The previous column estimate, split into chains in state 0 and state 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPrior {
    prev: BitVec,
    zero_positions: Vec<usize>,
    one_positions: Vec<usize>,
}

impl ColumnPrior {
    pub fn new(prev: BitVec) -> Self {
        let (one_positions, zero_positions) = (0..prev.len()).partition(|&i| prev.get(i));
        Self {
            prev,
            zero_positions,
            one_positions,
        }
    }

    /// Prior for the first column: every chain starts in state 0.
    pub fn all_zero(len: usize) -> Self {
        Self::new(BitVec::zeros(len))
    }

    pub fn prev(&self) -> &BitVec {
        &self.prev
    }

    pub fn len(&self) -> usize {
        self.prev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prev.is_empty()
    }

    pub fn zero_positions(&self) -> &[usize] {
        &self.zero_positions
    }

    pub fn one_positions(&self) -> &[usize] {
        &self.one_positions
    }

    /// Transition counts `(ℓ0, ℓ1)` taking this prior to `w`.
    pub fn transitions_to(&self, w: &BitVec) -> (usize, usize) {
        assert_eq!(w.len(), self.len());
        let l0 = self.zero_positions.iter().filter(|&&i| w.get(i)).count();
        let l1 = self.one_positions.iter().filter(|&&i| !w.get(i)).count();
        (l0, l1)
    }

    /// Probability of moving from this prior to `w` in one step.
    pub fn probability_of(&self, w: &BitVec, params: &ChannelParams) -> f64 {
        let (l0, l1) = self.transitions_to(w);
        class_probability(params, self.zero_positions.len(), self.one_positions.len(), l0, l1)
    }

    fn candidate(&self, zero_flips: &[usize], one_flips: &[usize]) -> BitVec {
        let mut w = self.prev.clone();
        for &i in zero_flips {
            w.flip(self.zero_positions[i]);
        }
        for &i in one_flips {
            w.flip(self.one_positions[i]);
        }
        w
    }
}

/// Lazy stream of all `2^L` candidates in query order.
#[derive(Debug, Clone)]
pub struct Candidates<'a> {
    prior: &'a ColumnPrior,
    classes: Vec<TransitionClass>,
    class: usize,
    zero: Option<Combinations>,
    one: Combinations,
}

impl<'a> Candidates<'a> {
    pub fn classes(&self) -> &[TransitionClass] {
        &self.classes
    }
}

impl Iterator for Candidates<'_> {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        let (zeros, ones) = (self.prior.zero_positions.len(), self.prior.one_positions.len());
        loop {
            let class = *self.classes.get(self.class)?;
            match &mut self.zero {
                None => {
                    let mut z = Combinations::new(zeros, class.l0);
                    if z.advance() {
                        self.zero = Some(z);
                        self.one = Combinations::new(ones, class.l1);
                    } else {
                        self.class += 1;
                    }
                }
                Some(z) => {
                    if self.one.advance() {
                        return Some(self.prior.candidate(z.current(), self.one.current()));
                    }
                    if z.advance() {
                        self.one = Combinations::new(ones, class.l1);
                    } else {
                        self.zero = None;
                        self.class += 1;
                    }
                }
            }
        }
    }
}

pub fn enumerate_candidates<'a>(prior: &'a ColumnPrior, params: &ChannelParams) -> Candidates<'a> {
    Candidates {
        prior,
        classes: sorted_classes(params, prior.zero_positions.len(), prior.one_positions.len()),
        class: 0,
        zero: None,
        one: Combinations::new(0, 0),
    }
}

/// First candidate, in query order, with `Ht·w = s`; at most `query_cap`
/// candidates are tested.
pub fn tg_solve_column(
    ht: &BitMatrix,
    s: &BitVec,
    prior: &ColumnPrior,
    params: &ChannelParams,
    query_cap: u64,
) -> Result<ColumnSearch> {
    if s.len() != ht.rows() {
        return Err(mismatch(
            "tg_solve_column",
            format!("syndrome of {} vs Ht with {} rows", s.len(), ht.rows()),
        ));
    }
    if prior.len() != ht.cols() {
        return Err(mismatch(
            "tg_solve_column",
            format!("prior of {} vs Ht with {} columns", prior.len(), ht.cols()),
        ));
    }
    Ok(tg_search(&ColumnTable::new(ht), s, prior, params, query_cap))
}

fn tg_search(
    table: &ColumnTable,
    s: &BitVec,
    prior: &ColumnPrior,
    params: &ChannelParams,
    query_cap: u64,
) -> ColumnSearch {
    let (zeros, ones) = (prior.zero_positions.len(), prior.one_positions.len());
    // Target for the flips alone: Ht·(prev ⊕ flips) = s  ⇔  Ht·flips = s ⊕ Ht·prev.
    let mut base = s.words().to_vec();
    table.xor_vector_into(&prior.prev, &mut base);
    let mut acc_zero = vec![0u64; table.words()];
    let mut acc = vec![0u64; table.words()];
    let mut queries = 0u64;

    for class in sorted_classes(params, zeros, ones) {
        let mut zc = Combinations::new(zeros, class.l0);
        while zc.advance() {
            acc_zero.copy_from_slice(&base);
            for &i in zc.current() {
                table.xor_into(prior.zero_positions[i], &mut acc_zero);
            }
            let mut oc = Combinations::new(ones, class.l1);
            while oc.advance() {
                if queries == query_cap {
                    return ColumnSearch::CapExceeded { queries };
                }
                queries += 1;
                acc.copy_from_slice(&acc_zero);
                for &i in oc.current() {
                    table.xor_into(prior.one_positions[i], &mut acc);
                }
                if acc.iter().all(|&w| w == 0) {
                    return ColumnSearch::Found {
                        error: prior.candidate(zc.current(), oc.current()),
                        queries,
                    };
                }
            }
        }
    }
    ColumnSearch::CapExceeded { queries }
}

/// Estimates `Ê_R̄` column by column, left to right. Column `b` uses the
/// estimate of column `b − 1` as its prior; the first column and any column
/// following an abandoned one use the all-zero prior.
pub fn tg_repair(system: &SyndromeSystem, params: &ChannelParams, query_cap: u64) -> Repair {
    let l = system.unknowns();
    let table = ColumnTable::new(system.ht());
    let mut estimate = BitMatrix::zeros(l, system.bits());
    let mut unrepaired = Vec::new();
    let mut queries = 0;
    let mut prior = ColumnPrior::all_zero(l);
    for b in 0..system.bits() {
        let s = system.syndrome().column(b);
        let found = tg_search(&table, &s, &prior, params, query_cap);
        queries += found.queries();
        prior = match found {
            ColumnSearch::Found { error, .. } => {
                estimate.set_column(b, &error);
                ColumnPrior::new(error)
            }
            ColumnSearch::CapExceeded { .. } => {
                unrepaired.push(b);
                ColumnPrior::all_zero(l)
            }
        };
    }
    Repair {
        estimate,
        unrepaired,
        queries,
    }
}
