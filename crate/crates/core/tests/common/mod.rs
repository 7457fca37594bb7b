//! Helpers shared by integration tests: random instances and brute-force
//! reference searches.
#![allow(dead_code)]

use tgrand_core::channel::ChannelParams;
use tgrand_core::gf2::{BitMatrix, BitVec};
use tgrand_core::rng::SplitMix64;

pub fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.next_bit());
        }
    }
    m
}

pub fn random_vec(rng: &mut SplitMix64, len: usize) -> BitVec {
    let bits: Vec<u8> = (0..len).map(|_| u8::from(rng.next_bit())).collect();
    BitVec::from_bits(&bits)
}

pub fn below(rng: &mut SplitMix64, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Bit `i` of `mask` as a length-`len` vector.
pub fn vec_from_mask(mask: u64, len: usize) -> BitVec {
    let bits: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
    BitVec::from_bits(&bits)
}

/// All `w` in `GF(2)^L` with `Ht·w = s`, by exhaustion.
pub fn all_solutions(ht: &BitMatrix, s: &BitVec) -> Vec<BitVec> {
    let l = ht.cols();
    assert!(l <= 20);
    (0u64..1 << l)
        .map(|m| vec_from_mask(m, l))
        .filter(|w| &ht.matvec(w).unwrap() == s)
        .collect()
}

pub fn min_weight(ht: &BitMatrix, s: &BitVec) -> Option<usize> {
    all_solutions(ht, s).iter().map(BitVec::weight).min()
}

/// Natural log of the transition probability from `prior` to `w`, computed
/// bit by bit.
pub fn log_likelihood(prior: &BitVec, w: &BitVec, p: &ChannelParams) -> f64 {
    let mut acc = 0.0f64;
    for i in 0..prior.len() {
        let q = match (prior.get(i), w.get(i)) {
            (false, false) => 1.0 - p.p01(),
            (false, true) => p.p01(),
            (true, false) => p.p10(),
            (true, true) => 1.0 - p.p10(),
        };
        acc += q.ln();
    }
    acc
}

fn close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= 1e-12 * 1f64.max(a.abs()).max(b.abs())
}

/// Most likely solution given the prior. Among equally likely solutions the
/// one with fewer transitions wins, then fewer zero-to-one transitions,
/// then the lexicographically smallest flipped zero positions, then the
/// smallest flipped one positions.
pub fn map_solution(ht: &BitMatrix, s: &BitVec, prior: &BitVec, p: &ChannelParams) -> Option<BitVec> {
    let sols = all_solutions(ht, s);
    let scored: Vec<(f64, &BitVec)> = sols.iter().map(|w| (log_likelihood(prior, w, p), w)).collect();
    let best = scored.iter().map(|&(l, _)| l).fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return None;
    }
    let key = |w: &BitVec| {
        let (mut z, mut o) = (Vec::new(), Vec::new());
        for i in 0..prior.len() {
            if prior.get(i) != w.get(i) {
                if prior.get(i) {
                    o.push(i);
                } else {
                    z.push(i);
                }
            }
        }
        (z.len() + o.len(), z.len(), z, o)
    };
    scored
        .into_iter()
        .filter(|&(l, _)| close(l, best))
        .map(|(_, w)| w)
        .min_by_key(|w| key(w))
        .cloned()
}
