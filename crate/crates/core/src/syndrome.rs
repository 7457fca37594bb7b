//! Syndrome computation and minimum-weight syndrome decoding.
//!
//! With `S = H^T·Y = H^T·E`, each bit position `b` gives an independent
//! system `(H_R̄)^T·w = S[:, b]` over the erroneous rows. Syndrome decoding
//! takes the sparsest `w` that satisfies it, searching weight 0, 1, 2, …
//! and, within a weight, support sets in lexicographic order.

use crate::combin::Combinations;
use crate::error::{mismatch, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::rlc::ParityCheck;

/// Default per-column query budget for both guessing decoders.
pub const DEFAULT_QUERY_CAP: u64 = 1 << 20;

/// `S = H^T·Y`, shape `(N-K) x B`.
pub fn compute_syndrome(h: &ParityCheck, y: &BitMatrix) -> Result<BitMatrix> {
    let hm = h.matrix();
    if hm.rows() != y.rows() {
        return Err(mismatch(
            "compute_syndrome",
            format!("H has {} rows, Y has {}", hm.rows(), y.rows()),
        ));
    }
    hm.transpose().matmul(y)
}

/// The per-column systems `Ht·w = S[:, b]`, where `Ht = (H_R̄)^T` has one
/// column per erroneous packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeSystem {
    ht: BitMatrix,
    s: BitMatrix,
}

impl SyndromeSystem {
    pub fn new(ht: BitMatrix, s: BitMatrix) -> Result<Self> {
        if ht.rows() != s.rows() {
            return Err(mismatch(
                "SyndromeSystem",
                format!("Ht has {} rows, S has {}", ht.rows(), s.rows()),
            ));
        }
        Ok(Self { ht, s })
    }

    /// Builds the system for received `y` with erroneous row set `rbar`.
    pub fn from_received(h: &ParityCheck, y: &BitMatrix, rbar: &[usize]) -> Result<Self> {
        let s = compute_syndrome(h, y)?;
        let ht = h.matrix().select_rows(rbar).transpose();
        Self::new(ht, s)
    }

    pub fn ht(&self) -> &BitMatrix {
        &self.ht
    }

    pub fn syndrome(&self) -> &BitMatrix {
        &self.s
    }

    /// Number of unknowns per column, `L`.
    pub fn unknowns(&self) -> usize {
        self.ht.cols()
    }

    /// Number of columns, `B`.
    pub fn bits(&self) -> usize {
        self.s.cols()
    }
}

/// Outcome of searching one column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSearch {
    Found {
        error: BitVec,
        queries: u64,
    },
    /// No candidate within the budget satisfied the constraint.
    CapExceeded {
        queries: u64,
    },
}

impl ColumnSearch {
    pub fn queries(&self) -> u64 {
        match self {
            ColumnSearch::Found { queries, .. } | ColumnSearch::CapExceeded { queries } => *queries,
        }
    }

    pub fn error(&self) -> Option<&BitVec> {
        match self {
            ColumnSearch::Found { error, .. } => Some(error),
            ColumnSearch::CapExceeded { .. } => None,
        }
    }
}

/// Estimated `Ê_R̄` from a repair pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    /// `L x B`; columns that exceeded the cap are all-zero.
    pub estimate: BitMatrix,
    /// Bit positions whose search was abandoned.
    pub unrepaired: Vec<usize>,
    pub queries: u64,
}

/// Columns of `Ht`, packed for fast XOR accumulation.
pub(crate) struct ColumnTable {
    words: usize,
    data: Vec<u64>,
}

impl ColumnTable {
    pub(crate) fn new(ht: &BitMatrix) -> Self {
        let t = ht.transpose();
        let words = ht.rows().div_ceil(64);
        let mut data = Vec::with_capacity(words * ht.cols());
        for j in 0..ht.cols() {
            data.extend_from_slice(t.row_words(j));
        }
        Self { words, data }
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub(crate) fn xor_into(&self, col: usize, acc: &mut [u64]) {
        let c = &self.data[col * self.words..(col + 1) * self.words];
        for (a, b) in acc.iter_mut().zip(c) {
            *a ^= b;
        }
    }

    /// `Ht·v` accumulated into `acc`.
    pub(crate) fn xor_vector_into(&self, v: &BitVec, acc: &mut [u64]) {
        for i in v.ones() {
            self.xor_into(i, acc);
        }
    }
}

fn check_column_dims(op: &'static str, ht: &BitMatrix, s: &BitVec) -> Result<()> {
    if s.len() != ht.rows() {
        return Err(mismatch(
            op,
            format!("syndrome of {} vs Ht with {} rows", s.len(), ht.rows()),
        ));
    }
    Ok(())
}

/// Minimum-weight solution of `Ht·w = s`, testing at most `query_cap`
/// candidates.
pub fn sd_solve_column(ht: &BitMatrix, s: &BitVec, query_cap: u64) -> Result<ColumnSearch> {
    check_column_dims("sd_solve_column", ht, s)?;
    Ok(sd_search(&ColumnTable::new(ht), ht.cols(), s, query_cap))
}

fn sd_search(table: &ColumnTable, l: usize, s: &BitVec, query_cap: u64) -> ColumnSearch {
    let mut queries = 0u64;
    let mut acc = vec![0u64; table.words()];
    for weight in 0..=l {
        let mut combos = Combinations::new(l, weight);
        while let Some(support) = combos.next_subset() {
            if queries == query_cap {
                return ColumnSearch::CapExceeded { queries };
            }
            queries += 1;
            acc.copy_from_slice(s.words());
            for &p in support {
                table.xor_into(p, &mut acc);
            }
            if acc.iter().all(|&w| w == 0) {
                let mut error = BitVec::zeros(l);
                for &p in support {
                    error.set(p, true);
                }
                return ColumnSearch::Found { error, queries };
            }
        }
    }
    // Only reachable when s is outside the column space of Ht.
    ColumnSearch::CapExceeded { queries }
}

/// Solves every column of the system independently by syndrome decoding.
pub fn sd_repair(system: &SyndromeSystem, query_cap: u64) -> Repair {
    let l = system.unknowns();
    let table = ColumnTable::new(&system.ht);
    let mut estimate = BitMatrix::zeros(l, system.bits());
    let mut unrepaired = Vec::new();
    let mut queries = 0;
    for b in 0..system.bits() {
        let s = system.s.column(b);
        let found = sd_search(&table, l, &s, query_cap);
        queries += found.queries();
        match found.error() {
            Some(w) => estimate.set_column(b, w),
            None => unrepaired.push(b),
        }
    }
    Repair {
        estimate,
        unrepaired,
        queries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::matvec_check;
    use crate::rlc::{encode, make_generator, parity_check};
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, rng: &mut SplitMix64, p: f64) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.bernoulli(p));
            }
        }
        m
    }

    /// Minimum weight over all 2^L vectors satisfying the constraint.
    fn brute_min_weight(ht: &BitMatrix, s: &BitVec) -> Option<usize> {
        let l = ht.cols();
        (0u32..1 << l)
            .filter_map(|mask| {
                let w = BitVec::from_bits(&(0..l).map(|i| (mask >> i & 1) as u8).collect::<Vec<_>>());
                (ht.matvec(&w).unwrap() == *s).then_some(w.weight())
            })
            .min()
    }

    #[test]
    fn syndrome_examples() {
        let g = make_generator(4, 7, 1).unwrap();
        let h = parity_check(&g);
        let mut rng = SplitMix64::new(3);
        let u = random_matrix(4, 9, &mut rng, 0.5);
        let x = encode(&g, &u).unwrap();
        assert!(compute_syndrome(&h, &x).unwrap().is_zero());

        let g = make_generator(4, 4, 1).unwrap();
        let h = parity_check(&g);
        assert_eq!(compute_syndrome(&h, &BitMatrix::zeros(4, 9)).unwrap().shape(), (0, 9));
        assert!(compute_syndrome(&h, &BitMatrix::zeros(5, 9)).is_err());
    }

    #[test]
    fn solve_column_examples() {
        let ht = BitMatrix::from_rows(&[[1, 0], [1, 1]]);
        let zero = sd_solve_column(&ht, &BitVec::zeros(2), 10).unwrap();
        assert_eq!(
            zero,
            ColumnSearch::Found {
                error: BitVec::zeros(2),
                queries: 1
            }
        );

        let found = sd_solve_column(&ht, &BitVec::from_bits(&[1, 1]), 10).unwrap();
        assert_eq!(found.error().unwrap().to_bits(), vec![1, 0]);
        assert_eq!(found.queries(), 2);

        let vacuous = BitMatrix::zeros(0, 3);
        let found = sd_solve_column(&vacuous, &BitVec::zeros(0), 1).unwrap();
        assert_eq!(found.error().unwrap(), &BitVec::zeros(3));

        let capped = sd_solve_column(&ht, &BitVec::from_bits(&[0, 1]), 2).unwrap();
        assert_eq!(capped, ColumnSearch::CapExceeded { queries: 2 });
        assert!(sd_solve_column(&ht, &BitVec::zeros(3), 10).is_err());
    }

    #[test]
    fn equal_weight_ties_go_to_lowest_support() {
        // Columns 0 and 1 are identical, so {0} and {1} both solve s = [1, 1].
        let ht = BitMatrix::from_rows(&[[1, 1, 0], [1, 1, 1]]);
        let found = sd_solve_column(&ht, &BitVec::from_bits(&[1, 1]), 100).unwrap();
        assert_eq!(found.error().unwrap().to_bits(), vec![1, 0, 0]);
    }

    #[test]
    fn repair_zero_syndrome() {
        let sys = SyndromeSystem::new(BitMatrix::from_rows(&[[1, 0, 1], [0, 1, 1]]), BitMatrix::zeros(2, 6)).unwrap();
        let rep = sd_repair(&sys, 100);
        assert!(rep.estimate.is_zero());
        assert!(rep.unrepaired.is_empty());
        assert_eq!(rep.queries, 6);
    }

    #[test]
    fn repair_single_bad_packet() {
        // One bad packet with a single flipped bit at position 5.
        let ht = BitMatrix::from_rows(&[[1], [0], [1]]);
        let mut e = BitMatrix::zeros(1, 8);
        e.set(0, 5, true);
        let sys = SyndromeSystem::new(ht.clone(), ht.matmul(&e).unwrap()).unwrap();
        let rep = sd_repair(&sys, 100);
        assert_eq!(rep.estimate, e);
    }

    #[test]
    fn repair_flags_capped_columns() {
        let ht = BitMatrix::from_rows(&[[1, 0], [0, 1]]);
        let s = BitMatrix::from_rows(&[[0, 1, 1], [0, 1, 0]]);
        let rep = sd_repair(&SyndromeSystem::new(ht, s).unwrap(), 3);
        assert_eq!(rep.unrepaired, vec![1]);
        assert_eq!(rep.estimate.to_rows(), vec![vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(rep.queries, 1 + 3 + 2);
    }

    proptest! {
        #[test]
        fn syndrome_depends_only_on_errors(k in 1usize..7, extra in 0usize..7, b in 1usize..20, seed in any::<u64>()) {
            let g = make_generator(k, k + extra, seed).unwrap();
            let h = parity_check(&g);
            let mut rng = SplitMix64::new(seed ^ 1);
            let u = random_matrix(k, b, &mut rng, 0.5);
            let e = random_matrix(k + extra, b, &mut rng, 0.2);
            let y = encode(&g, &u).unwrap().add(&e).unwrap();
            let expected = h.matrix().transpose().matmul(&e).unwrap();
            prop_assert_eq!(compute_syndrome(&h, &y).unwrap(), expected);
        }

        #[test]
        fn repair_is_minimal_and_consistent(l in 0usize..=4, r in 0usize..=4, b in 1usize..6, seed in any::<u64>()) {
            let mut rng = SplitMix64::new(seed);
            let ht = random_matrix(r, l, &mut rng, 0.5);
            let e = random_matrix(l, b, &mut rng, 0.3);
            let sys = SyndromeSystem::new(ht.clone(), ht.matmul(&e).unwrap()).unwrap();
            let rep = sd_repair(&sys, DEFAULT_QUERY_CAP);
            prop_assert!(rep.unrepaired.is_empty());
            for col in 0..b {
                let w = rep.estimate.column(col);
                let s = sys.syndrome().column(col);
                prop_assert!(matvec_check(&ht, &w, &s).unwrap());
                prop_assert_eq!(Some(w.weight()), brute_min_weight(&ht, &s));
            }
        }

        #[test]
        fn solve_column_minimal_up_to_twelve(l in 0usize..=12, r in 0usize..=8, seed in any::<u64>()) {
            let mut rng = SplitMix64::new(seed);
            let ht = random_matrix(r, l, &mut rng, 0.5);
            let truth = BitVec::from_bits(&(0..l).map(|_| rng.bernoulli(0.25) as u8).collect::<Vec<_>>());
            let s = ht.matvec(&truth).unwrap();
            let found = sd_solve_column(&ht, &s, DEFAULT_QUERY_CAP).unwrap();
            let w = found.error().unwrap();
            prop_assert!(w.weight() <= truth.weight());
            prop_assert_eq!(Some(w.weight()), brute_min_weight(&ht, &s));
        }
    }
}
