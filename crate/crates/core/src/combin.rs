//! Lexicographic k-subsets of `0..n`.

/// Walks the `k`-element subsets of `0..n` in lexicographic order of their
/// sorted elements: `{0,1}`, `{0,2}`, …, `{n-2,n-1}`. The empty subset is
/// produced once when `k == 0`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    /// Advances to the next subset. Not an `Iterator` because the subset is
    /// lent out of the internal buffer.
    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.advance() {
            Some(&self.idx)
        } else {
            None
        }
    }

    /// Moves to the next subset, returning `false` once exhausted. The
    /// subset itself is read with [`Combinations::current`].
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let k = self.idx.len();
        // Rightmost slot that can still move right.
        let Some(i) = (0..k).rev().find(|&i| self.idx[i] < self.n - k + i) else {
            self.done = true;
            return false;
        };
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        true
    }

    pub fn current(&self) -> &[usize] {
        &self.idx
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let Some(next) = acc.checked_mul((n - i) as u128) else {
            return u128::MAX;
        };
        acc = next / (i as u128 + 1);
    }
    acc
}
