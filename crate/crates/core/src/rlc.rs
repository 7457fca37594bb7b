//! Systematic random linear coding over GF(2).

use crate::error::{mismatch, Error, Result};
use crate::gf2::{self, BitMatrix};
use crate::rng::SplitMix64;

/// A systematic generator `G = [I_K; P]` of shape `N x K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    k: usize,
    n: usize,
    matrix: BitMatrix,
    seed: Option<u64>,
}

impl Generator {
    /// Source packet count.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Coded packet count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Seed that drew `P`; `None` for generators built from an explicit block.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `[I_K; P]` from an explicit `(N-K) x K` block.
    pub fn systematic(p: &BitMatrix) -> Self {
        let k = p.cols();
        let matrix = BitMatrix::identity(k).vstack(p).expect("same width");
        Self {
            k,
            n: matrix.rows(),
            matrix,
            seed: None,
        }
    }

    /// The random `(N-K) x K` block.
    pub fn parity_block(&self) -> BitMatrix {
        let rows: Vec<usize> = (self.k..self.n).collect();
        self.matrix.select_rows(&rows)
    }
}

/// Draws `G = [I_K; P]`. Entries of `P` are taken row-major, one per
/// [`SplitMix64`] output (its top bit), from a stream seeded with `seed`.
pub fn make_generator(k: usize, n: usize, seed: u64) -> Result<Generator> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= K <= N, got K={k}, N={n}")));
    }
    let mut matrix = BitMatrix::zeros(n, k);
    for i in 0..k {
        matrix.set(i, i, true);
    }
    let mut rng = SplitMix64::new(seed);
    for i in k..n {
        for j in 0..k {
            matrix.set(i, j, rng.next_bit());
        }
    }
    Ok(Generator {
        k,
        n,
        matrix,
        seed: Some(seed),
    })
}

/// `X = G·U`.
pub fn encode(g: &Generator, u: &BitMatrix) -> Result<BitMatrix> {
    if u.rows() != g.k {
        return Err(mismatch("encode", format!("U has {} rows, K = {}", u.rows(), g.k)));
    }
    g.matrix.matmul(u)
}

/// `H = [P | I_{N-K}]^T`, shape `N x (N-K)`, with `H^T·G = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    matrix: BitMatrix,
}

impl ParityCheck {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Number of parity equations, `N - K`.
    pub fn checks(&self) -> usize {
        self.matrix.cols()
    }

    fn from_parity_block(p: &BitMatrix) -> Self {
        let (r, k) = p.shape();
        let mut matrix = BitMatrix::zeros(k + r, r);
        for j in 0..r {
            for i in 0..k {
                if p.get(j, i) {
                    matrix.set(i, j, true);
                }
            }
            matrix.set(k + j, j, true);
        }
        Self { matrix }
    }

    /// Parity check for an arbitrary full-rank `N x K` generator, through
    /// column reduction to standard form.
    pub fn from_generator_matrix(g: &BitMatrix) -> Result<Self> {
        let sf = gf2::to_standard_form(g)?;
        Ok(Self::from_parity_block(&sf.parity))
    }
}

pub fn parity_check(g: &Generator) -> ParityCheck {
    ParityCheck::from_parity_block(&g.parity_block())
}

/// Recovers `U` from clean equations `G_rows·U = Y_rows`.
pub fn rlc_decode(g_rows: &BitMatrix, y_rows: &BitMatrix) -> Result<BitMatrix> {
    if g_rows.rows() != y_rows.rows() {
        return Err(mismatch(
            "rlc_decode",
            format!("{} generator rows vs {} received rows", g_rows.rows(), y_rows.rows()),
        ));
    }
    gf2::solve_unique(g_rows, y_rows)
}
