//! Matrix and seed mutation.
//!
//! Directions are zero-based in the library API; the CLI translates from the
//! one-based convention used on the command line.

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPolynomial};
use crate::matrix::ExchangeMatrix;
use crate::seed::LabeledSeed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("direction {direction} out of range for rank {rank}")]
    DirectionOutOfRange { direction: usize, rank: usize },
    /// The exchange relation did not divide exactly. The Laurent phenomenon
    /// guarantees this never happens, so it indicates an internal bug.
    #[error("exchange relation in direction {0} is not divisible by the old variable")]
    NonExactDivision(usize),
}

/// A path in the n-regular tree, as a list of zero-based directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MutationSequence(Vec<usize>);

impl MutationSequence {
    pub fn new(directions: Vec<usize>, rank: usize) -> Result<Self, MutationError> {
        if let Some(&d) = directions.iter().find(|&&d| d >= rank) {
            return Err(MutationError::DirectionOutOfRange { direction: d, rank });
        }
        Ok(MutationSequence(directions))
    }

    /// Parses one-based directions such as `"1,2,1"`.
    pub fn parse_one_based(text: &str, rank: usize) -> Result<Self, String> {
        let mut dirs = Vec::new();
        for part in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()) {
            let d: usize = part.parse().map_err(|_| format!("bad direction {part:?}"))?;
            if d == 0 || d > rank {
                return Err(format!("direction {d} out of range 1..={rank}"));
            }
            dirs.push(d - 1);
        }
        Ok(MutationSequence(dirs))
    }

    pub fn directions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `b'_ji = -b_ji` if `k ∈ {i, j}`, otherwise
/// `b'_ji = b_ji + (|b_jk| b_ki + b_jk |b_ki|) / 2`.
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    let n = b.rank();
    assert!(k < n, "mutation direction {k} out of range for rank {n}");
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let bji = b.get(j, i);
            if i == k || j == k {
                out.push(-bji);
            } else {
                let bjk = b.get(j, k);
                let bki = b.get(k, i);
                let twice = bjk.abs() * bki + bjk * bki.abs();
                assert!(twice % 2 == 0, "odd correction term in matrix mutation");
                out.push(bji + twice / 2);
            }
        }
    }
    ExchangeMatrix::from_raw(n, out)
}

/// Right-hand side of the exchange relation in direction `k`:
/// `prod_{b_jk > 0} x_j^{b_jk} + prod_{b_jk < 0} x_j^{-b_jk}`.
pub fn exchange_binomial(seed: &LabeledSeed, k: usize) -> LaurentPolynomial {
    let n = seed.rank();
    let b = seed.matrix();
    let mut positive = LaurentPolynomial::one(n);
    let mut negative = LaurentPolynomial::one(n);
    for (j, x) in seed.cluster().iter().enumerate() {
        let e = b.get(j, k);
        if e > 0 {
            positive = &positive * &x.pow(e as u32);
        } else if e < 0 {
            negative = &negative * &x.pow((-e) as u32);
        }
    }
    &positive + &negative
}

pub fn mutate_seed(seed: &LabeledSeed, k: usize) -> Result<LabeledSeed, MutationError> {
    let n = seed.rank();
    if k >= n {
        return Err(MutationError::DirectionOutOfRange { direction: k, rank: n });
    }
    let numerator = exchange_binomial(seed, k);
    let new_var = numerator.exact_div(&seed.cluster()[k]).map_err(|e| match e {
        LaurentError::NonExactDivision | LaurentError::DivisionByZero | LaurentError::ArityMismatch(..) => {
            MutationError::NonExactDivision(k)
        }
    })?;
    let mut cluster = seed.cluster().to_vec();
    cluster[k] = new_var;
    Ok(LabeledSeed::from_parts_unchecked(cluster, mutate_matrix(seed.matrix(), k)))
}

pub fn apply_sequence(seed: &LabeledSeed, seq: &MutationSequence) -> Result<LabeledSeed, MutationError> {
    let mut s = seed.clone();
    for &k in seq.directions() {
        s = mutate_seed(&s, k)?;
    }
    Ok(s)
}

/// Checks `x_k · x'_k` against the exchange binomial by re-multiplying.
pub fn exchange_identity_holds(seed: &LabeledSeed, k: usize) -> Result<bool, MutationError> {
    let next = mutate_seed(seed, k)?;
    Ok(&seed.cluster()[k] * &next.cluster()[k] == exchange_binomial(seed, k))
}
