//! Labeled seeds and relabeling-invariant seed keys.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPolynomial, TermJson};
use crate::matrix::{quiver_to_matrix, ExchangeMatrix, MatrixError, MatrixJson, QuiverJson, ValuedQuiver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("cluster has {0} variables but the matrix has rank {1}")]
    RankMismatch(usize, usize),
    #[error("cluster variables must be pairwise distinct")]
    RepeatedVariable,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("malformed cluster variable: {0}")]
    BadVariable(String),
    #[error("malformed seed JSON: {0}")]
    Json(String),
}

/// An ordered cluster together with its exchange matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledSeed {
    cluster: Vec<LaurentPolynomial>,
    matrix: ExchangeMatrix,
}

impl LabeledSeed {
    pub fn new(cluster: Vec<LaurentPolynomial>, matrix: ExchangeMatrix) -> Result<Self, SeedError> {
        if cluster.len() != matrix.rank() {
            return Err(SeedError::RankMismatch(cluster.len(), matrix.rank()));
        }
        for (i, a) in cluster.iter().enumerate() {
            if cluster[..i].contains(a) {
                return Err(SeedError::RepeatedVariable);
            }
        }
        Ok(LabeledSeed { cluster, matrix })
    }

    /// The seed `((x1, ..., xn), B)`.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.rank();
        let cluster = (0..n).map(|i| LaurentPolynomial::var(n, i)).collect();
        LabeledSeed { cluster, matrix }
    }

    pub(crate) fn from_parts_unchecked(cluster: Vec<LaurentPolynomial>, matrix: ExchangeMatrix) -> Self {
        LabeledSeed { cluster, matrix }
    }

    pub fn rank(&self) -> usize {
        self.cluster.len()
    }

    pub fn cluster(&self) -> &[LaurentPolynomial] {
        &self.cluster
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    /// Simultaneous relabeling: position `j` moves to position `perm[j]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut cluster = self.cluster.clone();
        for (j, x) in self.cluster.iter().enumerate() {
            cluster[perm[j]] = x.clone();
        }
        LabeledSeed { cluster, matrix: self.matrix.permuted(perm) }
    }

    pub fn key(&self) -> SeedKey {
        canonical_seed_key(self)
    }
}

impl fmt::Debug for LabeledSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledSeed")
            .field("cluster", &self.cluster)
            .field("matrix", &self.matrix)
            .finish()
    }
}

/// Sorted canonical serialisations of the cluster variables, matrix
/// omitted. Equality compares the full byte string; the hash is cached.
#[derive(Clone)]
pub struct SeedKey {
    bytes: Vec<u8>,
    hash: u64,
}

impl SeedKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hash_value(&self) -> u64 {
        self.hash
    }
}

impl PartialEq for SeedKey {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.bytes == other.bytes
    }
}

impl Eq for SeedKey {}

impl Hash for SeedKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl fmt::Debug for SeedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeedKey({})", String::from_utf8_lossy(&self.bytes))
    }
}

// FNV-1a; stable across runs and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn canonical_seed_key(seed: &LabeledSeed) -> SeedKey {
    let mut parts: Vec<String> = seed.cluster.iter().map(|x| x.canonical_string()).collect();
    parts.sort();
    let bytes = parts.join("|").into_bytes();
    let hash = fnv1a(&bytes);
    SeedKey { bytes, hash }
}

/// Seed JSON: a matrix plus an optional cluster (defaults to `x1..xn`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<Vec<Vec<TermJson>>>,
}

impl From<&LabeledSeed> for SeedJson {
    fn from(s: &LabeledSeed) -> Self {
        SeedJson {
            n: s.rank(),
            b: s.matrix.rows(),
            cluster: Some(s.cluster.iter().map(|x| x.to_term_list()).collect()),
        }
    }
}

impl TryFrom<SeedJson> for LabeledSeed {
    type Error = SeedError;
    fn try_from(j: SeedJson) -> Result<Self, SeedError> {
        let matrix = ExchangeMatrix::try_from(MatrixJson { n: j.n, b: j.b })?;
        match j.cluster {
            None => Ok(LabeledSeed::initial(matrix)),
            Some(vars) => {
                let cluster = vars
                    .iter()
                    .map(|t| LaurentPolynomial::from_term_list(j.n, t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(SeedError::BadVariable)?;
                LabeledSeed::new(cluster, matrix)
            }
        }
    }
}

/// Reads a seed from matrix JSON, seed JSON (matrix plus cluster) or quiver
/// JSON (`{"n": .., "arrows": [..]}`).
pub fn seed_from_json_str(text: &str) -> Result<LabeledSeed, SeedError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SeedError::Json(e.to_string()))?;
    if value.get("arrows").is_some() {
        let q: QuiverJson = serde_json::from_value(value).map_err(|e| SeedError::Json(e.to_string()))?;
        let matrix = quiver_to_matrix(&ValuedQuiver::try_from(q)?)?;
        return Ok(LabeledSeed::initial(matrix));
    }
    let j: SeedJson = serde_json::from_value(value).map_err(|e| SeedError::Json(e.to_string()))?;
    LabeledSeed::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::mutate_seed;

    fn a3_seed() -> LabeledSeed {
        let b = ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]]).unwrap();
        LabeledSeed::initial(b)
    }

    #[test]
    fn key_ignores_relabeling() {
        let s = mutate_seed(&a3_seed(), 1).unwrap();
        let reversed = s.relabeled(&[2, 1, 0]);
        assert_ne!(reversed, s);
        assert_eq!(reversed.key(), s.key());
        assert_eq!(reversed.cluster()[0], s.cluster()[2]);
        assert_eq!(reversed.matrix().get(0, 1), s.matrix().get(2, 1));
    }

    #[test]
    fn key_separates_neighbours() {
        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let s = LabeledSeed::initial(b);
        assert_ne!(s.key(), mutate_seed(&s, 0).unwrap().key());
    }

    #[test]
    fn construction_checks() {
        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let x = LaurentPolynomial::var(2, 0);
        assert_eq!(
            LabeledSeed::new(vec![x.clone(), x.clone()], b.clone()),
            Err(SeedError::RepeatedVariable)
        );
        assert_eq!(LabeledSeed::new(vec![x], b), Err(SeedError::RankMismatch(1, 2)));
    }

    #[test]
    fn seed_json_round_trip() {
        let s = mutate_seed(&a3_seed(), 1).unwrap();
        let j = SeedJson::from(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeedJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LabeledSeed::try_from(back).unwrap(), s);
        let bare: SeedJson = serde_json::from_str(r#"{"n":2,"b":[[0,1],[-1,0]]}"#).unwrap();
        assert_eq!(LabeledSeed::try_from(bare).unwrap().cluster()[1], LaurentPolynomial::var(2, 1));
    }

    #[test]
    fn any_input_form() {
        let from_matrix = seed_from_json_str(r#"{"n":3,"b":[[0,1,0],[-1,0,-1],[0,1,0]]}"#).unwrap();
        assert_eq!(from_matrix, a3_seed());
        let from_quiver =
            seed_from_json_str(r#"{"n":3,"arrows":[{"from":1,"to":2},{"from":3,"to":2,"v":[1,1]}]}"#).unwrap();
        assert_eq!(from_quiver, a3_seed());
        assert!(matches!(seed_from_json_str("[1,2]"), Err(SeedError::Json(_))));
        assert!(matches!(
            seed_from_json_str(r#"{"n":2,"arrows":[{"from":1,"to":1}]}"#),
            Err(SeedError::Matrix(MatrixError::QuiverLoop(1)))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn key_is_invariant_under_relabeling(walk in prop::collection::vec(0usize..3, 0..5), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
                let s = walk.iter().fold(a3_seed(), |s, &k| mutate_seed(&s, k).unwrap());
                prop_assert_eq!(s.relabeled(&perm).key(), s.key());
            }
        }
    }
}
