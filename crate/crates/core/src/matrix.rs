//! Skew-symmetrizable exchange matrices and their valued quivers.
//!
//! Entries are addressed as `b(j, i)`, row `j` and column `i`, matching the
//! convention that a positive `b(j, i)` is an arrow `j -> i`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("nonzero diagonal entry at position {0}")]
    NonZeroDiagonal(usize),
    #[error("sign-skew condition fails at ({0}, {1})")]
    NotSignSkew(usize, usize),
    #[error("matrix is not skew-symmetrizable")]
    NotSymmetrizable,
    #[error("quiver has a loop at vertex {0}")]
    QuiverLoop(usize),
    #[error("quiver has parallel or opposite arrows between {0} and {1}")]
    QuiverTwoCycle(usize, usize),
    #[error("quiver vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("arrow value pair must be positive")]
    ZeroValue,
}

/// Diagonal of a symmetrizer `D`, normalised so that the entries on each
/// connected component are coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symmetrizer(pub Vec<u64>);

impl Symmetrizer {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ExchangeMatrix {
    /// Validates the sign-skew condition and the existence of a symmetrizer.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::NotSquare);
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        let m = ExchangeMatrix { n, entries };
        m.check_sign_skew()?;
        if find_symmetrizer(&m.rows()).is_none() {
            return Err(MatrixError::NotSymmetrizable);
        }
        Ok(m)
    }

    /// Builds a matrix without validation. Callers guarantee the invariants
    /// (mutation preserves them).
    pub(crate) fn from_raw(n: usize, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        ExchangeMatrix { n, entries }
    }

    fn check_sign_skew(&self) -> Result<(), MatrixError> {
        for j in 0..self.n {
            if self.get(j, j) != 0 {
                return Err(MatrixError::NonZeroDiagonal(j));
            }
            for i in 0..j {
                let (a, b) = (self.get(j, i), self.get(i, j));
                if a.signum() != -b.signum() {
                    return Err(MatrixError::NotSignSkew(j, i));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn symmetrizer(&self) -> Symmetrizer {
        find_symmetrizer(&self.rows()).expect("validated exchange matrix has a symmetrizer")
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|j| (0..self.n).all(|i| self.get(j, i) == -self.get(i, j)))
    }

    pub fn negated(&self) -> Self {
        ExchangeMatrix { n: self.n, entries: self.entries.iter().map(|x| -x).collect() }
    }

    /// The matrix `B'` with `B'[perm[j]][perm[i]] = B[j][i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut entries = vec![0; self.n * self.n];
        for j in 0..self.n {
            for i in 0..self.n {
                entries[perm[j] * self.n + perm[i]] = self.get(j, i);
            }
        }
        ExchangeMatrix { n: self.n, entries }
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let mut entries = Vec::with_capacity(k * k);
        for &j in indices {
            for &i in indices {
                entries.push(self.get(j, i));
            }
        }
        ExchangeMatrix { n: k, entries }
    }

    /// Largest `|b(j, i)|` over all entries; for skew-symmetric matrices this
    /// is the maximal arrow multiplicity of the quiver.
    pub fn max_multiplicity(&self) -> u64 {
        self.entries.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    /// True iff the support graph is connected.
    pub fn is_indecomposable(&self) -> bool {
        components(self).len() == 1
    }
}

impl fmt::Debug for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// Connected components of the support graph, each sorted.
pub fn components(b: &ExchangeMatrix) -> Vec<Vec<usize>> {
    let n = b.rank();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                if !*seen_w && (b.get(v, w) != 0 || b.get(w, v) != 0) {
                    *seen_w = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Minimal positive integer diagonal `D` with `D·B` skew-symmetric, or
/// `None` when the matrix is not skew-symmetrizable.
///
/// Ratios `d_i / d_j = |b_ji| / |b_ij|` are propagated along a spanning tree
/// of each component and then checked against every nonzero entry.
pub fn find_symmetrizer(rows: &[Vec<i64>]) -> Option<Symmetrizer> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return None;
    }
    for (j, row) in rows.iter().enumerate() {
        if row[j] != 0 {
            return None;
        }
        for (i, x) in row.iter().enumerate() {
            if x.signum() != -rows[i][j].signum() {
                return None;
            }
        }
    }
    // d as reduced fractions num/den
    let mut d: Vec<Option<(i128, i128)>> = vec![None; n];
    let mut out = vec![0u64; n];
    for s in 0..n {
        if d[s].is_some() {
            continue;
        }
        d[s] = Some((1, 1));
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(j) = stack.pop() {
            let (nj, dj) = d[j].unwrap();
            for i in 0..n {
                if rows[j][i] == 0 {
                    continue;
                }
                // d_j b_ji = -d_i b_ij  =>  d_i = d_j |b_ji| / |b_ij|
                let num = nj * rows[j][i].unsigned_abs() as i128;
                let den = dj * rows[i][j].unsigned_abs() as i128;
                let g = num.gcd(&den);
                let di = (num / g, den / g);
                match d[i] {
                    None => {
                        d[i] = Some(di);
                        comp.push(i);
                        stack.push(i);
                    }
                    Some(existing) if existing != di => return None,
                    Some(_) => {}
                }
            }
        }
        let lcm_den = comp.iter().fold(1i128, |acc, &v| acc.lcm(&d[v].unwrap().1));
        let ints: Vec<i128> =
            comp.iter().map(|&v| d[v].unwrap().0 * (lcm_den / d[v].unwrap().1)).collect();
        let g = ints.iter().fold(0i128, |acc, &x| acc.gcd(&x));
        for (&v, &x) in comp.iter().zip(&ints) {
            out[v] = u64::try_from(x / g).ok()?;
        }
    }
    Some(Symmetrizer(out))
}

/// One arrow of a valued quiver. Vertices are zero-based internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub values: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuedQuiver {
    n: usize,
    arrows: Vec<Arrow>,
}

impl ValuedQuiver {
    pub fn new(n: usize, mut arrows: Vec<Arrow>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::NotSquare);
        }
        let mut seen = std::collections::HashSet::new();
        for a in &arrows {
            if a.from >= n {
                return Err(MatrixError::VertexOutOfRange(a.from + 1, n));
            }
            if a.to >= n {
                return Err(MatrixError::VertexOutOfRange(a.to + 1, n));
            }
            if a.from == a.to {
                return Err(MatrixError::QuiverLoop(a.from + 1));
            }
            if a.values.0 == 0 || a.values.1 == 0 {
                return Err(MatrixError::ZeroValue);
            }
            let key = (a.from.min(a.to), a.from.max(a.to));
            if !seen.insert(key) {
                return Err(MatrixError::QuiverTwoCycle(key.0 + 1, key.1 + 1));
            }
        }
        arrows.sort();
        Ok(ValuedQuiver { n, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
}

/// Arrow `j -> i` with values `(b_ji, -b_ij)` for every positive `b_ji`.
pub fn matrix_to_quiver(b: &ExchangeMatrix) -> ValuedQuiver {
    let n = b.rank();
    let mut arrows = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = b.get(j, i);
            if v > 0 {
                arrows.push(Arrow { from: j, to: i, values: (v as u64, (-b.get(i, j)) as u64) });
            }
        }
    }
    ValuedQuiver { n, arrows }
}

pub fn quiver_to_matrix(q: &ValuedQuiver) -> Result<ExchangeMatrix, MatrixError> {
    let n = q.n;
    let mut rows = vec![vec![0i64; n]; n];
    for a in &q.arrows {
        rows[a.from][a.to] = a.values.0 as i64;
        rows[a.to][a.from] = -(a.values.1 as i64);
    }
    ExchangeMatrix::new(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `B' = B` under the relabeling.
    Direct,
    /// `B' = -B` under the relabeling.
    Opposite,
}

/// A vertex bijection `map[j]` with `R[map[j]][map[i]] = ±Q[j][i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuiverIso {
    pub map: Vec<usize>,
    pub orientation: Orientation,
}

/// All relabelings carrying `q` onto `r` (and onto `-r` when
/// `allow_opposite`). Direct isomorphisms are listed first, each group in
/// lexicographic order of the map.
pub fn matrix_isomorphisms(
    q: &ExchangeMatrix,
    r: &ExchangeMatrix,
    allow_opposite: bool,
) -> Vec<QuiverIso> {
    let mut out = Vec::new();
    if q.rank() != r.rank() {
        return out;
    }
    let mut signs = vec![(1i64, Orientation::Direct)];
    if allow_opposite {
        signs.push((-1, Orientation::Opposite));
    }
    for (sign, orientation) in signs {
        let mut map = Vec::with_capacity(q.rank());
        let mut used = vec![false; q.rank()];
        search_iso(q, r, sign, &mut map, &mut used, &mut |m| {
            out.push(QuiverIso { map: m.to_vec(), orientation })
        });
    }
    out
}

fn search_iso(
    q: &ExchangeMatrix,
    r: &ExchangeMatrix,
    sign: i64,
    map: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let k = map.len();
    let n = q.rank();
    if k == n {
        emit(map);
        return;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        let ok = (0..k).all(|j| {
            r.get(map[j], cand) == sign * q.get(j, k) && r.get(cand, map[j]) == sign * q.get(k, j)
        });
        if !ok {
            continue;
        }
        used[cand] = true;
        map.push(cand);
        search_iso(q, r, sign, map, used, emit);
        map.pop();
        used[cand] = false;
    }
}

/// [`matrix_isomorphisms`] phrased on valued quivers.
pub fn quiver_isomorphisms(
    q: &ValuedQuiver,
    r: &ValuedQuiver,
    allow_opposite: bool,
) -> Result<Vec<QuiverIso>, MatrixError> {
    Ok(matrix_isomorphisms(&quiver_to_matrix(q)?, &quiver_to_matrix(r)?, allow_opposite))
}

// JSON forms. Vertices are 1-based on the wire.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub from: usize,
    pub to: usize,
    #[serde(default = "unit_values")]
    pub v: [u64; 2],
}

fn unit_values() -> [u64; 2] {
    [1, 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub n: usize,
    pub arrows: Vec<ArrowJson>,
}

impl From<&ExchangeMatrix> for MatrixJson {
    fn from(b: &ExchangeMatrix) -> Self {
        MatrixJson { n: b.rank(), b: b.rows() }
    }
}

impl TryFrom<MatrixJson> for ExchangeMatrix {
    type Error = MatrixError;
    fn try_from(m: MatrixJson) -> Result<Self, MatrixError> {
        if m.b.len() != m.n {
            return Err(MatrixError::NotSquare);
        }
        ExchangeMatrix::new(m.b)
    }
}

impl From<&ValuedQuiver> for QuiverJson {
    fn from(q: &ValuedQuiver) -> Self {
        QuiverJson {
            n: q.n,
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowJson { from: a.from + 1, to: a.to + 1, v: [a.values.0, a.values.1] })
                .collect(),
        }
    }
}

impl TryFrom<QuiverJson> for ValuedQuiver {
    type Error = MatrixError;
    fn try_from(q: QuiverJson) -> Result<Self, MatrixError> {
        let mut arrows = Vec::with_capacity(q.arrows.len());
        for a in q.arrows {
            if a.from == 0 || a.from > q.n {
                return Err(MatrixError::VertexOutOfRange(a.from, q.n));
            }
            if a.to == 0 || a.to > q.n {
                return Err(MatrixError::VertexOutOfRange(a.to, q.n));
            }
            arrows.push(Arrow { from: a.from - 1, to: a.to - 1, values: (a.v[0], a.v[1]) });
        }
        ValuedQuiver::new(q.n, arrows)
    }
}
