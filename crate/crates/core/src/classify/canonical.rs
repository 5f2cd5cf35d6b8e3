//! Exact canonical forms of valued quivers.
//!
//! Vertices are first coloured by an isomorphism-invariant refinement
//! (symmetrizer entry and incident value pairs, then neighbour colours until
//! stable). The canonical form is the lexicographically smallest relabelled
//! matrix over all orderings that list colour classes in increasing order,
//! found by branch and bound.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::matrix::ExchangeMatrix;

pub const MAX_CANONICAL_RANK: usize = 12;

/// A relabelled exchange matrix that is equal for two quivers iff they are
/// isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalQuiver {
    n: usize,
    entries: Vec<i64>,
}

impl CanonicalQuiver {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> ExchangeMatrix {
        ExchangeMatrix::from_raw(self.n, self.entries.clone())
    }
}

impl fmt::Debug for CanonicalQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalQuiver({:?})", self.matrix())
    }
}

/// Arrow values to a neighbour and the neighbour's colour.
type NeighbourColour = (i64, i64, usize);

/// Iso-invariant vertex colours, numbered by sorted invariant value.
fn vertex_colours(b: &ExchangeMatrix) -> Vec<usize> {
    let n = b.rank();
    let d = b.symmetrizer();
    let initial: Vec<(u64, Vec<(i64, i64)>)> = (0..n)
        .map(|v| {
            let mut inc: Vec<(i64, i64)> =
                (0..n).filter(|&w| b.get(v, w) != 0).map(|w| (b.get(v, w), b.get(w, v))).collect();
            inc.sort_unstable();
            (d.0[v], inc)
        })
        .collect();
    let mut colours = rank_values(&initial);
    loop {
        let refined: Vec<(usize, Vec<NeighbourColour>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<NeighbourColour> = (0..n)
                    .filter(|&w| b.get(v, w) != 0)
                    .map(|w| (b.get(v, w), b.get(w, v), colours[w]))
                    .collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let next = rank_values(&refined);
        let before = count_distinct(&colours);
        let after = count_distinct(&next);
        colours = next;
        if after == before {
            return colours;
        }
    }
}

fn rank_values<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).unwrap()).collect()
}

fn count_distinct(c: &[usize]) -> usize {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

pub fn canonical_quiver(b: &ExchangeMatrix) -> Result<CanonicalQuiver, ClassifyError> {
    let n = b.rank();
    if n > MAX_CANONICAL_RANK {
        return Err(ClassifyError::RankTooLarge(n));
    }
    let colours = vertex_colours(b);
    let mut slot_colour = colours.clone();
    slot_colour.sort_unstable();

    let mut search = Search {
        b,
        colours: &colours,
        slot_colour: &slot_colour,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        prefix: Vec::new(),
        best: None,
    };
    search.run();
    let order = search.best.expect("at least one ordering exists");
    // order[k] = original vertex placed at slot k
    let mut perm = vec![0; n];
    for (slot, &v) in order.iter().enumerate() {
        perm[v] = slot;
    }
    let m = b.permuted(&perm);
    Ok(CanonicalQuiver { n, entries: m.entries().to_vec() })
}

struct Search<'a> {
    b: &'a ExchangeMatrix,
    colours: &'a [usize],
    slot_colour: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    /// Encoding of the current partial ordering: for each slot k, the pairs
    /// (b[o_i][o_k], b[o_k][o_i]) for i < k.
    prefix: Vec<i64>,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self) {
        let mut best_code: Option<Vec<i64>> = None;
        self.dfs(&mut best_code);
    }

    fn dfs(&mut self, best_code: &mut Option<Vec<i64>>) {
        let n = self.b.rank();
        let k = self.order.len();
        if let Some(best) = best_code.as_ref() {
            // compare the determined prefix with the best code
            let len = self.prefix.len();
            if self.prefix[..] > best[..len] {
                return;
            }
        }
        if k == n {
            let better = match best_code.as_ref() {
                None => true,
                Some(best) => self.prefix < *best,
            };
            if better {
                *best_code = Some(self.prefix.clone());
                self.best = Some(self.order.clone());
            }
            return;
        }
        for v in 0..n {
            if self.used[v] || self.colours[v] != self.slot_colour[k] {
                continue;
            }
            let mark = self.prefix.len();
            for i in 0..k {
                let o = self.order[i];
                self.prefix.push(self.b.get(o, v));
                self.prefix.push(self.b.get(v, o));
            }
            self.used[v] = true;
            self.order.push(v);
            self.dfs(best_code);
            self.order.pop();
            self.used[v] = false;
            self.prefix.truncate(mark);
        }
    }
}
