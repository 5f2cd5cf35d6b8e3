//! Recognition of Dynkin diagrams among valued quivers (orientation ignored).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::matrix::ExchangeMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A Cartan–Killing type such as `D4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: Family,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Self {
        TypeLabel { family, rank }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Matches the underlying valued graph of `b` against the Dynkin diagrams.
///
/// For `B_n`/`C_n` (n ≥ 3) the end vertex of the double edge has the smaller
/// symmetrizer entry in `B_n` (so `1 -> 2 <- 3` with values `(2, 1)` on
/// `3 -> 2` is `B3`) and the larger one in `C_n`. Rank 2 with a double edge
/// is reported as `B2`.
pub fn dynkin_label(b: &ExchangeMatrix) -> Option<TypeLabel> {
    let n = b.rank();
    if n == 0 || !b.is_indecomposable() {
        return None;
    }
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if b.get(i, j) != 0 {
                let w = (b.get(i, j) * b.get(j, i)).unsigned_abs();
                edges.push((i, j, w));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    if edges.len() != n - 1 {
        return None;
    }
    let heavy: Vec<&(usize, usize, u64)> = edges.iter().filter(|e| e.2 != 1).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    match heavy.as_slice() {
        [] => simply_laced(n, &edges, &degree),
        [&(i, j, 2)] => {
            if max_degree > 2 {
                return None;
            }
            if n == 2 {
                return Some(TypeLabel::new(Family::B, 2));
            }
            let (end, other) = match (degree[i], degree[j]) {
                (1, _) => (i, j),
                (_, 1) => (j, i),
                _ => {
                    return (n == 4).then(|| TypeLabel::new(Family::F, 4));
                }
            };
            let d = b.symmetrizer();
            let family = if d.0[end] < d.0[other] { Family::B } else { Family::C };
            Some(TypeLabel::new(family, n))
        }
        [&(_, _, 3)] if n == 2 => Some(TypeLabel::new(Family::G, 2)),
        _ => None,
    }
}

fn simply_laced(n: usize, edges: &[(usize, usize, u64)], degree: &[usize]) -> Option<TypeLabel> {
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    match branch.as_slice() {
        [] => Some(TypeLabel::new(Family::A, n)),
        [c] if degree[*c] == 3 => {
            let mut adj = vec![Vec::new(); n];
            for &(i, j, _) in edges {
                adj[i].push(j);
                adj[j].push(i);
            }
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Some(TypeLabel::new(Family::D, n)),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Some(TypeLabel::new(Family::E, n)),
                _ => None,
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn label(name: &str) -> Option<String> {
        dynkin_label(&builtin(name).unwrap()).map(|t| t.to_string())
    }

    #[test]
    fn recognises_the_builtin_diagrams() {
        for name in ["a2", "a3", "a4", "b2", "b3", "c3", "d4", "d5", "e6", "e7", "e8", "f4", "g2"] {
            assert_eq!(label(name), Some(name.to_uppercase()), "{name}");
        }
        assert_eq!(label("c2"), Some("B2".into()));
        assert_eq!(label("b7").as_deref(), Some("B7"));
        assert_eq!(label("c5").as_deref(), Some("C5"));
        assert_eq!(label("d7").as_deref(), Some("D7"));
    }

    #[test]
    fn rejects_non_dynkin() {
        for name in ["markov", "atilde2", "atilde2-cyclic", "kronecker", "te6", "te7", "te8", "x6", "e66"] {
            assert_eq!(label(name), None, "{name}");
        }
    }

    #[test]
    fn orientation_does_not_matter() {
        let d4 = builtin("d4").unwrap();
        assert_eq!(dynkin_label(&d4.negated()), dynkin_label(&d4));
        let b3 = builtin("b3").unwrap();
        assert_eq!(dynkin_label(&b3.negated()).unwrap().to_string(), "B3");
    }
}
