//! Quiver classification: canonical forms, mutation classes, finite-type
//! recognition and the rank-3 subquiver scan.

mod canonical;
mod conjecture;
mod dynkin;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use canonical::{canonical_quiver, CanonicalQuiver, MAX_CANONICAL_RANK};
pub use conjecture::{check_signature_conjecture, ConjectureReport, SignatureClass};
pub use dynkin::{dynkin_label, Family, TypeLabel};

use crate::builtins::builtin;
use crate::matrix::ExchangeMatrix;
use crate::mutation::mutate_matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("rank {0} exceeds the canonical-form limit of 12")]
    RankTooLarge(usize),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("mutation-finiteness is only decided for skew-symmetric or finite-type matrices")]
    Inapplicable,
    #[error("budget of {0} quivers exhausted before a conclusion")]
    Inconclusive(usize),
    #[error("{0}")]
    Graph(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassMode {
    /// Enumerate until the class closes or the budget runs out.
    Exhaustive,
    /// Stop as soon as a member has an arrow of multiplicity above 2.
    MutationFinite,
}

/// A member of a mutation class together with a sequence reaching it.
#[derive(Debug, Clone)]
pub struct ClassMember {
    pub form: CanonicalQuiver,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MutationClass {
    /// Members in discovery (breadth-first) order; the first is the input.
    pub members: Vec<ClassMember>,
    pub complete: bool,
    /// Set in [`ClassMode::MutationFinite`] when a member with a heavy arrow
    /// was reached.
    pub violation: Option<Vec<usize>>,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, q: &CanonicalQuiver) -> bool {
        self.members.iter().any(|m| &m.form == q)
    }
}

enum Visit {
    Continue,
    Stop,
}

/// Breadth-first search over canonical forms. `visit` sees each new member's
/// relabelled representative; returning `Stop` ends the search early.
fn explore(
    q: &ExchangeMatrix,
    budget: usize,
    mut visit: impl FnMut(&ExchangeMatrix, &[usize]) -> Visit,
) -> Result<(Vec<ClassMember>, bool, bool), ClassifyError> {
    let n = q.rank();
    let start = canonical_quiver(q)?;
    let mut index: HashMap<CanonicalQuiver, usize> = HashMap::new();
    let mut members = vec![ClassMember { form: start.clone(), path: Vec::new() }];
    index.insert(start, 0);
    if let Visit::Stop = visit(q, &[]) {
        return Ok((members, false, true));
    }
    let mut queue: VecDeque<(ExchangeMatrix, usize)> = VecDeque::from([(q.clone(), 0)]);
    while let Some((m, id)) = queue.pop_front() {
        for k in 0..n {
            let next = mutate_matrix(&m, k);
            let form = canonical_quiver(&next)?;
            if index.contains_key(&form) {
                continue;
            }
            if members.len() >= budget {
                return Ok((members, false, false));
            }
            let mut path = members[id].path.clone();
            path.push(k);
            index.insert(form.clone(), members.len());
            members.push(ClassMember { form, path: path.clone() });
            if let Visit::Stop = visit(&next, &path) {
                return Ok((members, false, true));
            }
            queue.push_back((next, members.len() - 1));
        }
    }
    Ok((members, true, false))
}

/// Explores the mutation class of `q` up to isomorphism, keeping at most
/// `budget` members.
pub fn mutation_class(q: &ExchangeMatrix, budget: usize, mode: ClassMode) -> Result<MutationClass, ClassifyError> {
    let mut violation = None;
    let (members, complete, _) = explore(q, budget, |m, path| {
        if mode == ClassMode::MutationFinite && m.max_multiplicity() > 2 {
            violation = Some(path.to_vec());
            Visit::Stop
        } else {
            Visit::Continue
        }
    })?;
    Ok(MutationClass { members, complete, violation })
}

#[derive(Debug, Clone)]
pub enum FinitenessCertificate {
    /// The whole (finite) class.
    Class(MutationClass),
    /// A mutation sequence producing an arrow of multiplicity at least 3.
    Violation(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct Finiteness {
    pub finite: bool,
    pub class_size: Option<usize>,
    pub certificate: FinitenessCertificate,
}

/// Decides whether the mutation class of `q` is finite.
///
/// Skew-symmetric quivers use the multiplicity criterion: the class is
/// infinite iff some member has an arrow of multiplicity at least 3. Other
/// matrices are decided only in rank 2 or when they are of finite type.
pub fn is_mutation_finite(q: &ExchangeMatrix, budget: usize) -> Result<Finiteness, ClassifyError> {
    if !q.is_indecomposable() {
        return Err(ClassifyError::Disconnected);
    }
    let finite_class = |class: MutationClass| {
        let size = class.len();
        Finiteness { finite: true, class_size: Some(size), certificate: FinitenessCertificate::Class(class) }
    };
    if q.rank() <= 2 {
        let class = mutation_class(q, budget, ClassMode::Exhaustive)?;
        return Ok(finite_class(class));
    }
    if q.is_skew_symmetric() {
        let class = mutation_class(q, budget, ClassMode::MutationFinite)?;
        if let Some(path) = class.violation {
            return Ok(Finiteness { finite: false, class_size: None, certificate: FinitenessCertificate::Violation(path) });
        }
        if !class.complete {
            return Err(ClassifyError::Inconclusive(budget));
        }
        return Ok(finite_class(class));
    }
    match finite_type_check(q, budget)? {
        Some(_) => {
            let class = mutation_class(q, budget, ClassMode::Exhaustive)?;
            if !class.complete {
                return Err(ClassifyError::Inconclusive(budget));
            }
            Ok(finite_class(class))
        }
        None => Err(ClassifyError::Inapplicable),
    }
}

/// Finite-type recognition: `Some(label)` if some member of the mutation
/// class is a Dynkin diagram, `None` if the class provably contains none.
///
/// The search stops early with `None` when a member has a pair with
/// `|b_ij b_ji| >= 4`, since no cluster algebra of finite type has such a
/// seed.
pub fn finite_type_check(q: &ExchangeMatrix, budget: usize) -> Result<Option<TypeLabel>, ClassifyError> {
    if !q.is_indecomposable() {
        return Err(ClassifyError::Disconnected);
    }
    let mut found = None;
    let mut excluded = false;
    let (_, complete, stopped) = explore(q, budget, |m, _| {
        if let Some(label) = dynkin_label(m) {
            found = Some(label);
            return Visit::Stop;
        }
        if has_heavy_pair(m) {
            excluded = true;
            return Visit::Stop;
        }
        Visit::Continue
    })?;
    if found.is_some() || excluded || complete {
        return Ok(found);
    }
    debug_assert!(!stopped);
    Err(ClassifyError::Inconclusive(budget))
}

fn has_heavy_pair(m: &ExchangeMatrix) -> bool {
    let n = m.rank();
    (0..n).any(|i| (i + 1..n).any(|j| (m.get(i, j) * m.get(j, i)).abs() >= 4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rank3Kind {
    /// Mutation-equivalent to a Dynkin quiver of type `A3`.
    A3,
    /// Mutation class of the affine quiver of type `Ã2`.
    AffineA2,
    /// The Markov quiver (three double arrows in a cycle).
    Markov,
    /// Mutation-infinite, or finite but not one of the above.
    Other,
}

impl fmt::Display for Rank3Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rank3Kind::A3 => "A3",
            Rank3Kind::AffineA2 => "Atilde2",
            Rank3Kind::Markov => "T3",
            Rank3Kind::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank3Subquiver {
    /// Zero-based vertices of the full subquiver, ascending.
    pub vertices: [usize; 3],
    pub kind: Rank3Kind,
}

/// Classifies one connected skew-symmetric rank-3 quiver.
pub fn classify_rank3(m: &ExchangeMatrix) -> Rank3Kind {
    let class = match mutation_class(m, 64, ClassMode::MutationFinite) {
        Ok(c) => c,
        Err(_) => return Rank3Kind::Other,
    };
    if class.violation.is_some() || !class.complete {
        return Rank3Kind::Other;
    }
    let markov = canonical_quiver(&builtin("markov").unwrap()).unwrap();
    let affine = canonical_quiver(&builtin("atilde2").unwrap()).unwrap();
    if class.contains(&markov) {
        Rank3Kind::Markov
    } else if class.contains(&affine) {
        Rank3Kind::AffineA2
    } else if class.members.iter().any(|c| dynkin_label(&c.form.matrix()).is_some()) {
        Rank3Kind::A3
    } else {
        Rank3Kind::Other
    }
}

/// Every connected full subquiver on three vertices, in lexicographic order
/// of the vertex triple.
pub fn rank3_subquiver_scan(q: &ExchangeMatrix) -> Result<Vec<Rank3Subquiver>, ClassifyError> {
    if !q.is_skew_symmetric() {
        return Err(ClassifyError::Inapplicable);
    }
    let n = q.rank();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let sub = q.submatrix(&[a, b, c]);
                if !sub.is_indecomposable() {
                    continue;
                }
                out.push(Rank3Subquiver { vertices: [a, b, c], kind: classify_rank3(&sub) });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_size(name: &str) -> usize {
        let c = mutation_class(&builtin(name).unwrap(), 100_000, ClassMode::Exhaustive).unwrap();
        assert!(c.complete);
        c.len()
    }

    #[test]
    fn small_class_sizes() {
        assert_eq!(class_size("markov"), 1);
        assert_eq!(class_size("atilde2"), 2);
        assert_eq!(class_size("a3"), 4);
        assert_eq!(class_size("a2"), 1);
        // the double edge can point towards the long or the short root
        assert_eq!(class_size("b2"), 2);
        // B3 and C3 are Langlands dual, so their classes correspond
        assert_eq!(class_size("b3"), class_size("c3"));
    }

    #[test]
    fn markov_is_mutation_finite_but_not_finite_type() {
        let m = builtin("markov").unwrap();
        let f = is_mutation_finite(&m, 1000).unwrap();
        assert!(f.finite);
        assert_eq!(f.class_size, Some(1));
        assert_eq!(finite_type_check(&m, 1000).unwrap(), None);
    }

    #[test]
    fn heavy_arrow_certificate() {
        // a 3-cycle with a double arrow next to a single one is mutation-infinite
        let q = ExchangeMatrix::new(vec![vec![0, 2, -1], vec![-2, 0, 2], vec![1, -2, 0]]).unwrap();
        let f = is_mutation_finite(&q, 1000).unwrap();
        assert!(!f.finite);
        let FinitenessCertificate::Violation(path) = f.certificate else { panic!("expected violation") };
        let mut m = q.clone();
        for &k in &path {
            m = mutate_matrix(&m, k);
        }
        assert!(m.max_multiplicity() > 2);
    }

    #[test]
    fn finite_types() {
        let cases = [("a3", "A3"), ("b3", "B3"), ("c3", "C3"), ("d4", "D4"), ("f4", "F4"), ("g2", "G2")];
        for (name, label) in cases {
            let got = finite_type_check(&builtin(name).unwrap(), 10_000).unwrap();
            assert_eq!(got.map(|l| l.to_string()).as_deref(), Some(label));
        }
        // a 4-cycle is mutation-equivalent to D4
        let cyc = ExchangeMatrix::new(vec![
            vec![0, 1, 0, -1],
            vec![-1, 0, 1, 0],
            vec![0, -1, 0, 1],
            vec![1, 0, -1, 0],
        ])
        .unwrap();
        assert_eq!(finite_type_check(&cyc, 10_000).unwrap().map(|l| l.to_string()).as_deref(), Some("D4"));
        assert_eq!(finite_type_check(&builtin("atilde2").unwrap(), 10_000).unwrap(), None);
        assert_eq!(finite_type_check(&builtin("te6").unwrap(), 100_000).unwrap(), None);
    }

    #[test]
    fn rank3_kinds() {
        assert_eq!(classify_rank3(&builtin("a3").unwrap()), Rank3Kind::A3);
        assert_eq!(classify_rank3(&builtin("atilde2").unwrap()), Rank3Kind::AffineA2);
        assert_eq!(classify_rank3(&builtin("atilde2-cyclic").unwrap()), Rank3Kind::AffineA2);
        assert_eq!(classify_rank3(&builtin("markov").unwrap()), Rank3Kind::Markov);
        let oriented_cycle = ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        assert_eq!(classify_rank3(&oriented_cycle), Rank3Kind::A3);
    }

    #[test]
    fn disconnected_input() {
        let q = ExchangeMatrix::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(matches!(is_mutation_finite(&q, 10), Err(ClassifyError::Disconnected)));
    }
}
