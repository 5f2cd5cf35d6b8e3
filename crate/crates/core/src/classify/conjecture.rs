//! Layer signatures against graph symmetry and quiver shape.
//!
//! Two claims are checked on a finite exchange graph. First, vertices with
//! equal layer signatures lie in one orbit of the graph automorphism group.
//! Second, their quivers are isomorphic or opposite; rank 2 and type `F4` are
//! known exceptions to the second claim and are reported as exempt.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{finite_type_check, Family};
use crate::exchange_graph::{layer_signature, ExchangeGraph, LoopSize};
use crate::groups::{graph_automorphism_group, GroupError};
use crate::matrix::matrix_isomorphisms;

/// Vertices sharing one layer signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureClass {
    pub layers: Vec<Vec<LoopSize>>,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub classes: Vec<SignatureClass>,
    pub orbit_count: usize,
    pub part1_holds: bool,
    /// Pairs with equal signatures in different orbits.
    pub part1_failures: Vec<(usize, usize)>,
    pub part2_exempt: bool,
    pub part2_holds: bool,
    /// Pairs with equal signatures whose quivers are neither isomorphic nor
    /// opposite.
    pub part2_failures: Vec<(usize, usize)>,
}

pub fn check_signature_conjecture(g: &ExchangeGraph) -> Result<ConjectureReport, GroupError> {
    let aut = graph_automorphism_group(g)?;
    let nv = g.vertex_count();
    let mut orbit = vec![usize::MAX; nv];
    let mut orbit_count = 0;
    for v in 0..nv {
        if orbit[v] != usize::MAX {
            continue;
        }
        for p in aut.elements() {
            orbit[p.apply(v)] = orbit_count;
        }
        orbit_count += 1;
    }

    let loops = g.geodesic_loops()?;
    let mut by_sig: BTreeMap<Vec<Vec<LoopSize>>, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        let sig = layer_signature(g, &loops, v, None)?;
        by_sig.entry(sig.layers).or_default().push(v);
    }

    let base = &g.vertex(0).matrix;
    let is_f4 = matches!(finite_type_check(base, 10_000), Ok(Some(l)) if l.family == Family::F && l.rank == 4);
    let part2_exempt = g.rank() == 2 || is_f4;

    let mut part1_failures = Vec::new();
    let mut part2_failures = Vec::new();
    for verts in by_sig.values() {
        let first = verts[0];
        for &v in &verts[1..] {
            if orbit[v] != orbit[first] {
                part1_failures.push((first, v));
            }
            let (a, b) = (&g.vertex(first).matrix, &g.vertex(v).matrix);
            if matrix_isomorphisms(a, b, true).is_empty() {
                part2_failures.push((first, v));
            }
        }
    }
    let classes = by_sig.into_iter().map(|(layers, vertices)| SignatureClass { layers, vertices }).collect();
    Ok(ConjectureReport {
        classes,
        orbit_count,
        part1_holds: part1_failures.is_empty(),
        part1_failures,
        part2_exempt,
        part2_holds: part2_failures.is_empty(),
        part2_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::exchange_graph::{build_graph, Limits};
    use crate::seed::LabeledSeed;

    fn report(name: &str) -> ConjectureReport {
        let g = build_graph(&LabeledSeed::initial(builtin(name).unwrap()), Limits::default()).unwrap();
        check_signature_conjecture(&g).unwrap()
    }

    #[test]
    fn a3_holds() {
        let r = report("a3");
        assert!(r.part1_holds && r.part2_holds && !r.part2_exempt);
        assert_eq!(r.classes.iter().map(|c| c.vertices.len()).sum::<usize>(), 14);
    }

    #[test]
    fn rank_two_is_exempt() {
        let r = report("g2");
        assert!(r.part1_holds);
        assert!(r.part2_exempt);
    }
}
