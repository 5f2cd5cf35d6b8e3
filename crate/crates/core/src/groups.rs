//! Automorphism groups of exchange graphs and of cluster algebras.
//!
//! Graph automorphisms are enumerated by backtracking along a breadth-first
//! order, pruned by an equitable colouring that starts from the multiset of
//! geodesic-loop sizes at each vertex. Cluster automorphisms are obtained by
//! transporting each isomorphism `B_base -> ±B_w` along the graph.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exchange_graph::{ExchangeGraph, GraphError, LoopSize, VarId};
use crate::matrix::{matrix_isomorphisms, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("infinite graph: group computation unsupported")]
    Incomplete,
    #[error("transport of the base isomorphism is inconsistent at vertex {0}")]
    TransportInconsistency(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A permutation of exchange-graph vertices: `v -> self.0[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GraphPermutation(pub Vec<usize>);

impl GraphPermutation {
    pub fn identity(n: usize) -> Self {
        GraphPermutation((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        GraphPermutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        GraphPermutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

/// A finite permutation group stored as its full element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<GraphPermutation>,
    generators: Vec<GraphPermutation>,
}

impl PermGroup {
    /// The group generated by `generators`, by breadth-first multiplication.
    pub fn generated_by(degree: usize, generators: Vec<GraphPermutation>) -> Self {
        let elements = closure(degree, &generators);
        PermGroup { degree, elements, generators }
    }

    /// Builds the group from a complete element list, choosing generators
    /// greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<GraphPermutation>) -> Self {
        elements.sort();
        elements.dedup();
        let mut generators: Vec<GraphPermutation> = Vec::new();
        let mut span: HashSet<GraphPermutation> = HashSet::from([GraphPermutation::identity(degree)]);
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            generators.push(e.clone());
            span = closure(degree, &generators).into_iter().collect();
        }
        debug_assert_eq!(span.len(), elements.len(), "element list is not closed");
        PermGroup { degree, elements, generators }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GraphPermutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[GraphPermutation] {
        &self.generators
    }

    pub fn contains(&self, p: &GraphPermutation) -> bool {
        self.elements.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }
}

fn closure(degree: usize, generators: &[GraphPermutation]) -> Vec<GraphPermutation> {
    let id = GraphPermutation::identity(degree);
    let mut seen: HashSet<GraphPermutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in generators {
            let p = e.compose(g);
            if seen.insert(p.clone()) {
                out.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    out.sort();
    out
}

// Graph isomorphism search

struct Adjacency {
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Adjacency {
    fn of(g: &ExchangeGraph) -> Self {
        let adj: Vec<Vec<usize>> = (0..g.vertex_count())
            .map(|v| {
                let mut a: Vec<usize> = g.neighbors(v).collect();
                a.sort_unstable();
                a.dedup();
                a
            })
            .collect();
        let edges = adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        Adjacency { adj, edges }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}

fn loop_profile(g: &ExchangeGraph) -> Result<Vec<Vec<LoopSize>>, GraphError> {
    let mut profile = vec![Vec::new(); g.vertex_count()];
    for lp in g.geodesic_loops()? {
        for &v in &lp.cycle {
            profile[v].push(lp.size);
        }
    }
    for p in &mut profile {
        p.sort();
    }
    Ok(profile)
}

/// Joint equitable refinement of two graphs; colours are comparable across
/// the pair.
fn joint_colours(a: (&Adjacency, Vec<Vec<LoopSize>>), b: (&Adjacency, Vec<Vec<LoopSize>>)) -> (Vec<usize>, Vec<usize>) {
    let na = a.0.adj.len();
    let initial: Vec<Vec<LoopSize>> = a.1.into_iter().chain(b.1).collect();
    let adj_of = |v: usize| -> Vec<usize> {
        if v < na {
            a.0.adj[v].clone()
        } else {
            b.0.adj[v - na].iter().map(|w| w + na).collect()
        }
    };
    let all_adj: Vec<Vec<usize>> = (0..initial.len()).map(adj_of).collect();
    let mut colours = rank(&initial);
    let mut classes = distinct(&colours);
    loop {
        let refined: Vec<(usize, Vec<usize>)> = (0..colours.len())
            .map(|v| {
                let mut nb: Vec<usize> = all_adj[v].iter().map(|&w| colours[w]).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let next = rank(&refined);
        let next_classes = distinct(&next);
        colours = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let cb = colours.split_off(na);
    (colours, cb)
}

fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut s = values.to_vec();
    s.sort();
    s.dedup();
    values.iter().map(|v| s.binary_search(v).unwrap()).collect()
}

fn distinct(c: &[usize]) -> usize {
    c.iter().copied().collect::<HashSet<_>>().len()
}

/// Enumerates isomorphisms `g1 -> g2` (vertex maps), at most `limit` of them.
fn isomorphisms(g1: &ExchangeGraph, g2: &ExchangeGraph, limit: usize) -> Result<Vec<GraphPermutation>, GroupError> {
    if !g1.is_complete() || !g2.is_complete() {
        return Err(GroupError::Incomplete);
    }
    let a1 = Adjacency::of(g1);
    let a2 = Adjacency::of(g2);
    let n = a1.adj.len();
    if n != a2.adj.len() || a1.edges != a2.edges || n == 0 {
        return Ok(Vec::new());
    }
    let (c1, c2) = joint_colours((&a1, loop_profile(g1)?), (&a2, loop_profile(g2)?));
    let mut h1: Vec<usize> = c1.clone();
    let mut h2: Vec<usize> = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return Ok(Vec::new());
    }

    // breadth-first order of g1 with parents
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in &a1.adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    if order.len() != n {
        return Err(GroupError::Graph(GraphError::Malformed("disconnected exchange graph".into())));
    }

    let mut search = IsoSearch {
        a1: &a1,
        a2: &a2,
        c1: &c1,
        c2: &c2,
        order: &order,
        parent: &parent,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        limit,
    };
    let root_colour = c1[0];
    for cand in (0..n).filter(|&c| c2[c] == root_colour) {
        search.map[0] = cand;
        search.used[cand] = true;
        search.extend(1);
        search.used[cand] = false;
        search.map[0] = usize::MAX;
        if search.found.len() >= limit {
            break;
        }
    }
    Ok(search.found)
}

struct IsoSearch<'a> {
    a1: &'a Adjacency,
    a2: &'a Adjacency,
    c1: &'a [usize],
    c2: &'a [usize],
    order: &'a [usize],
    parent: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<GraphPermutation>,
    limit: usize,
}

impl IsoSearch<'_> {
    fn extend(&mut self, t: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if t == self.order.len() {
            self.found.push(GraphPermutation(self.map.clone()));
            return;
        }
        let v = self.order[t];
        let pv = self.map[self.parent[v]];
        for i in 0..self.a2.adj[pv].len() {
            let cand = self.a2.adj[pv][i];
            if self.used[cand] || self.c2[cand] != self.c1[v] {
                continue;
            }
            let consistent = self.a1.adj[v]
                .iter()
                .all(|&u| self.map[u] == usize::MAX || self.a2.adjacent(cand, self.map[u]));
            if !consistent {
                continue;
            }
            self.map[v] = cand;
            self.used[cand] = true;
            self.extend(t + 1);
            self.used[cand] = false;
            self.map[v] = usize::MAX;
        }
    }
}

/// The full automorphism group of a (complete) exchange graph.
pub fn graph_automorphism_group(g: &ExchangeGraph) -> Result<PermGroup, GroupError> {
    let all = isomorphisms(g, g, usize::MAX)?;
    Ok(PermGroup::from_elements(g.vertex_count(), all))
}

/// Some isomorphism between two exchange graphs, if one exists.
pub fn graph_isomorphism(g1: &ExchangeGraph, g2: &ExchangeGraph) -> Result<Option<GraphPermutation>, GroupError> {
    Ok(isomorphisms(g1, g2, 1)?.into_iter().next())
}

/// Whether a cluster automorphism preserves or reverses the exchange matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AutOrientation {
    Direct,
    Inverse,
}

/// A cluster automorphism, recorded by its action on the graph and on
/// cluster variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterAutomorphism {
    pub perm: GraphPermutation,
    /// `var_map[x]`: image of cluster variable id `x`.
    pub var_map: Vec<VarId>,
    pub orientation: AutOrientation,
    /// Image of the base vertex.
    pub base_image: usize,
    /// Position `j` of the base seed goes to position `positions[j]` of the
    /// image seed.
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ClusterAutGroup {
    pub base: usize,
    pub elements: Vec<ClusterAutomorphism>,
    /// The image of the group in the automorphisms of the graph.
    pub image: PermGroup,
}

impl ClusterAutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements preserving the exchange matrix.
    pub fn direct_subgroup(&self) -> Vec<&ClusterAutomorphism> {
        self.elements.iter().filter(|e| e.orientation == AutOrientation::Direct).collect()
    }

    pub fn direct_index(&self) -> usize {
        self.order() / self.direct_subgroup().len().max(1)
    }

    pub fn direct_image(&self) -> PermGroup {
        let degree = self.image.degree();
        PermGroup::from_elements(degree, self.direct_subgroup().into_iter().map(|e| e.perm.clone()).collect())
    }
}

/// Cluster automorphisms, found by transporting every isomorphism
/// `B_base -> ±B_w` along the graph.
pub fn cluster_automorphism_group(g: &ExchangeGraph, base: usize) -> Result<ClusterAutGroup, GroupError> {
    if !g.is_complete() {
        return Err(GroupError::Incomplete);
    }
    if base >= g.vertex_count() {
        return Err(GroupError::Graph(GraphError::VertexOutOfRange(base)));
    }
    let b0 = &g.vertex(base).matrix;
    let mut elements = Vec::new();
    for w in 0..g.vertex_count() {
        for iso in matrix_isomorphisms(b0, &g.vertex(w).matrix, true) {
            let sign = match iso.orientation {
                Orientation::Direct => 1,
                Orientation::Opposite => -1,
            };
            elements.push(transport(g, base, w, &iso.map, sign)?);
        }
    }
    elements.sort_by(|a, b| (a.orientation, &a.perm, &a.var_map).cmp(&(b.orientation, &b.perm, &b.var_map)));
    let image = PermGroup::from_elements(g.vertex_count(), elements.iter().map(|e| e.perm.clone()).collect());
    Ok(ClusterAutGroup { base, elements, image })
}

fn transport(g: &ExchangeGraph, base: usize, target: usize, sigma: &[usize], sign: i64) -> Result<ClusterAutomorphism, GroupError> {
    let n = g.rank();
    let nv = g.vertex_count();
    let mut img = vec![usize::MAX; nv];
    let mut pos: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut var_map: HashMap<VarId, VarId> = HashMap::new();
    let vars = |v: usize| &g.vertex(v).vars;

    img[base] = target;
    pos[base] = sigma.to_vec();
    for (j, &s) in sigma.iter().enumerate() {
        var_map.insert(vars(base)[j], vars(target)[s]);
    }
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        let iv = img[v];
        for k in 0..n {
            let u = g.neighbor(v, k).ok_or(GroupError::Incomplete)?;
            let iu = g.neighbor(iv, pos[v][k]).ok_or(GroupError::Incomplete)?;
            let new_u = *vars(u).iter().find(|x| !vars(v).contains(x)).expect("neighbours differ in one variable");
            let new_iu = *vars(iu).iter().find(|x| !vars(iv).contains(x)).expect("neighbours differ in one variable");
            match var_map.get(&new_u) {
                Some(&x) if x != new_iu => return Err(GroupError::TransportInconsistency(u)),
                Some(_) => {}
                None => {
                    var_map.insert(new_u, new_iu);
                }
            }
            if img[u] != usize::MAX {
                if img[u] != iu {
                    return Err(GroupError::TransportInconsistency(u));
                }
                continue;
            }
            img[u] = iu;
            let mut p = Vec::with_capacity(n);
            for &x in vars(u) {
                let y = var_map[&x];
                let at = vars(iu).iter().position(|&z| z == y).ok_or(GroupError::TransportInconsistency(u))?;
                p.push(at);
            }
            pos[u] = p;
            queue.push_back(u);
        }
    }
    let mut hit = vec![false; nv];
    for v in 0..nv {
        let iv = img[v];
        if iv == usize::MAX || hit[iv] {
            return Err(GroupError::TransportInconsistency(v));
        }
        hit[iv] = true;
        let (bv, bi) = (&g.vertex(v).matrix, &g.vertex(iv).matrix);
        for j in 0..n {
            for i in 0..n {
                if bi.get(pos[v][j], pos[v][i]) != sign * bv.get(j, i) {
                    return Err(GroupError::TransportInconsistency(v));
                }
            }
        }
    }
    let mut map = vec![usize::MAX; g.variables().len()];
    for (x, y) in var_map {
        map[x] = y;
    }
    if map.contains(&usize::MAX) {
        return Err(GroupError::TransportInconsistency(base));
    }
    Ok(ClusterAutomorphism {
        perm: GraphPermutation(img),
        var_map: map,
        orientation: if sign > 0 { AutOrientation::Direct } else { AutOrientation::Inverse },
        base_image: target,
        positions: sigma.to_vec(),
    })
}

/// How the cluster automorphisms sit inside the graph automorphisms.
#[derive(Debug, Clone, Serialize)]
pub struct GroupComparison {
    pub graph_order: usize,
    pub cluster_order: usize,
    pub equal: bool,
    pub direct_index: usize,
    /// A graph automorphism that is not a cluster automorphism, preferring
    /// one that fixes the base vertex.
    pub witness: Option<GraphPermutation>,
    pub witness_fixes_base: bool,
}

pub fn compare_groups(aut_e: &PermGroup, aut_a: &ClusterAutGroup) -> GroupComparison {
    let base = aut_a.base;
    let outside = |p: &&GraphPermutation| !aut_a.image.contains(p);
    let witness = aut_e
        .elements()
        .iter()
        .filter(outside)
        .find(|p| p.apply(base) == base)
        .or_else(|| aut_e.elements().iter().find(outside))
        .cloned();
    GroupComparison {
        graph_order: aut_e.order(),
        cluster_order: aut_a.image.order(),
        equal: aut_a.image.order() == aut_e.order() && aut_a.image.is_subgroup_of(aut_e),
        direct_index: aut_a.direct_index(),
        witness_fixes_base: witness.as_ref().is_some_and(|p| p.apply(base) == base),
        witness,
    }
}

/// Abstract shape of a small permutation group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupShape {
    pub order: usize,
    pub abelian: bool,
    pub cyclic: bool,
    /// `Some(n)` when the group is dihedral of order `2n`.
    pub dihedral: Option<usize>,
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic {
            write!(f, "Z{}", self.order)
        } else if let Some(n) = self.dihedral {
            write!(f, "D{n}")
        } else {
            write!(f, "order {}{}", self.order, if self.abelian { ", abelian" } else { "" })
        }
    }
}

pub fn group_shape(group: &PermGroup) -> GroupShape {
    let els = group.elements();
    let order = els.len();
    let abelian = els.iter().all(|a| els.iter().all(|b| a.compose(b) == b.compose(a)));
    let cyclic = els.iter().any(|e| e.order() == order);
    let dihedral = if order.is_multiple_of(2) { find_dihedral(els, order / 2) } else { None };
    GroupShape { order, abelian, cyclic, dihedral }
}

fn find_dihedral(els: &[GraphPermutation], n: usize) -> Option<usize> {
    for r in els.iter().filter(|e| e.order() == n) {
        let mut powers = Vec::with_capacity(n);
        let mut p = GraphPermutation::identity(r.degree());
        for _ in 0..n {
            powers.push(p.clone());
            p = p.compose(r);
        }
        let r_inv = r.inverse();
        let found = els
            .iter()
            .filter(|s| s.order() == 2 && !powers.contains(s))
            .any(|s| s.compose(r).compose(s) == r_inv);
        if found {
            return Some(n);
        }
    }
    None
}
