//! Exchange graphs, geodesic loops and layer signatures.
//!
//! Vertices are seeds up to relabeling. Every cluster variable is interned
//! once, so a vertex is identified by the sorted list of its variable ids and
//! the graph never compares Laurent polynomials twice.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::classify::{finite_type_check, ClassifyError};
use crate::laurent::{LaurentPolynomial, TermJson};
use crate::matrix::ExchangeMatrix;
use crate::mutation::{mutate_seed, MutationError};
use crate::seed::LabeledSeed;

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("exchange graphs need rank at least 2")]
    RankTooSmall,
    #[error("exchange matrix is decomposable")]
    Decomposable,
    #[error("unsupported seed: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {1} is unreachable from vertex {0}")]
    Unreachable(usize, usize),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// Exploration limits for [`build_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_radius: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: 1_000_000, max_radius: None }
    }
}

/// Radius used when no limit is requested for a seed of infinite type.
pub const DEFAULT_INFINITE_RADIUS: usize = 6;

impl Limits {
    pub fn radius(r: usize) -> Self {
        Limits { max_radius: Some(r), ..Limits::default() }
    }

    /// Unlimited radius for finite type, [`DEFAULT_INFINITE_RADIUS`]
    /// otherwise.
    pub fn default_for(b: &ExchangeMatrix) -> Self {
        match finite_type_check(b, 50_000) {
            Ok(Some(_)) => Limits::default(),
            _ => Limits::radius(DEFAULT_INFINITE_RADIUS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// Variable id at each position of the representative seed's cluster.
    pub vars: Vec<VarId>,
    /// Exchange matrix of the representative seed.
    pub matrix: ExchangeMatrix,
    /// Breadth-first distance from the root.
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    rank: usize,
    variables: Vec<LaurentPolynomial>,
    vertices: Vec<Vertex>,
    /// `neighbors[v][k]`: the vertex reached by mutating `v` at position `k`.
    neighbors: Vec<Vec<Option<usize>>>,
    edges: Vec<(usize, usize)>,
    complete: bool,
    index: HashMap<Vec<VarId>, usize>,
}

impl PartialEq for ExchangeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.variables == other.variables
            && self.vertices == other.vertices
            && self.neighbors == other.neighbors
            && self.edges == other.edges
            && self.complete == other.complete
    }
}

impl Eq for ExchangeGraph {}

fn sorted(vars: &[VarId]) -> Vec<VarId> {
    let mut v = vars.to_vec();
    v.sort_unstable();
    v
}

/// Seeds whose exchange graph can be built: skew-symmetric, rank 2, or of
/// finite type.
pub fn check_supported(b: &ExchangeMatrix) -> Result<(), GraphError> {
    if b.rank() < 2 {
        return Err(GraphError::RankTooSmall);
    }
    if !b.is_indecomposable() {
        return Err(GraphError::Decomposable);
    }
    if b.is_skew_symmetric() || b.rank() == 2 {
        return Ok(());
    }
    match finite_type_check(b, 50_000) {
        Ok(Some(_)) => Ok(()),
        Ok(None) => Err(GraphError::Unsupported(
            "skew-symmetrizable matrix of infinite type and rank above 2".into(),
        )),
        Err(ClassifyError::Inconclusive(_)) => {
            Err(GraphError::Unsupported("could not decide finite type for a skew-symmetrizable matrix".into()))
        }
        Err(e) => Err(GraphError::Unsupported(e.to_string())),
    }
}

/// Breadth-first construction of the exchange graph from `seed`.
///
/// Vertices are numbered in discovery order, directions ascending. Vertices
/// at `max_radius`, or discovered after `max_vertices` is reached, are still
/// mutated so that edges between known vertices are recorded, but no new
/// vertex is added; the graph is then marked incomplete.
pub fn build_graph(seed: &LabeledSeed, limits: Limits) -> Result<ExchangeGraph, GraphError> {
    check_supported(seed.matrix())?;
    let n = seed.rank();
    let mut g = ExchangeGraph {
        rank: n,
        variables: Vec::new(),
        vertices: Vec::new(),
        neighbors: Vec::new(),
        edges: Vec::new(),
        complete: true,
        index: HashMap::new(),
    };
    let mut var_index: HashMap<LaurentPolynomial, VarId> = HashMap::new();
    let mut intern = |x: &LaurentPolynomial, vars: &mut Vec<LaurentPolynomial>| -> VarId {
        if let Some(&id) = var_index.get(x) {
            return id;
        }
        vars.push(x.clone());
        var_index.insert(x.clone(), vars.len() - 1);
        vars.len() - 1
    };
    let root_vars: Vec<VarId> = seed.cluster().iter().map(|x| intern(x, &mut g.variables)).collect();
    g.index.insert(sorted(&root_vars), 0);
    g.vertices.push(Vertex { vars: root_vars, matrix: seed.matrix().clone(), depth: 0 });
    g.neighbors.push(vec![None; n]);

    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for k in 0..n {
            if g.neighbors[v][k].is_some() {
                continue;
            }
            let next = mutate_seed(&g.seed(v), k)?;
            let new_var = intern(&next.cluster()[k], &mut g.variables);
            let mut vars = g.vertices[v].vars.clone();
            vars[k] = new_var;
            let key = sorted(&vars);
            let w = match g.index.get(&key) {
                Some(&w) => w,
                None => {
                    let depth = g.vertices[v].depth + 1;
                    let at_radius = limits.max_radius.is_some_and(|r| depth > r);
                    if at_radius || g.vertices.len() >= limits.max_vertices {
                        g.complete = false;
                        continue;
                    }
                    let w = g.vertices.len();
                    g.index.insert(key, w);
                    g.vertices.push(Vertex { vars, matrix: next.matrix().clone(), depth });
                    g.neighbors.push(vec![None; n]);
                    queue.push_back(w);
                    w
                }
            };
            let back = g.vertices[w].vars.iter().position(|&x| x == new_var).expect("new variable is present");
            g.neighbors[v][k] = Some(w);
            g.neighbors[w][back] = Some(v);
            g.edges.push((v.min(w), v.max(w)));
        }
    }
    Ok(g)
}

impl ExchangeGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    /// The representative labeled seed of vertex `v`.
    pub fn seed(&self, v: usize) -> LabeledSeed {
        let vx = &self.vertices[v];
        let cluster = vx.vars.iter().map(|&x| self.variables[x].clone()).collect();
        LabeledSeed::from_parts_unchecked(cluster, vx.matrix.clone())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn variables(&self) -> &[LaurentPolynomial] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &LaurentPolynomial {
        &self.variables[id]
    }

    pub fn neighbor(&self, v: usize, k: usize) -> Option<usize> {
        self.neighbors[v][k]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[v].iter().flatten().copied()
    }

    /// The vertex whose cluster consists of exactly these variable ids.
    pub fn find_by_vars(&self, vars: &[VarId]) -> Option<usize> {
        self.index.get(&sorted(vars)).copied()
    }

    /// The vertex whose cluster equals the cluster of `seed`, if present.
    pub fn find_seed(&self, seed: &LabeledSeed) -> Option<usize> {
        let lookup: HashMap<&LaurentPolynomial, VarId> =
            self.variables.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let vars: Option<Vec<VarId>> = seed.cluster().iter().map(|x| lookup.get(x).copied()).collect();
        self.find_by_vars(&vars?)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v))
        }
    }

    pub fn distances_from(&self, v: usize) -> Result<Vec<Option<usize>>, GraphError> {
        self.check_vertex(v)?;
        let mut dist = vec![None; self.vertices.len()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, v: usize, w: usize) -> Result<usize, GraphError> {
        self.check_vertex(w)?;
        self.distances_from(v)?[w].ok_or(GraphError::Unreachable(v, w))
    }

    /// Variable introduced when stepping from `v` in direction `k`.
    fn step(&self, v: usize, k: usize) -> Option<(usize, VarId)> {
        let w = self.neighbors[v][k]?;
        let old = self.vertices[v].vars[k];
        let new = self.vertices[w].vars.iter().copied().find(|x| !self.vertices[v].vars.contains(x) && *x != old)?;
        Some((w, new))
    }
}

/// Size of a geodesic loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopSize {
    Finite(usize),
    /// The residual rank-2 matrix has `|b_pq b_qp| >= 4`: a bi-infinite line.
    Infinite,
    /// The loop leaves the explored part of the graph.
    Unknown,
}

impl fmt::Display for LoopSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSize::Finite(k) => write!(f, "{k}"),
            LoopSize::Infinite => f.write_str("inf"),
            LoopSize::Unknown => f.write_str("?"),
        }
    }
}

impl Serialize for LoopSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LoopSize::Finite(k) => s.serialize_u64(*k as u64),
            other => s.collect_str(other),
        }
    }
}

/// The cycle (or line) of seeds sharing `n - 2` fixed cluster variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicLoop {
    /// Sorted ids of the frozen cluster variables.
    pub frozen: Vec<VarId>,
    /// Vertices of the loop in walking order. For infinite or unknown loops
    /// this is the explored segment.
    pub cycle: Vec<usize>,
    pub size: LoopSize,
}

impl ExchangeGraph {
    /// All geodesic loops, ordered by first discovery (vertex order, then
    /// pairs of free positions in lexicographic order).
    pub fn geodesic_loops(&self) -> Result<Vec<GeodesicLoop>, GraphError> {
        let n = self.rank;
        if n < 2 {
            return Err(GraphError::RankTooSmall);
        }
        let mut seen: HashSet<Vec<VarId>> = HashSet::new();
        let mut out = Vec::new();
        for v in 0..self.vertices.len() {
            for p in 0..n {
                for q in p + 1..n {
                    let frozen: Vec<VarId> = sorted(
                        &(0..n).filter(|&i| i != p && i != q).map(|i| self.vertices[v].vars[i]).collect::<Vec<_>>(),
                    );
                    if seen.contains(&frozen) {
                        continue;
                    }
                    let lp = self.walk_loop(v, p, q, &frozen);
                    seen.insert(frozen);
                    out.push(lp);
                }
            }
        }
        Ok(out)
    }

    fn walk_loop(&self, anchor: usize, p: usize, q: usize, frozen: &[VarId]) -> GeodesicLoop {
        let b = &self.vertices[anchor].matrix;
        let infinite = (b.get(p, q) * b.get(q, p)).abs() >= 4;
        let free_other = |w: usize, var: VarId| -> usize {
            let vars = &self.vertices[w].vars;
            (0..self.rank)
                .find(|&i| vars[i] != var && frozen.binary_search(&vars[i]).is_err())
                .expect("two free positions")
        };
        // walk from the anchor starting in direction `first`
        let walk = |first: usize| -> (Vec<usize>, bool) {
            let mut path = Vec::new();
            let mut cur = anchor;
            let mut dir = first;
            loop {
                let Some((w, new)) = self.step(cur, dir) else { return (path, false) };
                if w == anchor {
                    return (path, true);
                }
                path.push(w);
                if path.len() > self.vertices.len() {
                    return (path, false);
                }
                cur = w;
                dir = free_other(w, new);
            }
        };
        let (forward, closed) = walk(p);
        if closed && !infinite {
            let mut cycle = vec![anchor];
            cycle.extend(forward);
            let size = LoopSize::Finite(cycle.len());
            return GeodesicLoop { frozen: frozen.to_vec(), cycle, size };
        }
        let (backward, _) = walk(q);
        let mut cycle: Vec<usize> = backward.into_iter().rev().collect();
        cycle.push(anchor);
        cycle.extend(forward);
        let size = if infinite { LoopSize::Infinite } else { LoopSize::Unknown };
        GeodesicLoop { frozen: frozen.to_vec(), cycle, size }
    }
}

/// Loop sizes grouped by distance from a base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerSignature {
    pub base: usize,
    /// `layers[m]`: sorted sizes of the loops at distance `m`.
    pub layers: Vec<Vec<LoopSize>>,
    /// For incomplete graphs, the last layer known to be exact.
    pub truncated_at: Option<usize>,
}

impl fmt::Display for LayerSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .layers
            .iter()
            .map(|l| format!("{{{}}}", l.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// The distance of a loop from `base` is the least distance of its vertices.
pub fn layer_signature(
    g: &ExchangeGraph,
    loops: &[GeodesicLoop],
    base: usize,
    max_m: Option<usize>,
) -> Result<LayerSignature, GraphError> {
    let dist = g.distances_from(base)?;
    let mut cap = max_m;
    let mut truncated_at = None;
    if !g.complete {
        // vertices closer than the nearest unexpanded vertex keep their true
        // distances, and every loop meeting them is discovered
        let frontier = (0..g.vertex_count())
            .filter(|&v| g.neighbors[v].iter().any(|x| x.is_none()))
            .filter_map(|v| dist[v])
            .min()
            .unwrap_or(0);
        truncated_at = Some(frontier);
        cap = Some(cap.map_or(frontier, |c| c.min(frontier)));
    }
    let mut layers: Vec<Vec<LoopSize>> = Vec::new();
    for lp in loops {
        let Some(m) = lp.cycle.iter().filter_map(|&v| dist[v]).min() else { continue };
        if cap.is_some_and(|c| m > c) {
            continue;
        }
        if layers.len() <= m {
            layers.resize(m + 1, Vec::new());
        }
        layers[m].push(lp.size);
    }
    for l in &mut layers {
        l.sort();
    }
    Ok(LayerSignature { base, layers, truncated_at })
}

/// Convenience: loops plus signature at `base`.
pub fn layer_signature_at(g: &ExchangeGraph, base: usize, max_m: Option<usize>) -> Result<LayerSignature, GraphError> {
    let loops = g.geodesic_loops()?;
    layer_signature(g, &loops, base, max_m)
}

// Serialisation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub cluster: Vec<VarId>,
    pub b: Vec<Vec<i64>>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub rank: usize,
    pub complete: bool,
    pub variables: Vec<Vec<TermJson>>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    /// `neighbors[v][k]`, `null` when unexplored.
    pub neighbors: Vec<Vec<Option<usize>>>,
}

impl From<&ExchangeGraph> for GraphJson {
    fn from(g: &ExchangeGraph) -> Self {
        GraphJson {
            rank: g.rank,
            complete: g.complete,
            variables: g.variables.iter().map(|x| x.to_term_list()).collect(),
            vertices: g
                .vertices
                .iter()
                .map(|v| VertexJson { cluster: v.vars.clone(), b: v.matrix.rows(), depth: v.depth })
                .collect(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            neighbors: g.neighbors.clone(),
        }
    }
}

impl TryFrom<GraphJson> for ExchangeGraph {
    type Error = GraphError;
    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        let bad = |m: &str| GraphError::Malformed(m.to_string());
        let n = j.rank;
        let variables = j
            .variables
            .iter()
            .map(|t| LaurentPolynomial::from_term_list(n, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(GraphError::Malformed)?;
        if j.neighbors.len() != j.vertices.len() {
            return Err(bad("neighbor table length"));
        }
        let mut vertices = Vec::with_capacity(j.vertices.len());
        let mut index = HashMap::new();
        for (i, v) in j.vertices.into_iter().enumerate() {
            if v.cluster.len() != n || v.cluster.iter().any(|&x| x >= variables.len()) {
                return Err(bad("vertex cluster"));
            }
            let matrix = ExchangeMatrix::new(v.b).map_err(|e| GraphError::Malformed(e.to_string()))?;
            if matrix.rank() != n {
                return Err(bad("vertex matrix rank"));
            }
            if index.insert(sorted(&v.cluster), i).is_some() || sorted(&v.cluster).windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("duplicate vertex or repeated variable"));
            }
            vertices.push(Vertex { vars: v.cluster, matrix, depth: v.depth });
        }
        for row in &j.neighbors {
            if row.len() != n || row.iter().flatten().any(|&w| w >= vertices.len()) {
                return Err(bad("neighbor table entry"));
            }
        }
        let edges = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Ok(ExchangeGraph { rank: n, variables, vertices, neighbors: j.neighbors, edges, complete: j.complete, index })
    }
}

impl ExchangeGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        ExchangeGraph::try_from(j)
    }

    /// Graphviz rendering. `label` may annotate each vertex (for example with
    /// its quiver class).
    pub fn to_dot(&self, label: Option<&dyn Fn(usize) -> String>) -> String {
        let mut s = String::from("graph exchange {\n");
        for v in 0..self.vertices.len() {
            match label {
                Some(f) => writeln!(s, "  {v} [label=\"{v}: {}\"];", f(v).replace('"', "\\\"")).unwrap(),
                None => writeln!(s, "  {v};").unwrap(),
            }
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  {a} -- {b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}
