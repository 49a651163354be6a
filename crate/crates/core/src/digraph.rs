//! Finite digraphs without self-loops, vertex subsets, and the undirected
//! primitives (components, spanning forests, fundamental cycles) used by the
//! per-pair analysis.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense vertex id, `0..n`.
pub type Vertex = usize;

/// An arrow `(tail, head)`.
pub type Arrow = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("unknown vertex id {0}")]
    UnknownVertex(Vertex),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("edge ({0}, {1}) belongs to the spanning forest")]
    EdgeInForest(Vertex, Vertex),
    #[error("({0}, {1}) is not an arrow of the digraph")]
    UnknownEdge(Vertex, Vertex),
}

/// A set of vertex ids backed by a bitset, with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSubset {
    bits: FixedBitSet,
    len: usize,
}

impl VertexSubset {
    /// The empty subset of a vertex universe of size `universe`.
    pub fn empty(universe: usize) -> Self {
        VertexSubset {
            bits: FixedBitSet::with_capacity(universe),
            len: 0,
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(universe: usize, vertices: I) -> Self {
        let mut set = Self::empty(universe);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    fn from_bits(bits: FixedBitSet) -> Self {
        let len = bits.count_ones(..);
        VertexSubset { bits, len }
    }

    /// Size of the vertex universe this subset lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Inserts `v`; panics if `v` lies outside the universe.
    pub fn insert(&mut self, v: Vertex) -> bool {
        let fresh = !self.bits.put(v);
        if fresh {
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        if self.contains(v) {
            self.bits.set(v, false);
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.bits.len() && self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.grow(other.bits.len());
        bits.union_with(&other.bits);
        Self::from_bits(bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self::from_bits(bits)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Self::from_bits(bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite digraph with dense vertex ids, a label table, and no self-loops.
///
/// Immutable after construction. Arrows are stored once in sorted out- and
/// in-adjacency lists plus an out-adjacency bitset for constant-time arrow
/// queries.
#[derive(Clone)]
pub struct Digraph {
    labels: Vec<Arc<str>>,
    index: HashMap<Arc<str>, Vertex>,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
    out_bits: Vec<FixedBitSet>,
    arrow_count: usize,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.out_adj == other.out_adj
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("vertices", &self.labels)
            .field(
                "arrows",
                &self
                    .arrows()
                    .map(|(u, v)| format!("{}->{}", self.labels[u], self.labels[v]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Incremental construction of a [`Digraph`].
#[derive(Debug, Default, Clone)]
pub struct DigraphBuilder {
    labels: Vec<Arc<str>>,
    index: HashMap<Arc<str>, Vertex>,
    arrows: BTreeSet<Arrow>,
}

impl DigraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `label`, creating the vertex if needed.
    pub fn vertex(&mut self, label: &str) -> Vertex {
        if let Some(&v) = self.index.get(label) {
            return v;
        }
        let label: Arc<str> = Arc::from(label);
        let v = self.labels.len();
        self.labels.push(label.clone());
        self.index.insert(label, v);
        v
    }

    /// Declares a new vertex; fails if the label is already taken.
    pub fn add_vertex(&mut self, label: &str) -> Result<Vertex, GraphError> {
        if self.index.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_owned()));
        }
        Ok(self.vertex(label))
    }

    /// Adds `u -> v` by label, creating endpoints on first appearance.
    pub fn arrow(&mut self, u: &str, v: &str) -> Result<&mut Self, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u.to_owned()));
        }
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.arrows.insert((u, v));
        Ok(self)
    }

    /// Adds `u -> v` by id.
    pub fn arrow_ids(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self, GraphError> {
        let n = self.labels.len();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].to_string()));
        }
        self.arrows.insert((u, v));
        Ok(self)
    }

    pub fn build(self) -> Digraph {
        Digraph::assemble(self.labels, self.index, self.arrows.into_iter())
    }
}

impl Digraph {
    fn assemble(
        labels: Vec<Arc<str>>,
        index: HashMap<Arc<str>, Vertex>,
        sorted_arrows: impl Iterator<Item = Arrow>,
    ) -> Digraph {
        let n = labels.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut out_bits = vec![FixedBitSet::with_capacity(n); n];
        let mut arrow_count = 0;
        for (u, v) in sorted_arrows {
            out_adj[u].push(v);
            in_adj[v].push(u);
            out_bits[u].insert(v);
            arrow_count += 1;
        }
        Digraph {
            labels,
            index,
            out_adj,
            in_adj,
            out_bits,
            arrow_count,
        }
    }

    /// Builds a digraph from labelled arrows. Vertex ids follow first
    /// appearance; duplicate arrows collapse.
    pub fn from_edges<I, S>(edges: I) -> Result<Digraph, GraphError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut builder = DigraphBuilder::new();
        for (u, v) in edges {
            builder.arrow(u.as_ref(), v.as_ref())?;
        }
        Ok(builder.build())
    }

    /// The digraph on `n` vertices labelled `"0".."n-1"` with the given arrows.
    pub fn from_arrow_ids(
        n: usize,
        arrows: impl IntoIterator<Item = Arrow>,
    ) -> Result<Digraph, GraphError> {
        let mut builder = DigraphBuilder::new();
        for v in 0..n {
            builder.vertex(&v.to_string());
        }
        for (u, v) in arrows {
            builder.arrow_ids(u, v)?;
        }
        Ok(builder.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.labels.len()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Arc<str>] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<Vertex> {
        self.index.get(label).copied()
    }

    /// Resolves a label, reporting unknown labels as an error.
    pub fn require(&self, label: &str) -> Result<Vertex, GraphError> {
        self.vertex(label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_owned()))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    #[inline]
    pub fn has_arrow(&self, u: Vertex, v: Vertex) -> bool {
        u < self.out_bits.len() && self.out_bits[u].contains(v)
    }

    /// Sorted out-neighbours of `v`.
    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adj[v]
    }

    /// Sorted in-neighbours of `v`.
    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adj[v]
    }

    /// All arrows, ordered by tail then head.
    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, heads)| heads.iter().map(move |&v| (u, v)))
    }

    /// Vertices with no incident arrows.
    pub fn isolated_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices()
            .filter(|&v| self.out_adj[v].is_empty() && self.in_adj[v].is_empty())
    }

    pub fn all_vertices(&self) -> VertexSubset {
        VertexSubset::from_vertices(self.vertex_count(), self.vertices())
    }

    /// `N⁺(v)`.
    pub fn out_neighborhood(&self, v: Vertex) -> Result<VertexSubset, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSubset::from_bits(self.out_bits[v].clone()))
    }

    /// `N⁻(v)`.
    pub fn in_neighborhood(&self, v: Vertex) -> Result<VertexSubset, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSubset::from_vertices(
            self.vertex_count(),
            self.in_adj[v].iter().copied(),
        ))
    }

    /// Arrows with tail in `from` and head in `to`, in canonical order. The
    /// two sets may overlap.
    pub fn edge_set_between(&self, from: &VertexSubset, to: &VertexSubset) -> Vec<Arrow> {
        let mut edges = Vec::new();
        for u in from.iter() {
            if u >= self.vertex_count() {
                break;
            }
            for &v in &self.out_adj[u] {
                if to.contains(v) {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    /// The digraph on `from ∪ to` whose arrows are those of `self` starting in
    /// `from` and ending in `to`. Isolated vertices are kept.
    pub fn induced_from_to(
        &self,
        from: &VertexSubset,
        to: &VertexSubset,
    ) -> Result<InducedDigraph, GraphError> {
        if !from.is_disjoint(to) {
            return Err(GraphError::OverlappingSets);
        }
        for v in from.iter().chain(to.iter()) {
            self.check_vertex(v)?;
        }
        let host: Vec<Vertex> = from.union(to).to_vec();
        let mut local = HashMap::with_capacity(host.len());
        let mut labels = Vec::with_capacity(host.len());
        for (i, &v) in host.iter().enumerate() {
            local.insert(v, i);
            labels.push(self.labels[v].clone());
        }
        let index = labels.iter().cloned().zip(0..).collect();
        // `host` is ascending, so local arrows come out in canonical order.
        let arrows: Vec<Arrow> = self
            .edge_set_between(from, to)
            .into_iter()
            .map(|(u, v)| (local[&u], local[&v]))
            .collect();
        let graph = Digraph::assemble(labels, index, arrows.into_iter());
        Ok(InducedDigraph { graph, host })
    }

    /// Sorted neighbours of `v` ignoring arrow direction.
    pub fn undirected_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let (out, inn) = (&self.out_adj[v], &self.in_adj[v]);
        let mut merged = Vec::with_capacity(out.len() + inn.len());
        let (mut i, mut j) = (0, 0);
        while i < out.len() || j < inn.len() {
            let next = match (out.get(i), inn.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        merged
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// ordered by their minimum vertex.
    pub fn undirected_components(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut component = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for w in self.undirected_neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        component.push(w);
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Breadth-first spanning forest: one tree per undirected component,
    /// rooted at its minimum vertex, neighbours explored in ascending order.
    pub fn spanning_forest(&self) -> Forest {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![0; n];
        let mut seen = vec![false; n];
        let mut edges = BTreeSet::new();
        let mut components = 0;
        for r in 0..n {
            if seen[r] {
                continue;
            }
            components += 1;
            seen[r] = true;
            root[r] = r;
            let mut queue = VecDeque::from([r]);
            while let Some(u) = queue.pop_front() {
                for w in self.undirected_neighbors(u) {
                    if seen[w] {
                        continue;
                    }
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    root[w] = r;
                    edges.insert(if self.has_arrow(u, w) { (u, w) } else { (w, u) });
                    queue.push_back(w);
                }
            }
        }
        Forest {
            parent,
            depth,
            root,
            edges,
            components,
        }
    }

    /// The unique cycle through the off-forest arrow `edge`, as a vertex
    /// sequence starting at its tail and continuing with its head.
    pub fn fundamental_cycle(
        &self,
        forest: &Forest,
        edge: Arrow,
    ) -> Result<Vec<Vertex>, GraphError> {
        let (tail, head) = edge;
        if !self.has_arrow(tail, head) || forest.vertex_count() != self.vertex_count() {
            return Err(GraphError::UnknownEdge(tail, head));
        }
        if forest.contains(edge) {
            return Err(GraphError::EdgeInForest(tail, head));
        }
        let (mut up_tail, mut up_head) = (vec![tail], vec![head]);
        let (mut x, mut y) = (tail, head);
        while x != y {
            if forest.depth[x] >= forest.depth[y] {
                x = forest.parent[x].expect("arrow endpoints share a tree");
                up_tail.push(x);
            } else {
                y = forest.parent[y].expect("arrow endpoints share a tree");
                up_head.push(y);
            }
        }
        // Both climbs end at the common ancestor.
        let mut cycle = Vec::with_capacity(up_tail.len() + up_head.len());
        cycle.push(tail);
        if x == tail {
            up_head.pop();
        }
        cycle.extend_from_slice(&up_head);
        if up_tail.len() > 2 {
            cycle.extend(up_tail[1..up_tail.len() - 1].iter().rev());
        }
        Ok(cycle)
    }
}

/// An induced digraph with the host ids of its (locally renumbered) vertices.
/// Local ids are assigned in ascending host-id order.
#[derive(Debug, Clone)]
pub struct InducedDigraph {
    pub graph: Digraph,
    pub host: Vec<Vertex>,
}

/// A spanning forest of a digraph's underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    parent: Vec<Option<Vertex>>,
    depth: Vec<usize>,
    root: Vec<Vertex>,
    edges: BTreeSet<Arrow>,
    components: usize,
}

impl Forest {
    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Forest arrows in host orientation, canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn contains(&self, edge: Arrow) -> bool {
        self.edges.contains(&edge)
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    /// Root (minimum vertex) of the tree containing `v`.
    pub fn root(&self, v: Vertex) -> Vertex {
        self.root[v]
    }
}
