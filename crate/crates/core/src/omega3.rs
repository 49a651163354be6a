//! Structural computation of `Ω_3`: per ordered pair `(a, b)` an explicit
//! basis of the `(a,b)`-clusters, built from three families of generators,
//! and the matching closed-form dimension.
//!
//! Notation for a fixed pair:
//!
//! * `A = N⁺(a) \ {b}`, `B = N⁻(b) \ {a}`;
//! * `H` is the digraph of arrows from `A \ B` to `B \ A` (isolated vertices
//!   kept), with undirected components `H_1 … H_t`;
//! * `J = (N⁺(a) ∪ {a}) ∩ N⁻(b)` and `I = N⁺(a) ∩ (N⁻(b) ∪ {b})` are the
//!   terminal heads and tails: `e_{a i j b}` has a non-allowed face `e_{a j b}`
//!   unless `j ∈ J`, and `e_{a i b}` unless `i ∈ I`.
//!
//! The generator families are:
//!
//! * **B0**: one alternating cycle chain per off-forest edge of `H`;
//! * **B1**: `e_{a i j b}` for every arrow `i → j` with `i ∈ I`, `j ∈ J`;
//! * **B2**: for each component `H_k`, the arrows `S_k` joining it to the
//!   terminal sets (`Δ¹`: from `(A\B)_k` into `J`; `Δ²`: from `I` into
//!   `(B\A)_k`). Each edge of `S_k` other than the smallest is paired with it
//!   through a shortest walk in `H_k`.
//!
//! `dim Ω_3^{(a,b)} = (|E(H)| − |V(H)| + t) + |E(I, J)| + Σ_k max(0, |S_k| − 1)`.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::chains::{Chain, ElemPath};
use crate::digraph::{Arrow, Digraph, Forest, GraphError, InducedDigraph, Vertex, VertexSubset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Omega3Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("digraph has {n} vertices; basis materialisation is capped at {max}")]
    TooLarge { n: usize, max: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Which terminal set an `S_k` edge touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `Δ¹`: from `(A\B)_k` into `J`.
    Outgoing,
    /// `Δ²`: from `I` into `(B\A)_k`.
    Incoming,
}

/// Everything derived from one ordered pair `(a, b)`.
#[derive(Debug, Clone)]
pub struct PairAnalysis {
    pub a: Vertex,
    pub b: Vertex,
    /// `A = N⁺(a) \ {b}`.
    pub succ_a: VertexSubset,
    /// `B = N⁻(b) \ {a}`.
    pub pred_b: VertexSubset,
    /// `A ∩ B`.
    pub common: VertexSubset,
    /// `A \ B`.
    pub succ_only: VertexSubset,
    /// `B \ A`.
    pub pred_only: VertexSubset,
    /// `J = (N⁺(a) ∪ {a}) ∩ N⁻(b)`.
    pub terminal_heads: VertexSubset,
    /// `I = N⁺(a) ∩ (N⁻(b) ∪ {b})`.
    pub terminal_tails: VertexSubset,
    /// `H = Ind(A \ B, B \ A)`, locally renumbered.
    pub h: InducedDigraph,
    /// Components of `H` as sorted host-id lists, ordered by minimum vertex.
    pub components: Vec<Vec<Vertex>>,
    /// Spanning forest of `H` (local ids).
    pub forest: Forest,
    /// Arrows of `H` outside the forest, host ids, canonical order.
    pub off_forest_edges: Vec<Arrow>,
    /// `E(I, J)`, host ids, canonical order.
    pub terminal_edges: Vec<Arrow>,
    /// `S_k` per component, sorted by arrow.
    pub s: Vec<Vec<(Arrow, Side)>>,
    /// Component index of every local vertex of `H`.
    component_of: Vec<usize>,
}

impl PairAnalysis {
    pub fn h_edge_count(&self) -> usize {
        self.h.graph.arrow_count()
    }

    pub fn h_vertex_count(&self) -> usize {
        self.h.graph.vertex_count()
    }

    /// `t`, the number of components of `H`.
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// `|E(H)| − |V(H)| + t`.
    pub fn cycle_rank(&self) -> usize {
        self.h_edge_count() + self.component_count() - self.h_vertex_count()
    }

    /// `Σ_k max(0, |S_k| − 1)`.
    pub fn bridge_count(&self) -> usize {
        self.s.iter().map(|s| s.len().saturating_sub(1)).sum()
    }

    fn local(&self, host: Vertex) -> Vertex {
        self.h.host.binary_search(&host).expect("vertex of H")
    }
}

/// Builds the per-pair structure. `a = b` is allowed.
pub fn analyze_pair(g: &Digraph, a: Vertex, b: Vertex) -> Result<PairAnalysis, GraphError> {
    let out_a = g.out_neighborhood(a)?;
    let in_b = g.in_neighborhood(b)?;
    let mut succ_a = out_a.clone();
    succ_a.remove(b);
    let mut pred_b = in_b.clone();
    pred_b.remove(a);
    let common = succ_a.intersection(&pred_b);
    let succ_only = succ_a.difference(&pred_b);
    let pred_only = pred_b.difference(&succ_a);

    let mut out_a_or_a = out_a.clone();
    out_a_or_a.insert(a);
    let terminal_heads = out_a_or_a.intersection(&in_b);
    let mut in_b_or_b = in_b.clone();
    in_b_or_b.insert(b);
    let terminal_tails = out_a.intersection(&in_b_or_b);

    let h = g.induced_from_to(&succ_only, &pred_only)?;
    let local_components = h.graph.undirected_components();
    let mut component_of = vec![0; h.graph.vertex_count()];
    for (k, comp) in local_components.iter().enumerate() {
        for &v in comp {
            component_of[v] = k;
        }
    }
    let components = local_components
        .iter()
        .map(|comp| comp.iter().map(|&v| h.host[v]).collect())
        .collect();
    let forest = h.graph.spanning_forest();
    let off_forest_edges = h
        .graph
        .arrows()
        .filter(|&e| !forest.contains(e))
        .map(|(u, v)| (h.host[u], h.host[v]))
        .collect();
    let terminal_edges = g.edge_set_between(&terminal_tails, &terminal_heads);

    let mut s: Vec<Vec<(Arrow, Side)>> = vec![Vec::new(); local_components.len()];
    let local = |host: Vertex| h.host.binary_search(&host).expect("vertex of H");
    for e in g.edge_set_between(&succ_only, &terminal_heads) {
        s[component_of[local(e.0)]].push((e, Side::Outgoing));
    }
    for e in g.edge_set_between(&terminal_tails, &pred_only) {
        s[component_of[local(e.1)]].push((e, Side::Incoming));
    }
    for group in &mut s {
        group.sort_unstable();
    }

    Ok(PairAnalysis {
        a,
        b,
        succ_a,
        pred_b,
        common,
        succ_only,
        pred_only,
        terminal_heads,
        terminal_tails,
        h,
        components,
        forest,
        off_forest_edges,
        terminal_edges,
        s,
        component_of,
    })
}

/// The closed-form `dim Ω_3^{(a,b)}`.
pub fn pair_dimension(pa: &PairAnalysis) -> usize {
    pa.cycle_rank() + pa.terminal_edges.len() + pa.bridge_count()
}

/// Generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    B0,
    B1,
    B2,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::B0 => "B0",
            Kind::B1 => "B1",
            Kind::B2 => "B2",
        }
    }
}

/// How a generator was built. All vertices are host ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Fundamental cycle of an off-forest edge of `H`; the cycle starts with
    /// the edge's tail then head.
    Cycle { edge: Arrow, cycle: Vec<Vertex> },
    /// Single terminal arrow `i → j`.
    Terminal { edge: Arrow },
    /// Two `S_k` edges joined by a shortest walk in `H_k`, from the base
    /// edge's endpoint in `H_k` to the partner's.
    Bridge {
        component: usize,
        base: (Arrow, Side),
        partner: (Arrow, Side),
        walk: Vec<Vertex>,
    },
}

impl Provenance {
    pub fn kind(&self) -> Kind {
        match self {
            Provenance::Cycle { .. } => Kind::B0,
            Provenance::Terminal { .. } => Kind::B1,
            Provenance::Bridge { .. } => Kind::B2,
        }
    }
}

/// One basis generator: a `±1` chain of degree 3 and its construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub chain: Chain,
    pub provenance: Provenance,
}

impl BasisElement {
    pub fn kind(&self) -> Kind {
        self.provenance.kind()
    }
}

/// `e_{a x y b}` with alternating signs for a sequence of arrows `x → y`.
fn alternating_chain(a: Vertex, b: Vertex, arrows: impl IntoIterator<Item = Arrow>) -> Chain {
    let terms = arrows.into_iter().enumerate().map(|(k, (x, y))| {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        (ElemPath::new([a, x, y, b]).expect("four vertices"), sign)
    });
    Chain::from_terms(3, terms).expect("degree 3")
}

/// The `H` arrow joining host vertices `u` and `v` in either order.
fn h_arrow(pa: &PairAnalysis, u: Vertex, v: Vertex) -> Arrow {
    if pa.succ_only.contains(u) {
        (u, v)
    } else {
        (v, u)
    }
}

/// One alternating cycle chain per off-forest edge of `H`; the off-forest
/// edge carries `+1`.
pub fn b0_generators(pa: &PairAnalysis) -> Vec<BasisElement> {
    let h = &pa.h;
    pa.off_forest_edges
        .iter()
        .map(|&(u, v)| {
            let local_cycle = h
                .graph
                .fundamental_cycle(&pa.forest, (pa.local(u), pa.local(v)))
                .expect("off-forest arrow of H");
            let cycle: Vec<Vertex> = local_cycle.iter().map(|&x| h.host[x]).collect();
            let len = cycle.len();
            let arrows = (0..len).map(|k| h_arrow(pa, cycle[k], cycle[(k + 1) % len]));
            BasisElement {
                chain: alternating_chain(pa.a, pa.b, arrows),
                provenance: Provenance::Cycle {
                    edge: (u, v),
                    cycle,
                },
            }
        })
        .collect()
}

/// `e_{a i j b}` for every arrow `i → j` of `E(I, J)`.
pub fn b1_generators(pa: &PairAnalysis) -> Vec<BasisElement> {
    pa.terminal_edges
        .iter()
        .map(|&(i, j)| BasisElement {
            chain: Chain::single(ElemPath::new([pa.a, i, j, pa.b]).expect("four vertices"), 1),
            provenance: Provenance::Terminal { edge: (i, j) },
        })
        .collect()
}

/// Endpoint of an `S_k` edge inside `H_k`.
fn h_endpoint((arrow, side): (Arrow, Side)) -> Vertex {
    match side {
        Side::Outgoing => arrow.0,
        Side::Incoming => arrow.1,
    }
}

/// BFS parents in `H` from `source` (local ids), neighbours ascending.
fn bfs_parents(h: &Digraph, source: Vertex) -> Vec<Option<Vertex>> {
    let mut parent = vec![None; h.vertex_count()];
    let mut seen = vec![false; h.vertex_count()];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for w in h.undirected_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// For each component with `|S_k| ≥ 2`, one generator per non-base edge of
/// `S_k`, pairing it with the smallest edge via a shortest walk in `H_k`.
/// The base edge carries `+1`.
pub fn b2_generators(pa: &PairAnalysis) -> Vec<BasisElement> {
    let h = &pa.h;
    let mut out = Vec::new();
    for (k, group) in pa.s.iter().enumerate() {
        if group.len() < 2 {
            continue;
        }
        let base = group[0];
        let source = pa.local(h_endpoint(base));
        debug_assert_eq!(pa.component_of[source], k);
        let parent = bfs_parents(&h.graph, source);
        for &partner in &group[1..] {
            let mut walk_local = vec![pa.local(h_endpoint(partner))];
            while let Some(p) = parent[*walk_local.last().unwrap()] {
                walk_local.push(p);
            }
            debug_assert_eq!(*walk_local.last().unwrap(), source);
            walk_local.reverse();
            let walk: Vec<Vertex> = walk_local.iter().map(|&x| h.host[x]).collect();
            let arrows = std::iter::once(base.0)
                .chain(walk.windows(2).map(|w| h_arrow(pa, w[0], w[1])))
                .chain(std::iter::once(partner.0));
            out.push(BasisElement {
                chain: alternating_chain(pa.a, pa.b, arrows),
                provenance: Provenance::Bridge {
                    component: k,
                    base,
                    partner,
                    walk,
                },
            });
        }
    }
    out
}

/// Basis of `Ω_3^{(a,b)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBasis {
    pub a: Vertex,
    pub b: Vertex,
    pub elements: Vec<BasisElement>,
}

impl PairBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.elements.iter().filter(|e| e.kind() == kind).count()
    }
}

/// All generators of one pair: B0, then B1, then B2.
pub fn pair_basis_from(pa: &PairAnalysis) -> PairBasis {
    let mut elements = b0_generators(pa);
    elements.extend(b1_generators(pa));
    elements.extend(b2_generators(pa));
    PairBasis {
        a: pa.a,
        b: pa.b,
        elements,
    }
}

pub fn pair_basis(g: &Digraph, a: Vertex, b: Vertex) -> Result<PairBasis, GraphError> {
    Ok(pair_basis_from(&analyze_pair(g, a, b)?))
}

/// Basis of `Ω_3(G)`: per-pair bases for pairs of nonzero dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Omega3Basis {
    pub pairs: BTreeMap<(Vertex, Vertex), PairBasis>,
}

impl Omega3Basis {
    pub fn total_dim(&self) -> usize {
        self.pairs.values().map(PairBasis::dim).sum()
    }

    pub fn pair_dim(&self, a: Vertex, b: Vertex) -> usize {
        self.pairs.get(&(a, b)).map_or(0, PairBasis::dim)
    }

    pub fn elements(&self) -> impl Iterator<Item = &BasisElement> {
        self.pairs.values().flat_map(|p| p.elements.iter())
    }

    pub fn chains(&self) -> Vec<Chain> {
        self.elements().map(|e| e.chain.clone()).collect()
    }
}

/// Options for basis materialisation.
#[derive(Debug, Clone, Default)]
pub struct BasisOptions {
    /// Worker threads; `0` uses the global pool, `1` runs serially.
    pub jobs: usize,
    /// Refuse graphs with more vertices than this.
    pub max_vertices: Option<usize>,
    /// Restrict to these ordered pairs.
    pub pairs: Option<Vec<(Vertex, Vertex)>>,
}

/// Pairs that can contribute: `a` has an out-arrow and `b` an in-arrow.
fn candidate_pairs(g: &Digraph) -> Vec<(Vertex, Vertex)> {
    let sources: Vec<Vertex> = g
        .vertices()
        .filter(|&a| !g.successors(a).is_empty())
        .collect();
    let sinks: Vec<Vertex> = g
        .vertices()
        .filter(|&b| !g.predecessors(b).is_empty())
        .collect();
    sources
        .iter()
        .flat_map(|&a| sinks.iter().map(move |&b| (a, b)))
        .collect()
}

/// Runs `work` over pairs with the requested parallelism, results in pair
/// order.
fn map_pairs<T, W>(pairs: &[(Vertex, Vertex)], jobs: usize, work: W) -> Result<Vec<T>, Omega3Error>
where
    T: Send,
    W: Fn(Vertex, Vertex) -> T + Sync + Send,
{
    match jobs {
        1 => Ok(pairs.iter().map(|&(a, b)| work(a, b)).collect()),
        0 => Ok(pairs.par_iter().map(|&(a, b)| work(a, b)).collect()),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Omega3Error::ThreadPool(e.to_string()))?;
            Ok(pool.install(|| pairs.par_iter().map(|&(a, b)| work(a, b)).collect()))
        }
    }
}

fn selected_pairs(
    g: &Digraph,
    options: &BasisOptions,
) -> Result<Vec<(Vertex, Vertex)>, Omega3Error> {
    match &options.pairs {
        Some(pairs) => {
            for &(a, b) in pairs {
                g.check_vertex(a)?;
                g.check_vertex(b)?;
            }
            let mut pairs = pairs.clone();
            pairs.sort_unstable();
            pairs.dedup();
            Ok(pairs)
        }
        None => Ok(candidate_pairs(g)),
    }
}

/// The structural basis of `Ω_3(g)` over all ordered pairs.
pub fn omega3_basis(g: &Digraph) -> Omega3Basis {
    omega3_basis_with(
        g,
        &BasisOptions {
            jobs: 1,
            ..Default::default()
        },
    )
    .expect("no limits configured")
}

pub fn omega3_basis_with(g: &Digraph, options: &BasisOptions) -> Result<Omega3Basis, Omega3Error> {
    if let Some(max) = options.max_vertices {
        if g.vertex_count() > max {
            return Err(Omega3Error::TooLarge {
                n: g.vertex_count(),
                max,
            });
        }
    }
    let pairs = selected_pairs(g, options)?;
    let bases = map_pairs(&pairs, options.jobs, |a, b| {
        pair_basis(g, a, b).expect("validated pair")
    })?;
    Ok(Omega3Basis {
        pairs: bases
            .into_iter()
            .filter(|p| p.dim() > 0)
            .map(|p| ((p.a, p.b), p))
            .collect(),
    })
}

/// `dim Ω_3^{(a,b)}` for the selected pairs (nonzero entries only).
pub fn omega3_pair_dims(
    g: &Digraph,
    options: &BasisOptions,
) -> Result<BTreeMap<(Vertex, Vertex), usize>, Omega3Error> {
    let pairs = selected_pairs(g, options)?;
    let dims = map_pairs(&pairs, options.jobs, |a, b| {
        pair_dimension(&analyze_pair(g, a, b).expect("validated pair"))
    })?;
    Ok(pairs
        .into_iter()
        .zip(dims)
        .filter(|&(_, d)| d > 0)
        .collect())
}

/// `dim Ω_3(g)` from the closed form; no chains are built.
pub fn omega3_dim(g: &Digraph) -> usize {
    omega3_pair_dims(
        g,
        &BasisOptions {
            jobs: 1,
            ..Default::default()
        },
    )
    .expect("no limits configured")
    .values()
    .sum()
}

/// Totals from building every generator without retaining them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MaterializeStats {
    pub dim: usize,
    pub terms: usize,
}

/// Builds the full basis pair by pair and discards it, for timing runs on
/// graphs whose basis would not fit in memory.
pub fn materialize_basis(g: &Digraph, jobs: usize) -> Result<MaterializeStats, Omega3Error> {
    let pairs = candidate_pairs(g);
    let stats = map_pairs(&pairs, jobs, |a, b| {
        let basis = pair_basis(g, a, b).expect("valid pair");
        MaterializeStats {
            dim: basis.dim(),
            terms: basis.elements.iter().map(|e| e.chain.len()).sum(),
        }
    })?;
    Ok(stats
        .into_iter()
        .fold(MaterializeStats::default(), |acc, s| MaterializeStats {
            dim: acc.dim + s.dim,
            terms: acc.terms + s.terms,
        }))
}
