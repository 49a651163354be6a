//! Fixture digraphs: trapezohedra and their chains, merging quotients, and
//! seeded random digraphs.
//!
//! Random digraphs use ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64(seed)`. Ordered pairs `(u, v)`, `u ≠ v`, are visited with
//! `u` outer and `v` inner, both ascending; each draws one `next_u64()` and
//! keeps the arrow when `(x >> 11) · 2⁻⁵³ < p`. Vertices are labelled
//! `"0"..."n-1"`.

use std::sync::Arc;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chains::{Chain, DigraphMorphism, ElemPath};
use crate::digraph::{Digraph, DigraphBuilder, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("trapezohedron order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("blocks do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("arrow probability {0} outside [0, 1]")]
    BadProbability(f64),
}

/// Vertex ids of `trapezohedron(m)`: `a`, `b`, then `i_k`, then `j_k`.
#[derive(Debug, Clone, Copy)]
pub struct TrapezohedronIds {
    pub m: usize,
}

impl TrapezohedronIds {
    pub const A: Vertex = 0;
    pub const B: Vertex = 1;

    pub fn i(&self, k: usize) -> Vertex {
        2 + k % self.m
    }

    pub fn j(&self, k: usize) -> Vertex {
        2 + self.m + k % self.m
    }
}

/// The trapezohedron `T_m`: vertices `a, b, i0…, j0…` and arrows
/// `a → i_k → j_k → b`, `i_{k+1} → j_k` (indices mod `m`).
pub fn trapezohedron(m: usize) -> Result<Digraph, GeneratorError> {
    if m < 2 {
        return Err(GeneratorError::OrderTooSmall(m));
    }
    let ids = TrapezohedronIds { m };
    let mut b = DigraphBuilder::new();
    b.vertex("a");
    b.vertex("b");
    for k in 0..m {
        b.vertex(&format!("i{k}"));
    }
    for k in 0..m {
        b.vertex(&format!("j{k}"));
    }
    for k in 0..m {
        for (u, v) in [
            (TrapezohedronIds::A, ids.i(k)),
            (ids.i(k), ids.j(k)),
            (ids.j(k), TrapezohedronIds::B),
            (ids.i(k + 1), ids.j(k)),
        ] {
            b.arrow_ids(u, v).expect("valid ids");
        }
    }
    Ok(b.build())
}

/// `τ_m = Σ_k (e_{a i_k j_k b} − e_{a i_{k+1} j_k b})` on `trapezohedron(m)`.
pub fn tau(m: usize) -> Result<Chain, GeneratorError> {
    if m < 2 {
        return Err(GeneratorError::OrderTooSmall(m));
    }
    let ids = TrapezohedronIds { m };
    let (a, b) = (TrapezohedronIds::A, TrapezohedronIds::B);
    let terms = (0..m).flat_map(|k| {
        [
            (ElemPath::new([a, ids.i(k), ids.j(k), b]).unwrap(), 1i64),
            (ElemPath::new([a, ids.i(k + 1), ids.j(k), b]).unwrap(), -1),
        ]
    });
    Ok(Chain::from_terms(3, terms).expect("degree 3"))
}

/// Collapses each block of `partition` to one vertex. Quotient arrows are
/// exactly the images of arrows between distinct blocks; block `k` becomes
/// vertex `k`, labelled by its members joined with `+`.
pub fn merging_quotient(
    g: &Digraph,
    partition: &[Vec<Vertex>],
) -> Result<(Digraph, DigraphMorphism), GeneratorError> {
    let n = g.vertex_count();
    let mut block_of = vec![None; n];
    for (k, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(GeneratorError::NotAPartition(format!("block {k} is empty")));
        }
        for &v in block {
            if v >= n {
                return Err(GeneratorError::NotAPartition(format!("unknown vertex {v}")));
            }
            if block_of[v].replace(k).is_some() {
                return Err(GeneratorError::NotAPartition(format!(
                    "vertex `{}` appears twice",
                    g.label(v)
                )));
            }
        }
    }
    let map: Vec<Vertex> = block_of
        .iter()
        .enumerate()
        .map(|(v, k)| {
            k.ok_or_else(|| {
                GeneratorError::NotAPartition(format!("vertex `{}` is not covered", g.label(v)))
            })
        })
        .collect::<Result<_, _>>()?;

    let mut builder = DigraphBuilder::new();
    for block in partition {
        let label: Vec<&str> = block.iter().map(|&v| g.label(v)).collect();
        builder
            .add_vertex(&label.join("+"))
            .map_err(|e| GeneratorError::NotAPartition(e.to_string()))?;
    }
    for (u, v) in g.arrows() {
        if map[u] != map[v] {
            builder.arrow_ids(map[u], map[v]).expect("distinct blocks");
        }
    }
    let quotient = builder.build();
    let morphism = DigraphMorphism::new(Arc::new(g.clone()), Arc::new(quotient.clone()), map)
        .expect("projection is a morphism");
    Ok((quotient, morphism))
}

/// Parameters of a seeded random digraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        RandomSpec { n, p, seed }
    }
}

/// Each ordered pair `(u, v)`, `u ≠ v`, becomes an arrow independently with
/// probability `p`.
pub fn random_digraph(spec: RandomSpec) -> Result<Digraph, GeneratorError> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(GeneratorError::BadProbability(spec.p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let scale = 1.0 / (1u64 << 53) as f64;
    let mut arrows = Vec::new();
    for u in 0..spec.n {
        for v in 0..spec.n {
            if u == v {
                continue;
            }
            let x = (rng.next_u64() >> 11) as f64 * scale;
            if x < spec.p {
                arrows.push((u, v));
            }
        }
    }
    Ok(Digraph::from_arrow_ids(spec.n, arrows).expect("no self-loops"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::is_invariant;

    #[test]
    fn trapezohedron_sizes() {
        let t2 = trapezohedron(2).unwrap();
        assert_eq!((t2.vertex_count(), t2.arrow_count()), (6, 8));
        let t5 = trapezohedron(5).unwrap();
        assert_eq!((t5.vertex_count(), t5.arrow_count()), (12, 20));
        assert_eq!(trapezohedron(1), Err(GeneratorError::OrderTooSmall(1)));
        assert_eq!(t5.label(TrapezohedronIds { m: 5 }.j(4)), "j4");
    }

    #[test]
    fn tau_shape() {
        let t2 = trapezohedron(2).unwrap();
        let tau2 = tau(2).unwrap();
        let p =
            |s: &str| ElemPath::new(s.split_whitespace().map(|l| t2.require(l).unwrap())).unwrap();
        let want = Chain::from_terms(
            3,
            [
                (p("a i0 j0 b"), 1i64),
                (p("a i1 j0 b"), -1),
                (p("a i1 j1 b"), 1),
                (p("a i0 j1 b"), -1),
            ],
        )
        .unwrap();
        assert_eq!(tau2, want);
        assert_eq!(tau2.boundary().len(), 8);
        for m in 2..=8 {
            let t = tau(m).unwrap();
            assert_eq!(t.len(), 2 * m);
            assert!(is_invariant(&t, &trapezohedron(m).unwrap()));
        }
        assert!(tau(1).is_err());
    }

    #[test]
    fn chorded_square_quotient() {
        let t2 = trapezohedron(2).unwrap();
        let ids = TrapezohedronIds { m: 2 };
        let blocks = vec![
            vec![TrapezohedronIds::A],
            vec![ids.i(0)],
            vec![ids.j(0), ids.i(1)],
            vec![ids.j(1), TrapezohedronIds::B],
        ];
        let (q, f) = merging_quotient(&t2, &blocks).unwrap();
        assert!(f.is_merging_map());
        assert_eq!((q.vertex_count(), q.arrow_count()), (4, 5));
        let image = f.induced_map(&tau(2).unwrap());
        assert_eq!(image.len(), 1);
        let (path, c) = image.iter().next().unwrap();
        assert_eq!(path.vertices(), &[0, 1, 2, 3]);
        assert_eq!(*c, 1);
        assert!(is_invariant(&image, &q));
    }

    #[test]
    fn trivial_quotients() {
        let t2 = trapezohedron(2).unwrap();
        let singletons: Vec<_> = t2.vertices().map(|v| vec![v]).collect();
        let (q, f) = merging_quotient(&t2, &singletons).unwrap();
        assert_eq!(
            q.arrows().collect::<Vec<_>>(),
            t2.arrows().collect::<Vec<_>>()
        );
        assert_eq!(f.induced_map(&tau(2).unwrap()), tau(2).unwrap());

        let (q, _) = merging_quotient(&t2, &[t2.vertices().collect()]).unwrap();
        assert_eq!((q.vertex_count(), q.arrow_count()), (1, 0));

        assert!(merging_quotient(&t2, &[vec![0, 1]]).is_err());
        assert!(merging_quotient(&t2, &[t2.vertices().collect(), vec![0]]).is_err());
    }

    #[test]
    fn random_digraphs() {
        assert_eq!(
            random_digraph(RandomSpec::new(0, 0.5, 1))
                .unwrap()
                .vertex_count(),
            0
        );
        assert_eq!(
            random_digraph(RandomSpec::new(3, 1.0, 1))
                .unwrap()
                .arrow_count(),
            6
        );
        let spec = RandomSpec::new(12, 0.3, 42);
        assert_eq!(random_digraph(spec).unwrap(), random_digraph(spec).unwrap());
        assert!(random_digraph(RandomSpec::new(3, 1.5, 0)).is_err());
    }
}
