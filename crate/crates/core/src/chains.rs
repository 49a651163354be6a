//! Elementary paths, sparse chains, the boundary operator on regular paths,
//! allowedness and boundary-invariance, cluster decomposition, and maps
//! induced by digraph morphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, Vertex};
use crate::field::{Coeff, Field};

/// A sequence `i₀ i₁ … i_p` of vertices; its degree is `p`.
///
/// Ordering is lexicographic on the vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemPath(SmallVec<[Vertex; 4]>);

impl ElemPath {
    /// Returns `None` for an empty sequence.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Option<Self> {
        let inner: SmallVec<[Vertex; 4]> = vertices.into_iter().collect();
        (!inner.is_empty()).then_some(ElemPath(inner))
    }

    pub fn from_slice(vertices: &[Vertex]) -> Option<Self> {
        (!vertices.is_empty()).then(|| ElemPath(SmallVec::from_slice(vertices)))
    }

    /// Degree `p` (length minus one).
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    /// No two consecutive vertices coincide.
    pub fn is_regular(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// The path with position `q` omitted.
    pub fn face(&self, q: usize) -> Option<ElemPath> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(q);
        Some(ElemPath(v))
    }

    /// Renders the path with the digraph's labels, e.g. `a i0 j0 b`.
    pub fn display<'a>(&'a self, g: &'a Digraph) -> impl fmt::Display + 'a {
        LabelledPath { path: self, g }
    }
}

impl fmt::Debug for ElemPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:?}", self.0.as_slice())
    }
}

struct LabelledPath<'a> {
    path: &'a ElemPath,
    g: &'a Digraph,
}

impl fmt::Display for LabelledPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &v) in self.path.vertices().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match self.g.labels().get(v) {
                Some(label) => f.write_str(label)?,
                None => write!(f, "#{v}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: isize, found: isize },
    #[error("chain is not an (a,b)-cluster")]
    NotACluster,
    #[error("chain has degree {0}, expected 3")]
    NotDegreeThree(isize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite linear combination of elementary paths of one degree.
///
/// Zero coefficients are never stored. Degree `-1` is the target of the
/// boundary of a 0-chain and is always zero.
#[derive(Clone, PartialEq)]
pub struct Chain<C = i64> {
    degree: isize,
    terms: BTreeMap<ElemPath, C>,
}

impl<C: Coeff> fmt::Debug for Chain<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}]", self.degree)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Coeff> Chain<C> {
    pub fn zero(degree: isize) -> Self {
        Chain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms; all paths must have degree `degree`.
    pub fn from_terms<I>(degree: isize, terms: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (ElemPath, C)>,
    {
        let mut chain = Chain::zero(degree);
        for (path, c) in terms {
            chain.add_term(path, c)?;
        }
        Ok(chain)
    }

    pub fn single(path: ElemPath, coeff: C) -> Self {
        let mut chain = Chain::zero(path.degree() as isize);
        chain.push(path, coeff);
        chain
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&ElemPath, &C)> {
        self.terms.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &ElemPath> {
        self.terms.keys()
    }

    pub fn coeff(&self, path: &ElemPath) -> Option<&C> {
        self.terms.get(path)
    }

    pub fn add_term(&mut self, path: ElemPath, coeff: C) -> Result<(), ChainError> {
        if path.degree() as isize != self.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: path.degree() as isize,
            });
        }
        self.push(path, coeff);
        Ok(())
    }

    // Caller guarantees the degree.
    fn push(&mut self, path: ElemPath, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(path) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&coeff);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChainError> {
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut sum = self.clone();
        for (path, c) in &other.terms {
            sum.push(path.clone(), c.clone());
        }
        Ok(sum)
    }

    pub fn neg(&self) -> Self {
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c.neg()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, pruning results that vanish.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Chain<D> {
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Multiplies by a field scalar.
    pub fn scale<F: Field<Elem = C>>(&self, field: &F, factor: &C) -> Self {
        self.map_coeffs(|c| field.mul(c, factor))
    }

    /// The boundary: alternating sum of faces, with faces that repeat a
    /// vertex consecutively discarded.
    pub fn boundary(&self) -> Chain<C> {
        let mut out = Chain::zero(self.degree - 1);
        if self.degree <= 0 {
            return out;
        }
        for (path, c) in &self.terms {
            let neg = c.neg();
            for q in 0..path.0.len() {
                let face = path.face(q).expect("degree >= 1");
                if face.is_regular() {
                    out.push(face, if q % 2 == 0 { c.clone() } else { neg.clone() });
                }
            }
        }
        out
    }

    /// True iff every term has first vertex `a` and last vertex `b` for a
    /// single pair `(a, b)`.
    pub fn cluster_endpoints(&self) -> Option<(Vertex, Vertex)> {
        let mut paths = self.terms.keys();
        let first = paths.next()?;
        let ends = (first.first(), first.last());
        paths.all(|p| (p.first(), p.last()) == ends).then_some(ends)
    }

    /// Splits the chain into `(a, b)`-clusters keyed by endpoints.
    pub fn cluster_decompose(&self) -> BTreeMap<(Vertex, Vertex), Chain<C>> {
        let mut parts: BTreeMap<(Vertex, Vertex), Chain<C>> = BTreeMap::new();
        for (path, c) in &self.terms {
            parts
                .entry((path.first(), path.last()))
                .or_insert_with(|| Chain::zero(self.degree))
                .push(path.clone(), c.clone());
        }
        parts
    }

    /// For a 3-dimensional `(a,b)`-cluster `Σ u e_{a i j b}`, the 1-chain
    /// `Σ u e_{i j}`.
    pub fn e_omega(&self) -> Result<Chain<C>, ChainError> {
        if self.degree != 3 {
            return Err(ChainError::NotDegreeThree(self.degree));
        }
        if !self.is_zero() && self.cluster_endpoints().is_none() {
            return Err(ChainError::NotACluster);
        }
        let mut out = Chain::zero(1);
        for (path, c) in &self.terms {
            let v = path.vertices();
            out.push(
                ElemPath::from_slice(&v[1..3]).expect("two vertices"),
                c.clone(),
            );
        }
        Ok(out)
    }
}

impl Chain<i64> {
    /// The same chain with coefficients lifted into `field`.
    pub fn to_field<F: Field>(&self, field: &F) -> Chain<F::Elem> {
        self.map_coeffs(|&c| field.lift(c))
    }
}

/// `true` iff `path` is a sequence of arrows of `g`.
pub fn is_allowed(path: &ElemPath, g: &Digraph) -> Result<bool, GraphError> {
    for &v in path.vertices() {
        g.check_vertex(v)?;
    }
    Ok(path.vertices().windows(2).all(|w| g.has_arrow(w[0], w[1])))
}

fn allowed_unchecked(path: &ElemPath, g: &Digraph) -> bool {
    let v = path.vertices();
    v.iter().all(|&x| x < g.vertex_count()) && v.windows(2).all(|w| g.has_arrow(w[0], w[1]))
}

/// Every allowed path of degree `p`, optionally restricted to those running
/// from `a` to `b`, in lexicographic order.
pub fn allowed_paths(g: &Digraph, p: usize, endpoints: Option<(Vertex, Vertex)>) -> Vec<ElemPath> {
    let mut out = Vec::new();
    visit_allowed_paths(g, p, endpoints, &mut |path| {
        out.push(ElemPath::from_slice(path).expect("nonempty"));
        true
    });
    out
}

/// Depth-first walk over allowed paths in lexicographic order. The visitor
/// returns `false` to stop early; the return value reports whether the walk
/// ran to completion.
pub fn visit_allowed_paths(
    g: &Digraph,
    p: usize,
    endpoints: Option<(Vertex, Vertex)>,
    visit: &mut dyn FnMut(&[Vertex]) -> bool,
) -> bool {
    fn descend(
        g: &Digraph,
        p: usize,
        target: Option<Vertex>,
        stack: &mut Vec<Vertex>,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        let tip = *stack.last().expect("nonempty");
        if stack.len() == p + 1 {
            return match target {
                Some(b) if b != tip => true,
                _ => visit(stack),
            };
        }
        for &w in g.successors(tip) {
            // The final step must land on the target.
            if stack.len() == p {
                if let Some(b) = target {
                    if w != b {
                        continue;
                    }
                }
            }
            stack.push(w);
            let keep_going = descend(g, p, target, stack, visit);
            stack.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    let starts: Vec<Vertex> = match endpoints {
        Some((a, _)) if a < g.vertex_count() => vec![a],
        Some(_) => Vec::new(),
        None => g.vertices().collect(),
    };
    let target = endpoints.map(|(_, b)| b);
    let mut stack = Vec::with_capacity(p + 1);
    for a in starts {
        stack.clear();
        stack.push(a);
        if !descend(g, p, target, &mut stack, visit) {
            return false;
        }
    }
    true
}

/// `true` iff the chain and its boundary are both combinations of allowed
/// paths of `g`.
pub fn is_invariant<C: Coeff>(chain: &Chain<C>, g: &Digraph) -> bool {
    chain.paths().all(|p| allowed_unchecked(p, g))
        && chain.boundary().paths().all(|p| allowed_unchecked(p, g))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("vertex map has length {found}, source has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} maps outside the target")]
    OutOfRange(Vertex),
    #[error("arrow ({0}, {1}) maps to neither an arrow nor a vertex")]
    NotAMorphism(Vertex, Vertex),
}

/// A vertex map under which every arrow goes to an arrow or collapses.
#[derive(Debug, Clone)]
pub struct DigraphMorphism {
    source: Arc<Digraph>,
    target: Arc<Digraph>,
    map: Vec<Vertex>,
}

impl DigraphMorphism {
    pub fn new(
        source: Arc<Digraph>,
        target: Arc<Digraph>,
        map: Vec<Vertex>,
    ) -> Result<Self, MorphismError> {
        if map.len() != source.vertex_count() {
            return Err(MorphismError::WrongLength {
                expected: source.vertex_count(),
                found: map.len(),
            });
        }
        if let Some(v) = (0..map.len()).find(|&v| map[v] >= target.vertex_count()) {
            return Err(MorphismError::OutOfRange(v));
        }
        if let Some((u, v)) = source
            .arrows()
            .find(|&(u, v)| map[u] != map[v] && !target.has_arrow(map[u], map[v]))
        {
            return Err(MorphismError::NotAMorphism(u, v));
        }
        Ok(DigraphMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(g: Arc<Digraph>) -> Self {
        let map = g.vertices().collect();
        DigraphMorphism {
            source: g.clone(),
            target: g,
            map,
        }
    }

    pub fn source(&self) -> &Digraph {
        &self.source
    }

    pub fn target(&self) -> &Digraph {
        &self.target
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn vertex_map(&self) -> &[Vertex] {
        &self.map
    }

    /// `f_*`: relabels each term; terms that become irregular vanish.
    pub fn induced_map<C: Coeff>(&self, chain: &Chain<C>) -> Chain<C> {
        let mut out = Chain::zero(chain.degree());
        for (path, c) in chain.iter() {
            let image =
                ElemPath::new(path.vertices().iter().map(|&v| self.map[v])).expect("nonempty");
            if image.is_regular() {
                out.push(image, c.clone());
            }
        }
        out
    }

    /// `true` iff target arrows are exactly the images of source arrows
    /// joining distinct fibres.
    pub fn is_merging_map(&self) -> bool {
        let mut projected = std::collections::BTreeSet::new();
        for (u, v) in self.source.arrows() {
            let (fu, fv) = (self.map[u], self.map[v]);
            if fu != fv {
                projected.insert((fu, fv));
            }
        }
        projected.len() == self.target.arrow_count()
            && projected.iter().all(|&(x, y)| self.target.has_arrow(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{tau, trapezohedron};

    fn path(g: &Digraph, labels: &str) -> ElemPath {
        ElemPath::new(labels.split_whitespace().map(|l| g.require(l).unwrap())).unwrap()
    }

    fn chain(g: &Digraph, terms: &[(&str, i64)]) -> Chain {
        let degree = terms[0].0.split_whitespace().count() as isize - 1;
        Chain::from_terms(degree, terms.iter().map(|&(p, c)| (path(g, p), c))).unwrap()
    }

    fn two_cycle() -> Digraph {
        Digraph::from_edges([("a", "b"), ("b", "a")]).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let g = two_cycle();
        let abab = chain(&g, &[("a b a b", 1)]);
        assert_eq!(abab.boundary(), chain(&g, &[("b a b", 1), ("a b a", -1)]));

        let g = Digraph::from_edges([("a", "i"), ("i", "j"), ("j", "b")]).unwrap();
        let aijb = chain(&g, &[("a i j b", 1)]);
        assert_eq!(
            aijb.boundary(),
            chain(
                &g,
                &[("i j b", 1), ("a j b", -1), ("a i b", 1), ("a i j", -1)]
            )
        );
        assert!(aijb.boundary().boundary().is_zero());
        assert_eq!(aijb.boundary().boundary().degree(), 1);

        let point = Chain::single(ElemPath::new([0]).unwrap(), 1i64);
        let b = point.boundary();
        assert_eq!((b.degree(), b.is_zero()), (-1, true));
    }

    #[test]
    fn allowedness() {
        let t2 = trapezohedron(2).unwrap();
        assert!(is_allowed(&path(&t2, "a i0 j0 b"), &t2).unwrap());
        assert!(!is_allowed(&path(&t2, "a j0"), &t2).unwrap());
        assert!(is_allowed(&path(&t2, "a"), &t2).unwrap());
        assert!(is_allowed(&ElemPath::new([0, 42]).unwrap(), &t2).is_err());
    }

    #[test]
    fn allowed_path_enumeration() {
        let t2 = trapezohedron(2).unwrap();
        let (a, b) = (t2.require("a").unwrap(), t2.require("b").unwrap());
        let mut want: Vec<_> = ["a i0 j0 b", "a i0 j1 b", "a i1 j0 b", "a i1 j1 b"]
            .iter()
            .map(|s| path(&t2, s))
            .collect();
        want.sort();
        assert_eq!(allowed_paths(&t2, 3, Some((a, b))), want);

        let g = two_cycle();
        assert_eq!(
            allowed_paths(&g, 3, None),
            vec![path(&g, "a b a b"), path(&g, "b a b a")]
        );
        assert_eq!(allowed_paths(&t2, 0, None).len(), t2.vertex_count());
        assert_eq!(allowed_paths(&t2, 1, None).len(), t2.arrow_count());
    }

    #[test]
    fn invariance() {
        let t2 = trapezohedron(2).unwrap();
        assert!(is_invariant(&tau(2).unwrap(), &t2));
        assert!(!is_invariant(&chain(&t2, &[("a i0 j0 b", 1)]), &t2));
        assert!(is_invariant(&Chain::<i64>::zero(3), &t2));
    }

    #[test]
    fn clusters() {
        let t2 = trapezohedron(2).unwrap();
        let tau2 = tau(2).unwrap();
        let parts = tau2.cluster_decompose();
        let (a, b) = (t2.require("a").unwrap(), t2.require("b").unwrap());
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![(a, b)]);

        let disjoint = Chain::from_terms(
            2,
            [
                (ElemPath::new([0, 1, 2]).unwrap(), 1i64),
                (ElemPath::new([3, 4, 5]).unwrap(), 1),
            ],
        )
        .unwrap();
        assert_eq!(disjoint.cluster_decompose().len(), 2);
        assert!(Chain::<i64>::zero(3).cluster_decompose().is_empty());
    }

    #[test]
    fn e_omega_projection() {
        let t2 = trapezohedron(2).unwrap();
        assert_eq!(
            tau(2).unwrap().e_omega().unwrap(),
            chain(
                &t2,
                &[("i0 j0", 1), ("i1 j0", -1), ("i1 j1", 1), ("i0 j1", -1)]
            )
        );
        let single = Chain::single(ElemPath::new([0, 1, 2, 3]).unwrap(), 1i64);
        assert_eq!(
            single.e_omega().unwrap(),
            Chain::single(ElemPath::new([1, 2]).unwrap(), 1)
        );
        let two = Chain::from_terms(
            3,
            [
                (ElemPath::new([0, 1, 2, 3]).unwrap(), 1i64),
                (ElemPath::new([0, 1, 2, 4]).unwrap(), 1),
            ],
        )
        .unwrap();
        assert_eq!(two.e_omega(), Err(ChainError::NotACluster));
    }

    #[test]
    fn degree_checks() {
        let mut c = Chain::<i64>::zero(2);
        assert!(matches!(
            c.add_term(ElemPath::new([0, 1]).unwrap(), 1),
            Err(ChainError::DegreeMismatch { .. })
        ));
        let d = Chain::<i64>::zero(1);
        assert!(c.add(&d).is_err());
    }

    #[test]
    fn induced_maps() {
        let t2 = Arc::new(trapezohedron(2).unwrap());
        let id = DigraphMorphism::identity(t2.clone());
        let tau2 = tau(2).unwrap();
        assert_eq!(id.induced_map(&tau2), tau2);
        assert!(id.is_merging_map());

        let point = Arc::new(Digraph::from_arrow_ids(1, []).unwrap());
        let collapse = DigraphMorphism::new(t2.clone(), point, vec![0; t2.vertex_count()]).unwrap();
        assert!(collapse.induced_map(&tau2).is_zero());

        let g = Arc::new(Digraph::from_edges([("a", "b"), ("b", "c")]).unwrap());
        let bigger = Arc::new(Digraph::from_edges([("a", "b"), ("b", "c"), ("c", "a")]).unwrap());
        let f = DigraphMorphism::new(g.clone(), bigger, vec![0, 1, 2]).unwrap();
        assert!(!f.is_merging_map());

        let bad = DigraphMorphism::new(g.clone(), g.clone(), vec![2, 1, 0]);
        assert!(matches!(bad, Err(MorphismError::NotAMorphism(..))));
    }
}
