//! Definition-level computation of `Ω_p`: enumerate allowed paths, build the
//! matrix of their boundaries restricted to non-allowed coordinates, and take
//! its kernel by exact elimination.
//!
//! This is the reference every structural result is checked against. The
//! matrix is block diagonal over endpoint pairs `(a, b)` (only interior faces
//! can be non-allowed, and they keep both endpoints), so all work is done one
//! block at a time.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::chains::{allowed_paths, visit_allowed_paths, Chain, ElemPath};
use crate::digraph::{Digraph, GraphError, Vertex};
use crate::field::{Coeff, Field};
use crate::linalg::{matrix_rank, nullspace, Echelon, SparseRow};

/// Default cap on the number of enumerated allowed paths.
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("allowed-path enumeration exceeded the budget ({0} paths)")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("chains of different degrees ({0} and {1})")]
    DegreeMismatch(isize, isize),
}

/// One endpoint block of the boundary matrix.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix<E> {
    /// Allowed paths indexing the matrix rows, in canonical order.
    pub paths: Vec<ElemPath>,
    /// Non-allowed regular faces indexing the columns, in canonical order.
    pub faces: Vec<ElemPath>,
    /// `entries[r]` holds the nonzero `(column, coefficient)` pairs of the
    /// boundary of `paths[r]`.
    pub entries: Vec<SparseRow<E>>,
}

impl<E: Coeff> BoundaryMatrix<E> {
    /// Transpose: one sparse row per face, indexed by path.
    fn constraints(&self) -> Vec<SparseRow<E>> {
        let mut by_face: Vec<SparseRow<E>> = vec![Vec::new(); self.faces.len()];
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row {
                by_face[*c].push((r, v.clone()));
            }
        }
        by_face
    }
}

/// Brute-force `Ω_p` computations over a fixed field.
#[derive(Debug, Clone)]
pub struct Oracle<F: Field> {
    field: F,
    budget: usize,
}

impl<F: Field> Oracle<F> {
    pub fn new(field: F) -> Self {
        Oracle {
            field,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Allowed `p`-paths grouped by endpoints, with the enumeration budget
    /// enforced.
    fn blocks(
        &self,
        g: &Digraph,
        p: usize,
    ) -> Result<BTreeMap<(Vertex, Vertex), Vec<ElemPath>>, OracleError> {
        let mut blocks: BTreeMap<(Vertex, Vertex), Vec<ElemPath>> = BTreeMap::new();
        let mut count = 0usize;
        let completed = visit_allowed_paths(g, p, None, &mut |path| {
            count += 1;
            if count > self.budget {
                return false;
            }
            let path = ElemPath::from_slice(path).expect("nonempty");
            blocks
                .entry((path.first(), path.last()))
                .or_default()
                .push(path);
            true
        });
        if !completed {
            return Err(OracleError::BudgetExceeded(count));
        }
        Ok(blocks)
    }

    fn pair_paths(
        &self,
        g: &Digraph,
        p: usize,
        a: Vertex,
        b: Vertex,
    ) -> Result<Vec<ElemPath>, OracleError> {
        g.check_vertex(a)?;
        g.check_vertex(b)?;
        let paths = allowed_paths(g, p, Some((a, b)));
        if paths.len() > self.budget {
            return Err(OracleError::BudgetExceeded(paths.len()));
        }
        Ok(paths)
    }

    /// The boundary matrix of one block of allowed paths.
    pub fn boundary_matrix(&self, g: &Digraph, paths: Vec<ElemPath>) -> BoundaryMatrix<F::Elem> {
        let mut face_index: BTreeMap<ElemPath, usize> = BTreeMap::new();
        let mut raw: Vec<Vec<(ElemPath, i64)>> = Vec::with_capacity(paths.len());
        for path in &paths {
            let mut row = Vec::new();
            let p = path.degree();
            // End faces of an allowed path are allowed.
            for q in 1..p {
                let face = path.face(q).expect("p >= 2");
                let v = face.vertices();
                if !face.is_regular() || v.windows(2).all(|w| g.has_arrow(w[0], w[1])) {
                    continue;
                }
                face_index.entry(face.clone()).or_insert(0);
                row.push((face, if q % 2 == 0 { 1 } else { -1 }));
            }
            raw.push(row);
        }
        for (k, slot) in face_index.values_mut().enumerate() {
            *slot = k;
        }
        let entries = raw
            .into_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (face, s) in row {
                    *acc.entry(face_index[&face]).or_default() += s;
                }
                acc.into_iter()
                    .filter(|&(_, v)| v != 0)
                    .map(|(c, v)| (c, self.field.lift(v)))
                    .collect()
            })
            .collect();
        BoundaryMatrix {
            paths,
            faces: face_index.into_keys().collect(),
            entries,
        }
    }

    fn block_dim(&self, g: &Digraph, paths: Vec<ElemPath>) -> usize {
        let n = paths.len();
        let m = self.boundary_matrix(g, paths);
        if m.faces.is_empty() {
            return n;
        }
        n - matrix_rank(&self.field, &m.constraints(), n)
    }

    fn block_basis(&self, g: &Digraph, paths: Vec<ElemPath>) -> Vec<Chain<F::Elem>> {
        let m = self.boundary_matrix(g, paths);
        let n = m.paths.len();
        let degree = m.paths.first().map_or(0, |p| p.degree() as isize);
        nullspace(&self.field, &m.constraints(), n)
            .into_iter()
            .map(|v| {
                Chain::from_terms(degree, m.paths.iter().cloned().zip(v)).expect("uniform degree")
            })
            .collect()
    }

    /// `dim Ω_p(g)`.
    pub fn omega_dim(&self, g: &Digraph, p: usize) -> Result<usize, OracleError> {
        Ok(self.pair_dims(g, p)?.values().sum())
    }

    /// Nonzero `dim Ω_p^{(a,b)}(g)` for every endpoint pair.
    pub fn pair_dims(
        &self,
        g: &Digraph,
        p: usize,
    ) -> Result<BTreeMap<(Vertex, Vertex), usize>, OracleError> {
        let mut dims = BTreeMap::new();
        for (pair, paths) in self.blocks(g, p)? {
            let d = self.block_dim(g, paths);
            if d > 0 {
                dims.insert(pair, d);
            }
        }
        Ok(dims)
    }

    /// A basis of `Ω_p(g)`, block by block in endpoint order.
    pub fn omega_basis(&self, g: &Digraph, p: usize) -> Result<Vec<Chain<F::Elem>>, OracleError> {
        let mut basis = Vec::new();
        for (_, paths) in self.blocks(g, p)? {
            basis.extend(self.block_basis(g, paths));
        }
        Ok(basis)
    }

    /// `dim Ω_p^{(a,b)}(g)`.
    pub fn omega_pair_dim(
        &self,
        g: &Digraph,
        p: usize,
        a: Vertex,
        b: Vertex,
    ) -> Result<usize, OracleError> {
        let paths = self.pair_paths(g, p, a, b)?;
        Ok(self.block_dim(g, paths))
    }

    /// A basis of `Ω_p^{(a,b)}(g)`.
    pub fn omega_pair_basis(
        &self,
        g: &Digraph,
        p: usize,
        a: Vertex,
        b: Vertex,
    ) -> Result<Vec<Chain<F::Elem>>, OracleError> {
        let paths = self.pair_paths(g, p, a, b)?;
        Ok(self.block_basis(g, paths))
    }

    /// Rank of the coefficient matrix of `chains`.
    pub fn rank_of(&self, chains: &[Chain<F::Elem>]) -> Result<usize, OracleError> {
        let Some(first) = chains.first() else {
            return Ok(0);
        };
        let degree = first.degree();
        let mut columns: HashMap<&ElemPath, usize> = HashMap::new();
        let mut rows = Vec::with_capacity(chains.len());
        for chain in chains {
            if chain.degree() != degree {
                return Err(OracleError::DegreeMismatch(degree, chain.degree()));
            }
            for path in chain.paths() {
                let next = columns.len();
                columns.entry(path).or_insert(next);
            }
        }
        // Columns are numbered by first appearance; sort each row by column.
        for chain in chains {
            let mut row: SparseRow<F::Elem> =
                chain.iter().map(|(p, c)| (columns[p], c.clone())).collect();
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
        }
        let mut echelon = Echelon::new(self.field.clone());
        for row in rows {
            echelon.insert(row);
        }
        Ok(echelon.rank())
    }

    /// Rank of integer chains lifted into the field.
    pub fn rank_of_integer(&self, chains: &[Chain<i64>]) -> Result<usize, OracleError> {
        let lifted: Vec<_> = chains.iter().map(|c| c.to_field(&self.field)).collect();
        self.rank_of(&lifted)
    }
}

/// Closed-form count for `dim Ω_2`: transitive triangles, plus
/// `max(0, m(a,c) − 1)` for each non-adjacent pair `a ≠ c` joined by `m(a,c)`
/// two-step paths, plus twice the number of double arrows.
pub fn omega2_formula(g: &Digraph) -> usize {
    let mut total = 0;
    for a in g.vertices() {
        let mut through: HashMap<Vertex, usize> = HashMap::new();
        for &mid in g.successors(a) {
            for &c in g.successors(mid) {
                *through.entry(c).or_default() += 1;
            }
        }
        for (c, m) in through {
            // c == a counts a → mid → a once per double arrow at each end.
            total += if c == a || g.has_arrow(a, c) {
                m
            } else {
                m.saturating_sub(1)
            };
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::is_invariant;
    use crate::field::{PrimeField, RationalField};
    use crate::generators::{tau, trapezohedron};

    fn oracle() -> Oracle<PrimeField> {
        Oracle::new(PrimeField::default())
    }

    fn two_cycle() -> Digraph {
        Digraph::from_edges([("a", "b"), ("b", "a")]).unwrap()
    }

    #[test]
    fn low_degrees() {
        let g = trapezohedron(3).unwrap();
        assert_eq!(oracle().omega_dim(&g, 0).unwrap(), g.vertex_count());
        assert_eq!(oracle().omega_dim(&g, 1).unwrap(), g.arrow_count());
    }

    #[test]
    fn trapezohedra_have_one_dimensional_omega3() {
        for m in 2..=8 {
            let g = trapezohedron(m).unwrap();
            assert_eq!(oracle().omega_dim(&g, 3).unwrap(), 1, "m = {m}");
        }
    }

    #[test]
    fn bases() {
        let g = two_cycle();
        let basis = oracle().omega_basis(&g, 3).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|c| is_invariant(c, &g) && c.len() == 1));

        let edgeless = Digraph::from_arrow_ids(4, []).unwrap();
        assert!(oracle().omega_basis(&edgeless, 2).unwrap().is_empty());

        let t2 = trapezohedron(2).unwrap();
        let f = RationalField;
        let basis = Oracle::new(f).omega_basis(&t2, 3).unwrap();
        assert_eq!(basis.len(), 1);
        let tau2 = tau(2).unwrap().to_field(&f);
        let (path, c) = tau2.iter().next().unwrap();
        let ratio = basis[0].coeff(path).unwrap() / c;
        assert_eq!(tau2.scale(&f, &ratio), basis[0]);
    }

    #[test]
    fn pair_dims() {
        let t2 = trapezohedron(2).unwrap();
        let v = |l: &str| t2.require(l).unwrap();
        assert_eq!(oracle().omega_pair_dim(&t2, 3, v("a"), v("b")).unwrap(), 1);
        assert_eq!(oracle().omega_pair_dim(&t2, 3, v("a"), v("j0")).unwrap(), 0);
        assert_eq!(oracle().omega_pair_dim(&two_cycle(), 3, 0, 1).unwrap(), 1);
        assert!(matches!(
            oracle().omega_pair_dim(&t2, 3, 0, 77),
            Err(OracleError::Graph(GraphError::UnknownVertex(77)))
        ));
    }

    #[test]
    fn ranks() {
        let o = oracle();
        let tau2 = tau(2).unwrap();
        let twice = tau2.map_coeffs(|c| 2 * c);
        assert_eq!(o.rank_of_integer(&[tau2.clone(), twice]).unwrap(), 1);
        assert_eq!(o.rank_of(&[]).unwrap(), 0);
        let edge = Chain::single(ElemPath::new([0, 1]).unwrap(), 1i64);
        assert!(matches!(
            o.rank_of_integer(&[tau2, edge]),
            Err(OracleError::DegreeMismatch(3, 1))
        ));
    }

    #[test]
    fn budget() {
        let g = trapezohedron(5).unwrap();
        assert!(matches!(
            oracle().with_budget(3).omega_dim(&g, 1),
            Err(OracleError::BudgetExceeded(4))
        ));
    }

    #[test]
    fn omega2_examples() {
        let tri = Digraph::from_edges([("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(omega2_formula(&tri), 1);
        assert_eq!(oracle().omega_dim(&tri, 2).unwrap(), 1);
        assert_eq!(omega2_formula(&two_cycle()), 2);
        assert_eq!(oracle().omega_dim(&two_cycle(), 2).unwrap(), 2);
        let multi = Digraph::from_edges([
            ("a", "b1"),
            ("a", "b2"),
            ("a", "b3"),
            ("b1", "c"),
            ("b2", "c"),
            ("b3", "c"),
        ])
        .unwrap();
        assert_eq!(oracle().omega_dim(&multi, 2).unwrap(), 2);
        assert_eq!(omega2_formula(&multi), 2);
    }
}
