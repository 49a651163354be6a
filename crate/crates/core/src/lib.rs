//! Boundary-invariant 3-paths of finite digraphs.
//!
//! For a digraph `G`, `Ω_3(G)` is the space of linear combinations of
//! allowed 3-paths (`i₀ → i₁ → i₂ → i₃`) whose boundary is again a
//! combination of allowed 2-paths. This crate computes its dimension and an
//! explicit basis pair by pair ([`omega3`]), and checks every result against
//! brute-force exact linear algebra ([`oracle`]).
//!
//! ```
//! use omega3::generators::trapezohedron;
//! use omega3::omega3::omega3_basis;
//!
//! let g = trapezohedron(3).unwrap();
//! let basis = omega3_basis(&g);
//! assert_eq!(basis.total_dim(), 1);
//! ```

pub mod chains;
pub mod cli;
pub mod digraph;
pub mod field;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod omega3;
pub mod oracle;
pub mod verify;

pub use chains::{is_allowed, is_invariant, Chain, DigraphMorphism, ElemPath};
pub use digraph::{Digraph, DigraphBuilder, Vertex, VertexSubset};
pub use field::{Field, FieldSpec, PrimeField, RationalField};
pub use omega3::{analyze_pair, omega3_basis, omega3_dim, Omega3Basis};
pub use oracle::Oracle;
