//! Cross-checks structural results against the oracle.
//!
//! For every endpoint pair the claimed generators must number exactly the
//! oracle dimension, sit in that pair's cluster, be ∂-invariant, and have
//! full rank over the chosen field. Together these make them a basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::chains::{is_invariant, Chain};
use crate::digraph::{Digraph, Vertex};
use crate::field::Field;
use crate::io::{digest, BasisDocument, IoError};
use crate::omega3::{omega3_basis_with, omega3_pair_dims, BasisOptions, Omega3Error};
use crate::oracle::{Oracle, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Structural(#[from] Omega3Error),
    #[error(transparent)]
    Document(#[from] IoError),
}

/// One failed check, located at a pair where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Closed-form dimension differs from the oracle.
    Dimension {
        pair: (Vertex, Vertex),
        structural: usize,
        oracle: usize,
    },
    /// Number of generators differs from the oracle dimension.
    Count {
        pair: (Vertex, Vertex),
        generators: usize,
        oracle: usize,
    },
    /// Generator `index` has terms outside the pair's cluster.
    Cluster {
        pair: (Vertex, Vertex),
        index: usize,
    },
    /// Generator `index` or its boundary leaves the allowed paths.
    NotInvariant {
        pair: (Vertex, Vertex),
        index: usize,
    },
    /// The generators are linearly dependent.
    Rank {
        pair: (Vertex, Vertex),
        rank: usize,
        generators: usize,
    },
    /// A basis document was produced for a different graph.
    Digest { expected: String, found: String },
}

/// Outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub field: String,
    pub pairs_checked: usize,
    pub oracle_dim: usize,
    pub generators: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Human-readable summary, with one line per failure.
    pub fn render(&self, g: &Digraph) -> String {
        let mut out = String::new();
        let pair = |(a, b): (Vertex, Vertex)| format!("({}, {})", g.label(a), g.label(b));
        for f in &self.failures {
            let line = match f {
                Failure::Dimension {
                    pair: p,
                    structural,
                    oracle,
                } => {
                    format!(
                        "FAIL pair {}: structural dim {structural}, oracle dim {oracle}",
                        pair(*p)
                    )
                }
                Failure::Count {
                    pair: p,
                    generators,
                    oracle,
                } => {
                    format!(
                        "FAIL pair {}: {generators} generators, oracle dim {oracle}",
                        pair(*p)
                    )
                }
                Failure::Cluster { pair: p, index } => {
                    format!(
                        "FAIL pair {}: generator {index} leaves the cluster",
                        pair(*p)
                    )
                }
                Failure::NotInvariant { pair: p, index } => {
                    format!(
                        "FAIL pair {}: generator {index} is not boundary-invariant",
                        pair(*p)
                    )
                }
                Failure::Rank {
                    pair: p,
                    rank,
                    generators,
                } => {
                    format!(
                        "FAIL pair {}: rank {rank} of {generators} generators",
                        pair(*p)
                    )
                }
                Failure::Digest { expected, found } => {
                    format!("FAIL graph digest: document {found}, input {expected}")
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&self.to_string());
        out.push('\n');
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verify: {} ({} pairs, dim Omega3 = {}, {} generators, field {})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.pairs_checked,
            self.oracle_dim,
            self.generators,
            self.field
        )
    }
}

/// Oracle dimensions for the selected pairs (all pairs when `None`),
/// nonzero entries only.
fn oracle_dims<F: Field>(
    g: &Digraph,
    oracle: &Oracle<F>,
    pairs: Option<&[(Vertex, Vertex)]>,
) -> Result<BTreeMap<(Vertex, Vertex), usize>, OracleError> {
    match pairs {
        None => oracle.pair_dims(g, 3),
        Some(pairs) => {
            let mut dims = BTreeMap::new();
            for &(a, b) in pairs {
                let d = oracle.omega_pair_dim(g, 3, a, b)?;
                if d > 0 {
                    dims.insert((a, b), d);
                }
            }
            Ok(dims)
        }
    }
}

/// Checks claimed per-pair generators against the oracle. Pairs the oracle
/// reports but `claimed` omits count as zero generators.
pub fn verify_chains<F: Field>(
    g: &Digraph,
    oracle: &Oracle<F>,
    claimed: &BTreeMap<(Vertex, Vertex), Vec<Chain>>,
    pairs: Option<&[(Vertex, Vertex)]>,
) -> Result<VerifyReport, VerifyError> {
    let truth = oracle_dims(g, oracle, pairs)?;
    let keys: BTreeSet<(Vertex, Vertex)> = truth
        .keys()
        .chain(
            claimed
                .keys()
                .filter(|p| pairs.is_none_or(|sel| sel.contains(p))),
        )
        .copied()
        .collect();
    let empty = Vec::new();
    let mut failures = Vec::new();
    let mut generators = 0;
    for &pair in &keys {
        let chains = claimed.get(&pair).unwrap_or(&empty);
        let want = truth.get(&pair).copied().unwrap_or(0);
        generators += chains.len();
        if chains.len() != want {
            failures.push(Failure::Count {
                pair,
                generators: chains.len(),
                oracle: want,
            });
        }
        for (index, chain) in chains.iter().enumerate() {
            if chain.cluster_endpoints() != Some(pair) {
                failures.push(Failure::Cluster { pair, index });
            }
            if !is_invariant(chain, g) {
                failures.push(Failure::NotInvariant { pair, index });
            }
        }
        let rank = oracle.rank_of_integer(chains)?;
        if rank != chains.len() {
            failures.push(Failure::Rank {
                pair,
                rank,
                generators: chains.len(),
            });
        }
    }
    Ok(VerifyReport {
        field: oracle.field().descriptor(),
        pairs_checked: keys.len(),
        oracle_dim: truth.values().sum(),
        generators,
        failures,
    })
}

/// Full check of the structural algorithm on `g`: closed-form dimensions,
/// then the emitted basis.
pub fn verify_graph<F: Field>(
    g: &Digraph,
    oracle: &Oracle<F>,
    options: &BasisOptions,
) -> Result<VerifyReport, VerifyError> {
    let pairs = options.pairs.as_deref();
    let structural = omega3_pair_dims(g, options)?;
    let truth = oracle_dims(g, oracle, pairs)?;
    let basis = omega3_basis_with(g, options)?;
    let claimed: BTreeMap<_, _> = basis
        .pairs
        .iter()
        .map(|(&k, p)| (k, p.elements.iter().map(|e| e.chain.clone()).collect()))
        .collect();
    let mut report = verify_chains(g, oracle, &claimed, pairs)?;
    let keys: BTreeSet<_> = structural.keys().chain(truth.keys()).copied().collect();
    let mismatches = keys.into_iter().filter_map(|pair| {
        let s = structural.get(&pair).copied().unwrap_or(0);
        let o = truth.get(&pair).copied().unwrap_or(0);
        (s != o).then_some(Failure::Dimension {
            pair,
            structural: s,
            oracle: o,
        })
    });
    let mut failures: Vec<Failure> = mismatches.collect();
    failures.append(&mut report.failures);
    report.failures = failures;
    Ok(report)
}

/// Replays a basis document against `g`.
pub fn verify_document<F: Field>(
    g: &Digraph,
    oracle: &Oracle<F>,
    doc: &BasisDocument,
) -> Result<VerifyReport, VerifyError> {
    let claimed: BTreeMap<_, _> = doc.chains(g)?.into_iter().collect();
    let mut report = verify_chains(g, oracle, &claimed, None)?;
    let expected = digest(g);
    if doc.graph.digest != expected {
        report.failures.insert(
            0,
            Failure::Digest {
                expected,
                found: doc.graph.digest.clone(),
            },
        );
    }
    Ok(report)
}
