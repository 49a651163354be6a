//! Edge-list input, JSON basis documents, and DOT export.
//!
//! Edge-list grammar: one entry per line; `#` starts a comment; blank lines
//! are skipped; `u v` declares the arrow `u → v`; a lone token declares a
//! vertex. Tokens are arbitrary non-whitespace UTF-8.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chains::{Chain, ElemPath};
use crate::digraph::{Digraph, DigraphBuilder, GraphError, Vertex};
use crate::omega3::{Omega3Basis, Provenance, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: self-loop on `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("basis document: {0}")]
    Schema(String),
}

/// Parses the edge-list format. Vertex ids follow first appearance.
pub fn parse_edge_list(text: &str) -> Result<Digraph, IoError> {
    let mut builder = DigraphBuilder::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => {
                builder.vertex(v);
            }
            [u, v] => {
                builder.arrow(u, v).map_err(|e| match e {
                    GraphError::SelfLoop(label) => IoError::SelfLoop { line, label },
                    other => IoError::Parse {
                        line,
                        reason: other.to_string(),
                    },
                })?;
            }
            more => {
                return Err(IoError::Parse {
                    line,
                    reason: format!("expected one or two tokens, found {}", more.len()),
                })
            }
        }
    }
    Ok(builder.build())
}

pub fn parse_edge_list_bytes(bytes: &[u8]) -> Result<Digraph, IoError> {
    parse_edge_list(std::str::from_utf8(bytes).map_err(|_| IoError::Utf8)?)
}

/// Arrows in canonical order, then isolated vertices, one per line.
pub fn emit_edge_list(g: &Digraph) -> String {
    let mut out = String::new();
    for (u, v) in g.arrows() {
        let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
    }
    for v in g.isolated_vertices() {
        let _ = writeln!(out, "{}", g.label(v));
    }
    out
}

fn dot_quote(label: &str) -> String {
    let mut s = String::with_capacity(label.len() + 2);
    s.push('"');
    for ch in label.chars() {
        if ch == '"' || ch == '\\' {
            s.push('\\');
        }
        s.push(ch);
    }
    s.push('"');
    s
}

/// `digraph { … }` with isolated vertices as bare nodes followed by arrows in
/// canonical order.
pub fn export_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph {\n");
    for v in g.isolated_vertices() {
        let _ = writeln!(out, "  {};", dot_quote(g.label(v)));
    }
    for (u, v) in g.arrows() {
        let _ = writeln!(
            out,
            "  {} -> {};",
            dot_quote(g.label(u)),
            dot_quote(g.label(v))
        );
    }
    out.push_str("}\n");
    out
}

/// SHA-256 (hex) of the graph's canonical text: `v\t<label>` for every
/// vertex, then `a\t<tail>\t<head>` for every arrow, each sorted by label,
/// newline-terminated.
pub fn digest(g: &Digraph) -> String {
    let mut vertices: Vec<&str> = g.vertices().map(|v| g.label(v)).collect();
    vertices.sort_unstable();
    let mut arrows: Vec<(&str, &str)> = g.arrows().map(|(u, v)| (g.label(u), g.label(v))).collect();
    arrows.sort_unstable();
    let mut hasher = Sha256::new();
    for v in vertices {
        hasher.update(format!("v\t{v}\n"));
    }
    for (u, v) in arrows {
        hasher.update(format!("a\t{u}\t{v}\n"));
    }
    hex::encode(hasher.finalize())
}

/// Generators of one endpoint pair.
pub type PairChains = ((Vertex, Vertex), Vec<Chain>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSummary {
    pub vertices: usize,
    pub arrows: usize,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub path: Vec<String>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub tail: String,
    pub head: String,
    /// `delta1` or `delta2` for bridge edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProvenanceRecord {
    Cycle {
        edge: EdgeRecord,
        cycle: Vec<String>,
    },
    Terminal {
        edge: EdgeRecord,
    },
    Bridge {
        component: usize,
        base: EdgeRecord,
        partner: EdgeRecord,
        walk: Vec<String>,
        /// Both edges on the same side of the component.
        same_side: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    pub kind: String,
    pub terms: Vec<TermRecord>,
    pub provenance: ProvenanceRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub dim: usize,
    pub generators: Vec<GeneratorRecord>,
}

/// Serialisable form of a structural basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDocument {
    pub graph: GraphSummary,
    pub field: String,
    pub pairs: Vec<PairRecord>,
    pub total_dim: usize,
    pub version: String,
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Outgoing => "delta1",
        Side::Incoming => "delta2",
    }
}

impl BasisDocument {
    pub fn from_basis(g: &Digraph, basis: &Omega3Basis, field: &str) -> Self {
        let label = |v: Vertex| g.label(v).to_owned();
        let edge = |(u, v): (Vertex, Vertex), side: Option<Side>| EdgeRecord {
            tail: label(u),
            head: label(v),
            side: side.map(|s| side_name(s).to_owned()),
        };
        let mut pairs: Vec<PairRecord> = basis
            .pairs
            .values()
            .map(|pair| PairRecord {
                a: label(pair.a),
                b: label(pair.b),
                dim: pair.dim(),
                generators: pair
                    .elements
                    .iter()
                    .map(|e| GeneratorRecord {
                        kind: e.kind().as_str().to_owned(),
                        terms: e
                            .chain
                            .iter()
                            .map(|(p, &c)| TermRecord {
                                path: p.vertices().iter().map(|&v| label(v)).collect(),
                                coeff: c,
                            })
                            .collect(),
                        provenance: match &e.provenance {
                            Provenance::Cycle { edge: e0, cycle } => ProvenanceRecord::Cycle {
                                edge: edge(*e0, None),
                                cycle: cycle.iter().map(|&v| label(v)).collect(),
                            },
                            Provenance::Terminal { edge: e0 } => ProvenanceRecord::Terminal {
                                edge: edge(*e0, None),
                            },
                            Provenance::Bridge {
                                component,
                                base,
                                partner,
                                walk,
                            } => ProvenanceRecord::Bridge {
                                component: *component,
                                base: edge(base.0, Some(base.1)),
                                partner: edge(partner.0, Some(partner.1)),
                                walk: walk.iter().map(|&v| label(v)).collect(),
                                same_side: base.1 == partner.1,
                            },
                        },
                    })
                    .collect(),
            })
            .collect();
        pairs.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
        BasisDocument {
            graph: GraphSummary {
                vertices: g.vertex_count(),
                arrows: g.arrow_count(),
                digest: digest(g),
            },
            field: field.to_owned(),
            pairs,
            total_dim: basis.total_dim(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    /// Checks the document-level invariants.
    pub fn validate(&self) -> Result<(), IoError> {
        let sum: usize = self.pairs.iter().map(|p| p.dim).sum();
        if sum != self.total_dim {
            return Err(IoError::Schema(format!(
                "total_dim {} differs from the sum of pair dims {sum}",
                self.total_dim
            )));
        }
        for pair in &self.pairs {
            for (k, gen) in pair.generators.iter().enumerate() {
                if !matches!(gen.kind.as_str(), "B0" | "B1" | "B2") {
                    return Err(IoError::Schema(format!(
                        "pair ({}, {}) generator {k}: unknown kind `{}`",
                        pair.a, pair.b, gen.kind
                    )));
                }
                for term in &gen.terms {
                    if term.path.len() != 4 || !(term.coeff == 1 || term.coeff == -1) {
                        return Err(IoError::Schema(format!(
                            "pair ({}, {}) generator {k}: terms must be 4-vertex paths with coefficient ±1",
                            pair.a, pair.b
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Generators resolved against `g`, per pair in document order.
    pub fn chains(&self, g: &Digraph) -> Result<Vec<PairChains>, IoError> {
        let resolve = |label: &str| {
            g.vertex(label)
                .ok_or_else(|| IoError::Schema(format!("unknown vertex `{label}`")))
        };
        self.pairs
            .iter()
            .map(|pair| {
                let key = (resolve(&pair.a)?, resolve(&pair.b)?);
                let chains = pair
                    .generators
                    .iter()
                    .map(|gen| {
                        let mut chain = Chain::zero(3);
                        for term in &gen.terms {
                            let ids = term
                                .path
                                .iter()
                                .map(|l| resolve(l))
                                .collect::<Result<Vec<_>, _>>()?;
                            let path = ElemPath::new(ids)
                                .ok_or_else(|| IoError::Schema("empty path".into()))?;
                            chain
                                .add_term(path, term.coeff)
                                .map_err(|e| IoError::Schema(e.to_string()))?;
                        }
                        Ok(chain)
                    })
                    .collect::<Result<Vec<_>, IoError>>()?;
                Ok((key, chains))
            })
            .collect()
    }
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
pub fn write_basis(doc: &BasisDocument) -> Vec<u8> {
    // `Value` objects are ordered maps, so keys come out sorted.
    let value = serde_json::to_value(doc).expect("document serialises");
    let mut bytes = serde_json::to_vec_pretty(&value).expect("value serialises");
    bytes.push(b'\n');
    bytes
}

pub fn read_basis(bytes: &[u8]) -> Result<BasisDocument, IoError> {
    let doc: BasisDocument =
        serde_json::from_slice(bytes).map_err(|e| IoError::Schema(e.to_string()))?;
    doc.validate()?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::trapezohedron;
    use crate::omega3::omega3_basis;

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("a b\nb a\n").unwrap();
        assert_eq!((g.vertex_count(), g.arrow_count()), (2, 2));
        let g = parse_edge_list("# comment\na b\n\nc\n").unwrap();
        assert_eq!((g.vertex_count(), g.arrow_count()), (3, 1));
        assert_eq!(
            parse_edge_list("a a\n"),
            Err(IoError::SelfLoop {
                line: 1,
                label: "a".into()
            })
        );
        assert!(matches!(
            parse_edge_list("a b\nx y z\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
        let g = parse_edge_list("α β # trailing\n").unwrap();
        assert_eq!(g.label(0), "α");
        assert_eq!(parse_edge_list_bytes(&[0xff, 0x20]), Err(IoError::Utf8));
    }

    #[test]
    fn dot_output() {
        let g = parse_edge_list("a b\nb a\n").unwrap();
        assert_eq!(
            export_dot(&g),
            "digraph {\n  \"a\" -> \"b\";\n  \"b\" -> \"a\";\n}\n"
        );
        let empty = parse_edge_list("").unwrap();
        assert_eq!(export_dot(&empty), "digraph {\n}\n");
        let t2 = trapezohedron(2).unwrap();
        let dot = export_dot(&t2);
        assert_eq!(dot.matches(" -> ").count(), 8);
        let mut nodes: Vec<&str> = dot.split('"').skip(1).step_by(2).collect();
        nodes.sort_unstable();
        nodes.dedup();
        assert_eq!(nodes.len(), 6);
        let lone = parse_edge_list("x\n").unwrap();
        assert_eq!(export_dot(&lone), "digraph {\n  \"x\";\n}\n");
    }

    #[test]
    fn basis_documents() {
        let t2 = trapezohedron(2).unwrap();
        let doc = BasisDocument::from_basis(&t2, &omega3_basis(&t2), "gf:32749");
        assert_eq!(doc.pairs.len(), 1);
        assert_eq!(doc.pairs[0].generators.len(), 1);
        assert_eq!(doc.pairs[0].generators[0].kind, "B0");
        assert_eq!(doc.pairs[0].generators[0].terms.len(), 4);
        let bytes = write_basis(&doc);
        assert_eq!(read_basis(&bytes).unwrap(), doc);
        assert_eq!(write_basis(&read_basis(&bytes).unwrap()), bytes);

        let empty = parse_edge_list("").unwrap();
        let doc = BasisDocument::from_basis(&empty, &omega3_basis(&empty), "rational");
        assert_eq!((doc.total_dim, doc.pairs.len()), (0, 0));

        assert!(matches!(read_basis(b"{}"), Err(IoError::Schema(_))));
        let mut bad = BasisDocument::from_basis(&t2, &omega3_basis(&t2), "gf:32749");
        bad.total_dim = 7;
        assert!(read_basis(&write_basis(&bad)).is_err());
    }

    #[test]
    fn keys_are_sorted() {
        let t2 = trapezohedron(2).unwrap();
        let doc = BasisDocument::from_basis(&t2, &omega3_basis(&t2), "gf:32749");
        let text = String::from_utf8(write_basis(&doc)).unwrap();
        let top: Vec<usize> = [
            "\"field\"",
            "\"graph\"",
            "\"pairs\"",
            "\"total_dim\"",
            "\"version\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(top.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn digest_ignores_ids() {
        let g1 = parse_edge_list("a b\nc d\n").unwrap();
        let g2 = parse_edge_list("c d\na b\n").unwrap();
        assert_eq!(digest(&g1), digest(&g2));
        assert_ne!(digest(&g1), digest(&parse_edge_list("a b\n").unwrap()));
    }
}
