//! Algebraic branching programs: a labeled source-to-sink DAG summing the
//! products of edge labels along all s→t paths, and the conversion into an
//! equivalent skew circuit.

use super::{Circuit, CircuitBuilder, GateId, VariableId};
use crate::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbpLabel {
    Var(VariableId),
    Const(BigRational),
}

impl AbpLabel {
    fn spelling(&self) -> String {
        match self {
            AbpLabel::Var(v) => v.spelling(),
            AbpLabel::Const(r) => r.to_string(),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        if s.starts_with('x') || s.starts_with('y') {
            Ok(AbpLabel::Var(VariableId::parse(s)?))
        } else {
            Ok(AbpLabel::Const(s.parse::<BigRational>().map_err(|_| {
                Error::InvalidInput(format!("bad edge label '{s}'"))
            })?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbpEdge {
    pub from: usize,
    pub to: usize,
    pub label: AbpLabel,
}

/// Node ids are 0..node_count with designated source and sink. Edges must
/// point from lower to higher node id, which keeps the program acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abp {
    pub node_count: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<AbpEdge>,
}

impl Abp {
    pub fn validate(&self) -> Result<()> {
        if self.source >= self.node_count || self.sink >= self.node_count {
            return Err(Error::InvalidInput("source/sink out of range".into()));
        }
        for e in &self.edges {
            if e.from >= e.to || e.to >= self.node_count {
                return Err(Error::InvalidInput(format!(
                    "edge {}->{} must point forward within range",
                    e.from, e.to
                )));
            }
        }
        Ok(())
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        self.node_count
    }

    /// Maximum number of edges on a source-to-sink path.
    pub fn length(&self) -> u32 {
        let mut dist = vec![i64::MIN; self.node_count];
        dist[self.source] = 0;
        for e in &self.edges {
            if dist[e.from] != i64::MIN {
                dist[e.to] = dist[e.to].max(dist[e.from] + 1);
            }
        }
        dist[self.sink].max(0) as u32
    }

    pub fn is_monotone(&self) -> bool {
        use num_traits::Signed;
        self.edges.iter().all(|e| match &e.label {
            AbpLabel::Const(r) => !r.is_negative(),
            AbpLabel::Var(_) => true,
        })
    }
}

/// Converts an ABP into a skew circuit: node values accumulate as sums of
/// (predecessor value × edge label), so every product has at most one
/// internal child. Monotone programs yield monotone circuits and the
/// product-depth never exceeds the ABP length.
pub fn abp_to_circuit(a: &Abp) -> Result<Circuit> {
    a.validate()?;
    let mut b = CircuitBuilder::new();
    let mut incoming: Vec<Vec<(usize, &AbpLabel)>> = vec![Vec::new(); a.node_count];
    for e in &a.edges {
        incoming[e.to].push((e.from, &e.label));
    }
    let one = b.constant_int(1);
    let mut value: Vec<Option<GateId>> = vec![None; a.node_count];
    value[a.source] = Some(one);
    for node in 0..a.node_count {
        if node == a.source {
            continue;
        }
        let mut terms = Vec::new();
        for &(from, label) in &incoming[node] {
            let Some(upstream) = value[from] else {
                continue;
            };
            let leaf = match label {
                AbpLabel::Var(v) => b.input(*v),
                AbpLabel::Const(r) => b.constant(r.clone()),
            };
            terms.push(b.mul(vec![upstream, leaf]));
        }
        if !terms.is_empty() {
            value[node] = Some(b.add(terms));
        }
    }
    let out = value[a.sink]
        .ok_or_else(|| Error::InvalidInput("sink unreachable from source".into()))?;
    Ok(b.finish(out))
}

// --- serialization ---

#[derive(Serialize, Deserialize)]
struct AbpEdgeJson {
    from: usize,
    to: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct AbpJson {
    node_count: usize,
    source: usize,
    sink: usize,
    edges: Vec<AbpEdgeJson>,
}

pub fn to_json(a: &Abp) -> String {
    let doc = AbpJson {
        node_count: a.node_count,
        source: a.source,
        sink: a.sink,
        edges: a
            .edges
            .iter()
            .map(|e| AbpEdgeJson {
                from: e.from,
                to: e.to,
                label: e.label.spelling(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("abp serializes")
}

pub fn from_json(text: &str) -> Result<Abp> {
    let doc: AbpJson = serde_json::from_str(text)?;
    let abp = Abp {
        node_count: doc.node_count,
        source: doc.source,
        sink: doc.sink,
        edges: doc
            .edges
            .into_iter()
            .map(|e| {
                Ok(AbpEdge {
                    from: e.from,
                    to: e.to,
                    label: AbpLabel::parse(&e.label)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    abp.validate()?;
    Ok(abp)
}

pub fn to_dot(a: &Abp, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {name} {{");
    let _ = writeln!(s, "  rankdir=LR;");
    for n in 0..a.node_count {
        let mark = if n == a.source {
            " [shape=diamond, label=\"s\"]"
        } else if n == a.sink {
            " [shape=diamond, label=\"t\"]"
        } else {
            " [shape=circle, label=\"\"]"
        };
        let _ = writeln!(s, "  v{n}{mark};");
    }
    for e in &a.edges {
        let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.label.spelling());
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::poly::expand;
    use super::super::{metrics, GateKind};
    use super::*;
    use num_traits::One;

    fn x(i: u32, j: u32) -> AbpLabel {
        AbpLabel::Var(VariableId::hom(i, j))
    }

    #[test]
    fn single_edge_becomes_single_input() {
        let a = Abp {
            node_count: 2,
            source: 0,
            sink: 1,
            edges: vec![AbpEdge { from: 0, to: 1, label: x(1, 2) }],
        };
        let c = abp_to_circuit(&a).unwrap();
        assert_eq!(c.len(), 1);
        assert!(matches!(c.gate(c.output()).kind, GateKind::Input(_)));
    }

    #[test]
    fn two_edge_path_multiplies_labels() {
        let a = Abp {
            node_count: 3,
            source: 0,
            sink: 2,
            edges: vec![
                AbpEdge { from: 0, to: 1, label: x(1, 1) },
                AbpEdge { from: 1, to: 2, label: x(2, 2) },
            ],
        };
        let c = abp_to_circuit(&a).unwrap();
        let m = metrics(&c);
        assert!(m.skew);
        assert_eq!(m.product_depth, 1);
        let p = expand(&c).unwrap();
        assert_eq!(
            p.coefficient(&vec![VariableId::hom(1, 1), VariableId::hom(2, 2)]),
            BigRational::one()
        );
    }

    #[test]
    fn parallel_paths_sum() {
        let a = Abp {
            node_count: 4,
            source: 0,
            sink: 3,
            edges: vec![
                AbpEdge { from: 0, to: 1, label: x(1, 1) },
                AbpEdge { from: 1, to: 3, label: x(1, 2) },
                AbpEdge { from: 0, to: 2, label: x(2, 2) },
                AbpEdge { from: 2, to: 3, label: x(1, 2) },
            ],
        };
        let c = abp_to_circuit(&a).unwrap();
        assert!(metrics(&c).skew);
        let p = expand(&c).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(a.length(), 2);
    }

    #[test]
    fn length_is_longest_path() {
        let a = Abp {
            node_count: 4,
            source: 0,
            sink: 3,
            edges: vec![
                AbpEdge { from: 0, to: 3, label: x(1, 1) },
                AbpEdge { from: 0, to: 1, label: x(1, 1) },
                AbpEdge { from: 1, to: 2, label: x(1, 2) },
                AbpEdge { from: 2, to: 3, label: x(2, 2) },
            ],
        };
        assert_eq!(a.length(), 3);
    }

    #[test]
    fn backward_edges_rejected() {
        let a = Abp {
            node_count: 2,
            source: 0,
            sink: 1,
            edges: vec![AbpEdge { from: 1, to: 1, label: x(1, 1) }],
        };
        assert!(a.validate().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let a = Abp {
            node_count: 3,
            source: 0,
            sink: 2,
            edges: vec![
                AbpEdge { from: 0, to: 1, label: x(1, 2) },
                AbpEdge {
                    from: 1,
                    to: 2,
                    label: AbpLabel::Const(BigRational::from_integer(3.into())),
                },
            ],
        };
        let text = to_json(&a);
        let back = from_json(&text).unwrap();
        assert_eq!(a, back);
        assert_eq!(to_json(&back), text);
    }
}
