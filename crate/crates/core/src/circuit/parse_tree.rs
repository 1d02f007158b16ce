//! Reduced parse trees: counting, lazy enumeration, and per-tree monomials.
//!
//! A reduced parse tree keeps the output gate, picks one child at every add
//! gate (the add itself is elided), keeps all children of every mul gate,
//! and bottoms out at input/const gates. Its value is the product of its
//! leaf labels, and the circuit's polynomial is the sum over all parse
//! trees.

use super::poly::Monomial;
use super::{Circuit, GateId, GateKind};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeSet;

pub type PtNodeId = usize;

/// Node of a reduced parse tree: a mul gate with children, or a leaf
/// input/const gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtNode {
    pub gate: GateId,
    pub children: Vec<PtNodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub root: PtNodeId,
    pub nodes: Vec<PtNode>,
    /// Every circuit gate on the chosen paths, including elided add gates.
    pub gates_visited: BTreeSet<GateId>,
}

impl ParseTree {
    /// Leaf gates in tree order (with repetition).
    pub fn leaves(&self, c: &Circuit) -> Vec<GateId> {
        self.nodes
            .iter()
            .filter(|n| !matches!(c.gate(n.gate).kind, GateKind::Mul))
            .map(|n| n.gate)
            .collect()
    }

    /// The monomial this tree produces and its constant factor.
    pub fn value(&self, c: &Circuit) -> (Monomial, BigRational) {
        let mut monomial = Vec::new();
        let mut coeff = BigRational::one();
        for gate in self.leaves(c) {
            match &c.gate(gate).kind {
                GateKind::Input(v) => monomial.push(*v),
                GateKind::Const(r) => coeff *= r,
                _ => unreachable!("leaves are input or const gates"),
            }
        }
        monomial.sort_unstable();
        (monomial, coeff)
    }
}

const COUNT_CAP: u128 = u128::MAX / 4;

fn per_gate_counts(c: &Circuit) -> Vec<u128> {
    let mut counts = vec![0u128; c.len()];
    for (id, gate) in c.gates().iter().enumerate() {
        counts[id] = match &gate.kind {
            GateKind::Input(_) | GateKind::Const(_) => 1,
            GateKind::Add => gate
                .children
                .iter()
                .fold(0u128, |acc, &ch| acc.saturating_add(counts[ch]))
                .min(COUNT_CAP),
            GateKind::Mul => gate
                .children
                .iter()
                .fold(1u128, |acc, &ch| acc.saturating_mul(counts[ch]))
                .min(COUNT_CAP),
        };
    }
    counts
}

/// Number of reduced parse trees of the output gate (saturating).
pub fn count_parse_trees(c: &Circuit) -> u128 {
    per_gate_counts(c)[c.output()]
}

/// Lazy stream over all reduced parse trees, in a fixed mixed-radix order.
/// Refuses when the count exceeds 10^6.
pub fn parse_trees(c: &Circuit) -> Result<impl Iterator<Item = ParseTree> + '_> {
    const CAP: u128 = 1_000_000;
    let counts = per_gate_counts(c);
    let total = counts[c.output()];
    if total > CAP {
        return Err(Error::Capacity(format!(
            "parse-tree enumeration refused: ~{total} trees exceeds cap {CAP}"
        )));
    }
    Ok((0..total as u64).map(move |idx| decode(c, &counts, idx as u128)))
}

fn decode(c: &Circuit, counts: &[u128], index: u128) -> ParseTree {
    let mut nodes = Vec::new();
    let mut visited = BTreeSet::new();
    let root = decode_gate(c, counts, c.output(), index, &mut nodes, &mut visited);
    ParseTree {
        root,
        nodes,
        gates_visited: visited,
    }
}

fn decode_gate(
    c: &Circuit,
    counts: &[u128],
    gate: GateId,
    mut index: u128,
    nodes: &mut Vec<PtNode>,
    visited: &mut BTreeSet<GateId>,
) -> PtNodeId {
    visited.insert(gate);
    match &c.gate(gate).kind {
        GateKind::Input(_) | GateKind::Const(_) => {
            nodes.push(PtNode {
                gate,
                children: vec![],
            });
            nodes.len() - 1
        }
        GateKind::Add => {
            // Pick the child whose count range covers the index; the add
            // itself is elided from the tree but recorded as visited.
            for &ch in &c.gate(gate).children {
                if index < counts[ch] {
                    return decode_gate(c, counts, ch, index, nodes, visited);
                }
                index -= counts[ch];
            }
            unreachable!("index within count range")
        }
        GateKind::Mul => {
            let children: Vec<PtNodeId> = c
                .gate(gate)
                .children
                .iter()
                .map(|&ch| {
                    let sub = index % counts[ch];
                    index /= counts[ch];
                    decode_gate(c, counts, ch, sub, nodes, visited)
                })
                .collect();
            nodes.push(PtNode { gate, children });
            nodes.len() - 1
        }
    }
}
