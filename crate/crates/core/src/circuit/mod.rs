//! Arithmetic-circuit IR: a gate DAG with arbitrary fan-in and strict
//! add/mul alternation on every output-to-input path, plus the ABP model,
//! evaluation, expansion, parse-tree enumeration and depth-preserving
//! transforms in the submodules.

pub mod abp;
pub mod eval;
pub mod parse_tree;
pub mod poly;
pub mod transform;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Which polynomial family a circuit or oracle speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyKind {
    Hom,
    ColSub,
}

impl std::fmt::Display for PolyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolyKind::Hom => write!(f, "hom"),
            PolyKind::ColSub => write!(f, "colsub"),
        }
    }
}

/// Variable universe. `Hom` variables are identified under index swap and
/// stored as (min, max); `ColSub` indices follow the canonical (u < v) edge
/// orientation; `Aux` are the y-variables of the Hom→ColSub reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    Hom { i: u32, j: u32 },
    ColSub { u: u32, v: u32, i: u32, j: u32 },
    Aux { u: u32, v: u32 },
}

impl VariableId {
    pub fn hom(i: u32, j: u32) -> Self {
        VariableId::Hom {
            i: i.min(j),
            j: i.max(j),
        }
    }

    /// Variable for edge {u,v} with color `i` at u and `j` at v.
    pub fn colsub(u: u32, v: u32, i: u32, j: u32) -> Self {
        if u <= v {
            VariableId::ColSub { u, v, i, j }
        } else {
            VariableId::ColSub { u: v, v: u, i: j, j: i }
        }
    }

    pub fn aux(u: u32, v: u32) -> Self {
        VariableId::Aux {
            u: u.min(v),
            v: u.max(v),
        }
    }

    pub fn spelling(&self) -> String {
        match self {
            VariableId::Hom { i, j } => format!("x[{i},{j}]"),
            VariableId::ColSub { u, v, i, j } => format!("x[e={u}-{v}][{i},{j}]"),
            VariableId::Aux { u, v } => format!("y[{u}-{v}]"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad variable spelling '{s}'"));
        if let Some(rest) = s.strip_prefix("y[") {
            let body = rest.strip_suffix(']').ok_or_else(bad)?;
            let (u, v) = body.split_once('-').ok_or_else(bad)?;
            return Ok(VariableId::aux(
                u.parse().map_err(|_| bad())?,
                v.parse().map_err(|_| bad())?,
            ));
        }
        if let Some(rest) = s.strip_prefix("x[e=") {
            let (edge, tail) = rest.split_once(']').ok_or_else(bad)?;
            let (u, v) = edge.split_once('-').ok_or_else(bad)?;
            let body = tail
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (i, j) = body.split_once(',').ok_or_else(bad)?;
            return Ok(VariableId::colsub(
                u.parse().map_err(|_| bad())?,
                v.parse().map_err(|_| bad())?,
                i.parse().map_err(|_| bad())?,
                j.parse().map_err(|_| bad())?,
            ));
        }
        if let Some(rest) = s.strip_prefix("x[") {
            let body = rest.strip_suffix(']').ok_or_else(bad)?;
            let (i, j) = body.split_once(',').ok_or_else(bad)?;
            return Ok(VariableId::hom(
                i.parse().map_err(|_| bad())?,
                j.parse().map_err(|_| bad())?,
            ));
        }
        Err(bad())
    }
}

pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    Input(VariableId),
    Const(BigRational),
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    /// Children in evaluation order; repeats are allowed and meaningful
    /// (an add gate listing a child twice doubles its coefficient).
    pub children: Vec<GateId>,
}

/// Immutable gate DAG. Children always precede parents, the gate kinds
/// alternate on every output-to-input path, and single-child add/mul gates
/// do not occur (the builder collapses them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: GateId,
}

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Input variables occurring in the circuit, in canonical order.
    pub fn variables(&self) -> Vec<VariableId> {
        let mut vars: Vec<VariableId> = self
            .gates
            .iter()
            .filter_map(|g| match g.kind {
                GateKind::Input(v) => Some(v),
                _ => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Number of add and mul gates (the DP cost, excluding inputs/constants).
    pub fn arithmetic_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.kind, GateKind::Add | GateKind::Mul))
            .count()
    }
}

/// Structural measurements: `size` counts every gate including inputs,
/// `depth` counts add/mul gates on the longest path, `product_depth` only
/// mul gates, and `formal_degree` is computed bottom-up (max at add gates,
/// sum at mul gates, 1 for variables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size: usize,
    pub depth: u32,
    pub product_depth: u32,
    pub monotone: bool,
    pub skew: bool,
    pub formal_degree: u64,
}

pub fn metrics(c: &Circuit) -> Metrics {
    let mut depth = vec![0u32; c.len()];
    let mut pdepth = vec![0u32; c.len()];
    let mut degree = vec![0u64; c.len()];
    let mut monotone = true;
    let mut skew = true;
    for (id, gate) in c.gates().iter().enumerate() {
        match &gate.kind {
            GateKind::Input(_) => degree[id] = 1,
            GateKind::Const(r) => {
                if r.is_negative() {
                    monotone = false;
                }
            }
            GateKind::Add => {
                depth[id] = 1 + gate.children.iter().map(|&ch| depth[ch]).max().unwrap_or(0);
                pdepth[id] = gate.children.iter().map(|&ch| pdepth[ch]).max().unwrap_or(0);
                degree[id] = gate.children.iter().map(|&ch| degree[ch]).max().unwrap_or(0);
            }
            GateKind::Mul => {
                depth[id] = 1 + gate.children.iter().map(|&ch| depth[ch]).max().unwrap_or(0);
                pdepth[id] = 1 + gate.children.iter().map(|&ch| pdepth[ch]).max().unwrap_or(0);
                degree[id] = gate.children.iter().map(|&ch| degree[ch]).sum();
                let internal = gate
                    .children
                    .iter()
                    .filter(|&&ch| matches!(c.gate(ch).kind, GateKind::Add | GateKind::Mul))
                    .count();
                if internal > 1 {
                    skew = false;
                }
            }
        }
    }
    Metrics {
        size: c.len(),
        depth: depth[c.output],
        product_depth: pdepth[c.output],
        monotone,
        skew,
        formal_degree: degree[c.output],
    }
}

/// Constructs circuits maintaining the alternation invariant: same-kind
/// children are inlined (keeping the product-depth equal to the number of
/// multiplication layers), single-child gates collapse to the child,
/// constants fold inside products, and exact zeros are dropped from sums.
/// `finish` removes gates unreachable from the output.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    inputs: HashMap<VariableId, GateId>,
    consts: HashMap<BigRational, GateId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn kind(&self, id: GateId) -> &GateKind {
        &self.gates[id].kind
    }

    pub fn children(&self, id: GateId) -> &[GateId] {
        &self.gates[id].children
    }

    pub fn input(&mut self, var: VariableId) -> GateId {
        if let Some(&id) = self.inputs.get(&var) {
            return id;
        }
        let id = self.push(GateKind::Input(var), vec![]);
        self.inputs.insert(var, id);
        id
    }

    pub fn constant(&mut self, value: BigRational) -> GateId {
        if let Some(&id) = self.consts.get(&value) {
            return id;
        }
        let id = self.push(GateKind::Const(value.clone()), vec![]);
        self.consts.insert(value, id);
        id
    }

    pub fn constant_int(&mut self, value: i64) -> GateId {
        self.constant(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn add(&mut self, children: Vec<GateId>) -> GateId {
        let mut flat = Vec::with_capacity(children.len());
        for ch in children {
            match &self.gates[ch].kind {
                GateKind::Add => flat.extend(self.gates[ch].children.iter().copied()),
                GateKind::Const(r) if r.is_zero() => {}
                _ => flat.push(ch),
            }
        }
        match flat.len() {
            0 => self.constant_int(0),
            1 => flat[0],
            _ => self.push(GateKind::Add, flat),
        }
    }

    pub fn mul(&mut self, children: Vec<GateId>) -> GateId {
        let mut flat = Vec::with_capacity(children.len());
        for ch in children {
            match &self.gates[ch].kind {
                GateKind::Mul => flat.extend(self.gates[ch].children.iter().copied()),
                _ => flat.push(ch),
            }
        }
        let mut coeff = BigRational::one();
        let mut pure = Vec::with_capacity(flat.len());
        for ch in flat {
            match &self.gates[ch].kind {
                GateKind::Const(r) => {
                    if r.is_zero() {
                        return self.constant_int(0);
                    }
                    coeff *= r;
                }
                _ => pure.push(ch),
            }
        }
        if !coeff.is_one() {
            let c = self.constant(coeff);
            pure.push(c);
        }
        match pure.len() {
            0 => self.constant_int(1),
            1 => pure[0],
            _ => self.push(GateKind::Mul, pure),
        }
    }

    fn push(&mut self, kind: GateKind, children: Vec<GateId>) -> GateId {
        let id = self.gates.len();
        self.gates.push(Gate { kind, children });
        id
    }

    pub fn finish(self, output: GateId) -> Circuit {
        let mut alive = vec![false; self.gates.len()];
        let mut stack = vec![output];
        alive[output] = true;
        while let Some(id) = stack.pop() {
            for &ch in &self.gates[id].children {
                if !alive[ch] {
                    alive[ch] = true;
                    stack.push(ch);
                }
            }
        }
        let mut remap = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (id, gate) in self.gates.into_iter().enumerate() {
            if alive[id] {
                remap[id] = gates.len();
                gates.push(Gate {
                    kind: gate.kind,
                    children: gate.children.iter().map(|&ch| remap[ch]).collect(),
                });
            }
        }
        Circuit {
            gates,
            output: remap[output],
        }
    }
}

// --- serialization ---

#[derive(Serialize, Deserialize)]
struct GateJson {
    id: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "const")]
    constant: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    output: usize,
    gates: Vec<GateJson>,
}

pub fn to_json(c: &Circuit) -> String {
    let doc = CircuitJson {
        output: c.output,
        gates: c
            .gates
            .iter()
            .enumerate()
            .map(|(id, g)| GateJson {
                id,
                kind: match g.kind {
                    GateKind::Input(_) => "input",
                    GateKind::Const(_) => "const",
                    GateKind::Add => "add",
                    GateKind::Mul => "mul",
                }
                .into(),
                children: g.children.clone(),
                var: match &g.kind {
                    GateKind::Input(v) => Some(v.spelling()),
                    _ => None,
                },
                constant: match &g.kind {
                    GateKind::Const(r) => Some(r.to_string()),
                    _ => None,
                },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("circuit serializes")
}

pub fn from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitJson = serde_json::from_str(text)?;
    let index: HashMap<usize, usize> = doc
        .gates
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id, i))
        .collect();
    if index.len() != doc.gates.len() {
        return Err(Error::InvalidInput("duplicate gate id".into()));
    }
    let mut gates = Vec::with_capacity(doc.gates.len());
    for g in &doc.gates {
        let kind = match g.kind.as_str() {
            "input" => GateKind::Input(VariableId::parse(
                g.var
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("input gate without var".into()))?,
            )?),
            "const" => {
                let text = g
                    .constant
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("const gate without value".into()))?;
                GateKind::Const(
                    text.parse::<BigRational>()
                        .map_err(|_| Error::InvalidInput(format!("bad constant '{text}'")))?,
                )
            }
            "add" => GateKind::Add,
            "mul" => GateKind::Mul,
            other => return Err(Error::InvalidInput(format!("unknown gate kind '{other}'"))),
        };
        let children = g
            .children
            .iter()
            .map(|id| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("unknown child id {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        gates.push(Gate { kind, children });
    }
    let output = *index
        .get(&doc.output)
        .ok_or_else(|| Error::InvalidInput("unknown output id".into()))?;
    for (id, gate) in gates.iter().enumerate() {
        if gate.children.iter().any(|&ch| ch >= id) {
            return Err(Error::InvalidInput(
                "gates must be listed children-first".into(),
            ));
        }
    }
    Ok(Circuit { gates, output })
}

pub fn to_dot(c: &Circuit, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {name} {{");
    let _ = writeln!(s, "  rankdir=BT;");
    for (id, gate) in c.gates().iter().enumerate() {
        let (shape, label) = match &gate.kind {
            GateKind::Input(v) => ("plaintext", v.spelling()),
            GateKind::Const(r) => ("plaintext", r.to_string()),
            GateKind::Add => ("ellipse", "+".into()),
            GateKind::Mul => ("box", "*".into()),
        };
        let _ = writeln!(s, "  g{id} [shape={shape}, label=\"{label}\"];");
    }
    for (id, gate) in c.gates().iter().enumerate() {
        for &ch in &gate.children {
            let _ = writeln!(s, "  g{ch} -> g{id};");
        }
    }
    let _ = writeln!(s, "  g{} [peripheries=2];", c.output());
    s.push_str("}\n");
    s
}
