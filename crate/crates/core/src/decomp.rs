//! Rooted tree and path decompositions, validity checking, edge
//! representations with their rep-height, and the pendant-bag attachment
//! that re-introduces degree-1 vertices above a decomposition of the pruned
//! graph.

use crate::graph::{Graph, Pruned, VertexId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub type NodeId = usize;

/// Rooted tree of bags. Node ids are dense indices; the root is its own
/// parent. The empty decomposition (zero nodes) is allowed and has height 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTreeDecomposition {
    parent: Vec<NodeId>,
    bags: Vec<Vec<VertexId>>,
    root: NodeId,
}

impl RootedTreeDecomposition {
    pub fn empty() -> Self {
        RootedTreeDecomposition {
            parent: Vec::new(),
            bags: Vec::new(),
            root: 0,
        }
    }

    pub fn single_bag(mut bag: Vec<VertexId>) -> Self {
        bag.sort_unstable();
        bag.dedup();
        RootedTreeDecomposition {
            parent: vec![0],
            bags: vec![bag],
            root: 0,
        }
    }

    /// Builds from explicit parent links; `parent[root] == root`.
    pub fn from_parts(root: NodeId, parent: Vec<NodeId>, bags: Vec<Vec<VertexId>>) -> Result<Self> {
        if parent.len() != bags.len() {
            return Err(Error::InvalidInput("parent/bag length mismatch".into()));
        }
        if parent.is_empty() {
            return Ok(Self::empty());
        }
        if root >= parent.len() || parent[root] != root {
            return Err(Error::InvalidInput("root must be its own parent".into()));
        }
        // Every node must reach the root without cycles.
        for start in 0..parent.len() {
            let (mut cur, mut steps) = (start, 0);
            while cur != root {
                if parent[cur] >= parent.len() || steps > parent.len() {
                    return Err(Error::InvalidInput(
                        "parent links do not form a rooted tree".into(),
                    ));
                }
                if parent[cur] == cur {
                    return Err(Error::InvalidInput("multiple roots".into()));
                }
                cur = parent[cur];
                steps += 1;
            }
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(RootedTreeDecomposition { parent, bags, root })
    }

    pub fn add_child(&mut self, parent: NodeId, mut bag: Vec<VertexId>) -> NodeId {
        bag.sort_unstable();
        bag.dedup();
        let id = self.parent.len();
        self.parent.push(parent);
        self.bags.push(bag);
        id
    }

    pub fn set_bag(&mut self, node: NodeId, mut bag: Vec<VertexId>) {
        bag.sort_unstable();
        bag.dedup();
        self.bags[node] = bag;
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> Option<NodeId> {
        if self.is_empty() {
            None
        } else {
            Some(self.root)
        }
    }

    pub fn parent(&self, node: NodeId) -> NodeId {
        self.parent[node]
    }

    pub fn bag(&self, node: NodeId) -> &[VertexId] {
        &self.bags[node]
    }

    pub fn bags(&self) -> impl Iterator<Item = (NodeId, &[VertexId])> {
        self.bags.iter().enumerate().map(|(i, b)| (i, b.as_slice()))
    }

    pub fn children(&self, node: NodeId) -> Vec<NodeId> {
        (0..self.len())
            .filter(|&i| self.parent[i] == node && i != self.root)
            .collect()
    }

    /// Number of nodes on the path from the root (depth 1) to `node`.
    pub fn depth(&self, node: NodeId) -> u32 {
        let mut d = 1;
        let mut cur = node;
        while cur != self.root {
            cur = self.parent[cur];
            d += 1;
        }
        d
    }

    /// Maximum number of nodes on a root-to-leaf path; a single node has
    /// height 1, the empty decomposition height 0.
    pub fn height(&self) -> u32 {
        (0..self.len()).map(|i| self.depth(i)).max().unwrap_or(0)
    }

    /// max |bag| − 1 over all bags; −1 when there are no bags.
    pub fn width(&self) -> i64 {
        self.bags
            .iter()
            .map(|b| b.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Re-hangs the tree at `new_root` by reversing the parent links on the
    /// old root-to-new-root path.
    pub fn re_root(&self, new_root: NodeId) -> Self {
        let mut out = self.clone();
        let mut path = vec![new_root];
        let mut cur = new_root;
        while cur != self.root {
            cur = self.parent[cur];
            path.push(cur);
        }
        for pair in path.windows(2) {
            out.parent[pair[1]] = pair[0];
        }
        out.parent[new_root] = new_root;
        out.root = new_root;
        out
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {name} {{");
        let _ = writeln!(s, "  node [shape=ellipse];");
        for (i, bag) in self.bags.iter().enumerate() {
            let label = bag.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(s, "  n{i} [label=\"{{{label}}}\"];");
        }
        for i in 0..self.len() {
            if i != self.root {
                let _ = writeln!(s, "  n{} -- n{};", self.parent[i], i);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Path decomposition as an ordered bag sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<VertexId>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    /// Number of bags.
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn width(&self) -> i64 {
        self.bags
            .iter()
            .map(|b| b.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// 1-based occupancy interval per vertex, or an error if some vertex
    /// occupies a non-contiguous index set.
    pub fn intervals(&self) -> Result<BTreeMap<VertexId, (usize, usize)>> {
        let mut iv: BTreeMap<VertexId, (usize, usize)> = BTreeMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                iv.entry(v)
                    .and_modify(|(_, r)| *r = i + 1)
                    .or_insert((i + 1, i + 1));
            }
        }
        for (&v, &(l, r)) in &iv {
            for j in l..=r {
                if !self.bags[j - 1].contains(&v) {
                    return Err(Error::InvalidInput(format!(
                        "vertex {v} occupies a non-contiguous bag range"
                    )));
                }
            }
        }
        Ok(iv)
    }

    /// Inverse of [`intervals`]: bag j = vertices whose interval covers j.
    pub fn from_intervals(len: usize, intervals: &BTreeMap<VertexId, (usize, usize)>) -> Self {
        let mut bags = vec![Vec::new(); len];
        for (&v, &(l, r)) in intervals {
            for bag in bags.iter_mut().take(r).skip(l - 1) {
                bag.push(v);
            }
        }
        PathDecomposition::new(bags)
    }

    /// The same decomposition as a rooted chain (first bag is the root).
    pub fn to_tree(&self) -> RootedTreeDecomposition {
        if self.bags.is_empty() {
            return RootedTreeDecomposition::empty();
        }
        let parent = (0..self.bags.len())
            .map(|i| i.saturating_sub(1))
            .collect();
        RootedTreeDecomposition {
            parent,
            bags: self.bags.clone(),
            root: 0,
        }
    }
}

/// Assignment of each edge to one decomposition node whose bag contains both
/// endpoints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeRepresentation {
    pub rep: BTreeMap<(VertexId, VertexId), NodeId>,
}

impl EdgeRepresentation {
    pub fn node_of(&self, u: VertexId, v: VertexId) -> Option<NodeId> {
        self.rep.get(&(u.min(v), u.max(v))).copied()
    }

    /// Edges represented at `node`, in canonical order.
    pub fn edges_at(&self, node: NodeId) -> Vec<(VertexId, VertexId)> {
        self.rep
            .iter()
            .filter_map(|(&e, &n)| if n == node { Some(e) } else { None })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub height: u32,
    pub width: i64,
    pub violations: Vec<String>,
}

/// Checks the three tree-decomposition conditions of `td` against `h`.
pub fn validate(h: &Graph, td: &RootedTreeDecomposition) -> ValidationReport {
    let mut violations = Vec::new();
    if td.is_empty() && h.vertex_count() > 0 {
        violations.push("empty decomposition for a nonempty graph".into());
    }
    for (node, bag) in td.bags() {
        for &v in bag {
            if v < 1 || v > h.vertex_count() {
                violations.push(format!("bag {node} contains unknown vertex {v}"));
            }
        }
    }
    for v in h.vertices() {
        let containing: Vec<NodeId> = td
            .bags()
            .filter_map(|(i, b)| if b.contains(&v) { Some(i) } else { None })
            .collect();
        if containing.is_empty() {
            violations.push(format!("vertex {v} is in no bag"));
            continue;
        }
        // The nodes containing v must induce a connected subtree.
        let set: BTreeSet<NodeId> = containing.iter().copied().collect();
        let mut reach = BTreeSet::from([containing[0]]);
        let mut stack = vec![containing[0]];
        while let Some(t) = stack.pop() {
            let mut adjacent = td.children(t);
            if t != td.root {
                adjacent.push(td.parent(t));
            }
            for a in adjacent {
                if set.contains(&a) && reach.insert(a) {
                    stack.push(a);
                }
            }
        }
        if reach.len() != set.len() {
            violations.push(format!("bags containing vertex {v} are not a subtree"));
        }
    }
    for &(u, v) in h.edges() {
        if !td.bags().any(|(_, b)| b.contains(&u) && b.contains(&v)) {
            violations.push(format!("edge {{{u},{v}}} is in no bag"));
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        height: td.height(),
        width: td.width(),
        violations,
    }
}

/// Path-decomposition validity via the interval view.
pub fn validate_path(h: &Graph, pd: &PathDecomposition) -> ValidationReport {
    let mut violations = Vec::new();
    let intervals = match pd.intervals() {
        Ok(iv) => iv,
        Err(e) => {
            violations.push(e.to_string());
            return ValidationReport {
                valid: false,
                height: pd.len() as u32,
                width: pd.width(),
                violations,
            };
        }
    };
    for v in h.vertices() {
        if !intervals.contains_key(&v) {
            violations.push(format!("vertex {v} is in no bag"));
        }
    }
    for &(u, v) in h.edges() {
        match (intervals.get(&u), intervals.get(&v)) {
            (Some(&(lu, ru)), Some(&(lv, rv))) if lu.max(lv) <= ru.min(rv) => {}
            _ => violations.push(format!("edge {{{u},{v}}} endpoint intervals do not meet")),
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        height: pd.len() as u32,
        width: pd.width(),
        violations,
    }
}

/// Deterministic edge representation: the deepest node whose bag contains
/// both endpoints, ties broken by smallest node id.
pub fn choose_edge_representation(
    h: &Graph,
    td: &RootedTreeDecomposition,
) -> Result<EdgeRepresentation> {
    let mut rep = BTreeMap::new();
    for &(u, v) in h.edges() {
        let node = deepest_containing(td, &[u, v]).ok_or_else(|| {
            Error::InvalidInput(format!(
                "invalid decomposition: edge {{{u},{v}}} is contained in no bag"
            ))
        })?;
        rep.insert((u, v), node);
    }
    Ok(EdgeRepresentation { rep })
}

/// Exhaustive mode: enumerates every edge representation and returns one of
/// minimum rep-height (first in candidate order). Only available while
/// |E(H)|·|nodes| ≤ 24.
pub fn choose_edge_representation_exhaustive(
    h: &Graph,
    td: &RootedTreeDecomposition,
) -> Result<EdgeRepresentation> {
    if h.edge_count() * td.len() > 24 {
        return Err(Error::Capacity(format!(
            "exhaustive edge representation needs |E|*|nodes| <= 24, got {}",
            h.edge_count() * td.len()
        )));
    }
    let mut candidates: Vec<(VertexId, VertexId, Vec<NodeId>)> = Vec::new();
    for &(u, v) in h.edges() {
        let nodes: Vec<NodeId> = td
            .bags()
            .filter_map(|(i, b)| (b.contains(&u) && b.contains(&v)).then_some(i))
            .collect();
        if nodes.is_empty() {
            return Err(Error::InvalidInput(format!(
                "invalid decomposition: edge {{{u},{v}}} is contained in no bag"
            )));
        }
        candidates.push((u, v, nodes));
    }
    let mut best: Option<(u32, EdgeRepresentation)> = None;
    let mut pick = vec![0usize; candidates.len()];
    loop {
        let rep = EdgeRepresentation {
            rep: candidates
                .iter()
                .zip(&pick)
                .map(|((u, v, nodes), &i)| ((*u, *v), nodes[i]))
                .collect(),
        };
        let rh = rep_height(td, &rep);
        if best.as_ref().is_none_or(|(b, _)| rh < *b) {
            best = Some((rh, rep));
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(best.expect("at least one representation").1);
            }
            pick[i] += 1;
            if pick[i] < candidates[i].2.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn deepest_containing(td: &RootedTreeDecomposition, verts: &[VertexId]) -> Option<NodeId> {
    td.bags()
        .filter(|(_, b)| verts.iter().all(|v| b.contains(v)))
        .max_by(|(i, bi), (j, bj)| {
            (td.depth(*i), std::cmp::Reverse(bi.len()), std::cmp::Reverse(*i)).cmp(&(
                td.depth(*j),
                std::cmp::Reverse(bj.len()),
                std::cmp::Reverse(*j),
            ))
        })
        .map(|(i, _)| i)
}

/// A node is active iff it represents two or more edges, represents one and
/// has a child, or has two or more children. The rep-height is the maximum
/// number of active nodes on a root-to-leaf path; it equals the product-depth
/// of the synthesized circuit.
pub fn rep_height(td: &RootedTreeDecomposition, rep: &EdgeRepresentation) -> u32 {
    if td.is_empty() {
        return 0;
    }
    let mut edge_count = vec![0usize; td.len()];
    for &node in rep.rep.values() {
        edge_count[node] += 1;
    }
    let active: Vec<bool> = (0..td.len())
        .map(|i| {
            let kids = td.children(i).len();
            edge_count[i] >= 2 || (edge_count[i] >= 1 && kids >= 1) || kids >= 2
        })
        .collect();
    fn down(td: &RootedTreeDecomposition, active: &[bool], node: NodeId) -> u32 {
        let here = u32::from(active[node]);
        here + td
            .children(node)
            .into_iter()
            .map(|c| down(td, active, c))
            .max()
            .unwrap_or(0)
    }
    down(td, &active, td.root)
}

/// Extends a decomposition of `prune(h)` to one of `h` by hanging pendant
/// bags, and chooses an edge representation whose rep-height does not exceed
/// the height of the input decomposition.
///
/// Degree-1 vertices attach as `{v, u}` leaf bags under the deepest original
/// node containing the neighbor `u` (ties: smallest bag, then smallest id).
/// A degree-1 vertex whose neighbor also has degree 1 (an isolated edge of
/// `h`) gets a single `{u, v}` bag under the root, and isolated vertices get
/// `{v}` bags under the root.
pub fn attach_pendants(
    h: &Graph,
    pruned: &Pruned,
    td: &RootedTreeDecomposition,
) -> Result<(RootedTreeDecomposition, EdgeRepresentation)> {
    // Translate bags back to the labels of h.
    let mut out = if td.is_empty() {
        RootedTreeDecomposition::single_bag(Vec::new())
    } else {
        let bags = td
            .bags()
            .map(|(_, b)| b.iter().map(|&v| pruned.to_original(v)).collect())
            .collect();
        RootedTreeDecomposition {
            parent: td.parent.clone(),
            bags,
            root: td.root,
        }
    };
    let original_len = out.len();
    let root = out.root().expect("nonempty");
    let deepest_original = |out: &RootedTreeDecomposition, u: VertexId| -> Option<NodeId> {
        out.bags()
            .take(original_len)
            .filter(|(_, b)| b.contains(&u))
            .max_by(|(i, bi), (j, bj)| {
                (out.depth(*i), std::cmp::Reverse(bi.len()), std::cmp::Reverse(*i)).cmp(&(
                    out.depth(*j),
                    std::cmp::Reverse(bj.len()),
                    std::cmp::Reverse(*j),
                ))
            })
            .map(|(i, _)| i)
    };

    let mut rep = BTreeMap::new();
    let mut paired: BTreeSet<VertexId> = BTreeSet::new();
    for v in h.vertices() {
        match h.degree(v) {
            0 => {
                out.add_child(root, vec![v]);
            }
            1 => {
                if paired.contains(&v) {
                    continue;
                }
                let u = h.neighbors(v)[0];
                if h.degree(u) == 1 {
                    // Isolated edge of h: one shared bag covers both ends.
                    let node = out.add_child(root, vec![u.min(v), u.max(v)]);
                    rep.insert((u.min(v), u.max(v)), node);
                    paired.insert(u);
                } else {
                    let anchor = deepest_original(&out, u).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "neighbor {u} of pendant vertex {v} is absent from every bag"
                        ))
                    })?;
                    let node = out.add_child(anchor, vec![u.min(v), u.max(v)]);
                    rep.insert((u.min(v), u.max(v)), node);
                }
            }
            _ => {}
        }
    }
    // Remaining edges live inside the translated decomposition.
    for &(u, v) in h.edges() {
        if rep.contains_key(&(u, v)) {
            continue;
        }
        let node = deepest_containing(&out, &[u, v]).ok_or_else(|| {
            Error::InvalidInput(format!(
                "invalid decomposition: edge {{{u},{v}}} is contained in no bag"
            ))
        })?;
        rep.insert((u, v), node);
    }
    Ok((out, EdgeRepresentation { rep }))
}

// --- serialization ---

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    parent: usize,
    bag: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    root: Option<usize>,
    nodes: Vec<NodeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rep: Option<BTreeMap<String, usize>>,
}

pub fn to_json(td: &RootedTreeDecomposition, rep: Option<&EdgeRepresentation>) -> String {
    let doc = DecompositionJson {
        root: td.root(),
        nodes: (0..td.len())
            .map(|i| NodeJson {
                id: i,
                parent: td.parent(i),
                bag: td.bag(i).to_vec(),
            })
            .collect(),
        rep: rep.map(|r| {
            r.rep
                .iter()
                .map(|(&(u, v), &n)| (format!("{u}-{v}"), n))
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("decomposition serializes")
}

pub fn from_json(text: &str) -> Result<(RootedTreeDecomposition, Option<EdgeRepresentation>)> {
    let doc: DecompositionJson = serde_json::from_str(text)?;
    let td = match doc.root {
        None => RootedTreeDecomposition::empty(),
        Some(root_id) => {
            let index: BTreeMap<usize, usize> = doc
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| (n.id, i))
                .collect();
            let lookup = |id: usize| -> Result<usize> {
                index
                    .get(&id)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("unknown node id {id}")))
            };
            let mut parent = Vec::new();
            let mut bags = Vec::new();
            for n in &doc.nodes {
                parent.push(lookup(n.parent)?);
                bags.push(n.bag.clone());
            }
            RootedTreeDecomposition::from_parts(lookup(root_id)?, parent, bags)?
        }
    };
    let rep = match doc.rep {
        None => None,
        Some(map) => {
            let mut rep = BTreeMap::new();
            for (key, node) in map {
                let (u, v) = key
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                    .ok_or_else(|| Error::InvalidInput(format!("bad edge key '{key}'")))?;
                rep.insert((u, v), node);
            }
            Some(EdgeRepresentation { rep })
        }
    };
    Ok((td, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, prune};

    fn g(expr: &str) -> Graph {
        parse_graph(expr).unwrap()
    }

    pub(crate) fn fig1_graph() -> Graph {
        g("p 6 / e 1 2 / e 2 3 / e 3 4 / e 1 4 / e 4 5 / e 2 6")
    }

    pub(crate) fn fig1_pruned_td() -> RootedTreeDecomposition {
        let mut td = RootedTreeDecomposition::single_bag(vec![2, 3, 4]);
        td.add_child(0, vec![1, 2, 4]);
        td.add_child(0, vec![2, 3]);
        td.add_child(0, vec![3, 4]);
        td
    }

    #[test]
    fn validate_k3_single_bag() {
        let report = validate(&g("clique:3"), &RootedTreeDecomposition::single_bag(vec![1, 2, 3]));
        assert!(report.valid);
        assert_eq!(report.height, 1);
        assert_eq!(report.width, 2);
    }

    #[test]
    fn validate_c4_split_bags_reports_uncovered_edges() {
        let mut td = RootedTreeDecomposition::single_bag(vec![1, 2]);
        td.add_child(0, vec![3, 4]);
        let report = validate(&g("cycle:4"), &td);
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.contains("{2,3}")));
        assert!(report.violations.iter().any(|v| v.contains("{1,4}")));
    }

    #[test]
    fn validate_fig1_pruned_decomposition() {
        let report = validate(&g("cycle:4"), &fig1_pruned_td());
        assert!(report.valid, "{:?}", report.violations);
        assert_eq!(report.height, 2);
        assert_eq!(report.width, 2);
    }

    #[test]
    fn connectivity_violation_detected() {
        // Vertex 1 appears in two bags that are not adjacent.
        let mut td = RootedTreeDecomposition::single_bag(vec![2]);
        td.add_child(0, vec![1, 2]);
        td.add_child(0, vec![1, 2]);
        let report = validate(&g("path:2"), &td);
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.contains("subtree")));
    }

    #[test]
    fn rep_single_bag_maps_all_edges_to_root() {
        let td = RootedTreeDecomposition::single_bag(vec![1, 2, 3]);
        let rep = choose_edge_representation(&g("clique:3"), &td).unwrap();
        assert!(rep.rep.values().all(|&n| n == 0));
        assert_eq!(rep_height(&td, &rep), 1);
    }

    #[test]
    fn rep_deepest_bag_rule_on_c4_chain() {
        let mut td = RootedTreeDecomposition::single_bag(vec![1, 2, 3]);
        td.add_child(0, vec![1, 3, 4]);
        let rep = choose_edge_representation(&g("cycle:4"), &td).unwrap();
        assert_eq!(rep.node_of(1, 2), Some(0));
        assert_eq!(rep.node_of(2, 3), Some(0));
        assert_eq!(rep.node_of(3, 4), Some(1));
        assert_eq!(rep.node_of(1, 4), Some(1));
    }

    #[test]
    fn rep_error_when_edge_uncovered() {
        let td = RootedTreeDecomposition::single_bag(vec![1, 2]);
        assert!(choose_edge_representation(&g("clique:3"), &td).is_err());
    }

    #[test]
    fn rep_height_chain_counts_active_prefix() {
        // Path of three bags, each representing exactly one edge; the leaf is
        // inactive, the two inner nodes are active.
        let p4 = g("path:4");
        let pd = PathDecomposition::new(vec![vec![1, 2], vec![2, 3], vec![3, 4]]);
        let td = pd.to_tree();
        let rep = choose_edge_representation(&p4, &td).unwrap();
        assert_eq!(rep_height(&td, &rep), 2);
    }

    #[test]
    fn exhaustive_rep_not_worse_than_deepest() {
        let h = g("cycle:4");
        let mut td = RootedTreeDecomposition::single_bag(vec![1, 2, 3]);
        td.add_child(0, vec![1, 3, 4]);
        let rep = choose_edge_representation(&h, &td).unwrap();
        let best = choose_edge_representation_exhaustive(&h, &td).unwrap();
        assert!(rep_height(&td, &best) <= rep_height(&td, &rep));
        let too_big = fig1_graph();
        let (big_td, _) = attach_pendants(&too_big, &prune(&too_big), &fig1_pruned_td()).unwrap();
        assert!(choose_edge_representation_exhaustive(&too_big, &big_td).is_err());
    }

    #[test]
    fn attach_pendants_fig1() {
        let h = fig1_graph();
        let (td, rep) = attach_pendants(&h, &prune(&h), &fig1_pruned_td()).unwrap();
        assert!(validate(&h, &td).valid);
        let new_bags: Vec<&[VertexId]> = (4..td.len()).map(|i| td.bag(i)).collect();
        assert!(new_bags.contains(&&[4, 5][..]));
        assert!(new_bags.contains(&&[2, 6][..]));
        assert_eq!(rep_height(&td, &rep), 2);
        // Smallest-bag tie-breaking hangs {4,5} under {3,4} and {2,6} under
        // {2,3}, matching the construction this decomposition came from.
        let n45 = rep.node_of(4, 5).unwrap();
        assert_eq!(td.bag(td.parent(n45)), &[3, 4]);
        let n26 = rep.node_of(2, 6).unwrap();
        assert_eq!(td.bag(td.parent(n26)), &[2, 3]);
    }

    #[test]
    fn attach_pendants_p3() {
        let p3 = g("path:3");
        let pruned = prune(&p3);
        let td = RootedTreeDecomposition::single_bag(vec![1]); // pruned label of vertex 2
        let (out, rep) = attach_pendants(&p3, &pruned, &td).unwrap();
        assert!(validate(&p3, &out).valid);
        assert_eq!(out.len(), 3);
        assert_eq!(rep_height(&out, &rep), 1);
    }

    #[test]
    fn attach_pendants_noop_without_pendants() {
        let c4 = g("cycle:4");
        let pruned = prune(&c4);
        let mut td = RootedTreeDecomposition::single_bag(vec![1, 2, 3]);
        td.add_child(0, vec![1, 3, 4]);
        let (out, rep) = attach_pendants(&c4, &pruned, &td).unwrap();
        assert_eq!(out.len(), 2);
        assert!(rep_height(&out, &rep) <= td.height());
    }

    #[test]
    fn attach_pendants_k2_attaches_isolated_edge_bag() {
        let k2 = g("path:2");
        let pruned = prune(&k2);
        let (out, rep) = attach_pendants(&k2, &pruned, &RootedTreeDecomposition::empty()).unwrap();
        assert!(validate(&k2, &out).valid);
        assert_eq!(rep_height(&out, &rep), 0);
    }

    #[test]
    fn attach_pendants_isolated_vertex_bag() {
        let h = g("p 3 / e 1 2"); // vertex 3 isolated
        let pruned = prune(&h);
        let (out, _) = attach_pendants(&h, &pruned, &RootedTreeDecomposition::empty()).unwrap();
        assert!(validate(&h, &out).valid);
        assert!(out.bags().any(|(_, b)| b == [3]));
    }

    #[test]
    fn path_interval_roundtrip() {
        let pd = PathDecomposition::new(vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![]]);
        let iv = pd.intervals().unwrap();
        let back = PathDecomposition::from_intervals(pd.len(), &iv);
        assert_eq!(pd, back);
    }

    #[test]
    fn json_roundtrip_with_rep() {
        let h = fig1_graph();
        let (td, rep) = attach_pendants(&h, &prune(&h), &fig1_pruned_td()).unwrap();
        let text = to_json(&td, Some(&rep));
        let (td2, rep2) = from_json(&text).unwrap();
        assert_eq!(td, td2);
        assert_eq!(Some(rep), rep2);
    }

    #[test]
    fn re_root_preserves_validity() {
        let h = g("cycle:4");
        let mut td = RootedTreeDecomposition::single_bag(vec![1, 2, 3]);
        let child = td.add_child(0, vec![1, 3, 4]);
        let rr = td.re_root(child);
        assert_eq!(rr.root(), Some(child));
        assert!(validate(&h, &rr).valid);
        assert_eq!(rr.height(), 2);
    }
}
