//! Exact computation of depth-bounded treewidth and length-bounded pathwidth
//! (optionally of the pruned graph), returning certificate decompositions,
//! plus an independent enumeration oracle used to validate the solvers.

use crate::decomp::{self, PathDecomposition, RootedTreeDecomposition};
use crate::graph::{prune, Graph, VertexId};
use crate::{Error, Result};
use std::collections::HashMap;

/// Exact optimum with its witness decomposition.
///
/// `value` is the width (max bag size − 1); the certificate is valid for the
/// (possibly pruned) graph, respects the height / bag-count budget `delta`,
/// and no valid decomposition of smaller width exists.
#[derive(Debug, Clone)]
pub struct WidthCertificate {
    pub parameter: &'static str,
    pub delta: u32,
    pub value: i64,
    pub certificate: CertificateBody,
}

#[derive(Debug, Clone)]
pub enum CertificateBody {
    Tree(RootedTreeDecomposition),
    Path(PathDecomposition),
}

impl WidthCertificate {
    pub fn max_bag_size(&self) -> usize {
        match &self.certificate {
            CertificateBody::Tree(td) => td.max_bag_size(),
            CertificateBody::Path(pd) => pd.max_bag_size(),
        }
    }

    pub fn tree(&self) -> RootedTreeDecomposition {
        match &self.certificate {
            CertificateBody::Tree(td) => td.clone(),
            CertificateBody::Path(pd) => pd.to_tree(),
        }
    }

    pub fn to_json(&self) -> String {
        let cert = match &self.certificate {
            CertificateBody::Tree(td) => decomp::to_json(td, None),
            CertificateBody::Path(pd) => decomp::to_json(&pd.to_tree(), None),
        };
        let cert_value: serde_json::Value = serde_json::from_str(&cert).expect("own json");
        let doc = serde_json::json!({
            "parameter": self.parameter,
            "delta": self.delta,
            "value": self.value,
            "certificate": cert_value,
        });
        serde_json::to_string_pretty(&doc).expect("certificate serializes")
    }
}

/// Minimum width over tree decompositions of height at most `delta`
/// (of `prune(h)` when `pruned` is set). Exact; limited to 15 vertices.
pub fn tw_delta(h: &Graph, delta: u32, pruned: bool) -> Result<WidthCertificate> {
    if delta < 1 {
        return Err(Error::InvalidInput("delta must be at least 1".into()));
    }
    let parameter = if pruned { "ptw_delta" } else { "tw_delta" };
    let target = if pruned { prune(h).graph } else { h.clone() };
    let n = target.vertex_count();
    if n > 15 {
        return Err(Error::Capacity(format!(
            "tw solver needs <= 15 vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(WidthCertificate {
            parameter,
            delta,
            value: -1,
            certificate: CertificateBody::Tree(RootedTreeDecomposition::single_bag(vec![])),
        });
    }
    let mut solver = TwSolver::new(&target);
    let full = (1u32 << n) - 1;
    // A decomposition never needs more levels than it has vertices.
    let depth_budget = delta.min(n);
    let value = solver.minbag(full, 0, depth_budget) as i64 - 1;
    let td = solver.rebuild(full, 0, depth_budget);
    debug_assert!(decomp::validate(&target, &td).valid);
    Ok(WidthCertificate {
        parameter,
        delta,
        value,
        certificate: CertificateBody::Tree(td),
    })
}

/// Recursive exact solver over vertex bitmasks.
///
/// minbag(S, A, d) = min over root bags B with A ⊆ B ⊆ S of
///   max(|B|, max over components C of S−B of minbag(C ∪ (N(C)∩B), N(C)∩B, d−1)),
/// forced to B = S at d = 1. Two normalizations make this exhaustive:
/// boundary vertices of a component can be assumed in the component's child
/// root bag (their bag sets are connected through the root), and each
/// component gets its own child subtree (merging never helps).
struct TwSolver {
    adj: Vec<u32>,
    memo: HashMap<(u32, u32, u32), (u32, u32)>,
}

impl TwSolver {
    fn new(g: &Graph) -> Self {
        let mut adj = vec![0u32; g.vertex_count() as usize];
        for &(u, v) in g.edges() {
            adj[u as usize - 1] |= 1 << (v - 1);
            adj[v as usize - 1] |= 1 << (u - 1);
        }
        TwSolver {
            adj,
            memo: HashMap::new(),
        }
    }

    fn neighborhood(&self, set: u32) -> u32 {
        let mut nb = 0;
        let mut cur = set;
        while cur != 0 {
            let v = cur.trailing_zeros() as usize;
            cur &= cur - 1;
            nb |= self.adj[v];
        }
        nb & !set
    }

    fn components(&self, mut verts: u32) -> Vec<u32> {
        let mut comps = Vec::new();
        while verts != 0 {
            let mut comp = 1u32 << verts.trailing_zeros();
            loop {
                let grown = comp | (self.neighborhood(comp) & verts);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            comps.push(comp);
            verts &= !comp;
        }
        comps
    }

    fn minbag(&mut self, verts: u32, anchors: u32, delta: u32) -> u32 {
        self.solve(verts, anchors, delta).0
    }

    fn solve(&mut self, verts: u32, anchors: u32, delta: u32) -> (u32, u32) {
        if delta <= 1 {
            return (verts.count_ones(), verts);
        }
        if let Some(&hit) = self.memo.get(&(verts, anchors, delta)) {
            return hit;
        }
        let mut best = verts.count_ones();
        let mut best_bag = verts;
        let free = verts & !anchors;
        let mut subs: Vec<u32> = Vec::with_capacity(1 << free.count_ones());
        let mut sub = free;
        loop {
            subs.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        subs.sort_unstable_by_key(|m| (m.count_ones(), *m));
        for s in subs {
            let bag = anchors | s;
            if bag.count_ones() >= best {
                continue;
            }
            let mut val = bag.count_ones();
            for comp in self.components(verts & !bag) {
                let boundary = self.neighborhood(comp) & bag;
                val = val.max(self.minbag(comp | boundary, boundary, delta - 1));
                if val >= best {
                    break;
                }
            }
            if val < best {
                best = val;
                best_bag = bag;
            }
        }
        self.memo.insert((verts, anchors, delta), (best, best_bag));
        (best, best_bag)
    }

    fn rebuild(&mut self, verts: u32, anchors: u32, delta: u32) -> RootedTreeDecomposition {
        let mut td = RootedTreeDecomposition::single_bag(vec![]);
        let root = 0;
        self.rebuild_into(&mut td, root, verts, anchors, delta);
        td
    }

    fn rebuild_into(
        &mut self,
        td: &mut RootedTreeDecomposition,
        node: usize,
        verts: u32,
        anchors: u32,
        delta: u32,
    ) {
        let (_, bag) = self.solve(verts, anchors, delta);
        td.set_bag(node, mask_to_vertices(bag));
        if delta <= 1 {
            return;
        }
        for comp in self.components(verts & !bag) {
            let boundary = self.neighborhood(comp) & bag;
            let child = td.add_child(node, vec![]);
            self.rebuild_into(td, child, comp | boundary, boundary, delta - 1);
        }
    }
}

fn mask_to_vertices(mask: u32) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut cur = mask;
    while cur != 0 {
        out.push(cur.trailing_zeros() + 1);
        cur &= cur - 1;
    }
    out
}

/// Minimum width over path decompositions with at most `delta` bags
/// (of `prune(h)` when `pruned` is set), via the interval formulation:
/// each vertex gets a nonempty subinterval of [1..delta], adjacent vertices'
/// intervals must intersect, and bag j collects the vertices covering j.
pub fn pw_delta(h: &Graph, delta: u32, pruned: bool) -> Result<WidthCertificate> {
    if delta < 1 {
        return Err(Error::InvalidInput("delta must be at least 1".into()));
    }
    let parameter = if pruned { "ppw_delta" } else { "pw_delta" };
    let target = if pruned { prune(h).graph } else { h.clone() };
    let n = target.vertex_count();
    if n > 10 && delta > 4 {
        return Err(Error::Capacity(format!(
            "pw solver needs <= 10 vertices or delta <= 4, got {n} vertices at delta {delta}"
        )));
    }
    if n == 0 {
        return Ok(WidthCertificate {
            parameter,
            delta,
            value: -1,
            certificate: CertificateBody::Path(PathDecomposition::new(vec![vec![]])),
        });
    }
    let m = delta as usize;
    let neighbors: Vec<Vec<usize>> = (1..=n)
        .map(|v| {
            target
                .neighbors(v)
                .into_iter()
                .filter(|&w| w < v)
                .map(|w| w as usize - 1)
                .collect()
        })
        .collect();
    let mut search = PwSearch {
        neighbors,
        intervals: vec![(0, 0); n as usize],
        counts: vec![0u32; m],
        best: None,
        positions: m,
    };
    search.go(0, 0);
    let (size, intervals) = search.best.expect("single-bag assignment always exists");
    let iv_map = intervals
        .iter()
        .enumerate()
        .map(|(i, &(l, r))| (i as u32 + 1, (l, r)))
        .collect();
    let mut pd = PathDecomposition::from_intervals(m, &iv_map);
    while pd.bags.len() > 1 && pd.bags.last().is_some_and(|b| b.is_empty()) {
        pd.bags.pop();
    }
    debug_assert!(decomp::validate_path(&target, &pd).valid);
    Ok(WidthCertificate {
        parameter,
        delta,
        value: size as i64 - 1,
        certificate: CertificateBody::Path(pd),
    })
}

struct PwSearch {
    neighbors: Vec<Vec<usize>>,
    intervals: Vec<(usize, usize)>,
    counts: Vec<u32>,
    best: Option<(u32, Vec<(usize, usize)>)>,
    positions: usize,
}

impl PwSearch {
    fn go(&mut self, vertex: usize, max_count: u32) {
        // Dominance prune: a partial assignment whose widest position already
        // matches the incumbent can never improve on it.
        if let Some((best, _)) = &self.best {
            if max_count >= *best {
                return;
            }
        }
        if vertex == self.intervals.len() {
            self.best = Some((max_count, self.intervals.clone()));
            return;
        }
        for l in 1..=self.positions {
            'right: for r in l..=self.positions {
                for &w in &self.neighbors[vertex] {
                    let (lw, rw) = self.intervals[w];
                    if l.max(lw) > r.min(rw) {
                        if rw < l {
                            break 'right;
                        }
                        continue 'right;
                    }
                }
                let mut new_max = max_count;
                for j in l..=r {
                    self.counts[j - 1] += 1;
                    new_max = new_max.max(self.counts[j - 1]);
                }
                self.intervals[vertex] = (l, r);
                self.go(vertex + 1, new_max);
                for j in l..=r {
                    self.counts[j - 1] -= 1;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteMode {
    Tree,
    Path,
}

/// Independent oracle: enumerates rooted bag-trees (at most |V| nodes) or bag
/// sequences (at most `delta` bags) outright and returns the minimum width of
/// a valid decomposition within the height/length budget. Only for graphs
/// with at most 6 vertices; used to validate the main solvers.
pub fn brute_force_width(h: &Graph, delta: u32, mode: BruteMode) -> Result<i64> {
    if h.vertex_count() > 6 {
        return Err(Error::Capacity(format!(
            "brute-force width needs <= 6 vertices, got {}",
            h.vertex_count()
        )));
    }
    if delta < 1 {
        return Err(Error::InvalidInput("delta must be at least 1".into()));
    }
    if h.vertex_count() == 0 {
        return Ok(-1);
    }
    let n = h.vertex_count() as usize;
    for width in 0..n as i64 {
        let feasible = match mode {
            BruteMode::Tree => feasible_tree(h, delta, width as usize),
            BruteMode::Path => feasible_path(h, delta, width as usize),
        };
        if feasible {
            return Ok(width);
        }
    }
    unreachable!("a single bag of all vertices is always valid");
}

fn subsets_up_to(n: usize, max_size: usize) -> Vec<u8> {
    (0u16..(1 << n))
        .filter(|m| (m.count_ones() as usize) <= max_size)
        .map(|m| m as u8)
        .collect()
}

fn feasible_tree(h: &Graph, delta: u32, width: usize) -> bool {
    let n = h.vertex_count() as usize;
    let bags = subsets_up_to(n, width + 1);
    let edge_masks: Vec<u8> = h
        .edges()
        .iter()
        .map(|&(u, v)| (1 << (u - 1)) | (1 << (v - 1)))
        .collect();
    // parent[i] < i enumerates every rooted tree shape on m nodes.
    for m in 1..=n {
        let mut parents = vec![0usize; m];
        if try_parents(h, &bags, &edge_masks, &mut parents, 1, m, delta) {
            return true;
        }
    }
    false
}

fn try_parents(
    h: &Graph,
    bags: &[u8],
    edge_masks: &[u8],
    parents: &mut Vec<usize>,
    node: usize,
    m: usize,
    delta: u32,
) -> bool {
    if node == m {
        let mut depth = vec![1u32; m];
        for i in 1..m {
            depth[i] = depth[parents[i]] + 1;
        }
        if depth.iter().max().copied().unwrap_or(1) > delta {
            return false;
        }
        let mut assigned = vec![0u8; m];
        return assign_bags(h, bags, edge_masks, parents, &mut assigned, 0, 0);
    }
    for p in 0..node {
        parents[node] = p;
        if try_parents(h, bags, edge_masks, parents, node + 1, m, delta) {
            return true;
        }
    }
    false
}

fn assign_bags(
    h: &Graph,
    bags: &[u8],
    edge_masks: &[u8],
    parents: &[usize],
    assigned: &mut Vec<u8>,
    node: usize,
    seen: u8,
) -> bool {
    let m = parents.len();
    if node == m {
        let full = (1u16 << h.vertex_count()) - 1;
        return seen as u16 == full
            && edge_masks
                .iter()
                .all(|&e| assigned.iter().any(|&b| b & e == e));
    }
    let parent_bag = if node == 0 { 0 } else { assigned[parents[node]] };
    let max_new = bags.iter().map(|b| b.count_ones()).max().unwrap_or(0);
    'bag: for &b in bags {
        // A vertex entering below its parent bag must be brand new, otherwise
        // its bag set cannot be connected.
        if b & !parent_bag & seen != 0 {
            continue;
        }
        let new_seen = seen | b;
        let remaining = (m - node - 1) as u32;
        let uncovered_vertices = h.vertex_count().saturating_sub(new_seen.count_ones());
        if uncovered_vertices > remaining * max_new {
            continue;
        }
        assigned[node] = b;
        // An edge whose endpoints have both appeared can only live in an
        // already-assigned bag.
        for &e in edge_masks {
            if e & new_seen == e && !assigned[..=node].iter().any(|&bb| bb & e == e) {
                continue 'bag;
            }
        }
        if assign_bags(h, bags, edge_masks, parents, assigned, node + 1, new_seen) {
            return true;
        }
    }
    false
}

fn feasible_path(h: &Graph, delta: u32, width: usize) -> bool {
    let n = h.vertex_count() as usize;
    let bags = subsets_up_to(n, width + 1);
    let edge_masks: Vec<u8> = h
        .edges()
        .iter()
        .map(|&(u, v)| (1 << (u - 1)) | (1 << (v - 1)))
        .collect();
    for m in 1..=(delta as usize).min(n) {
        let parents: Vec<usize> = (0..m).map(|i| i.saturating_sub(1)).collect();
        let mut assigned = vec![0u8; m];
        if assign_bags(h, &bags, &edge_masks, &parents, &mut assigned, 0, 0) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, vertex_cover_number, vertex_integrity};

    fn g(expr: &str) -> Graph {
        parse_graph(expr).unwrap()
    }

    #[test]
    fn tw_single_level_forces_one_bag() {
        let cert = tw_delta(&g("clique:3"), 1, false).unwrap();
        assert_eq!(cert.value, 2);
        assert_eq!(cert.tree().len(), 1);
    }

    #[test]
    fn tw_star_theorem_values() {
        // Full 3-ary tree of height 2: tw_2 = 1, tw_1 = 3.
        let star = g("dary:3:2");
        assert_eq!(tw_delta(&star, 2, false).unwrap().value, 1);
        assert_eq!(tw_delta(&star, 1, false).unwrap().value, 3);
    }

    #[test]
    fn tw_c4_depth_two_matches_vertex_integrity() {
        let c4 = g("cycle:4");
        let cert = tw_delta(&c4, 2, false).unwrap();
        assert_eq!(cert.value, vertex_integrity(&c4).unwrap() as i64 - 1);
        assert_eq!(cert.value, 2);
        assert_eq!(brute_force_width(&c4, 2, BruteMode::Tree).unwrap(), 2);
    }

    #[test]
    fn tw_pruned_p3_is_zero() {
        let cert = tw_delta(&g("path:3"), 2, true).unwrap();
        assert_eq!(cert.value, 0);
    }

    #[test]
    fn tw_empty_after_pruning() {
        let cert = tw_delta(&g("path:2"), 2, true).unwrap();
        assert_eq!(cert.value, -1);
        assert_eq!(cert.tree().len(), 1);
    }

    #[test]
    fn tw_certificates_are_valid_and_within_height() {
        for expr in ["path:4", "cycle:6", "clique:4", "dary:2:3", "dary:3:2"] {
            let h = g(expr);
            for delta in 1..=4 {
                let cert = tw_delta(&h, delta, false).unwrap();
                let td = cert.tree();
                let report = decomp::validate(&h, &td);
                assert!(report.valid, "{expr} delta {delta}: {:?}", report.violations);
                assert!(td.height() <= delta);
                assert_eq!(td.width(), cert.value);
            }
        }
    }

    #[test]
    fn tw_matches_brute_force_on_small_graphs() {
        for expr in ["path:4", "cycle:4", "clique:4", "star:4", "cycle:5"] {
            let h = g(expr);
            for delta in 1..=4 {
                let solver = tw_delta(&h, delta, false).unwrap().value;
                let brute = brute_force_width(&h, delta, BruteMode::Tree).unwrap();
                assert_eq!(solver, brute, "{expr} at delta {delta}");
            }
        }
    }

    #[test]
    fn tw_monotone_in_delta() {
        for expr in ["cycle:6", "clique:4", "dary:2:3"] {
            let h = g(expr);
            let values: Vec<i64> = (1..=5)
                .map(|d| tw_delta(&h, d, false).unwrap().value)
                .collect();
            assert!(values.windows(2).all(|w| w[0] >= w[1]), "{expr}: {values:?}");
        }
    }

    #[test]
    fn tw_two_vs_vertex_cover() {
        for expr in ["path:5", "cycle:6", "clique:4", "dary:2:3"] {
            let h = g(expr);
            let tw2 = tw_delta(&h, 2, false).unwrap().value;
            assert!(tw2 <= vertex_cover_number(&h).unwrap() as i64, "{expr}");
        }
    }

    #[test]
    fn tw_binary_tree_height_hierarchy() {
        // tw_Δ(T_Δ) = 1 and tw_{Δ−1}(T_Δ) ≥ d−1 for the full d-ary tree T_Δ.
        for (d, h) in [(2u32, 2u32), (2, 3), (3, 2), (3, 3), (2, 4)] {
            let t = g(&format!("dary:{d}:{h}"));
            assert_eq!(tw_delta(&t, h, false).unwrap().value, 1, "d={d} h={h}");
            if h > 1 {
                assert!(
                    tw_delta(&t, h - 1, false).unwrap().value >= d as i64 - 1,
                    "d={d} h={h}"
                );
            }
        }
    }

    #[test]
    fn tw_disconnected_graphs() {
        let two_triangles = g("p 6 / e 1 2 / e 2 3 / e 1 3 / e 4 5 / e 5 6 / e 4 6");
        let cert = tw_delta(&two_triangles, 2, false).unwrap();
        assert_eq!(cert.value, 2);
        assert!(decomp::validate(&two_triangles, &cert.tree()).valid);
    }

    #[test]
    fn tw_rejects_bad_inputs() {
        assert!(tw_delta(&g("clique:3"), 0, false).is_err());
        assert!(tw_delta(&g("path:16"), 2, false).is_err());
    }

    #[test]
    fn pw_single_bag_case() {
        assert_eq!(pw_delta(&g("clique:3"), 1, false).unwrap().value, 2);
        assert_eq!(pw_delta(&g("path:5"), 1, false).unwrap().value, 4);
    }

    #[test]
    fn pw_p4_two_bags() {
        let cert = pw_delta(&g("path:4"), 2, false).unwrap();
        assert_eq!(cert.value, 2);
        assert_eq!(brute_force_width(&g("path:4"), 2, BruteMode::Path).unwrap(), 2);
    }

    #[test]
    fn pw_c4_four_bags_matches_classic_pathwidth() {
        let cert = pw_delta(&g("cycle:4"), 4, false).unwrap();
        assert_eq!(cert.value, 2);
    }

    #[test]
    fn pw_matches_brute_force() {
        for expr in ["path:4", "cycle:4", "star:4", "clique:4"] {
            let h = g(expr);
            for delta in 1..=4 {
                let solver = pw_delta(&h, delta, false).unwrap().value;
                let brute = brute_force_width(&h, delta, BruteMode::Path).unwrap();
                assert_eq!(solver, brute, "{expr} at delta {delta}");
            }
        }
    }

    #[test]
    fn pw_certificates_valid() {
        for expr in ["path:4", "cycle:6", "clique:4"] {
            let h = g(expr);
            for delta in [1, 3, 6] {
                let cert = pw_delta(&h, delta, false).unwrap();
                match &cert.certificate {
                    CertificateBody::Path(pd) => {
                        assert!(pd.len() <= delta as usize);
                        assert!(decomp::validate_path(&h, pd).valid, "{expr} delta {delta}");
                    }
                    CertificateBody::Tree(_) => panic!("path certificate expected"),
                }
            }
        }
    }

    #[test]
    fn brute_force_capacity() {
        assert!(brute_force_width(&g("path:7"), 2, BruteMode::Tree).is_err());
    }

    #[test]
    fn certificate_json_has_header() {
        let cert = tw_delta(&g("clique:3"), 1, false).unwrap();
        let text = cert.to_json();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["parameter"], "tw_delta");
        assert_eq!(doc["value"], 2);
        assert!(doc["certificate"]["nodes"].is_array());
    }
}
