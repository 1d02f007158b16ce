//! Pattern-graph model: parsing, generators, pruning, and small brute-force
//! invariants (vertex cover, vertex integrity, automorphism count) used as
//! cross-checks elsewhere.

use crate::{Error, Result};
use itertools::Itertools;
use std::collections::BTreeSet;
use std::fmt;

/// 1-based vertex label.
pub type VertexId = u32;

/// Undirected simple graph on vertices `1..=vertex_count`.
///
/// Edges are stored canonically as `(min, max)`, sorted, without duplicates.
/// Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: u32,
    edges: Vec<(VertexId, VertexId)>,
}

impl Graph {
    /// Builds a graph, canonicalizing edge orientation and rejecting
    /// self-loops, duplicates and out-of-range endpoints.
    pub fn new(vertex_count: u32, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut canon: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if u < 1 || v < 1 || u > vertex_count || v > vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range 1..={vertex_count}"
                )));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        let before = canon.len();
        canon.dedup();
        if canon.len() != before {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        Ok(Graph {
            vertex_count,
            edges: canon,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    /// Canonically oriented, sorted edge list.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        1..=self.vertex_count
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count as usize;
        let mut seen = vec![false; n + 1];
        let mut comps = Vec::new();
        for start in 1..=self.vertex_count {
            if seen[start as usize] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start as usize] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced by `verts` (any order), relabeled 1..len in sorted
    /// order of the original labels.
    pub fn induced(&self, verts: &[VertexId]) -> Graph {
        let sorted: Vec<VertexId> = verts.iter().copied().sorted().dedup().collect();
        let index = |v: VertexId| sorted.binary_search(&v).map(|i| i as u32 + 1).ok();
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((index(a)?, index(b)?)))
            .collect();
        Graph::new(sorted.len() as u32, edges).expect("induced subgraph is valid")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {}", self.vertex_count)?;
        for (u, v) in &self.edges {
            writeln!(f, "e {u} {v}")?;
        }
        Ok(())
    }
}

/// Result of pruning: the surviving graph relabeled 1..m plus the map back
/// to the original labels (`original_ids[new - 1] == old`).
#[derive(Debug, Clone)]
pub struct Pruned {
    pub graph: Graph,
    pub original_ids: Vec<VertexId>,
}

impl Pruned {
    pub fn to_original(&self, pruned_id: VertexId) -> VertexId {
        self.original_ids[pruned_id as usize - 1]
    }

    pub fn from_original(&self, original_id: VertexId) -> Option<VertexId> {
        self.original_ids
            .binary_search(&original_id)
            .ok()
            .map(|i| i as u32 + 1)
    }
}

/// Removes every vertex whose degree in `h` is at most 1, in one shot.
///
/// Degrees are measured in `h` itself, so vertices that only become isolated
/// by the removal survive (they turn into bag-only vertices downstream).
pub fn prune(h: &Graph) -> Pruned {
    let keep: Vec<VertexId> = h.vertices().filter(|&v| h.degree(v) >= 2).collect();
    let graph = h.induced(&keep);
    Pruned {
        graph,
        original_ids: keep,
    }
}

/// Diagnostic variant: prune repeatedly until a fixed point is reached.
pub fn prune_iterated(h: &Graph) -> Pruned {
    let mut cur = prune(h);
    loop {
        let next = prune(&cur.graph);
        if next.graph.vertex_count() == cur.graph.vertex_count() {
            return cur;
        }
        let original_ids = next
            .original_ids
            .iter()
            .map(|&v| cur.to_original(v))
            .collect();
        cur = Pruned {
            graph: next.graph,
            original_ids,
        };
    }
}

/// Exact invariants computed by brute force; see the individual functions
/// for the capacity limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GraphInvariants {
    pub vertex_cover_number: u32,
    pub vertex_integrity: u32,
    pub automorphism_count: u64,
}

pub fn invariants(h: &Graph) -> Result<GraphInvariants> {
    Ok(GraphInvariants {
        vertex_cover_number: vertex_cover_number(h)?,
        vertex_integrity: vertex_integrity(h)?,
        automorphism_count: automorphism_count(h)?,
    })
}

/// min over S ⊆ V of |S| + size of the largest component of H − S.
///
/// Brute force over all 2^n subsets; requires at most 16 vertices.
/// Returns 1 for edgeless nonempty graphs and 0 for the empty graph.
pub fn vertex_integrity(h: &Graph) -> Result<u32> {
    let n = h.vertex_count;
    if n > 16 {
        return Err(Error::Capacity(format!(
            "vertex integrity needs <= 16 vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = adjacency_masks(h);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = n;
    for s in 0..=full {
        let rest = full & !s;
        let size = (s.count_ones() + largest_component(&adj, rest)).min(best);
        best = size;
    }
    Ok(best)
}

/// Exact minimum vertex cover size by branching on an uncovered edge.
/// Requires at most 20 vertices.
pub fn vertex_cover_number(h: &Graph) -> Result<u32> {
    if h.vertex_count > 20 {
        return Err(Error::Capacity(format!(
            "vertex cover needs <= 20 vertices, got {}",
            h.vertex_count
        )));
    }
    fn go(edges: &[(VertexId, VertexId)], covered: u32, used: u32, best: &mut u32) {
        if used >= *best {
            return;
        }
        match edges
            .iter()
            .find(|&&(u, v)| covered & (1 << (u - 1)) == 0 && covered & (1 << (v - 1)) == 0)
        {
            None => *best = used,
            Some(&(u, v)) => {
                go(edges, covered | 1 << (u - 1), used + 1, best);
                go(edges, covered | 1 << (v - 1), used + 1, best);
            }
        }
    }
    let mut best = h.vertex_count.min(h.edge_count() as u32);
    if h.edge_count() == 0 {
        return Ok(0);
    }
    go(h.edges(), 0, 0, &mut best);
    Ok(best)
}

/// |aut(H)| by enumerating all permutations. Requires at most 9 vertices.
pub fn automorphism_count(h: &Graph) -> Result<u64> {
    let n = h.vertex_count;
    if n > 9 {
        return Err(Error::Capacity(format!(
            "automorphism count needs <= 9 vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut count = 0u64;
    for perm in (1..=n).permutations(n as usize) {
        let maps = |v: VertexId| perm[v as usize - 1];
        // A bijection mapping every edge to an edge maps non-edges to
        // non-edges as well, so this single direction suffices.
        if h.edges().iter().all(|&(u, v)| h.has_edge(maps(u), maps(v))) {
            count += 1;
        }
    }
    Ok(count)
}

fn adjacency_masks(h: &Graph) -> Vec<u32> {
    let n = h.vertex_count as usize;
    let mut adj = vec![0u32; n];
    for &(u, v) in h.edges() {
        adj[u as usize - 1] |= 1 << (v - 1);
        adj[v as usize - 1] |= 1 << (u - 1);
    }
    adj
}

fn largest_component(adj: &[u32], mut verts: u32) -> u32 {
    let mut best = 0;
    while verts != 0 {
        let start = verts.trailing_zeros();
        let mut comp = 1u32 << start;
        loop {
            let mut grown = comp;
            let mut cursor = comp;
            while cursor != 0 {
                let v = cursor.trailing_zeros();
                cursor &= cursor - 1;
                grown |= adj[v as usize] & verts;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        best = best.max(comp.count_ones());
        verts &= !comp;
    }
    best
}

/// Parses either the line-based graph format or a generator expression.
///
/// Format: `p <k>` then `e <u> <v>` lines; `#` starts a comment; `/` is
/// accepted as a line separator so graphs can be passed inline on a command
/// line. Generators: `path:k`, `cycle:k`, `clique:k`, `star:k` (star on k
/// vertices, center first), `dary:d:h` (full d-ary tree of height h),
/// `grid:r:c`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let trimmed = text.trim();
    if !trimmed.contains('\n') && !trimmed.contains('/') && trimmed.contains(':') {
        return generate(trimmed);
    }
    let mut vertex_count: Option<u32> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let lines = trimmed.split(['\n', '/']);
    for (idx, raw) in lines.enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if vertex_count.is_some() {
                    return Err(Error::format(line_no, "duplicate 'p' line"));
                }
                let k: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::format(line_no, "expected 'p <k>'"))?;
                vertex_count = Some(k);
            }
            Some("e") => {
                let k = vertex_count.ok_or_else(|| Error::format(line_no, "'e' before 'p'"))?;
                let u: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::format(line_no, "expected 'e <u> <v>'"))?;
                let v: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::format(line_no, "expected 'e <u> <v>'"))?;
                if u == v {
                    return Err(Error::format(line_no, format!("self-loop at vertex {u}")));
                }
                if u < 1 || v < 1 || u > k || v > k {
                    return Err(Error::format(
                        line_no,
                        format!("endpoint out of range 1..={k}"),
                    ));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(Error::format(line_no, format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
            Some(tok) => {
                return Err(Error::format(line_no, format!("unknown directive '{tok}'")));
            }
            None => unreachable!(),
        }
    }
    let k = vertex_count.ok_or_else(|| Error::format(1, "missing 'p <k>' line"))?;
    Graph::new(k, edges)
}

fn generate(expr: &str) -> Result<Graph> {
    let parts: Vec<&str> = expr.split(':').collect();
    let arg = |i: usize| -> Result<u32> {
        parts
            .get(i)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad generator expression '{expr}'")))
    };
    match parts[0] {
        "path" => {
            let k = arg(1)?;
            Graph::new(k, (1..k).map(|i| (i, i + 1)))
        }
        "cycle" => {
            let k = arg(1)?;
            if k < 3 {
                return Err(Error::InvalidInput(format!("cycle needs k >= 3, got {k}")));
            }
            Graph::new(k, (1..k).map(|i| (i, i + 1)).chain([(k, 1)]))
        }
        "clique" => {
            let k = arg(1)?;
            Graph::new(k, (1..=k).tuple_combinations())
        }
        "star" => {
            let k = arg(1)?;
            if k < 1 {
                return Err(Error::InvalidInput("star needs k >= 1".into()));
            }
            Graph::new(k, (2..=k).map(|i| (1, i)))
        }
        "dary" => {
            let d = arg(1)?;
            let h = arg(2)?;
            if d < 1 || h < 1 {
                return Err(Error::InvalidInput(format!(
                    "dary needs d >= 1 and h >= 1, got d={d} h={h}"
                )));
            }
            let mut count: u64 = 0;
            let mut level: u64 = 1;
            for _ in 0..h {
                count += level;
                level *= d as u64;
                if count > 1 << 20 {
                    return Err(Error::Capacity(format!("dary:{d}:{h} is too large")));
                }
            }
            let k = count as u32;
            // BFS numbering: children of i are d*(i-1)+2 ..= d*i+1.
            let edges = (1..=k)
                .flat_map(|i| (0..d).map(move |j| (i, d * (i - 1) + 2 + j)))
                .filter(|&(_, c)| c <= k);
            Graph::new(k, edges)
        }
        "grid" => {
            let r = arg(1)?;
            let c = arg(2)?;
            if r < 1 || c < 1 {
                return Err(Error::InvalidInput("grid needs r,c >= 1".into()));
            }
            let id = |i: u32, j: u32| (i - 1) * c + j;
            let mut edges = Vec::new();
            for i in 1..=r {
                for j in 1..=c {
                    if j < c {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i < r {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            Graph::new(r * c, edges)
        }
        other => Err(Error::InvalidInput(format!("unknown generator '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(expr: &str) -> Graph {
        parse_graph(expr).unwrap()
    }

    #[test]
    fn parses_k3_inline() {
        let k3 = g("p 3 / e 1 2 / e 2 3 / e 1 3");
        assert_eq!(k3.vertex_count(), 3);
        assert_eq!(k3.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn dary_2_3_is_seven_vertex_binary_tree() {
        let t = g("dary:2:3");
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.edge_count(), 6);
        assert_eq!(t.neighbors(1), vec![2, 3]);
        assert_eq!(t.neighbors(2), vec![1, 4, 5]);
    }

    #[test]
    fn dary_vertex_count_formula() {
        for d in 2..=4u64 {
            for h in 1..=4u32 {
                let t = g(&format!("dary:{d}:{h}"));
                let expected = (d.pow(h) - 1) / (d - 1);
                assert_eq!(t.vertex_count() as u64, expected);
                assert_eq!(t.edge_count() as u64, expected - 1);
            }
        }
    }

    #[test]
    fn self_loop_rejected_with_line_number() {
        let err = parse_graph("p 2\ne 1 1").unwrap_err();
        match err {
            Error::Format { line, .. } => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_edge_and_range_errors() {
        assert!(parse_graph("p 3\ne 1 2\ne 2 1").is_err());
        assert!(parse_graph("p 3\ne 1 4").is_err());
        assert!(parse_graph("p 3\nq 1 2").is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(g("path:4").edges(), &[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(g("cycle:4").edges(), &[(1, 2), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(g("clique:4").edge_count(), 6);
        // star:4 = K_{1,3}, same graph as dary:3:2 up to labels
        assert_eq!(g("star:4").edges(), &[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(g("grid:2:3").vertex_count(), 6);
        assert_eq!(g("grid:2:3").edge_count(), 7);
    }

    #[test]
    fn prune_p3_leaves_isolated_middle() {
        let p3 = g("path:3");
        let pruned = prune(&p3);
        assert_eq!(pruned.graph.vertex_count(), 1);
        assert_eq!(pruned.graph.edge_count(), 0);
        assert_eq!(pruned.original_ids, vec![2]);
    }

    #[test]
    fn prune_c4_is_identity() {
        let c4 = g("cycle:4");
        let pruned = prune(&c4);
        assert_eq!(pruned.graph, c4);
    }

    #[test]
    fn prune_binary_tree_drops_leaf_layer() {
        let t3 = g("dary:2:3");
        let pruned = prune(&t3);
        let t2 = g("dary:2:2");
        assert_eq!(pruned.graph, t2);
        assert_eq!(pruned.original_ids, vec![1, 2, 3]);
    }

    #[test]
    fn prune_k2_gives_empty_graph() {
        let pruned = prune(&g("path:2"));
        assert_eq!(pruned.graph.vertex_count(), 0);
    }

    #[test]
    fn vertex_integrity_values() {
        // C4: brute force over all 16 subsets gives 3 (S = two opposite vertices).
        assert_eq!(vertex_integrity(&g("cycle:4")).unwrap(), 3);
        assert_eq!(vertex_integrity(&g("clique:3")).unwrap(), 3);
        // Full 3-ary tree of height 3 (13 vertices): S = the three middle vertices.
        assert_eq!(vertex_integrity(&g("dary:3:3")).unwrap(), 4);
        // Edgeless graph.
        assert_eq!(vertex_integrity(&g("p 3").clone()).unwrap(), 1);
    }

    #[test]
    fn vertex_cover_values() {
        assert_eq!(vertex_cover_number(&g("clique:3")).unwrap(), 2);
        assert_eq!(vertex_cover_number(&g("cycle:4")).unwrap(), 2);
        assert_eq!(vertex_cover_number(&g("p 4")).unwrap(), 0);
        assert_eq!(vertex_cover_number(&g("cycle:6")).unwrap(), 3);
    }

    #[test]
    fn automorphism_values() {
        assert_eq!(automorphism_count(&g("clique:3")).unwrap(), 6);
        assert_eq!(automorphism_count(&g("path:3")).unwrap(), 2);
        assert_eq!(automorphism_count(&g("cycle:4")).unwrap(), 8);
        assert_eq!(automorphism_count(&g("path:2")).unwrap(), 2);
    }

    #[test]
    fn capacity_limits_enforced() {
        assert!(vertex_integrity(&g("path:17")).is_err());
        assert!(automorphism_count(&g("path:10")).is_err());
        assert!(vertex_cover_number(&g("path:21")).is_err());
    }

    #[test]
    fn components_and_induced() {
        let h = g("p 5 / e 1 2 / e 4 5");
        assert_eq!(h.components(), vec![vec![1, 2], vec![3], vec![4, 5]]);
        let sub = h.induced(&[4, 5]);
        assert_eq!(sub.edges(), &[(1, 2)]);
    }
}
