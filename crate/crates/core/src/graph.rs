//! Graph storage, edge-list ingestion, neighborhood constructions and
//! all-pairs shortest paths.
//!
//! A [`Graph`] is immutable once built. Every operation that changes the
//! structure (`induce`, `toggle_edge`, `complete_graph`) returns a new value,
//! so a single training graph can be shared freely between worker threads.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::io::BufRead;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Directed or undirected weighted graph with stable string labels.
///
/// Nodes are dense indices `0..n`. `origin(i)` maps a node back to its index
/// in the graph it was derived from (identity for graphs built from scratch).
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    lookup: HashMap<(usize, usize), usize>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    directed: bool,
    origin: Vec<usize>,
}

impl PartialEq for Graph {
    /// Two graphs are equal when they have the same labels, orientation and
    /// edge set; edge insertion order is irrelevant.
    fn eq(&self, other: &Self) -> bool {
        if self.labels != other.labels
            || self.directed != other.directed
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        self.edges.iter().all(|e| {
            other
                .edge_weight(e.src, e.dst)
                .is_some_and(|w| w == e.weight)
        })
    }
}

impl Graph {
    /// Builds a graph from labels and an edge list.
    ///
    /// Rejects self-loops, duplicate edges (per ordered pair when directed,
    /// per unordered pair otherwise), non-positive weights and duplicate labels.
    pub fn from_edges(
        labels: Vec<String>,
        directed: bool,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let n = labels.len();
        let origin = (0..n).collect();
        Self::build(labels, directed, edges, origin)
    }

    fn build(
        labels: Vec<String>,
        directed: bool,
        edges: impl IntoIterator<Item = Edge>,
        origin: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate node label `{label}`")));
            }
        }
        let mut g = Graph {
            labels,
            index,
            edges: Vec::new(),
            lookup: HashMap::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: if directed { vec![Vec::new(); n] } else { Vec::new() },
            directed,
            origin,
        };
        for e in edges {
            g.check_node(e.src)?;
            g.check_node(e.dst)?;
            if e.src == e.dst {
                return Err(Error::invalid(format!("self-loop on node {}", e.src)));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) has non-positive weight {}",
                    e.src, e.dst, e.weight
                )));
            }
            let key = g.key(e.src, e.dst);
            if g.lookup.contains_key(&key) {
                return Err(Error::invalid(format!(
                    "duplicate edge ({}, {})",
                    e.src, e.dst
                )));
            }
            g.lookup.insert(key, g.edges.len());
            g.edges.push(e);
            g.out_adj[e.src].push((e.dst, e.weight));
            if directed {
                g.in_adj[e.dst].push((e.src, e.weight));
            } else {
                g.out_adj[e.dst].push((e.src, e.weight));
            }
        }
        Ok(g)
    }

    fn key(&self, u: usize, v: usize) -> (usize, usize) {
        if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        }
    }

    pub fn check_node(&self, u: usize) -> Result<()> {
        if u < self.labels.len() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                index: u,
                len: self.labels.len(),
            })
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Like [`Graph::index_of`] but failing with [`Error::UnknownLabel`].
    pub fn node(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.lookup.contains_key(&self.key(u, v))
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.lookup
            .get(&self.key(u, v))
            .map(|&i| self.edges[i].weight)
    }

    /// Outgoing neighbors (all neighbors when undirected).
    pub fn out_neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.out_adj[u]
    }

    /// Incoming neighbors (all neighbors when undirected).
    pub fn in_neighbors(&self, u: usize) -> &[(usize, f64)] {
        if self.directed {
            &self.in_adj[u]
        } else {
            &self.out_adj[u]
        }
    }

    /// Distinct neighbors ignoring edge direction, sorted ascending.
    pub fn undirected_neighbors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.out_adj[u].iter().map(|&(v, _)| v).collect();
        if self.directed {
            out.extend(self.in_adj[u].iter().map(|&(v, _)| v));
            out.sort_unstable();
            out.dedup();
        } else {
            out.sort_unstable();
        }
        out
    }

    /// Index of node `u` in the graph this one was derived from.
    pub fn origin(&self, u: usize) -> usize {
        self.origin[u]
    }

    pub fn origins(&self) -> &[usize] {
        &self.origin
    }

    /// Largest edge weight, or 1 for an edgeless graph.
    pub fn max_weight(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.weight)
            .fold(None, |acc: Option<f64>, w| Some(acc.map_or(w, |a| a.max(w))))
            .unwrap_or(1.0)
    }

    /// Mean edge weight, or 1 for an edgeless graph.
    pub fn mean_weight(&self) -> f64 {
        if self.edges.is_empty() {
            1.0
        } else {
            self.edges.iter().map(|e| e.weight).sum::<f64>() / self.edges.len() as f64
        }
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Stand-in distance for unreachable pairs: `n * w_max`.
    ///
    /// Any finite shortest path is at most `(n - 1) * w_max`, so the sentinel
    /// is strictly larger than every real distance in this graph.
    pub fn sentinel(&self) -> f64 {
        self.node_count() as f64 * self.max_weight()
    }
}

/// Result of [`load_edge_list`], with counts of the lines that were dropped.
#[derive(Debug, Clone)]
pub struct EdgeListLoad {
    pub graph: Graph,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` and blank lines are skipped. Each remaining
/// line is `src dst` or `src dst weight`. When `weighted` is false a third
/// column is ignored and every edge gets weight 1; when true it is required.
/// Duplicate edges keep the first weight and self-loops are dropped.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool, weighted: bool) -> Result<EdgeListLoad> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    let mut edges = Vec::new();
    let mut duplicate_edges = 0;
    let mut self_loops = 0;

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(label) {
            return i;
        }
        let i = labels.len();
        labels.push(label.to_string());
        index.insert(label.to_string(), i);
        i
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(Error::Read)?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let weight = match (tokens.len(), weighted) {
            (2, false) | (3, false) => 1.0,
            (3, true) => {
                let w: f64 = tokens[2].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid weight `{}`", tokens[2]),
                })?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("weight must be positive, got {w}"),
                    });
                }
                w
            }
            (count, _) => {
                let expected = if weighted { "3" } else { "2 or 3" };
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {expected} tokens, found {count}"),
                });
            }
        };
        let src = intern(tokens[0], &mut labels);
        let dst = intern(tokens[1], &mut labels);
        if src == dst {
            self_loops += 1;
            continue;
        }
        let key = if directed || src < dst { (src, dst) } else { (dst, src) };
        if seen.insert(key, ()).is_some() {
            duplicate_edges += 1;
            continue;
        }
        edges.push(Edge { src, dst, weight });
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let graph = Graph::from_edges(labels, directed, edges)?;
    Ok(EdgeListLoad {
        graph,
        duplicate_edges,
        self_loops,
    })
}

/// Sorted set of node indices of some parent graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    /// Collects `members` (in any order, repeats allowed) after checking each
    /// one against `g`.
    pub fn new(g: &Graph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        for &m in &members {
            g.check_node(m)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(NodeSet { members })
    }

    pub fn all(g: &Graph) -> Self {
        NodeSet {
            members: (0..g.node_count()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.binary_search(&u).is_ok()
    }

    /// Position of parent node `u` inside the induced subgraph.
    pub fn position(&self, u: usize) -> Option<usize> {
        self.members.binary_search(&u).ok()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut members = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                Ordering::Less => {
                    members.push(self.members[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    members.push(other.members[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    members.push(self.members[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        members.extend_from_slice(&self.members[i..]);
        members.extend_from_slice(&other.members[j..]);
        NodeSet { members }
    }
}

/// `u` plus every node within `k` hops of it. Edge direction is ignored
/// while expanding the ball.
pub fn khop_neighborhood(g: &Graph, u: usize, k: usize) -> Result<NodeSet> {
    g.check_node(u)?;
    if k == 0 {
        return Err(Error::invalid("neighborhood radius k must be at least 1"));
    }
    let mut depth = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    let mut members = vec![u];
    depth[u] = 0;
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        if depth[x] == k {
            continue;
        }
        let next = depth[x] + 1;
        for &(y, _) in g.out_neighbors(x).iter().chain(g.in_neighbors(x)) {
            if depth[y] == usize::MAX {
                depth[y] = next;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    members.sort_unstable();
    Ok(NodeSet { members })
}

/// Union of the `k`-hop balls around `u` and `v`.
pub fn combined_neighborhood(g: &Graph, u: usize, v: usize, k: usize) -> Result<NodeSet> {
    if u == v {
        return Err(Error::SameNode(u));
    }
    let a = khop_neighborhood(g, u, k)?;
    let b = khop_neighborhood(g, v, k)?;
    Ok(a.union(&b))
}

/// Subgraph on `s` containing every edge of `g` with both endpoints in `s`.
///
/// Node `i` of the result is `s.members()[i]`; `origin(i)` records it.
pub fn induce(g: &Graph, s: &NodeSet) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    for &m in s.members() {
        g.check_node(m)?;
    }
    let labels = s.members().iter().map(|&m| g.labels[m].clone()).collect();
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .filter_map(|e| {
            let src = s.position(e.src)?;
            let dst = s.position(e.dst)?;
            Some(Edge {
                src,
                dst,
                weight: e.weight,
            })
        })
        .collect();
    Graph::build(labels, g.directed, edges, s.members().to_vec())
}

/// Copy of `g` with the edge `u -> v` (or `{u, v}`) present or absent.
///
/// An added edge has the mean edge weight of `g`, which is 1 on unweighted
/// graphs.
pub fn toggle_edge(g: &Graph, u: usize, v: usize, present: bool) -> Result<Graph> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Err(Error::SameNode(u));
    }
    if g.has_edge(u, v) == present {
        return Ok(g.clone());
    }
    let edges: Vec<Edge> = if present {
        let weight = g.mean_weight();
        g.edges
            .iter()
            .copied()
            .chain(std::iter::once(Edge { src: u, dst: v, weight }))
            .collect()
    } else {
        let key = g.key(u, v);
        g.edges
            .iter()
            .copied()
            .filter(|e| g.key(e.src, e.dst) != key)
            .collect()
    };
    Graph::build(g.labels.clone(), g.directed, edges, g.origin.clone())
}

/// Undirected complete graph with unit weights over the nodes of `s`.
pub fn complete_graph(g: &Graph, s: &NodeSet) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    for &m in s.members() {
        g.check_node(m)?;
    }
    let n = s.len();
    let labels = s.members().iter().map(|&m| g.labels[m].clone()).collect();
    let edges = (0..n).flat_map(|i| {
        (i + 1..n).map(move |j| Edge {
            src: i,
            dst: j,
            weight: 1.0,
        })
    });
    Graph::build(labels, false, edges, s.members().to_vec())
}

/// Dense square matrix of pairwise distances, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    sentinel: f64,
}

impl DistanceMatrix {
    /// Builds a matrix from rows, checking shape, zero diagonal and that every
    /// entry lies in `[0, sentinel]`.
    pub fn from_rows(rows: Vec<Vec<f64>>, sentinel: f64) -> Result<Self> {
        let n = rows.len();
        if !(sentinel.is_finite() && sentinel > 0.0) {
            return Err(Error::invalid("sentinel must be positive and finite"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if i == j && d != 0.0 {
                    return Err(Error::invalid(format!("diagonal entry {i} is {d}, not 0")));
                }
                if !(d >= 0.0 && d <= sentinel) {
                    return Err(Error::invalid(format!(
                        "entry ({i}, {j}) = {d} outside [0, {sentinel}]"
                    )));
                }
            }
            entries.extend(row);
        }
        Ok(DistanceMatrix {
            n,
            entries,
            sentinel,
        })
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<f64>, sentinel: f64) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        DistanceMatrix {
            n,
            entries,
            sentinel,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn sentinel(&self) -> f64 {
        self.sentinel
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// First `(i, j)` with `d[i][j] != d[j][i]`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct QueueItem {
    dist: f64,
    node: usize,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All-pairs shortest path lengths, respecting edge direction.
///
/// Unreachable pairs get the graph's [`sentinel`](Graph::sentinel). Uses BFS
/// per source on unit-weight graphs and Dijkstra otherwise.
pub fn apsp(g: &Graph) -> DistanceMatrix {
    let n = g.node_count();
    let sentinel = g.sentinel();
    let mut entries = vec![sentinel; n * n];
    let unit = g.is_unit_weighted();
    let mut queue = VecDeque::new();
    let mut heap = BinaryHeap::new();
    for s in 0..n {
        let row = &mut entries[s * n..(s + 1) * n];
        row[s] = 0.0;
        if unit {
            queue.clear();
            queue.push_back(s);
            let mut seen = vec![false; n];
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                let next = row[x] + 1.0;
                for &(y, _) in g.out_neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        row[y] = next;
                        queue.push_back(y);
                    }
                }
            }
        } else {
            let mut dist = vec![f64::INFINITY; n];
            dist[s] = 0.0;
            heap.clear();
            heap.push(QueueItem { dist: 0.0, node: s });
            while let Some(QueueItem { dist: d, node: x }) = heap.pop() {
                if d > dist[x] {
                    continue;
                }
                for &(y, w) in g.out_neighbors(x) {
                    let nd = d + w;
                    if nd < dist[y] {
                        dist[y] = nd;
                        heap.push(QueueItem { dist: nd, node: y });
                    }
                }
            }
            for (r, d) in row.iter_mut().zip(dist) {
                if d.is_finite() {
                    *r = d;
                }
            }
        }
    }
    if !g.is_directed() && !unit {
        // Path sums from either end can differ in the last bit.
        for i in 0..n {
            for j in i + 1..n {
                let d = entries[i * n + j].min(entries[j * n + i]);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
    }
    DistanceMatrix::from_raw(n, entries, sentinel)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(n: usize) -> Graph {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let edges = (0..n - 1).map(|i| Edge {
            src: i,
            dst: i + 1,
            weight: 1.0,
        });
        Graph::from_edges(labels, false, edges).unwrap()
    }

    fn parse(text: &str, directed: bool) -> EdgeListLoad {
        load_edge_list(text.as_bytes(), directed, false).unwrap()
    }

    fn set(g: &Graph, labels: &[&str]) -> Vec<usize> {
        labels.iter().map(|l| g.node(l).unwrap()).collect()
    }

    #[test]
    fn loads_simple_edge_list() {
        let load = parse("a b\nb c\n", false);
        assert_eq!(load.graph.node_count(), 3);
        assert_eq!(load.graph.edge_count(), 2);
        assert!(load.graph.edges().iter().all(|e| e.weight == 1.0));
        assert_eq!(load.graph.labels(), &["a", "b", "c"]);
    }

    #[test]
    fn drops_duplicates_and_self_loops() {
        let load = parse("a b\na b\na a\n", false);
        assert_eq!(load.graph.node_count(), 2);
        assert_eq!(load.graph.edge_count(), 1);
        assert_eq!(load.duplicate_edges, 1);
        assert_eq!(load.self_loops, 1);
    }

    #[test]
    fn reversed_pair_is_duplicate_only_when_undirected() {
        assert_eq!(parse("a b\nb a\n", false).graph.edge_count(), 1);
        assert_eq!(parse("a b\nb a\n", true).graph.edge_count(), 2);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let load = parse("% header\n# another\n\n  a b\n", false);
        assert_eq!(load.graph.edge_count(), 1);
    }

    #[test]
    fn weighted_lines_keep_first_weight() {
        let load = load_edge_list("a b 2.5\nb a 7\n".as_bytes(), false, true).unwrap();
        assert_eq!(load.graph.edge_weight(0, 1), Some(2.5));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = load_edge_list("a b\nc\n".as_bytes(), false, false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("a b 1\nb c 0\n".as_bytes(), false, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("a b -3\n".as_bytes(), false, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = load_edge_list("a b\n".as_bytes(), false, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            load_edge_list("".as_bytes(), false, false),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            load_edge_list("# only comments\na a\n".as_bytes(), false, false),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn khop_examples() {
        let g = path(3);
        let ball = khop_neighborhood(&g, 1, 1).unwrap();
        assert_eq!(ball.members(), &[0, 1, 2]);

        let g = path(5);
        assert_eq!(khop_neighborhood(&g, 0, 2).unwrap().members(), &[0, 1, 2]);

        let g = parse("1 2\n3 4\n", false).graph;
        let u = g.node("1").unwrap();
        let ball = khop_neighborhood(&g, u, 3).unwrap();
        assert_eq!(ball.members(), &set(&g, &["1", "2"])[..]);
    }

    #[test]
    fn khop_ignores_direction() {
        let g = parse("1 2\n3 2\n", true).graph;
        let sink = g.node("2").unwrap();
        assert_eq!(khop_neighborhood(&g, sink, 1).unwrap().len(), 3);
    }

    #[test]
    fn khop_rejects_bad_input() {
        let g = path(3);
        assert!(matches!(
            khop_neighborhood(&g, 7, 1),
            Err(Error::InvalidNode { index: 7, len: 3 })
        ));
        assert!(khop_neighborhood(&g, 0, 0).is_err());
    }

    #[test]
    fn combined_examples() {
        let g = path(3);
        assert_eq!(combined_neighborhood(&g, 0, 2, 1).unwrap().len(), 3);

        let g = parse("1 2\n3 4\n", false).graph;
        assert_eq!(combined_neighborhood(&g, 0, 2, 1).unwrap().len(), 4);

        let g = parse("c a\nc b\nc d\n", false).graph;
        let (a, b) = (g.node("a").unwrap(), g.node("b").unwrap());
        let s = combined_neighborhood(&g, a, b, 1).unwrap();
        let mut expected = set(&g, &["a", "b", "c"]);
        expected.sort();
        assert_eq!(s.members(), &expected[..]);

        assert!(matches!(
            combined_neighborhood(&g, a, a, 1),
            Err(Error::SameNode(_))
        ));
    }

    #[test]
    fn induce_examples() {
        let tri = parse("1 2\n2 3\n1 3\n", false).graph;
        let s = NodeSet::new(&tri, [0, 1]).unwrap();
        let sub = induce(&tri, &s).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        assert!(sub.has_edge(0, 1));

        let all = induce(&tri, &NodeSet::all(&tri)).unwrap();
        assert_eq!(all, tri);

        let g = path(3);
        let sub = induce(&g, &NodeSet::new(&g, [0, 2]).unwrap()).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 0);
        assert_eq!(sub.origins(), &[0, 2]);
        assert_eq!(sub.labels(), &["1", "3"]);

        let empty = NodeSet::new(&g, []).unwrap();
        assert!(matches!(induce(&g, &empty), Err(Error::EmptyNodeSet)));
    }

    #[test]
    fn toggle_examples() {
        let p = path(3);
        let tri = toggle_edge(&p, 0, 2, true).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(tri.edge_weight(2, 0), Some(1.0));

        let back = toggle_edge(&tri, 0, 2, false).unwrap();
        assert_eq!(back, p);

        assert_eq!(toggle_edge(&p, 0, 2, false).unwrap(), p);
        assert!(matches!(toggle_edge(&p, 1, 1, true), Err(Error::SameNode(1))));
    }

    #[test]
    fn toggle_on_weighted_graph_uses_mean_weight() {
        let g = load_edge_list("a b 1\nb c 3\n".as_bytes(), false, true)
            .unwrap()
            .graph;
        let t = toggle_edge(&g, 0, 2, true).unwrap();
        assert_eq!(t.edge_weight(0, 2), Some(2.0));
    }

    #[test]
    fn complete_graph_examples() {
        let g = path(5);
        for (size, expected) in [(4, 6), (1, 0), (2, 1)] {
            let s = NodeSet::new(&g, 0..size).unwrap();
            let c = complete_graph(&g, &s).unwrap();
            assert_eq!(c.edge_count(), expected);
            assert!(!c.is_directed());
            assert!(c.edges().iter().all(|e| e.weight == 1.0));
        }
    }

    #[test]
    fn apsp_examples() {
        let d = apsp(&path(3));
        assert_eq!(d.get(0, 2), 2.0);
        assert!(d.is_symmetric());

        let g = parse("1 2\n3 4\n", false).graph;
        let d = apsp(&g);
        assert_eq!(d.sentinel(), 4.0);
        assert_eq!(d.get(0, 2), 4.0);

        let g = parse("1 2\n2 3\n", true).graph;
        let d = apsp(&g);
        assert_eq!(d.get(0, 2), 2.0);
        assert_eq!(d.get(2, 0), d.sentinel());
        assert_eq!(d.get(1, 1), 0.0);
    }

    #[test]
    fn apsp_weighted_prefers_lighter_detour() {
        let g = load_edge_list("a b 5\na c 1\nc b 1\n".as_bytes(), false, true)
            .unwrap()
            .graph;
        let d = apsp(&g);
        assert_eq!(d.get(0, 1), 2.0);
        assert_eq!(d.sentinel(), 15.0);
    }

    #[test]
    fn from_rows_validates() {
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 8.0).is_ok());
        assert!(DistanceMatrix::from_rows(vec![vec![1.0]], 8.0).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 9.0], vec![1.0, 0.0]], 8.0).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0]], 8.0).is_err());
    }
}
