//! 0-dimensional persistence diagrams of graphs viewed as metric spaces.
//!
//! In dimension 0 the Rips filtration only records when connected components
//! merge, so the finite deaths are exactly the edge weights of a minimum
//! spanning tree of the complete graph weighted by the metric. The primary
//! path runs dense Prim; [`pd_oracle_sweep`] is an independent union-find
//! sweep over the sorted pair list used to cross-check it.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{apsp, DistanceMatrix, Graph};

/// Default ratio between the adaptive threshold and the unreachability sentinel.
pub const TAU_FACTOR: f64 = 1.5;

static GRAPH_PD_CALLS: AtomicUsize = AtomicUsize::new(0);

/// Number of graph-to-diagram computations performed by this process.
pub fn graph_pd_calls() -> usize {
    GRAPH_PD_CALLS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub birth: f64,
    pub death: f64,
}

impl Point {
    pub fn new(birth: f64, death: f64) -> Self {
        Point { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Finite multiset of `(birth, death)` points, kept sorted by `(death, birth)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<Point>,
    tau: f64,
}

impl PersistenceDiagram {
    /// Checks `0 <= birth <= death <= tau` for every point.
    pub fn new(mut points: Vec<Point>, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid(format!("threshold must be positive, got {tau}")));
        }
        for p in &points {
            if !(p.birth >= 0.0 && p.birth <= p.death && p.death <= tau) {
                return Err(Error::invalid(format!(
                    "point ({}, {}) violates 0 <= birth <= death <= {tau}",
                    p.birth, p.death
                )));
            }
        }
        sort_points(&mut points);
        Ok(PersistenceDiagram { points, tau })
    }

    /// Diagram with births 0 at the given finite deaths plus one essential
    /// class dying at `tau`.
    fn from_merges(mut deaths: Vec<f64>, tau: f64) -> Self {
        deaths.push(tau);
        let mut points: Vec<Point> = deaths.into_iter().map(|d| Point::new(0.0, d)).collect();
        sort_points(&mut points);
        PersistenceDiagram { points, tau }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn deaths(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.death).collect()
    }

    /// One `birth death` pair per line, sorted by `(death, birth)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let _ = writeln!(out, "{} {}", p.birth, p.death);
        }
        out
    }
}

impl Serialize for PersistenceDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.points.len()))?;
        for p in &self.points {
            seq.serialize_element(&[p.birth, p.death])?;
        }
        seq.end()
    }
}

fn sort_points(points: &mut [Point]) {
    points.sort_by(|a, b| {
        a.death
            .total_cmp(&b.death)
            .then_with(|| a.birth.total_cmp(&b.birth))
    });
}

/// How the persistence threshold is chosen for a graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `max(floor, 1.5 * M)` where `M` is the graph's unreachability sentinel.
    Adaptive { floor: f64 },
    /// Exactly this value; must exceed every distance in the matrix.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdConfig {
    pub threshold: Threshold,
    /// Weight `a` in `a * min(d_ij, d_ji) + (1 - a) * max(d_ij, d_ji)`,
    /// applied to directed graphs only.
    pub symmetrization: f64,
}

impl Default for PdConfig {
    fn default() -> Self {
        PdConfig {
            threshold: Threshold::Adaptive { floor: 0.0 },
            symmetrization: 0.5,
        }
    }
}

impl PdConfig {
    pub fn fixed(tau: f64) -> Self {
        PdConfig {
            threshold: Threshold::Fixed(tau),
            ..Default::default()
        }
    }

    pub fn effective_tau(&self, sentinel: f64) -> f64 {
        match self.threshold {
            Threshold::Adaptive { floor } => floor.max(TAU_FACTOR * sentinel),
            Threshold::Fixed(tau) => tau,
        }
    }
}

/// Turns a directed distance matrix into a metric.
///
/// `a = 1/2` gives the plain average of the two directions.
pub fn symmetrize(d: &DistanceMatrix, a: f64) -> Result<DistanceMatrix> {
    if !(0.0..=0.5).contains(&a) {
        return Err(Error::invalid(format!(
            "symmetrization weight must lie in [0, 1/2], got {a}"
        )));
    }
    let n = d.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (d.get(i, j), d.get(j, i));
            let v = if a == 0.5 {
                (x + y) / 2.0
            } else {
                a * x.min(y) + (1.0 - a) * x.max(y)
            };
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix::from_raw(n, entries, d.sentinel()))
}

fn validate(d: &DistanceMatrix, tau: f64) -> Result<()> {
    if let Some((i, j)) = d.asymmetry() {
        return Err(Error::Asymmetric {
            i,
            j,
            dij: d.get(i, j),
            dji: d.get(j, i),
        });
    }
    let max = d.max_entry();
    if !(tau.is_finite() && tau > max) {
        return Err(Error::ThresholdTooLow { tau, max });
    }
    Ok(())
}

/// Minimum spanning tree edge weights of the complete graph on `d`, via
/// dense Prim. The result is sorted ascending.
pub fn mst_merge_heights(d: &DistanceMatrix) -> Vec<f64> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = d.row(0).to_vec();
    in_tree[0] = true;
    let mut heights = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || best[v] < best[next]) {
                next = v;
            }
        }
        heights.push(best[next]);
        in_tree[next] = true;
        for (v, &w) in d.row(next).iter().enumerate() {
            if !in_tree[v] && w < best[v] {
                best[v] = w;
            }
        }
    }
    heights.sort_by(f64::total_cmp);
    heights
}

/// Dimension-0 diagram of a symmetric distance matrix: `n - 1` finite merge
/// points plus one essential class at `tau`.
pub fn persistence_diagram_0(d: &DistanceMatrix, tau: f64) -> Result<PersistenceDiagram> {
    validate(d, tau)?;
    if d.is_empty() {
        return PersistenceDiagram::new(Vec::new(), tau);
    }
    Ok(PersistenceDiagram::from_merges(mst_merge_heights(d), tau))
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Reference dimension-0 diagram from a filtration sweep.
///
/// Sorts every pair `(i, j)` by distance (ties by index) and grows the Rips
/// 1-skeleton one edge at a time, recording a death whenever two components
/// merge. Quadratic memory; meant for small inputs and cross-checking.
pub fn pd_oracle_sweep(d: &DistanceMatrix, tau: f64) -> Result<PersistenceDiagram> {
    validate(d, tau)?;
    let n = d.len();
    if n == 0 {
        return PersistenceDiagram::new(Vec::new(), tau);
    }
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (d.get(i, j), i, j))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut components = DisjointSet::new(n);
    let mut deaths = Vec::with_capacity(n - 1);
    for (w, i, j) in pairs {
        if components.union(i, j) {
            deaths.push(w);
            if deaths.len() == n - 1 {
                break;
            }
        }
    }
    Ok(PersistenceDiagram::from_merges(deaths, tau))
}

/// Shortest-path metric of `g`, averaged over both directions when directed.
pub fn graph_metric(g: &Graph, a: f64) -> Result<DistanceMatrix> {
    let d = apsp(g);
    if g.is_directed() {
        symmetrize(&d, a)
    } else {
        Ok(d)
    }
}

/// Diagram of a graph: shortest paths, symmetrization for directed graphs,
/// then the dimension-0 diagram at the configured threshold.
pub fn get_pd(g: &Graph, cfg: &PdConfig) -> Result<PersistenceDiagram> {
    if g.node_count() == 0 {
        return Err(Error::EmptyNodeSet);
    }
    let tau = cfg.effective_tau(g.sentinel());
    get_pd_at(g, cfg.symmetrization, tau)
}

pub(crate) fn get_pd_at(g: &Graph, a: f64, tau: f64) -> Result<PersistenceDiagram> {
    let (heights, max) = merge_heights(g, a)?;
    if !(tau.is_finite() && tau > max) {
        return Err(Error::ThresholdTooLow { tau, max });
    }
    Ok(PersistenceDiagram::from_merges(heights, tau))
}

/// Finite merge heights of `g` and the largest metric entry, independent of
/// any threshold.
pub(crate) fn merge_heights(g: &Graph, a: f64) -> Result<(Vec<f64>, f64)> {
    GRAPH_PD_CALLS.fetch_add(1, Ordering::Relaxed);
    let d = graph_metric(g, a)?;
    if let Some((i, j)) = d.asymmetry() {
        return Err(Error::Asymmetric {
            i,
            j,
            dij: d.get(i, j),
            dji: d.get(j, i),
        });
    }
    Ok((mst_merge_heights(&d), d.max_entry()))
}

/// `PersistenceDiagram` with births 0, deaths `heights` and an essential
/// class at `tau`. `tau` must exceed every height.
pub(crate) fn diagram_from_heights(heights: &[f64], tau: f64) -> PersistenceDiagram {
    PersistenceDiagram::from_merges(heights.to_vec(), tau)
}
