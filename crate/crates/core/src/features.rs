//! Eight-distance feature vector for a query pair `(u, v)`.
//!
//! Five diagrams are built from neighborhood subgraphs of the pair:
//!
//! * `P+`: combined `k`-hop neighborhood with the edge `(u, v)` added,
//! * `P-`: the same neighborhood with `(u, v)` removed,
//! * `Pc`: the complete graph on the combined neighborhood's nodes,
//! * `Pu`, `Pv`: the `k`-hop neighborhoods of `u` and `v` alone.
//!
//! `P+` is compared against each of the others with Wasserstein-2 (d1..d4)
//! and bottleneck (d5..d8). All five diagrams of one query share a single
//! threshold, the largest of their individual adaptive thresholds, so the
//! essential classes line up.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::diagram_distance::{bottleneck, wasserstein_q};
use crate::error::{Error, Result};
use crate::graph::{complete_graph, induce, khop_neighborhood, toggle_edge};
use crate::graph::{Graph, NodeSet};
use crate::persistence::{diagram_from_heights, merge_heights, PdConfig, PersistenceDiagram};
use crate::persistence::{Threshold, TAU_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagram {
    Plus,
    Minus,
    Complete,
    Source,
    Target,
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagram::Plus => "P+",
            Diagram::Minus => "P-",
            Diagram::Complete => "Pc",
            Diagram::Source => "Pu",
            Diagram::Target => "Pv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Wasserstein2,
    Bottleneck,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Wasserstein2 => "wasserstein-2",
            Metric::Bottleneck => "bottleneck",
        })
    }
}

/// Meaning of each feature slot: `d[i]` is `metric(lhs, rhs)`.
pub const FEATURE_PAIRS: [(Diagram, Diagram, Metric); 8] = [
    (Diagram::Plus, Diagram::Minus, Metric::Wasserstein2),
    (Diagram::Plus, Diagram::Complete, Metric::Wasserstein2),
    (Diagram::Plus, Diagram::Source, Metric::Wasserstein2),
    (Diagram::Plus, Diagram::Target, Metric::Wasserstein2),
    (Diagram::Plus, Diagram::Minus, Metric::Bottleneck),
    (Diagram::Plus, Diagram::Complete, Metric::Bottleneck),
    (Diagram::Plus, Diagram::Source, Metric::Bottleneck),
    (Diagram::Plus, Diagram::Target, Metric::Bottleneck),
];

pub fn feature_distance_pairs() -> &'static [(Diagram, Diagram, Metric); 8] {
    &FEATURE_PAIRS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubgraphSizes {
    pub u: usize,
    pub v: usize,
    pub combined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkFeatureVector {
    pub u: usize,
    pub v: usize,
    pub k: usize,
    pub d: [f64; 8],
    pub sizes: SubgraphSizes,
    /// Threshold shared by the five diagrams.
    pub tau: f64,
}

/// JSON-lines record for one feature vector.
#[derive(Debug, Clone, Serialize)]
pub struct FeatureRecord<'a> {
    pub u: &'a str,
    pub v: &'a str,
    pub k: usize,
    pub d: [f64; 8],
    pub sizes: SubgraphSizes,
}

impl LinkFeatureVector {
    pub fn record<'a>(&self, g: &'a Graph) -> FeatureRecord<'a> {
        FeatureRecord {
            u: g.label(self.u),
            v: g.label(self.v),
            k: self.k,
            d: self.d,
            sizes: self.sizes,
        }
    }
}

/// Threshold-independent summary of one subgraph's diagram.
#[derive(Debug)]
struct Summary {
    heights: Vec<f64>,
    max_distance: f64,
    sentinel: f64,
}

impl Summary {
    fn of(g: &Graph, a: f64) -> Result<Self> {
        let (heights, max_distance) = merge_heights(g, a)?;
        Ok(Summary {
            heights,
            max_distance,
            sentinel: g.sentinel(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CacheKey {
    Ball(NodeSet),
    Complete(usize),
}

/// Computes feature vectors against one fixed graph.
///
/// Diagrams of `k`-hop balls and complete graphs are memoized; they recur
/// whenever a source or target appears in several queries. The cache is safe
/// to share between threads.
pub struct FeatureExtractor<'g> {
    graph: &'g Graph,
    k: usize,
    cfg: PdConfig,
    cache: Mutex<HashMap<CacheKey, Arc<Summary>>>,
}

impl<'g> FeatureExtractor<'g> {
    pub fn new(graph: &'g Graph, k: usize, cfg: PdConfig) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("neighborhood radius k must be at least 1"));
        }
        if !(0.0..=0.5).contains(&cfg.symmetrization) {
            return Err(Error::invalid(format!(
                "symmetrization weight must lie in [0, 1/2], got {}",
                cfg.symmetrization
            )));
        }
        Ok(FeatureExtractor {
            graph,
            k,
            cfg,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn cached(
        &self,
        key: CacheKey,
        build: impl FnOnce() -> Result<Graph>,
    ) -> Result<Arc<Summary>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let summary = Arc::new(Summary::of(&build()?, self.cfg.symmetrization)?);
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&summary));
        Ok(summary)
    }

    fn ball(&self, set: &NodeSet) -> Result<Arc<Summary>> {
        self.cached(CacheKey::Ball(set.clone()), || induce(self.graph, set))
    }

    /// Diagrams `[P+, P-, Pc, Pu, Pv]` for the pair and the shared threshold.
    pub fn diagrams(&self, u: usize, v: usize) -> Result<([PersistenceDiagram; 5], SubgraphSizes)> {
        let g = self.graph;
        g.check_node(u)?;
        g.check_node(v)?;
        if u == v {
            return Err(Error::SameNode(u));
        }
        let ball_u = khop_neighborhood(g, u, self.k)?;
        let ball_v = khop_neighborhood(g, v, self.k)?;
        let combined = ball_u.union(&ball_v);

        let base = induce(g, &combined)?;
        let pu = combined.position(u).expect("u is in its own ball");
        let pv = combined.position(v).expect("v is in its own ball");
        let a = self.cfg.symmetrization;
        let plus = Summary::of(&toggle_edge(&base, pu, pv, true)?, a)?;
        let minus = Summary::of(&toggle_edge(&base, pu, pv, false)?, a)?;
        let complete = self.cached(CacheKey::Complete(combined.len()), || {
            complete_graph(g, &combined)
        })?;
        let source = self.ball(&ball_u)?;
        let target = self.ball(&ball_v)?;

        let summaries: [&Summary; 5] = [&plus, &minus, &complete, &source, &target];
        let tau = match self.cfg.threshold {
            Threshold::Fixed(tau) => tau,
            Threshold::Adaptive { floor } => summaries
                .iter()
                .map(|s| floor.max(TAU_FACTOR * s.sentinel))
                .fold(f64::MIN, f64::max),
        };
        for s in &summaries {
            if !(tau.is_finite() && tau > s.max_distance) {
                return Err(Error::ThresholdTooLow {
                    tau,
                    max: s.max_distance,
                });
            }
        }
        let diagrams = summaries.map(|s| diagram_from_heights(&s.heights, tau));
        let sizes = SubgraphSizes {
            u: ball_u.len(),
            v: ball_v.len(),
            combined: combined.len(),
        };
        Ok((diagrams, sizes))
    }

    pub fn compute(&self, u: usize, v: usize) -> Result<LinkFeatureVector> {
        let (diagrams, sizes) = self.diagrams(u, v)?;
        let slot = |d: Diagram| match d {
            Diagram::Plus => &diagrams[0],
            Diagram::Minus => &diagrams[1],
            Diagram::Complete => &diagrams[2],
            Diagram::Source => &diagrams[3],
            Diagram::Target => &diagrams[4],
        };
        let mut d = [0.0; 8];
        for (out, &(lhs, rhs, metric)) in d.iter_mut().zip(FEATURE_PAIRS.iter()) {
            let (p, q) = (slot(lhs), slot(rhs));
            *out = match metric {
                Metric::Wasserstein2 => wasserstein_q(p, q, 2.0)?,
                Metric::Bottleneck => bottleneck(p, q),
            };
        }
        Ok(LinkFeatureVector {
            u,
            v,
            k: self.k,
            d,
            sizes,
            tau: diagrams[0].tau(),
        })
    }
}

/// One-shot feature vector; see [`FeatureExtractor`] for batches.
pub fn link_feature_vector(
    g: &Graph,
    u: usize,
    v: usize,
    k: usize,
    cfg: &PdConfig,
) -> Result<LinkFeatureVector> {
    FeatureExtractor::new(g, k, *cfg)?.compute(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    fn graph(text: &str) -> Graph {
        load_edge_list(text.as_bytes(), false, false).unwrap().graph
    }

    fn features(g: &Graph, u: &str, v: &str, k: usize) -> LinkFeatureVector {
        let (u, v) = (g.node(u).unwrap(), g.node(v).unwrap());
        link_feature_vector(g, u, v, k, &PdConfig::default()).unwrap()
    }

    #[test]
    fn canonical_ordering() {
        let pairs = feature_distance_pairs();
        assert_eq!(pairs.len(), 8);
        assert_eq!(pairs[0], (Diagram::Plus, Diagram::Minus, Metric::Wasserstein2));
        assert_eq!(pairs[4], (Diagram::Plus, Diagram::Minus, Metric::Bottleneck));
        assert_eq!(pairs[7], (Diagram::Plus, Diagram::Target, Metric::Bottleneck));
    }

    #[test]
    fn adjacent_pair_in_triangle() {
        let g = graph("u v\nv w\nu w\n");
        let f = features(&g, "u", "v", 1);
        assert_eq!(f.d[0], 0.0);
        assert_eq!(f.d[4], 0.0);
        assert_eq!(f.sizes.combined, 3);
    }

    #[test]
    fn clique_missing_one_edge() {
        let g = graph("u a\nu b\nv a\nv b\na b\n");
        let f = features(&g, "u", "v", 1);
        assert_eq!(f.d[0], 0.0);
        assert_eq!(f.d[4], 0.0);
    }

    #[test]
    fn isolated_query_nodes() {
        let g = Graph::from_edges(
            vec!["u".into(), "v".into(), "x".into(), "y".into()],
            false,
            [crate::graph::Edge { src: 2, dst: 3, weight: 1.0 }],
        )
        .unwrap();
        let (diagrams, sizes) = FeatureExtractor::new(&g, 1, PdConfig::default())
            .unwrap()
            .diagrams(0, 1)
            .unwrap();
        assert_eq!(sizes, SubgraphSizes { u: 1, v: 1, combined: 2 });
        assert_eq!(diagrams[0].deaths(), vec![1.0, 3.0]);
        assert_eq!(diagrams[1].deaths(), vec![2.0, 3.0]);
        assert_eq!(diagrams[3].deaths(), vec![3.0]);
        let f = features(&g, "u", "v", 1);
        assert_eq!(f.d[4], 1.0);
        assert!(f.d[0] > 0.0);
    }

    #[test]
    fn rejects_bad_queries() {
        let g = graph("a b\n");
        assert!(matches!(
            link_feature_vector(&g, 0, 0, 1, &PdConfig::default()),
            Err(Error::SameNode(0))
        ));
        assert!(link_feature_vector(&g, 0, 5, 1, &PdConfig::default()).is_err());
        assert!(link_feature_vector(&g, 0, 1, 0, &PdConfig::default()).is_err());
    }

    #[test]
    fn record_uses_labels() {
        let g = graph("u v\nv w\nu w\n");
        let f = features(&g, "u", "w", 1);
        let json = serde_json::to_string(&f.record(&g)).unwrap();
        assert!(json.starts_with(r#"{"u":"u","v":"w","k":1,"d":["#), "{json}");
        assert!(json.contains(r#""sizes":{"u":3,"v":3,"combined":3}"#), "{json}");
    }
}
