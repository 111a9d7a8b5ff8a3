//! Link prediction from 0-dimensional persistence diagrams.
//!
//! A query pair `(u, v)` is scored by comparing persistence diagrams of small
//! subgraphs around it: the combined neighborhood with and without the edge,
//! the complete graph on that neighborhood, and each node's own neighborhood.
//! The eight resulting diagram distances rank candidate targets through a
//! rank product, evaluated with Hits@N on held-out edges against the
//! Adamic-Adar and Milne-Witten baselines.

pub mod cli;
pub mod diagram_distance;
pub mod error;
pub mod features;
pub mod graph;
pub mod persistence;
pub mod ranking;

pub use diagram_distance::{bottleneck, wasserstein_q};
pub use error::{Error, Result};
pub use features::{link_feature_vector, FeatureExtractor, LinkFeatureVector};
pub use graph::{apsp, load_edge_list, DistanceMatrix, Edge, Graph, NodeSet};
pub use persistence::{get_pd, pd_oracle_sweep, persistence_diagram_0, PdConfig, PersistenceDiagram};
pub use ranking::{evaluate, holdout_split, rank_product, EvalReport, Method, RankedList, RankingParams};
