//! Ranking targets for a source node, rank-product aggregation, hold-out
//! splits and Hits@N evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::features::{FeatureExtractor, FEATURE_PAIRS};
use crate::graph::{khop_neighborhood, Edge, Graph};
use crate::persistence::PdConfig;

/// Which end of a ranked list is best.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub source: String,
    pub entries: Vec<(String, f64)>,
    pub order: Order,
}

impl RankedList {
    /// Sorts `scores` best first; equal scores are ordered by label.
    pub fn from_scores(source: impl Into<String>, mut scores: Vec<(String, f64)>, order: Order) -> Self {
        scores.sort_by(|a, b| {
            let by_score = match order {
                Order::Ascending => a.1.total_cmp(&b.1),
                Order::Descending => b.1.total_cmp(&a.1),
            };
            by_score.then_with(|| a.0.cmp(&b.0))
        });
        RankedList {
            source: source.into(),
            entries: scores,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based position of `target`, if present.
    pub fn position(&self, target: &str) -> Option<usize> {
        self.entries.iter().position(|(t, _)| t == target).map(|i| i + 1)
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }

    /// Twice the 1-based rank of every entry, with tied scores sharing the
    /// mean of their positions. Doubling keeps half ranks integral.
    fn doubled_ranks(&self) -> Vec<u64> {
        let mut ranks = vec![0; self.entries.len()];
        let mut start = 0;
        while start < self.entries.len() {
            let score = self.entries[start].1;
            let mut end = start + 1;
            while end < self.entries.len() && self.entries[end].1 == score {
                end += 1;
            }
            // positions start+1 ..= end
            let doubled = (start + 1 + end) as u64;
            for r in &mut ranks[start..end] {
                *r = doubled;
            }
            start = end;
        }
        ranks
    }
}

/// Aggregates lists by the geometric mean of each candidate's ranks.
///
/// The output is ascending in that mean, ties broken by label, and each
/// entry's score is the mean itself. Every list must rank the same candidates.
pub fn rank_product(lists: &[RankedList]) -> Result<RankedList> {
    let first = lists
        .first()
        .ok_or_else(|| Error::invalid("rank product needs at least one list"))?;
    let mut ranks: BTreeMap<&str, Vec<u64>> = first.targets().map(|t| (t, Vec::new())).collect();
    if ranks.len() != first.len() {
        return Err(Error::invalid("ranked list contains duplicate targets"));
    }
    for list in lists {
        if list.len() != ranks.len() {
            let missing = ranks
                .keys()
                .find(|t| list.position(t).is_none())
                .map_or_else(|| list.source.clone(), |t| t.to_string());
            return Err(Error::MissingCandidate(missing));
        }
        for ((target, _), rank) in list.entries.iter().zip(list.doubled_ranks()) {
            ranks
                .get_mut(target.as_str())
                .ok_or_else(|| Error::MissingCandidate(target.clone()))?
                .push(rank);
        }
    }
    let m = lists.len() as f64;
    let exact: Option<Vec<u128>> = ranks
        .values()
        .map(|r| r.iter().try_fold(1u128, |p, &x| p.checked_mul(u128::from(x))))
        .collect();
    let entries: Vec<(String, f64)> = match exact {
        Some(products) => {
            let mut ordered: Vec<(&str, u128)> = ranks.keys().copied().zip(products).collect();
            ordered.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)));
            ordered
                .into_iter()
                .map(|(t, p)| (t.to_string(), (p as f64).powf(1.0 / m) / 2.0))
                .collect()
        }
        // Products too large for u128: order by the sum of logarithms.
        None => {
            let mut ordered: Vec<(&str, f64)> = ranks
                .iter()
                .map(|(t, r)| (*t, r.iter().map(|&x| (x as f64).ln()).sum::<f64>()))
                .collect();
            ordered.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
            ordered
                .into_iter()
                .map(|(t, l)| (t.to_string(), (l / m).exp() / 2.0))
                .collect()
        }
    };
    Ok(RankedList {
        source: first.source.clone(),
        entries,
        order: Order::Ascending,
    })
}

/// Sum of `1 / ln(deg(w))` over common neighbors `w`, ignoring direction.
pub fn adamic_adar(g: &Graph, u: usize, v: usize) -> f64 {
    let nu = g.undirected_neighbors(u);
    let nv = g.undirected_neighbors(v);
    common_sorted(&nu, &nv)
        .map(|w| 1.0 / (g.undirected_neighbors(w).len() as f64).ln())
        .sum()
}

fn common_sorted<'a>(a: &'a [usize], b: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    let mut j = 0;
    a.iter().copied().filter(move |&x| {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        j < b.len() && b[j] == x
    })
}

fn linking_set(g: &Graph, u: usize) -> Vec<usize> {
    if g.is_directed() {
        let mut s: Vec<usize> = g.in_neighbors(u).iter().map(|&(w, _)| w).collect();
        s.sort_unstable();
        s.dedup();
        s
    } else {
        g.undirected_neighbors(u)
    }
}

/// Normalized link-distance relatedness over the sets of nodes linking to
/// `u` and to `v` (in-neighbors when directed), clamped to `[0, 1]`.
pub fn milne_witten(g: &Graph, u: usize, v: usize) -> f64 {
    let a = linking_set(g, u);
    let b = linking_set(g, v);
    milne_witten_sets(a.len(), b.len(), common_sorted(&a, &b).count(), g.node_count())
}

fn milne_witten_sets(a: usize, b: usize, common: usize, n: usize) -> f64 {
    if a == 0 || b == 0 || common == 0 {
        return 0.0;
    }
    let (big, small) = (a.max(b) as f64, a.min(b) as f64);
    let denom = (n as f64).ln() - small.ln();
    if denom <= 0.0 {
        return 1.0;
    }
    let score = 1.0 - (big.ln() - (common as f64).ln()) / denom;
    score.clamp(0.0, 1.0)
}

/// Edges held out for testing and the graph of the remaining ones.
#[derive(Debug, Clone)]
pub struct SplitSpec {
    pub fraction: f64,
    pub seed: u64,
    pub test_edges: Vec<Edge>,
    pub train: Graph,
}

/// Samples `round(fraction * m)` edges uniformly without replacement.
///
/// Node indices and labels of `train` match `g`; isolated nodes are kept.
pub fn holdout_split(g: &Graph, fraction: f64, seed: u64) -> Result<SplitSpec> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid(format!(
            "test fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::invalid("hold-out split needs at least two edges"));
    }
    let count = (fraction * m as f64).round() as usize;
    if count == 0 {
        return Err(Error::EmptyTestSet);
    }
    if count >= m {
        return Err(Error::invalid(format!(
            "test fraction {fraction} leaves no training edges out of {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, m, count).into_vec();
    picked.sort_unstable();
    let mut is_test = vec![false; m];
    for &i in &picked {
        is_test[i] = true;
    }
    let test_edges = picked.iter().map(|&i| g.edges()[i]).collect();
    let train_edges = g
        .edges()
        .iter()
        .zip(&is_test)
        .filter(|(_, &t)| !t)
        .map(|(e, _)| *e);
    let train = Graph::from_edges(g.labels().to_vec(), g.is_directed(), train_edges)?;
    Ok(SplitSpec {
        fraction,
        seed,
        test_edges,
        train,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    AdamicAdar,
    MilneWitten,
    Topology,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AdamicAdar => "aa",
            Method::MilneWitten => "mw",
            Method::Topology => "topology",
        }
    }

    /// Number of ranked lists combined into the final ranking.
    pub fn aggregated_lists(self) -> usize {
        match self {
            Method::Topology => FEATURE_PAIRS.len(),
            _ => 1,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aa" | "adamic-adar" => Ok(Method::AdamicAdar),
            "mw" | "milne-witten" => Ok(Method::MilneWitten),
            "topology" | "ph" => Ok(Method::Topology),
            _ => Err(Error::invalid(format!(
                "unknown method `{s}` (expected aa, mw or topology)"
            ))),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Which nodes are scored for a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolPolicy {
    /// Every node except the source.
    All,
    /// Nodes within `2k` hops of the source, ignoring direction.
    TwoKHop,
}

impl PoolPolicy {
    pub fn name(self) -> &'static str {
        match self {
            PoolPolicy::All => "all",
            PoolPolicy::TwoKHop => "2khop",
        }
    }
}

impl FromStr for PoolPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(PoolPolicy::All),
            "2khop" => Ok(PoolPolicy::TwoKHop),
            _ => Err(Error::invalid(format!(
                "unknown pool `{s}` (expected all or 2khop)"
            ))),
        }
    }
}

impl Serialize for PoolPolicy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankingParams {
    pub k: usize,
    pub pd: PdConfig,
    pub pool: PoolPolicy,
    /// Drop targets already adjacent to the source in the training graph.
    pub filtered: bool,
}

impl Default for RankingParams {
    fn default() -> Self {
        RankingParams {
            k: 2,
            pd: PdConfig::default(),
            pool: PoolPolicy::All,
            filtered: false,
        }
    }
}

/// Ranks candidate targets on a fixed training graph.
pub struct Ranker<'g> {
    train: &'g Graph,
    params: RankingParams,
    features: FeatureExtractor<'g>,
}

impl<'g> Ranker<'g> {
    pub fn new(train: &'g Graph, params: RankingParams) -> Result<Self> {
        Ok(Ranker {
            train,
            params,
            features: FeatureExtractor::new(train, params.k, params.pd)?,
        })
    }

    pub fn candidates(&self, source: usize) -> Result<Vec<usize>> {
        self.train.check_node(source)?;
        let pool: Vec<usize> = match self.params.pool {
            PoolPolicy::All => (0..self.train.node_count()).collect(),
            PoolPolicy::TwoKHop => khop_neighborhood(self.train, source, 2 * self.params.k)?
                .members()
                .to_vec(),
        };
        Ok(pool
            .into_iter()
            .filter(|&t| t != source)
            .filter(|&t| !(self.params.filtered && self.train.has_edge(source, t)))
            .collect())
    }

    pub fn rank(&self, source: usize, method: Method) -> Result<RankedList> {
        let g = self.train;
        let candidates = self.candidates(source)?;
        let label = |t: usize| g.label(t).to_string();
        match method {
            Method::AdamicAdar | Method::MilneWitten => {
                let score = match method {
                    Method::AdamicAdar => adamic_adar,
                    _ => milne_witten,
                };
                let scores = candidates
                    .iter()
                    .map(|&t| (label(t), score(g, source, t)))
                    .collect();
                Ok(RankedList::from_scores(g.label(source), scores, Order::Descending))
            }
            Method::Topology => {
                let vectors = candidates
                    .par_iter()
                    .map(|&t| self.features.compute(source, t))
                    .collect::<Result<Vec<_>>>()?;
                let lists: Vec<RankedList> = (0..FEATURE_PAIRS.len())
                    .map(|slot| {
                        let scores = vectors.iter().map(|f| (label(f.v), f.d[slot])).collect();
                        RankedList::from_scores(g.label(source), scores, Order::Ascending)
                    })
                    .collect();
                rank_product(&lists)
            }
        }
    }
}

/// One-shot ranking; see [`Ranker`] for repeated use on the same graph.
pub fn rank_targets(train: &Graph, source: usize, method: Method, params: RankingParams) -> Result<RankedList> {
    Ranker::new(train, params)?.rank(source, method)
}

/// Fraction of test edges whose target sits in the top `n` of its source's
/// ranking, for each `n`. Targets missing from a ranking count as misses.
pub fn hits_at_n(
    split: &SplitSpec,
    rankings: &BTreeMap<String, RankedList>,
    ns: &[usize],
) -> Result<BTreeMap<usize, f64>> {
    if split.test_edges.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::invalid("hit cut-offs must be a non-empty list of positive integers"));
    }
    let g = &split.train;
    let mut positions = Vec::with_capacity(split.test_edges.len());
    for e in &split.test_edges {
        let source = g.label(e.src);
        let ranking = rankings
            .get(source)
            .ok_or_else(|| Error::MissingRanking(source.to_string()))?;
        positions.push(ranking.position(g.label(e.dst)));
    }
    let total = positions.len() as f64;
    Ok(ns
        .iter()
        .map(|&n| {
            let hits = positions.iter().filter(|p| p.is_some_and(|p| p <= n)).count();
            (n, hits as f64 / total)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitMeta {
    pub fraction: f64,
    pub seed: u64,
    pub num_train: usize,
}

/// Hits@N of one method under one split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub method: Method,
    pub split: SplitMeta,
    pub pool: PoolPolicy,
    pub filtered: bool,
    pub k: usize,
    pub m: usize,
    pub hits: BTreeMap<usize, f64>,
    pub num_test: usize,
}

/// Ranks every distinct test source with each method and scores the split.
///
/// Sources are processed in parallel on the current rayon pool; results are
/// collected in source order so the output does not depend on thread count.
pub fn evaluate(
    split: &SplitSpec,
    methods: &[Method],
    params: RankingParams,
    ns: &[usize],
) -> Result<Vec<EvalReport>> {
    if methods.is_empty() {
        return Err(Error::invalid("no ranking methods selected"));
    }
    let mut sources: Vec<usize> = split.test_edges.iter().map(|e| e.src).collect();
    sources.sort_unstable();
    sources.dedup();
    let ranker = Ranker::new(&split.train, params)?;
    let mut reports = Vec::with_capacity(methods.len());
    for &method in methods {
        let ranked = sources
            .par_iter()
            .map(|&s| ranker.rank(s, method))
            .collect::<Result<Vec<_>>>()?;
        let rankings: BTreeMap<String, RankedList> = ranked
            .into_iter()
            .map(|r| (r.source.clone(), r))
            .collect();
        reports.push(EvalReport {
            method,
            split: SplitMeta {
                fraction: split.fraction,
                seed: split.seed,
                num_train: split.train.edge_count(),
            },
            pool: params.pool,
            filtered: params.filtered,
            k: params.k,
            m: method.aggregated_lists(),
            hits: hits_at_n(split, &rankings, ns)?,
            num_test: split.test_edges.len(),
        });
    }
    Ok(reports)
}
