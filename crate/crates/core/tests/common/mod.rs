//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use phlink::persistence::Point;
use phlink::{Edge, Graph};
use proptest::prelude::*;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i:03}")).collect()
}

/// Erdos-Renyi graph with edge probability `p`; weights in `[0.5, 4)` when
/// `weighted`, otherwise 1.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, directed: bool, weighted: bool) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.gen_bool(p) {
                let weight = if weighted { rng.gen_range(0.5..4.0) } else { 1.0 };
                edges.push(Edge { src: i, dst: j, weight });
            }
        }
    }
    Graph::from_edges(labels(n), directed, edges).unwrap()
}

/// `cells[i * n + j]` decides edge `(i, j)`: present when the flag is 0 mod 3.
pub fn graph_from_cells(n: usize, directed: bool, weighted: bool, cells: &[(u8, u8)]) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            let (flag, w) = cells[i * n + j];
            if flag % 3 == 0 {
                let weight = if weighted { f64::from(w % 5 + 1) } else { 1.0 };
                edges.push(Edge { src: i, dst: j, weight });
            }
        }
    }
    Graph::from_edges(labels(n), directed, edges).unwrap()
}

pub fn arb_graph(max_n: usize, directed: bool, weighted: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((any::<u8>(), any::<u8>()), n * n)
            .prop_map(move |cells| graph_from_cells(n, directed, weighted, &cells))
    })
}

/// Shortest paths by Bellman-Ford relaxation over the edge list.
pub fn bellman_ford(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for (s, row) in d.iter_mut().enumerate() {
        row[s] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for e in g.edges() {
                let mut relax = |a: usize, b: usize| {
                    if row[a] + e.weight < row[b] {
                        row[b] = row[a] + e.weight;
                        changed = true;
                    }
                };
                relax(e.src, e.dst);
                if !g.is_directed() {
                    relax(e.dst, e.src);
                }
            }
            if !changed {
                break;
            }
        }
    }
    let sentinel = n as f64 * g.max_weight();
    for row in &mut d {
        for x in row.iter_mut() {
            if x.is_infinite() {
                *x = sentinel;
            }
        }
    }
    d
}

fn linf(p: &Point, q: &Point) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

fn diag(p: &Point) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Visits the cost list of every partial matching between `a` and `b`;
/// unmatched points go to the diagonal.
fn for_each_matching(a: &[Point], b: &[Point], visit: &mut dyn FnMut(&[f64])) {
    fn rec(
        a: &[Point],
        b: &[Point],
        i: usize,
        used: &mut Vec<bool>,
        costs: &mut Vec<f64>,
        visit: &mut dyn FnMut(&[f64]),
    ) {
        if i == a.len() {
            let base = costs.len();
            for (j, q) in b.iter().enumerate() {
                if !used[j] {
                    costs.push(diag(q));
                }
            }
            visit(costs);
            costs.truncate(base);
            return;
        }
        costs.push(diag(&a[i]));
        rec(a, b, i + 1, used, costs, visit);
        costs.pop();
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                costs.push(linf(&a[i], &b[j]));
                rec(a, b, i + 1, used, costs, visit);
                costs.pop();
                used[j] = false;
            }
        }
    }
    rec(a, b, 0, &mut vec![false; b.len()], &mut Vec::new(), visit);
}

pub fn brute_wasserstein(a: &[Point], b: &[Point], q: f64) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| {
        let total: f64 = costs.iter().map(|c| c.powf(q)).sum();
        best = best.min(total);
    });
    best.powf(1.0 / q)
}

pub fn brute_bottleneck(a: &[Point], b: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| {
        best = best.min(costs.iter().copied().fold(0.0, f64::max));
    });
    best
}

/// Up to `max_len` points with birth <= death, coordinates on a coarse grid
/// so that ties and diagonal points occur.
pub fn random_points<R: Rng>(rng: &mut R, max_len: usize, common_birth: bool) -> Vec<Point> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let birth = if common_birth { 0.0 } else { f64::from(rng.gen_range(0..8u8)) * 0.5 };
            let death = birth + f64::from(rng.gen_range(0..12u8)) * 0.25 + rng.gen_range(0.0..0.01);
            Point::new(birth, death)
        })
        .collect()
}

/// Rank product by definition: each candidate's rank in each score column,
/// ties sharing the mean position, combined by the geometric mean. Returns
/// `(candidate, twice the rank product over all lists as an exact integer)`
/// sorted by that product then by candidate.
pub fn brute_rank_product(scores: &[Vec<f64>], names: &[String]) -> Vec<(String, u128)> {
    let mut out: Vec<(String, u128)> = names
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let product = scores.iter().fold(1u128, |acc, col| {
                let better = col.iter().filter(|&&s| s < col[c]).count() as u128;
                let tied = col.iter().filter(|&&s| s == col[c]).count() as u128;
                // 2 * (better + (tied + 1) / 2)
                acc * (2 * better + tied + 1)
            });
            (name.clone(), product)
        })
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}
