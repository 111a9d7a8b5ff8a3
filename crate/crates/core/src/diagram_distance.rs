//! Bottleneck and Wasserstein-q distances between persistence diagrams.
//!
//! Both diagrams are augmented with the diagonal projections of the other's
//! points, so a bijection always exists. The ground distance is L-infinity in
//! the plane; sending `(b, d)` to the diagonal costs `(d - b) / 2`.
//!
//! Two exact solvers are provided. The general one solves the full augmented
//! assignment problem (Hungarian algorithm for Wasserstein, threshold search
//! plus Hopcroft-Karp for bottleneck). When every point of both diagrams has
//! the same birth, as in dimension 0, the problem lives on a line and an
//! optimal matching can be taken non-crossing, so an `O(n m)` dynamic
//! program over the sorted deaths gives the same optimum.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::persistence::{PersistenceDiagram, Point};

fn linf(p: &Point, q: &Point) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

fn to_diagonal(p: &Point) -> f64 {
    (p.death - p.birth) / 2.0
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("Wasserstein order q must be >= 1, got {q}")))
    }
}

/// Wasserstein-q distance between two diagrams.
pub fn wasserstein_q(p1: &PersistenceDiagram, p2: &PersistenceDiagram, q: f64) -> Result<f64> {
    wasserstein_points(p1.points(), p2.points(), q)
}

/// Bottleneck distance between two diagrams.
pub fn bottleneck(p1: &PersistenceDiagram, p2: &PersistenceDiagram) -> f64 {
    bottleneck_points(p1.points(), p2.points())
}

/// Wasserstein-q on raw point lists, choosing the fastest exact solver.
pub fn wasserstein_points(a: &[Point], b: &[Point], q: f64) -> Result<f64> {
    check_q(q)?;
    let (a, b) = canonical_order(a, b);
    Ok(if common_birth(a, b) {
        line_solve(a, b, Aggregate::Power(q))
    } else {
        assignment_wasserstein(a, b, q)
    })
}

/// Bottleneck distance on raw point lists, choosing the fastest exact solver.
pub fn bottleneck_points(a: &[Point], b: &[Point]) -> f64 {
    let (a, b) = canonical_order(a, b);
    if common_birth(a, b) {
        line_solve(a, b, Aggregate::Max)
    } else {
        threshold_bottleneck(a, b)
    }
}

/// Wasserstein-q through the full augmented assignment problem.
pub fn wasserstein_by_assignment(a: &[Point], b: &[Point], q: f64) -> Result<f64> {
    check_q(q)?;
    let (a, b) = canonical_order(a, b);
    Ok(assignment_wasserstein(a, b, q))
}

/// Bottleneck distance through threshold search over augmented matchings.
pub fn bottleneck_by_matching(a: &[Point], b: &[Point]) -> f64 {
    let (a, b) = canonical_order(a, b);
    threshold_bottleneck(a, b)
}

/// Orders the pair so that `f(a, b)` and `f(b, a)` run the same arithmetic.
fn canonical_order<'a>(a: &'a [Point], b: &'a [Point]) -> (&'a [Point], &'a [Point]) {
    let key = |p: &Point| (p.birth, p.death);
    let cmp = a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let (x, y) = (key(x), key(y));
                x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1))
            })
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    if cmp == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

fn common_birth(a: &[Point], b: &[Point]) -> bool {
    let mut births = a.iter().chain(b).map(|p| p.birth);
    match births.next() {
        None => true,
        Some(first) => births.all(|x| x == first),
    }
}

/// Square cost matrix of the augmented problem. Rows are the points of `a`
/// followed by one diagonal slot per point of `b`; columns are the points of
/// `b` followed by one diagonal slot per point of `a`.
fn augmented_costs(a: &[Point], b: &[Point]) -> Vec<Vec<f64>> {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let mut cost = vec![vec![0.0; size]; size];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            cost[i][j] = linf(p, q);
        }
        let diag = to_diagonal(p);
        for c in &mut cost[i][m..] {
            *c = diag;
        }
    }
    for (j, q) in b.iter().enumerate() {
        let diag = to_diagonal(q);
        for row in &mut cost[n..] {
            row[j] = diag;
        }
    }
    cost
}

fn assignment_wasserstein(a: &[Point], b: &[Point], q: f64) -> f64 {
    let cost = augmented_costs(a, b);
    if cost.is_empty() {
        return 0.0;
    }
    let powered: Vec<Vec<f64>> = cost
        .iter()
        .map(|row| row.iter().map(|c| c.powf(q)).collect())
        .collect();
    let assignment = hungarian(&powered);
    let mut terms: Vec<f64> = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| powered[i][j])
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum::<f64>().powf(1.0 / q)
}

/// Minimum-cost perfect assignment on a square matrix; returns the column
/// assigned to each row. Shortest augmenting paths with dual potentials,
/// `O(n^3)`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based internally; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            assignment[row_of[j] - 1] = j - 1;
        }
    }
    assignment
}

fn threshold_bottleneck(a: &[Point], b: &[Point]) -> f64 {
    let cost = augmented_costs(a, b);
    if cost.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = cost.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // The largest candidate admits every edge, so a perfect matching exists.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&cost, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn has_perfect_matching(cost: &[Vec<f64>], limit: f64) -> bool {
    let adj: Vec<Vec<usize>> = cost
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c <= limit)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    HopcroftKarp::new(&adj, cost.len()).max_matching() == cost.len()
}

/// Maximum-cardinality bipartite matching.
struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    match_left: Vec<Option<usize>>,
    match_right: Vec<Option<usize>>,
    dist: Vec<usize>,
}

impl<'a> HopcroftKarp<'a> {
    fn new(adj: &'a [Vec<usize>], right: usize) -> Self {
        HopcroftKarp {
            adj,
            match_left: vec![None; adj.len()],
            match_right: vec![None; right],
            dist: vec![usize::MAX; adj.len()],
        }
    }

    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for (u, m) in self.match_left.iter().enumerate() {
            if m.is_none() {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                match self.match_right[v] {
                    None => found = true,
                    Some(w) if self.dist[w] == usize::MAX => {
                        self.dist[w] = self.dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for k in 0..self.adj[u].len() {
            let v = self.adj[u][k];
            let ok = match self.match_right[v] {
                None => true,
                Some(w) => self.dist[w] == self.dist[u] + 1 && self.dfs(w),
            };
            if ok {
                self.match_left[u] = Some(v);
                self.match_right[v] = Some(u);
                return true;
            }
        }
        self.dist[u] = usize::MAX;
        false
    }

    fn max_matching(mut self) -> usize {
        let mut size = 0;
        while self.bfs() {
            for u in 0..self.adj.len() {
                if self.match_left[u].is_none() && self.dfs(u) {
                    size += 1;
                }
            }
        }
        size
    }
}

#[derive(Clone, Copy)]
enum Aggregate {
    Power(f64),
    Max,
}

impl Aggregate {
    fn lift(self, c: f64) -> f64 {
        match self {
            Aggregate::Power(q) => c.powf(q),
            Aggregate::Max => c,
        }
    }

    fn combine(self, acc: f64, c: f64) -> f64 {
        match self {
            Aggregate::Power(_) => acc + c,
            Aggregate::Max => acc.max(c),
        }
    }

    fn finish(self, total: f64) -> f64 {
        match self {
            Aggregate::Power(q) => total.powf(1.0 / q),
            Aggregate::Max => total,
        }
    }
}

/// Optimal partial matching of two sorted death sequences with deletions to
/// the diagonal. Callers guarantee all births are equal.
fn line_solve(a: &[Point], b: &[Point], agg: Aggregate) -> f64 {
    let mut xs: Vec<Point> = a.to_vec();
    let mut ys: Vec<Point> = b.to_vec();
    xs.sort_by(|p, q| p.death.total_cmp(&q.death));
    ys.sort_by(|p, q| p.death.total_cmp(&q.death));
    let (n, m) = (xs.len(), ys.len());
    let del_x: Vec<f64> = xs.iter().map(|p| agg.lift(to_diagonal(p))).collect();
    let del_y: Vec<f64> = ys.iter().map(|p| agg.lift(to_diagonal(p))).collect();

    let width = m + 1;
    let mut dp = vec![0.0; (n + 1) * width];
    for j in 1..=m {
        dp[j] = agg.combine(dp[j - 1], del_y[j - 1]);
    }
    for i in 1..=n {
        dp[i * width] = agg.combine(dp[(i - 1) * width], del_x[i - 1]);
        for j in 1..=m {
            let pair = agg.lift((xs[i - 1].death - ys[j - 1].death).abs());
            let matched = agg.combine(dp[(i - 1) * width + j - 1], pair);
            let drop_x = agg.combine(dp[(i - 1) * width + j], del_x[i - 1]);
            let drop_y = agg.combine(dp[i * width + j - 1], del_y[j - 1]);
            dp[i * width + j] = matched.min(drop_x).min(drop_y);
        }
    }
    agg.finish(dp[n * width + m])
}
