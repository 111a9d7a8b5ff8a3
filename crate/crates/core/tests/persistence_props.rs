mod common;

use common::{arb_graph, labels};
use phlink::graph::toggle_edge;
use phlink::persistence::{graph_metric, symmetrize};
use phlink::{apsp, get_pd, pd_oracle_sweep, persistence_diagram_0, Edge, Graph, PdConfig};
use proptest::prelude::*;

fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    let old = g.labels();
    let mut new_labels = labels(g.node_count());
    for (i, &p) in perm.iter().enumerate() {
        new_labels[p] = old[i].clone();
    }
    let edges = g.edges().iter().map(|e| Edge {
        src: perm[e.src],
        dst: perm[e.dst],
        weight: e.weight,
    });
    Graph::from_edges(new_labels, g.is_directed(), edges).unwrap()
}

fn non_essential_deaths(g: &Graph, cfg: &PdConfig) -> Vec<f64> {
    let mut deaths = get_pd(g, cfg).unwrap().deaths();
    deaths.pop();
    deaths
}

proptest! {
    #[test]
    fn prim_matches_sweep(g in arb_graph(12, true, true), a in 0.0f64..=0.5) {
        let d = graph_metric(&g, a).unwrap();
        let tau = 1.5 * d.sentinel();
        prop_assert_eq!(persistence_diagram_0(&d, tau).unwrap(), pd_oracle_sweep(&d, tau).unwrap());
    }

    #[test]
    fn diagram_has_one_point_per_node(g in arb_graph(12, false, true)) {
        let pd = get_pd(&g, &PdConfig::default()).unwrap();
        prop_assert_eq!(pd.len(), g.node_count());
        let essential = pd.points().iter().filter(|p| p.death == pd.tau()).count();
        prop_assert_eq!(essential, 1);
        prop_assert!(pd.points().iter().all(|p| p.birth == 0.0));
    }

    #[test]
    fn node_order_does_not_matter(g in arb_graph(10, true, true), keys in proptest::collection::vec(any::<u32>(), 10)) {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| (keys[i], i));
        let cfg = PdConfig::default();
        prop_assert_eq!(get_pd(&g, &cfg).unwrap(), get_pd(&permuted(&g, &perm), &cfg).unwrap());
    }

    #[test]
    fn adding_an_edge_never_raises_deaths(g in arb_graph(10, false, false), seed in any::<usize>()) {
        let n = g.node_count();
        prop_assume!(n >= 2);
        let (u, v) = (seed % n, (seed / n) % n);
        prop_assume!(u != v && !g.has_edge(u, v));
        let cfg = PdConfig::default();
        let before = non_essential_deaths(&g, &cfg);
        let after = non_essential_deaths(&toggle_edge(&g, u, v, true).unwrap(), &cfg);
        prop_assert!(after.iter().zip(&before).all(|(x, y)| x <= y), "{after:?} vs {before:?}");
    }

    #[test]
    fn symmetrized_distances_are_a_metric(g in arb_graph(10, true, true), a in 0.0f64..=0.5) {
        let raw = apsp(&g);
        let d = symmetrize(&raw, a).unwrap();
        let n = d.len();
        for i in 0..n {
            prop_assert_eq!(d.get(i, i), 0.0);
            for j in 0..n {
                prop_assert!(d.get(i, j) >= 0.0);
                prop_assert_eq!(d.get(i, j), d.get(j, i));
                if i != j {
                    prop_assert!(d.get(i, j) > 0.0);
                }
                for k in 0..n {
                    prop_assert!(d.get(i, k) <= d.get(i, j) + d.get(j, k) + 1e-9);
                }
            }
        }
    }
}
