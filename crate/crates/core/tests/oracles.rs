//! Oracles against plain enumeration, and the flow and certificate code
//! against the oracles.

use localcut::generators::{clique, cycle, fig5, random_digraph, random_undirected, two_clique};
use localcut::graph::{cut_size, sparse_certificate};
use localcut::maxflow::{st_edge_cut_capped, st_vertex_cut_capped, FlowError};
use localcut::oracle::{brute_max_kecs, exact_edge_connectivity, exact_vertex_connectivity};
use localcut::{DirectedGraph, VertexId};
use proptest::prelude::*;

fn members(n: usize, mask: u32) -> Vec<VertexId> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Minimum number of arcs leaving a nonempty proper subset.
fn lambda_by_subsets(g: &DirectedGraph) -> usize {
    let n = g.n();
    (1..(1u32 << n) - 1).map(|mask| cut_size(g, &members(n, mask))).min().unwrap()
}

fn strongly_connected_without(g: &DirectedGraph, removed: u32) -> bool {
    let n = g.n();
    let alive: Vec<VertexId> = (0..n).filter(|&v| removed >> v & 1 == 0).collect();
    if alive.len() <= 1 {
        return true;
    }
    let reach = |rev: bool| {
        let mut seen = vec![false; n];
        seen[alive[0]] = true;
        let mut stack = vec![alive[0]];
        while let Some(u) = stack.pop() {
            for (a, b) in g.arcs() {
                let (from, to) = if rev { (b, a) } else { (a, b) };
                if from == u && removed >> to & 1 == 0 && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        alive.iter().all(|&v| seen[v])
    };
    reach(false) && reach(true)
}

/// Smallest separator over all vertex subsets; `n − 1` when none exists.
fn kappa_by_subsets(g: &DirectedGraph) -> usize {
    let n = g.n();
    (0..1u32 << n)
        .filter(|&mask| (mask.count_ones() as usize) <= n - 2 && !strongly_connected_without(g, mask))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(n - 1)
}

fn undirected_lambda(g: &DirectedGraph) -> usize {
    exact_edge_connectivity(g).map_or(0, |c| c.lambda)
}

#[test]
fn oracle_examples() {
    assert_eq!(exact_edge_connectivity(&cycle(6, false)).unwrap().lambda, 1);
    assert_eq!(exact_edge_connectivity(&clique(5)).unwrap().lambda, 4);
    assert_eq!(exact_vertex_connectivity(&clique(7)).unwrap().kappa, 6);
    assert_eq!(exact_vertex_connectivity(&cycle(9, true)).unwrap().kappa, 2);
    let tc = two_clique(10);
    let vc = exact_vertex_connectivity(&tc.graph).unwrap();
    assert_eq!((vc.kappa, vc.cut), (1, Some(vec![tc.s])));

    // Two triangles joined by the bridge 2–3.
    let bridge = DirectedGraph::from_undirected_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]);
    let ec = exact_edge_connectivity(&bridge).unwrap();
    assert_eq!(ec.lambda, 1);
    assert!(ec.cut == vec![(2, 3)] || ec.cut == vec![(3, 2)]);
}

#[test]
fn fig5_decomposition() {
    assert_eq!(brute_max_kecs(&fig5(), 3).unwrap(), vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6]]);
    assert_eq!(brute_max_kecs(&clique(6), 3).unwrap(), vec![(0..6).collect::<Vec<_>>()]);
    let tree = DirectedGraph::from_undirected_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    assert_eq!(brute_max_kecs(&tree, 2).unwrap(), (0..5).map(|v| vec![v]).collect::<Vec<_>>());
}

/// A certificate can keep `λ` while changing the maximal k-edge-connected
/// subgraphs. Three forests of the 7-vertex graph (the outer edges, a star
/// at 0, then 1–2 and 1–3) drop only the edge 2–3, which leaves the `K₄`
/// 2-edge-connected inside.
#[test]
fn certificate_changes_fig5_decomposition() {
    let g = fig5();
    let f1 = [(4, 0), (4, 1), (5, 1), (5, 2), (6, 2), (6, 3)];
    let f2 = [(0, 1), (0, 2), (0, 3)];
    let f3 = [(1, 2), (1, 3)];
    let kept: Vec<_> = f1.iter().chain(&f2).chain(&f3).copied().collect();
    let cert = DirectedGraph::from_undirected_edges(7, &kept);
    assert_eq!(undirected_lambda(&cert), undirected_lambda(&g).min(3));
    assert_ne!(brute_max_kecs(&cert, 3).unwrap(), brute_max_kecs(&g, 3).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn oracles_match_enumeration(n in 2usize..11, p in 0.15f64..0.9, seed in any::<u64>(), undirected in any::<bool>()) {
        let g = if undirected { random_undirected(n, p, seed) } else { random_digraph(n, p, seed) };
        prop_assert_eq!(exact_edge_connectivity(&g).unwrap().lambda, lambda_by_subsets(&g));
        let vc = exact_vertex_connectivity(&g).unwrap();
        prop_assert_eq!(vc.kappa, kappa_by_subsets(&g));
        if let Some(cut) = vc.cut {
            let mask = cut.iter().fold(0u32, |m, &v| m | 1 << v);
            prop_assert_eq!(cut.len(), vc.kappa);
            prop_assert!(!strongly_connected_without(&g, mask));
        }
    }

    #[test]
    fn capped_flows_match_oracles(n in 2usize..16, p in 0.1f64..0.7, seed in any::<u64>()) {
        let g = random_digraph(n, p, seed);
        let lambda = exact_edge_connectivity(&g).unwrap().lambda;
        let mut best = usize::MAX;
        for v in 1..n {
            for (s, t) in [(0, v), (v, 0)] {
                let r = st_edge_cut_capped(&g, s, t, n * n).unwrap();
                prop_assert!(!r.saturated);
                prop_assert_eq!(cut_size(&g, &r.source_side), r.value);
                prop_assert!(r.source_side.contains(&s) && !r.source_side.contains(&t));
                best = best.min(r.value);
            }
        }
        prop_assert_eq!(best, lambda);

        let kappa = exact_vertex_connectivity(&g).unwrap().kappa;
        let mut best = n - 1;
        for s in 0..n {
            for t in 0..n {
                match st_vertex_cut_capped(&g, s, t, n) {
                    Ok(r) => best = best.min(r.value),
                    Err(e) => prop_assert!(s == t || e == FlowError::Adjacent),
                }
            }
        }
        prop_assert_eq!(best, kappa);
    }

    #[test]
    fn capped_flow_saturates_at_cap(n in 3usize..12, seed in any::<u64>()) {
        let g = random_digraph(n, 0.6, seed);
        let r = st_edge_cut_capped(&g, 0, 1, 1).unwrap();
        let lambda01 = st_edge_cut_capped(&g, 0, 1, n * n).unwrap().value;
        prop_assert_eq!(r.saturated, lambda01 >= 1);
    }
}

/// λ of the certificate is `min(k, λ(G))` and it has at most `k(n−1)` edges.
#[test]
fn certificate_keeps_small_connectivity() {
    for seed in 0..50u64 {
        let n = 6 + (seed as usize % 20);
        let p = 0.25 + 0.5 * ((seed * 7 % 11) as f64 / 11.0);
        let g = random_undirected(n, p, seed);
        for k in 1..=4 {
            let cert = sparse_certificate(&g, k).unwrap();
            assert!(cert.undirected_edges().len() <= k * (n - 1));
            assert_eq!(undirected_lambda(&cert), undirected_lambda(&g).min(k), "seed {seed} k {k}");
        }
    }
}

/// Every undirected cut with fewer than `k` edges keeps its size.
#[test]
fn certificate_preserves_small_cuts() {
    for seed in 0..20u64 {
        let n = 8 + seed as usize % 7;
        let g = random_undirected(n, 0.45, seed);
        let k = 3;
        let cert = sparse_certificate(&g, k).unwrap();
        for mask in 1..(1u32 << n) - 1 {
            let s = members(n, mask);
            let c = cut_size(&g, &s);
            if c < k {
                assert_eq!(cut_size(&cert, &s), c, "seed {seed} mask {mask:b}");
            } else {
                assert!(cut_size(&cert, &s) >= k);
            }
        }
    }
}
