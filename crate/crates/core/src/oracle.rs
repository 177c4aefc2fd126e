//! Slow exact reference implementations.
//!
//! Nothing here shares code with the algorithms it checks: flows use a
//! dense residual matrix and depth-first augmentation, components use plain
//! reachability, and local cuts come from subset enumeration.

use crate::graph::{DirectedGraph, SeparationTriple, VertexId};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    /// Largest `n` for subset enumeration.
    pub enumeration_max_n: usize,
    /// Largest `n` for all-pairs flow computations.
    pub flow_max_n: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { enumeration_max_n: 20, flow_max_n: 60 }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("n={n} exceeds the oracle budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
}

fn within(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::BudgetExceeded { n, max })
    } else {
        Ok(())
    }
}

fn multiplicity_matrix(g: &DirectedGraph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut c = vec![vec![0u32; n]; n];
    for (u, v) in g.arcs() {
        if u != v {
            c[u][v] += 1;
        }
    }
    c
}

/// All proper subsets `S ∋ x` with `vol^out(S) ≤ ν` and `|E(S, V−S)| < k`,
/// each sorted, in lexicographic order. Subsets are visited in Gray-code
/// order with the cut and volume updated per flipped vertex.
pub fn brute_local_ec(g: &DirectedGraph, x: VertexId, nu: usize, k: usize) -> Result<Vec<Vec<VertexId>>, OracleError> {
    brute_local_ec_with(g, x, nu, k, OracleBudget::default())
}

pub fn brute_local_ec_with(
    g: &DirectedGraph,
    x: VertexId,
    nu: usize,
    k: usize,
    budget: OracleBudget,
) -> Result<Vec<Vec<VertexId>>, OracleError> {
    let n = g.n();
    within(n, budget.enumeration_max_n)?;
    let c = multiplicity_matrix(g);
    let deg: Vec<usize> = (0..n).map(|v| g.out_neighbors(v).len()).collect();
    let others: Vec<VertexId> = (0..n).filter(|&v| v != x).collect();
    let mut inside = vec![false; n];
    inside[x] = true;
    let mut cut: i64 = (0..n).map(|w| c[x][w] as i64).sum();
    let mut vol = deg[x];
    let mut found = Vec::new();
    let record = |inside: &[bool], cut: i64, vol: usize, found: &mut Vec<Vec<VertexId>>| {
        let size = inside.iter().filter(|&&b| b).count();
        if size < n && vol <= nu && (cut as usize) < k {
            found.push((0..n).filter(|&v| inside[v]).collect());
        }
    };
    record(&inside, cut, vol, &mut found);
    let total: u64 = 1 << others.len();
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        let v = others[bit];
        let from_inside: i64 = (0..n).filter(|&u| inside[u]).map(|u| c[u][v] as i64).sum();
        let to_outside: i64 = (0..n).filter(|&w| !inside[w] && w != v).map(|w| c[v][w] as i64).sum();
        if inside[v] {
            inside[v] = false;
            cut += from_inside - to_outside;
            vol -= deg[v];
        } else {
            inside[v] = true;
            cut += to_outside - from_inside;
            vol += deg[v];
        }
        record(&inside, cut, vol, &mut found);
    }
    found.sort();
    Ok(found)
}

/// All triples `(L, N^out(L), R)` with `x ∈ L`, `|S| < k`, `vol^out(L) ≤ ν`
/// and `R ≠ ∅`, sorted by `L`. Only the canonical separator `S = N^out(L)`
/// is listed for each `L`.
pub fn brute_local_vc(g: &DirectedGraph, x: VertexId, nu: usize, k: usize) -> Result<Vec<SeparationTriple>, OracleError> {
    let n = g.n();
    within(n, OracleBudget::default().enumeration_max_n)?;
    let mut nbr = vec![0u64; n];
    for (u, v) in g.arcs() {
        if u != v {
            nbr[u] |= 1 << v;
        }
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let others: Vec<VertexId> = (0..n).filter(|&v| v != x).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << others.len()) {
        let mut left = 1u64 << x;
        for (i, &v) in others.iter().enumerate() {
            if bits >> i & 1 == 1 {
                left |= 1 << v;
            }
        }
        let vol: usize = (0..n).filter(|&v| left >> v & 1 == 1).map(|v| g.out_neighbors(v).len()).sum();
        if vol > nu {
            continue;
        }
        let mut reach = 0u64;
        for (v, &out) in nbr.iter().enumerate() {
            if left >> v & 1 == 1 {
                reach |= out;
            }
        }
        let sep = reach & !left;
        let right = full & !left & !sep;
        if (sep.count_ones() as usize) < k && right != 0 {
            let list = |m: u64| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>();
            out.push(SeparationTriple { left: list(left), separator: list(sep), right: list(right) });
        }
    }
    out.sort_by(|a, b| a.left.cmp(&b.left));
    Ok(out)
}

/// Dense residual network with depth-first augmentation.
struct Dense {
    cap: Vec<Vec<u32>>,
    nbrs: Vec<Vec<usize>>,
}

impl Dense {
    fn new(cap: Vec<Vec<u32>>) -> Self {
        let n = cap.len();
        let mut nbrs = vec![Vec::new(); n];
        for u in 0..n {
            for v in 0..n {
                if cap[u][v] > 0 || cap[v][u] > 0 {
                    nbrs[u].push(v);
                }
            }
        }
        Dense { cap, nbrs }
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let n = self.cap.len();
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            if u == t {
                break;
            }
            for &w in &self.nbrs[u] {
                if prev[w] == usize::MAX && self.cap[u][w] > 0 {
                    prev[w] = u;
                    stack.push(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return false;
        }
        let mut w = t;
        while w != s {
            let u = prev[w];
            self.cap[u][w] -= 1;
            self.cap[w][u] += 1;
            w = u;
        }
        true
    }

    /// Max flow, stopping early once it reaches `limit`.
    fn flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut f = 0;
        while f < limit && self.augment(s, t) {
            f += 1;
        }
        f
    }

    fn reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.cap.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &self.nbrs[u] {
                if !seen[w] && self.cap[u][w] > 0 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Edge connectivity with a witness: the arcs leaving the minimising side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeConnectivity {
    pub lambda: usize,
    pub source_side: Vec<VertexId>,
    pub cut: Vec<(VertexId, VertexId)>,
}

/// `λ(G)` over ordered cuts; 0 when not strongly connected. `None` for `n < 2`.
pub fn exact_edge_connectivity(g: &DirectedGraph) -> Option<EdgeConnectivity> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    let c = multiplicity_matrix(g);
    let mut best: Option<(usize, Vec<bool>)> = None;
    for v in 1..n {
        for (s, t) in [(0, v), (v, 0)] {
            let limit = best.as_ref().map_or(usize::MAX, |b| b.0);
            let mut net = Dense::new(c.clone());
            let f = net.flow(s, t, limit);
            if f < limit {
                best = Some((f, net.reach(s)));
            }
        }
    }
    let (lambda, side) = best.expect("n ≥ 2 gives at least one pair");
    let cut = g.arcs().filter(|&(u, w)| side[u] && !side[w]).collect();
    Some(EdgeConnectivity { lambda, source_side: (0..n).filter(|&v| side[v]).collect(), cut })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexConnectivity {
    pub kappa: usize,
    /// `None` when every ordered pair is adjacent.
    pub cut: Option<Vec<VertexId>>,
}

/// `κ(G)`: minimum over ordered non-adjacent pairs `(s, t)` of the minimum
/// `s`–`t` vertex cut; `n − 1` when no such pair exists.
pub fn exact_vertex_connectivity(g: &DirectedGraph) -> Result<VertexConnectivity, OracleError> {
    let n = g.n();
    within(n, OracleBudget::default().flow_max_n)?;
    let c = multiplicity_matrix(g);
    let big = n as u32 + 1;
    let mut split = vec![vec![0u32; 2 * n]; 2 * n];
    for u in 0..n {
        split[2 * u][2 * u + 1] = 1;
        for v in 0..n {
            if c[u][v] > 0 {
                split[2 * u + 1][2 * v] = big;
            }
        }
    }
    let mut best = n.saturating_sub(1);
    let mut cut = None;
    for s in 0..n {
        for t in 0..n {
            if s == t || c[s][t] > 0 {
                continue;
            }
            let mut cap = split.clone();
            cap[2 * s][2 * s + 1] = big;
            cap[2 * t][2 * t + 1] = big;
            let mut net = Dense::new(cap);
            let f = net.flow(2 * s + 1, 2 * t, best);
            if f < best {
                let side = net.reach(2 * s + 1);
                best = f;
                cut = Some((0..n).filter(|&v| side[2 * v] && !side[2 * v + 1]).collect());
            }
        }
    }
    Ok(VertexConnectivity { kappa: best, cut })
}

fn reachable(g: &DirectedGraph, s: VertexId, alive: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for &w in g.out_neighbors(u) {
            if alive[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Maximal k-edge-connected subgraphs by plain recursion: split into strong
/// components, then split along any cut of fewer than `k` arcs. Parts are
/// sorted and ordered by smallest vertex.
pub fn brute_max_kecs(g: &DirectedGraph, k: usize) -> Result<Vec<Vec<VertexId>>, OracleError> {
    within(g.n(), OracleBudget::default().flow_max_n)?;
    let mut parts = Vec::new();
    let mut work = vec![(0..g.n()).collect::<Vec<_>>()];
    while let Some(set) = work.pop() {
        if set.len() <= 1 {
            parts.extend(set.into_iter().map(|v| vec![v]));
            continue;
        }
        let mut alive = vec![false; g.n()];
        for &v in &set {
            alive[v] = true;
        }
        let fwd = reachable(g, set[0], &alive);
        let rev = reachable(&g.reversed(), set[0], &alive);
        let comp: Vec<_> = set.iter().copied().filter(|&v| fwd[v] && rev[v]).collect();
        if comp.len() < set.len() {
            let rest: Vec<_> = set.iter().copied().filter(|&v| !(fwd[v] && rev[v])).collect();
            work.push(comp);
            work.push(rest);
            continue;
        }
        let sub = g.induced(&set);
        let ec = exact_edge_connectivity(&sub).expect("set has at least two vertices");
        if ec.lambda >= k {
            parts.push(set);
            continue;
        }
        let mut in_side = vec![false; set.len()];
        for &i in &ec.source_side {
            in_side[i] = true;
        }
        work.push(set.iter().enumerate().filter(|(i, _)| in_side[*i]).map(|(_, &v)| v).collect());
        work.push(set.iter().enumerate().filter(|(i, _)| !in_side[*i]).map(|(_, &v)| v).collect());
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts.sort();
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    /// Second enumeration: straightforward bitmask loop, no incremental state.
    fn naive_local_ec(g: &DirectedGraph, x: VertexId, nu: usize, k: usize) -> Vec<Vec<VertexId>> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask >> x & 1 == 0 || mask == (1 << n) - 1 {
                continue;
            }
            let s: Vec<_> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if crate::graph::out_volume(g, &s) <= nu && crate::graph::cut_size(g, &s) < k {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn pendant_pocket_sets() {
        let p = generators::pendant_with_core(15);
        let got = brute_local_ec(&p.graph, p.a, 3, 2).unwrap();
        assert_eq!(got, vec![vec![p.a], vec![p.a, p.b]]);
        assert_eq!(got, naive_local_ec(&p.graph, p.a, 3, 2));
    }

    #[test]
    fn enumerations_agree_on_random_graphs() {
        for seed in 0..20 {
            let g = generators::random_digraph(9, 0.3, seed);
            for (nu, k) in [(4, 2), (10, 3), (30, 1)] {
                assert_eq!(brute_local_ec(&g, 0, nu, k).unwrap(), naive_local_ec(&g, 0, nu, k));
            }
        }
    }

    #[test]
    fn k5_has_no_zero_cut() {
        let g = generators::clique(5);
        assert!(brute_local_ec(&g, 2, g.m() - 1, 1).unwrap().is_empty());
        assert!(brute_local_vc(&g, 2, g.m(), 4).unwrap().is_empty());
    }

    #[test]
    fn zero_volume() {
        let g = DirectedGraph::from_arcs(3, &[(1, 0), (1, 2), (2, 1)]);
        assert_eq!(brute_local_ec(&g, 0, 0, 1).unwrap(), vec![vec![0]]);
        assert!(brute_local_ec(&g, 1, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(exact_edge_connectivity(&generators::cycle(6, false)).unwrap().lambda, 1);
        assert_eq!(exact_edge_connectivity(&generators::clique(5)).unwrap().lambda, 4);
        // Undirected K5 as a symmetric digraph: every vertex has 4 out-arcs.
        assert_eq!(exact_edge_connectivity(&generators::clique_undirected(5)).unwrap().lambda, 4);
        let bridge = DirectedGraph::from_undirected_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let ec = exact_edge_connectivity(&bridge).unwrap();
        assert_eq!(ec.lambda, 1);
        assert!(ec.cut == vec![(2, 3)] || ec.cut == vec![(3, 2)]);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(exact_vertex_connectivity(&generators::clique(7)).unwrap(), VertexConnectivity { kappa: 6, cut: None });
        assert_eq!(exact_vertex_connectivity(&generators::cycle(9, true)).unwrap().kappa, 2);
        let tc = generators::two_clique(6);
        let vc = exact_vertex_connectivity(&tc.graph).unwrap();
        assert_eq!(vc.kappa, 1);
        assert_eq!(vc.cut, Some(vec![tc.s]));
    }

    #[test]
    fn two_clique_micro_triples_use_articulation_vertex() {
        let tc = generators::two_clique(6);
        let triples = brute_local_vc(&tc.graph, tc.x, 16, 2).unwrap();
        assert!(!triples.is_empty());
        assert!(triples.iter().all(|t| t.separator == vec![tc.s]));
    }

    #[test]
    fn fig5_parts() {
        let parts = brute_max_kecs(&generators::fig5(), 3).unwrap();
        assert_eq!(parts, vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6]]);
    }

    #[test]
    fn tree_parts_are_singletons() {
        let g = DirectedGraph::from_undirected_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert_eq!(brute_max_kecs(&g, 2).unwrap().len(), 5);
        assert_eq!(brute_max_kecs(&generators::clique(6), 3).unwrap(), vec![(0..6).collect::<Vec<_>>()]);
    }
}
