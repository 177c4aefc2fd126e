//! Maximal k-edge-connected subgraphs.
//!
//! A k-edge-connected subgraph never straddles a set with fewer than `k`
//! outgoing arcs, so any such set can be cut away and both sides handled
//! separately. Local searches from a seed list find small sides cheaply;
//! when the list runs dry a global cut finder either splits the remaining
//! graph or certifies it as a part. Randomness only affects running time:
//! every split is along a verified cut of fewer than `k` arcs.
//!
//! For undirected graphs the searches run on a sparse certificate of the
//! current graph, which has the same cuts below `k`. Removals are applied to
//! the current graph and the certificate is rebuilt afterwards.

use crate::graph::{cut_size, sparse_certificate, strongly_connected_components, DirectedGraph, VertexId};
use crate::local_ec::{local_ec_boosted, LocalCutParams, Mode};
use crate::maxflow::st_edge_cut_capped;
use crate::trials::{derive_seed, map_indexed, Execution};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KecsError {
    #[error("k must be at least 2")]
    SmallK,
    #[error("undirected decomposition needs an undirected graph")]
    NotUndirected,
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
}

/// Parts sorted internally and ordered by their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KecsPartition {
    pub k: usize,
    pub parts: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KecsConfig {
    pub k: usize,
    /// Local volume. Directed default `⌈√(m/k)⌉`; undirected default `2kσ`.
    pub nu: Option<usize>,
    /// Target component size for undirected graphs, default `⌈√n/k⌉`.
    pub sigma: Option<usize>,
    /// Subgraphs with at most this many arcs skip the local phase.
    /// Default `130νk`.
    pub baseline_arcs: Option<usize>,
    pub execution: Execution,
}

impl KecsConfig {
    pub fn new(k: usize) -> Self {
        KecsConfig { k, nu: None, sigma: None, baseline_arcs: None, execution: Execution::Serial }
    }
}

/// Statistics of one decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KecsStats {
    pub local_calls: u64,
    pub local_cuts: u64,
    pub global_cuts: u64,
    pub work_items: u64,
}

/// A cut of fewer than `k` arcs: the source side and the crossing arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallCut {
    pub source_side: Vec<VertexId>,
    pub arcs: Vec<(VertexId, VertexId)>,
}

/// Any cut with fewer than `k` arcs in a strongly connected graph, found by
/// capped flows from a fixed root to every vertex and back.
pub fn global_small_cut(g: &DirectedGraph, k: usize) -> Result<Option<SmallCut>, KecsError> {
    if g.n() <= 1 {
        return Ok(None);
    }
    if strongly_connected_components(g).len() > 1 {
        return Err(KecsError::NotStronglyConnected);
    }
    if k == 0 {
        return Ok(None);
    }
    for v in 1..g.n() {
        for (s, t) in [(0, v), (v, 0)] {
            let r = st_edge_cut_capped(g, s, t, k).expect("distinct endpoints, positive cap");
            if !r.saturated {
                let side = crate::graph::membership(g.n(), &r.source_side);
                let arcs = g.arcs().filter(|&(u, w)| side[u] && !side[w]).collect();
                return Ok(Some(SmallCut { source_side: r.source_side, arcs }));
            }
        }
    }
    Ok(None)
}

/// Current subgraph on a vertex subset, kept in original ids.
#[derive(Clone, Debug)]
struct Work {
    vertices: Vec<VertexId>,
    /// Arcs (directed) or edges (undirected) among `vertices`.
    links: Vec<(VertexId, VertexId)>,
    seeds: Vec<VertexId>,
}

struct Local {
    graph: DirectedGraph,
    ids: Vec<VertexId>,
}

impl Work {
    fn local(&self, undirected: bool) -> Local {
        let index: HashMap<VertexId, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let links: Vec<_> = self.links.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
        let n = self.vertices.len();
        let graph = if undirected { DirectedGraph::from_undirected_edges(n, &links) } else { DirectedGraph::from_arcs(n, &links) };
        Local { graph, ids: self.vertices.clone() }
    }
}

struct Ctx {
    k: usize,
    nu: usize,
    baseline: usize,
    reps: usize,
    undirected: bool,
}

enum Step {
    Part(Vec<VertexId>),
    Split(Vec<Work>),
}

/// Splits `work` into the strong components of its current graph, seeding
/// each with the endpoints of links that were removed or cross components.
fn split_components(work: Work, touched: &[VertexId], undirected: bool) -> Vec<Work> {
    let local = work.local(undirected);
    let comps = strongly_connected_components(&local.graph);
    let mut comp_of = HashMap::new();
    for (ci, c) in comps.iter().enumerate() {
        for &i in c {
            comp_of.insert(local.ids[i], ci);
        }
    }
    let mut items: Vec<Work> = comps
        .iter()
        .map(|c| Work { vertices: c.iter().map(|&i| local.ids[i]).collect(), links: Vec::new(), seeds: Vec::new() })
        .collect();
    let mut seeded = vec![Vec::new(); comps.len()];
    for &(u, v) in &work.links {
        let (cu, cv) = (comp_of[&u], comp_of[&v]);
        if cu == cv {
            items[cu].links.push((u, v));
        } else {
            seeded[cu].push(u);
            seeded[cv].push(v);
        }
    }
    for &v in touched {
        if let Some(&c) = comp_of.get(&v) {
            seeded[c].push(v);
        }
    }
    for (item, mut s) in items.iter_mut().zip(seeded) {
        s.sort_unstable();
        s.dedup();
        item.seeds = s;
    }
    items
}

/// Removes links leaving `side` (and, undirected, entering it).
fn remove_crossing(links: &mut Vec<(VertexId, VertexId)>, side: &[VertexId], undirected: bool) -> Vec<VertexId> {
    let inside: std::collections::HashSet<VertexId> = side.iter().copied().collect();
    let mut touched = Vec::new();
    links.retain(|&(u, v)| {
        let crossing = if undirected { inside.contains(&u) != inside.contains(&v) } else { inside.contains(&u) && !inside.contains(&v) };
        if crossing {
            touched.push(u);
            touched.push(v);
        }
        !crossing
    });
    touched
}

/// One work item: local phase (when large enough), then components or a global cut.
fn step(ctx: &Ctx, mut work: Work, seed: u64, stats: &mut KecsStats) -> Step {
    if work.vertices.len() <= 1 {
        return Step::Part(work.vertices);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = if ctx.undirected { 2 * work.links.len() } else { work.links.len() };
    if arcs > ctx.baseline {
        let mut queue: VecDeque<VertexId> = work.seeds.drain(..).collect();
        let mut queued: std::collections::HashSet<VertexId> = queue.iter().copied().collect();
        let mut pieces = Vec::new();
        while let Some(x) = queue.pop_front() {
            queued.remove(&x);
            if !work.vertices.contains(&x) {
                continue;
            }
            let local = work.local(ctx.undirected);
            let searched = if ctx.undirected {
                DirectedGraph::from_undirected_edges(local.graph.n(), sparse_certificate(&local.graph, ctx.k).expect("undirected").undirected_edges())
            } else {
                local.graph.clone()
            };
            let xi = local.ids.binary_search(&x).expect("x is a current vertex");
            let mut found = None;
            for reversed in [false, true] {
                if reversed && ctx.undirected {
                    break;
                }
                let h = if reversed { searched.reversed() } else { searched.clone() };
                let p = LocalCutParams { x: xi, nu: ctx.nu, k: ctx.k, gamma: 0 };
                stats.local_calls += 1;
                let out = local_ec_boosted(&h, p, Mode::Relaxed, ctx.reps, &mut rng).expect("valid parameters");
                if let Some(c) = out.edge_cut() {
                    // The cut is re-measured in the current graph before use.
                    if cut_size(&h, &c.vertices) < ctx.k {
                        found = Some(c.vertices.iter().map(|&i| local.ids[i]).collect::<Vec<_>>());
                        break;
                    }
                }
            }
            let Some(piece) = found else { continue };
            stats.local_cuts += 1;
            let touched = remove_crossing(&mut work.links, &piece, ctx.undirected);
            // The in-direction search returned a set with few entering arcs;
            // those arcs were removed by the complementary filter below.
            let touched_in = if ctx.undirected { Vec::new() } else { remove_entering(&mut work.links, &piece) };
            let (inner, outer): (Vec<_>, Vec<_>) = work.links.drain(..).partition(|(u, _)| piece.binary_search(u).is_ok());
            work.links = outer;
            work.vertices.retain(|v| piece.binary_search(v).is_err());
            pieces.push(Work { vertices: piece.clone(), links: inner, seeds: Vec::new() });
            for v in touched.into_iter().chain(touched_in) {
                if work.vertices.binary_search(&v).is_ok() && queued.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        if !pieces.is_empty() {
            let mut out = Vec::new();
            for p in pieces {
                out.extend(split_components(p, &[], ctx.undirected));
            }
            if !work.vertices.is_empty() {
                out.extend(split_components(work, &[], ctx.undirected));
            }
            return Step::Split(out);
        }
    }
    let local = work.local(ctx.undirected);
    if strongly_connected_components(&local.graph).len() > 1 {
        return Step::Split(split_components(work, &[], ctx.undirected));
    }
    let searched = if ctx.undirected {
        DirectedGraph::from_undirected_edges(local.graph.n(), sparse_certificate(&local.graph, ctx.k).expect("undirected").undirected_edges())
    } else {
        local.graph
    };
    match global_small_cut(&searched, ctx.k).expect("strongly connected") {
        None => Step::Part(work.vertices),
        Some(cut) => {
            stats.global_cuts += 1;
            let side: Vec<VertexId> = cut.source_side.iter().map(|&i| local.ids[i]).collect();
            let touched = remove_crossing(&mut work.links, &side, ctx.undirected);
            Step::Split(split_components(work, &touched, ctx.undirected))
        }
    }
}

/// Removes arcs entering `side` in the directed case.
fn remove_entering(links: &mut Vec<(VertexId, VertexId)>, side: &[VertexId]) -> Vec<VertexId> {
    let mut touched = Vec::new();
    links.retain(|&(u, v)| {
        let entering = side.binary_search(&u).is_err() && side.binary_search(&v).is_ok();
        if entering {
            touched.push(u);
            touched.push(v);
        }
        !entering
    });
    touched
}

fn decompose<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    ctx: Ctx,
    exec: Execution,
    rng: &mut R,
) -> (KecsPartition, KecsStats) {
    let master = rng.next_u64();
    let links = if ctx.undirected { g.undirected_edges().to_vec() } else { g.arcs().collect() };
    let root = Work { vertices: (0..g.n()).collect(), links, seeds: (0..g.n()).collect() };
    let mut frontier = split_components(root, &(0..g.n()).collect::<Vec<_>>(), ctx.undirected);
    let mut parts = Vec::new();
    let mut stats = KecsStats::default();
    let mut depth = 0u64;
    while !frontier.is_empty() {
        depth += 1;
        let results = map_indexed(exec, frontier.len(), |i| {
            let w = frontier[i].clone();
            let seed = derive_seed(master, depth << 32 | w.vertices[0] as u64);
            let mut s = KecsStats::default();
            let r = step(&ctx, w, seed, &mut s);
            (r, s)
        });
        frontier = Vec::new();
        for (r, s) in results {
            stats.local_calls += s.local_calls;
            stats.local_cuts += s.local_cuts;
            stats.global_cuts += s.global_cuts;
            stats.work_items += 1;
            match r {
                Step::Part(p) => parts.push(p),
                Step::Split(items) => frontier.extend(items),
            }
        }
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts.sort();
    (KecsPartition { k: ctx.k, parts }, stats)
}

fn reps(n: usize) -> usize {
    ((3 * n.max(1)) as f64).log2().ceil() as usize
}

/// Maximal k-edge-connected subgraphs of a digraph.
pub fn max_kecs_directed<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    cfg: &KecsConfig,
    rng: &mut R,
) -> Result<(KecsPartition, KecsStats), KecsError> {
    if cfg.k < 2 {
        return Err(KecsError::SmallK);
    }
    let nu = cfg.nu.unwrap_or_else(|| ((g.m() as f64 / cfg.k as f64).sqrt().ceil() as usize).max(1));
    let baseline = cfg.baseline_arcs.unwrap_or(130 * nu * cfg.k);
    let ctx = Ctx { k: cfg.k, nu, baseline, reps: reps(g.n()), undirected: false };
    Ok(decompose(g, ctx, cfg.execution, rng))
}

/// Maximal k-edge-connected subgraphs of an undirected graph.
pub fn max_kecs_undirected<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    cfg: &KecsConfig,
    rng: &mut R,
) -> Result<(KecsPartition, KecsStats), KecsError> {
    if cfg.k < 2 {
        return Err(KecsError::SmallK);
    }
    if !g.is_undirected() {
        return Err(KecsError::NotUndirected);
    }
    let sigma = cfg.sigma.unwrap_or_else(|| (((g.n() as f64).sqrt() / cfg.k as f64).ceil() as usize).max(1));
    // A component on σ vertices of a certificate has volume below 2kσ.
    let nu = cfg.nu.unwrap_or(2 * cfg.k * sigma);
    let baseline = cfg.baseline_arcs.unwrap_or(130 * nu * cfg.k);
    let ctx = Ctx { k: cfg.k, nu, baseline, reps: reps(g.n()), undirected: true };
    Ok(decompose(g, ctx, cfg.execution, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::brute_max_kecs;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn forced(k: usize) -> KecsConfig {
        KecsConfig { baseline_arcs: Some(0), nu: Some(8), ..KecsConfig::new(k) }
    }

    #[test]
    fn complete_digraph_is_one_part() {
        let g = generators::clique(8);
        let (p, _) = max_kecs_directed(&g, &KecsConfig::new(3), &mut rng()).unwrap();
        assert_eq!(p.parts, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn two_cliques_joined_by_two_cycle() {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in base..base + 5 {
                for v in u + 1..base + 5 {
                    edges.push((u, v));
                }
            }
        }
        edges.push((4, 5));
        let g = DirectedGraph::from_undirected_edges(10, &edges);
        let want = vec![(0..5).collect::<Vec<_>>(), (5..10).collect()];
        for cfg in [KecsConfig::new(3), forced(3)] {
            let (p, _) = max_kecs_directed(&g, &cfg, &mut rng()).unwrap();
            assert_eq!(p.parts, want);
            let (p, _) = max_kecs_undirected(&g, &cfg, &mut rng()).unwrap();
            assert_eq!(p.parts, want);
        }
    }

    #[test]
    fn fig5_parts() {
        let g = generators::fig5();
        let want = vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6]];
        for cfg in [KecsConfig::new(3), forced(3)] {
            assert_eq!(max_kecs_undirected(&g, &cfg, &mut rng()).unwrap().0.parts, want);
            assert_eq!(max_kecs_directed(&g, &cfg, &mut rng()).unwrap().0.parts, want);
        }
    }

    #[test]
    fn tree_gives_singletons() {
        let g = DirectedGraph::from_undirected_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]);
        let (p, _) = max_kecs_undirected(&g, &KecsConfig::new(2), &mut rng()).unwrap();
        assert_eq!(p.parts.len(), 6);
    }

    #[test]
    fn global_cut_examples() {
        let two_cycle = DirectedGraph::from_arcs(2, &[(0, 1), (1, 0)]);
        assert_eq!(global_small_cut(&two_cycle, 2).unwrap().unwrap().arcs.len(), 1);
        assert!(global_small_cut(&generators::clique_undirected(5), 4).unwrap().is_none());
        let barbell = DirectedGraph::from_undirected_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let cut = global_small_cut(&barbell, 2).unwrap().unwrap();
        assert!(cut.arcs == vec![(2, 3)] || cut.arcs == vec![(3, 2)]);
        let path = DirectedGraph::from_arcs(2, &[(0, 1)]);
        assert_eq!(global_small_cut(&path, 2), Err(KecsError::NotStronglyConnected));
    }

    #[test]
    fn random_graphs_match_brute_force_with_local_phase() {
        for seed in 0..15 {
            let g = generators::random_digraph(12, 0.35, seed);
            for k in 2..4 {
                let want = brute_max_kecs(&g, k).unwrap();
                assert_eq!(max_kecs_directed(&g, &forced(k), &mut rng()).unwrap().0.parts, want, "seed {seed} k {k}");
            }
            let u = generators::random_undirected(12, 0.4, seed);
            for k in 2..4 {
                let want = brute_max_kecs(&u, k).unwrap();
                assert_eq!(max_kecs_undirected(&u, &forced(k), &mut rng()).unwrap().0.parts, want, "seed {seed} k {k}");
            }
        }
    }
}
