//! Global vertex connectivity by sampling.
//!
//! To decide whether `G` is `k`-vertex connected, look for a separation
//! triple `(L, S, R)` with `|S| < k`. Reversing `G` if needed, assume
//! `vol(L) ≤ vol(R)`. If `vol(L)` is large, random arc tails land in `L` and
//! in `R` often enough that a capped max-flow between two of them finds a cut.
//! If `vol(L)` is small, a random arc tail lands in `L` often enough that the
//! local vertex-cut search from it succeeds. Every probe is independent and
//! carries its own derived seed.

use crate::graph::{reachable_avoiding, sparse_certificate, DirectedGraph, GraphError, SeparationTriple, VertexId};
use crate::local_ec::{self, approx_bound, floor_eps_k, LocalCutParams, Mode, PreconditionError};
use crate::local_vc;
use crate::maxflow::{st_vertex_cut_capped, StCut};
use crate::trials::{derive_seed, find_first, Execution};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// How probe seeds are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    /// Tails of uniform arcs; volume scales up to `ν̄`.
    #[default]
    Edge,
    /// Uniform vertices; size scales up to `σ̄`.
    Node,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VcConfig {
    pub k: usize,
    pub epsilon: f64,
    /// Volume threshold `ν̄` (edge sampling). Defaults to `⌈εm⌉`.
    pub nu_bar: Option<usize>,
    /// Size threshold `σ̄` (node sampling). Defaults to `⌈√(m/k)⌉`.
    pub sigma_bar: Option<usize>,
    pub c_pair: f64,
    pub c_seed: f64,
    /// Repetitions per local call. Defaults to `⌈1.5 log₂ n⌉`.
    pub boost: Option<usize>,
    pub sampling: Sampling,
    pub execution: Execution,
}

impl VcConfig {
    pub fn new(k: usize, epsilon: f64) -> Self {
        VcConfig {
            k,
            epsilon,
            nu_bar: None,
            sigma_bar: None,
            c_pair: 4.0,
            c_seed: 4.0,
            boost: None,
            sampling: Sampling::Edge,
            execution: Execution::Serial,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VcVerdict {
    KConnected,
    /// A verified triple of `G` with `|S| < ⌊(1+ε)k⌋`.
    Cut { cut: Vec<VertexId>, triple: SeparationTriple },
}

/// Planned probe counts (independent of early exit).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeCounts {
    pub pairs: usize,
    pub local_seeds: usize,
    /// Local calls per seed and direction.
    pub boost: usize,
    pub scales: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcReport {
    pub verdict: VcVerdict,
    pub probes: ProbeCounts,
    /// Decided by the minimum-degree vertex.
    pub degree_shortcut: bool,
    /// Decided by the exhaustive flow sweep.
    pub exhaustive: bool,
}

/// `(L, S, V − L − S)` where `L` is everything `source` reaches avoiding `S`.
fn triple_around(g: &DirectedGraph, source: VertexId, sep: &[VertexId]) -> Option<SeparationTriple> {
    let reach = reachable_avoiding(g, &[source], sep);
    let mut in_sep = vec![false; g.n()];
    sep.iter().for_each(|&v| in_sep[v] = true);
    let left: Vec<_> = (0..g.n()).filter(|&v| reach[v]).collect();
    let right: Vec<_> = (0..g.n()).filter(|&v| !reach[v] && !in_sep[v]).collect();
    let t = SeparationTriple { left, separator: sep.to_vec(), right };
    t.is_valid_in(g).then_some(t)
}

/// `N^out(v)` as a triple, if anything is left on the other side.
fn neighbourhood_triple(g: &DirectedGraph, v: VertexId) -> Option<SeparationTriple> {
    triple_around(g, v, &g.out_neighborhood(v))
}

/// A vertex of out- or in-degree below `bound` whose neighbourhood is a cut.
fn degree_shortcut(g: &DirectedGraph, rev: &DirectedGraph, bound: usize) -> Option<SeparationTriple> {
    for (h, flip) in [(g, false), (rev, true)] {
        let v = h.min_out_degree_vertex()?;
        if h.out_neighborhood(v).len() < bound {
            if let Some(t) = neighbourhood_triple(h, v) {
                return Some(if flip { t.flipped() } else { t });
            }
        }
    }
    None
}

/// Sparse certificate used for undirected inputs: `k` scan-first forests.
pub fn sparsify_undirected(g: &DirectedGraph, k: usize) -> Result<DirectedGraph, GraphError> {
    sparse_certificate(g, k)
}

/// Minimum `s–t` vertex cut below `cap` in either direction, as a triple.
fn pair_cut(g: &DirectedGraph, x: VertexId, y: VertexId, cap: usize) -> Option<SeparationTriple> {
    for (s, t) in [(x, y), (y, x)] {
        if s == t || g.has_arc(s, t) {
            continue;
        }
        let r = st_vertex_cut_capped(g, s, t, cap).ok()?;
        if r.saturated {
            continue;
        }
        let StCut::Vertices(sep) = r.cut else { unreachable!() };
        if let Some(t) = triple_around(g, s, &sep) {
            return Some(t);
        }
    }
    None
}

/// A triple of `g` with separator below `bound`, derived from a triple of a
/// certificate of `g`. Flows between left and right members recover one.
fn lift_triple(g: &DirectedGraph, t: SeparationTriple, bound: usize) -> Option<SeparationTriple> {
    if t.is_valid_in(g) && t.separator.len() < bound {
        return Some(t);
    }
    for &l in &t.left {
        for &r in &t.right {
            if let Some(u) = pair_cut(g, l, r, bound) {
                return Some(u);
            }
        }
    }
    None
}

enum Probe {
    Pair,
    Local { nu: usize },
}

struct Plan {
    probes: Vec<(Probe, usize)>,
    counts: ProbeCounts,
}

fn plan(cfg: &VcConfig, n: usize, m: usize) -> Plan {
    let ln_n = (n.max(2) as f64).ln();
    let count = |x: f64| (x.ceil() as usize).max(1);
    let mut probes = Vec::new();
    let mut counts = ProbeCounts::default();
    match cfg.sampling {
        Sampling::Edge => {
            let nu_bar = cfg.nu_bar.unwrap_or_else(|| count(cfg.epsilon * m as f64)).clamp(1, m.max(1));
            counts.pairs = count(cfg.c_pair * m as f64 / nu_bar as f64 * ln_n);
            probes.push((Probe::Pair, counts.pairs));
            let mut nu = 1;
            while nu <= nu_bar {
                let seeds = count(cfg.c_seed * m as f64 / nu as f64 * ln_n);
                counts.local_seeds += seeds;
                counts.scales += 1;
                probes.push((Probe::Local { nu }, seeds));
                nu *= 2;
            }
        }
        Sampling::Node => {
            let default = count((m as f64 / cfg.k.max(1) as f64).sqrt());
            let sigma_bar = cfg.sigma_bar.unwrap_or(default).clamp(1, n);
            counts.pairs = count(cfg.c_pair * n as f64 / sigma_bar as f64 * ln_n);
            probes.push((Probe::Pair, counts.pairs));
            let mut size = 1;
            while size <= sigma_bar {
                let seeds = count(cfg.c_seed * n as f64 / size as f64 * ln_n);
                counts.local_seeds += seeds;
                counts.scales += 1;
                // A set of `size` vertices has out-volume at most size² + size·k in a simple graph.
                probes.push((Probe::Local { nu: size * size + size * cfg.k }, seeds));
                size *= 2;
            }
        }
    }
    Plan { probes, counts }
}

fn sample_vertex<R: Rng>(g: &DirectedGraph, sampling: Sampling, rng: &mut R) -> VertexId {
    match sampling {
        Sampling::Node => rng.gen_range(0..g.n()),
        Sampling::Edge => {
            // Tail of a uniform arc; arcs are grouped by tail in slot order.
            let a = rng.gen_range(0..g.m());
            let (mut lo, mut hi) = (0, g.n());
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if g.arc_offset(mid) <= a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    }
}

/// Decides whether `g` is `k`-vertex connected. A `Cut` verdict is always a
/// verified separation triple with `|S| < ⌊(1+ε)k⌋`; `KConnected` is correct
/// with high probability.
pub fn vertex_connectivity_check<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    cfg: &VcConfig,
    rng: &mut R,
) -> Result<VcReport, PreconditionError> {
    if cfg.k == 0 {
        return Err(PreconditionError::Invalid("k must be at least 1".into()));
    }
    local_ec::check_epsilon(cfg.epsilon)?;
    let bound = approx_bound(cfg.epsilon, cfg.k);
    let rev = g.reversed();
    let done = |verdict, degree_shortcut, exhaustive, probes| VcReport { verdict, probes, degree_shortcut, exhaustive };
    let cut = |t: SeparationTriple| VcVerdict::Cut { cut: t.separator.clone(), triple: t };

    if g.n() < 2 {
        return Ok(done(VcVerdict::KConnected, false, false, ProbeCounts::default()));
    }
    if let Some(t) = degree_shortcut(g, &rev, cfg.k) {
        return Ok(done(cut(t), true, false, ProbeCounts::default()));
    }
    if 4 * cfg.k > g.n() {
        let verdict = match exhaustive_sweep(g, bound) {
            Some(t) => cut(t),
            None => VcVerdict::KConnected,
        };
        return Ok(done(verdict, false, true, ProbeCounts::default()));
    }

    // Undirected inputs are searched on a certificate; cuts are lifted back.
    let sparse = if g.is_undirected() {
        Some(sparsify_undirected(g, bound).expect("undirected input"))
    } else {
        None
    };
    let h = sparse.as_ref().unwrap_or(g);
    let h_rev = match &sparse {
        Some(s) => s.reversed(),
        None => rev,
    };
    if h.m() == 0 {
        return Ok(done(VcVerdict::KConnected, false, false, ProbeCounts::default()));
    }
    let plan = plan(cfg, h.n(), h.m());
    let boost = cfg.boost.unwrap_or_else(|| (1.5 * (g.n() as f64).log2()).ceil() as usize).max(1);
    let gamma = floor_eps_k(cfg.epsilon, cfg.k);
    let master = rng.next_u64();

    let mut index = Vec::new();
    for (pi, (_, reps)) in plan.probes.iter().enumerate() {
        index.extend((0..*reps).map(|r| (pi, r)));
    }
    let found = find_first(cfg.execution, index.len(), |task| {
        let (pi, _) = index[task];
        let mut trng = ChaCha8Rng::seed_from_u64(derive_seed(master, task as u64));
        let triple = match plan.probes[pi].0 {
            Probe::Pair => {
                let x = sample_vertex(h, cfg.sampling, &mut trng);
                let y = sample_vertex(h, cfg.sampling, &mut trng);
                pair_cut(h, x, y, bound)
            }
            Probe::Local { nu } => {
                let x = sample_vertex(h, cfg.sampling, &mut trng);
                let p = LocalCutParams { x, nu, k: cfg.k, gamma };
                [(h, false), (&h_rev, true)].into_iter().find_map(|(graph, flip)| {
                    let out = local_vc::local_vc_boosted(graph, p, Mode::Relaxed, boost, &mut trng).ok()?;
                    let t = out.vertex_cut()?.witness.clone()?;
                    Some(if flip { t.flipped() } else { t })
                })
            }
        };
        triple.and_then(|t| lift_triple(g, t, bound))
    });
    let mut counts = plan.counts;
    counts.boost = boost;
    Ok(done(found.map_or(VcVerdict::KConnected, cut), false, false, counts))
}

/// Smallest vertex cut with fewer than `cap` vertices, by capped flows from
/// `cap + 1` sources to every other vertex in both directions. Some source
/// lies outside any separator of size below `cap`, and it sits on the left or
/// right of the triple, so one of its flows meets the minimum.
pub fn exhaustive_sweep(g: &DirectedGraph, cap: usize) -> Option<SeparationTriple> {
    let mut best: Option<SeparationTriple> = None;
    let sources = (cap + 1).min(g.n());
    for s in 0..sources {
        for t in 0..g.n() {
            for (a, b) in [(s, t), (t, s)] {
                let limit = best.as_ref().map_or(cap, |b| b.separator.len());
                if a == b || limit == 0 || g.has_arc(a, b) {
                    continue;
                }
                let Ok(r) = st_vertex_cut_capped(g, a, b, limit) else { continue };
                if r.saturated {
                    continue;
                }
                let StCut::Vertices(sep) = r.cut else { unreachable!() };
                if let Some(tr) = triple_around(g, a, &sep) {
                    best = Some(tr);
                }
            }
        }
    }
    best
}

/// `κ(G)` and a minimum separator (none when every ordered pair is adjacent,
/// in which case `κ = n − 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub kappa: usize,
    pub triple: Option<SeparationTriple>,
}

/// Exact vertex connectivity by descent. The smallest neighbourhood that
/// separates gives a first cut `S`; the check then runs with `k = |S|` and
/// `ε = 1/(k+1)`, so any cut it returns is strictly smaller, until it
/// declares `k`-connectivity. Once `4|S| > n` the exhaustive sweep finishes
/// the job. Only the last check runs its full probe plan.
pub fn exact_vertex_connectivity<R: RngCore + ?Sized>(g: &DirectedGraph, base: &VcConfig, rng: &mut R) -> Connectivity {
    let n = g.n();
    if n < 2 {
        return Connectivity { kappa: 0, triple: None };
    }
    let rev = g.reversed();
    let mut best: Option<SeparationTriple> = None;
    for v in 0..n {
        for (h, flip) in [(g, false), (&rev, true)] {
            if best.as_ref().is_some_and(|b| h.out_neighborhood(v).len() >= b.separator.len()) {
                continue;
            }
            if let Some(t) = neighbourhood_triple(h, v) {
                best = Some(if flip { t.flipped() } else { t });
            }
        }
    }
    // No separating neighbourhood: every ordered pair is adjacent.
    let Some(mut best) = best else {
        return Connectivity { kappa: n - 1, triple: None };
    };
    loop {
        let k = best.separator.len();
        if k == 0 {
            break;
        }
        let smaller = if 4 * k > n {
            exhaustive_sweep(g, k)
        } else {
            let cfg = VcConfig { k, epsilon: 1.0 / (k as f64 + 1.0), ..base.clone() };
            match vertex_connectivity_check(g, &cfg, rng).expect("valid parameters").verdict {
                VcVerdict::Cut { triple, .. } => Some(triple),
                VcVerdict::KConnected => None,
            }
        };
        match smaller {
            Some(t) if t.separator.len() < k => best = t,
            _ => break,
        }
    }
    Connectivity { kappa: best.separator.len(), triple: Some(best) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn complete_graph_is_connected() {
        let g = generators::clique(30);
        let r = vertex_connectivity_check(&g, &VcConfig::new(10, 0.5), &mut rng()).unwrap();
        assert_eq!(r.verdict, VcVerdict::KConnected);
    }

    #[test]
    fn long_cycle_has_two_cut() {
        let g = generators::cycle(50, true);
        let r = vertex_connectivity_check(&g, &VcConfig::new(3, 0.1), &mut rng()).unwrap();
        match r.verdict {
            VcVerdict::Cut { cut, triple } => {
                assert_eq!(cut.len(), 2);
                assert!(triple.is_valid_in(&g));
            }
            v => panic!("expected a cut, got {v:?}"),
        }
    }

    #[test]
    fn exact_small_cases() {
        let c = VcConfig::new(1, 0.5);
        assert_eq!(exact_vertex_connectivity(&generators::clique(6), &c, &mut rng()).kappa, 5);
        assert_eq!(exact_vertex_connectivity(&generators::cycle(8, true), &c, &mut rng()).kappa, 2);
    }

    #[test]
    fn sparsified_tree_and_clique() {
        let tree = DirectedGraph::from_undirected_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert_eq!(sparsify_undirected(&tree, 2).unwrap().undirected_edges(), tree.undirected_edges());
        let k20 = generators::clique_undirected(20);
        assert!(sparsify_undirected(&k20, 3).unwrap().undirected_edges().len() <= 57);
    }

    #[test]
    fn node_sampling_finds_cycle_cut() {
        let g = generators::cycle(40, false);
        let mut c = VcConfig::new(2, 0.4);
        c.sampling = Sampling::Node;
        let r = vertex_connectivity_check(&g, &c, &mut rng()).unwrap();
        assert!(matches!(r.verdict, VcVerdict::Cut { ref cut, .. } if cut.len() == 1));
    }
}
