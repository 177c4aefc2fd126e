//! Local vertex-cut detection through the split graph.
//!
//! A small vertex cut around `x` in `G` is a small edge cut around `x` in the
//! split graph `G'`, where every `v ≠ x` is replaced by `v_in → v_out`.
//! [`local_vc`] runs the edge search on `G'` with volume `3ν` and turns the
//! set it finds back into a separation triple of `G`.

use crate::graph::{
    membership, Adjacency, DirectedGraph, SeparationTriple, SplitSide, SplitView, VertexId,
};
use crate::local_ec::{
    self, resolve, CutOutcome, Detection, LocalCutParams, Mode, PreconditionError, RunStats,
};
use rand::RngCore;
use serde::Serialize;
use rustc_hash::FxHashSet;
use std::collections::BTreeSet;

/// A vertex cut with its separation triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCutResult {
    /// Sorted separator `S`.
    pub cut: Vec<VertexId>,
    pub witness: Option<SeparationTriple>,
    /// `|E_{G'}(L', V'−L')|` of the split-graph set, when there was one.
    pub split_cut: usize,
    /// `vol^out_{G'}(L')`.
    pub split_volume: usize,
    /// Arcs read while converting `L'` back to `G`.
    pub reconstruction_reads: usize,
    /// True when the triple came from the single-vertex fallback.
    pub fallback: bool,
}

/// Result of turning a split-graph set back into a separation triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub triple: Option<SeparationTriple>,
    pub split_cut: usize,
    pub split_volume: usize,
    pub reads: usize,
    pub fallback: bool,
}

/// Converts `L' ∋ x` (split-graph ids) into a triple `(L, S, R)` of `g`.
///
/// Crossing arcs of `L'` are split arcs `v_in → v_out` (for `v ∈ S₁`) or
/// arcs `u_out → v_in` (for `v ∈ S₂`). Adding `v_in` for `v ∈ S₂` gives `L'₀`,
/// whose only crossing arcs are split arcs. `L` is the set of vertices with
/// both copies in `L'₀` and `S = N^out(L)`. This keeps
/// `vol(L) ≤ 2·vol_{G'}(L')` and `|S| ≤ |E_{G'}(L', V'−L')|`.
///
/// If `R` comes out empty, a vertex `v` with `v_out ∈ L'` and
/// `deg(v) ≤ |E_{G'}(L', V'−L')|` gives the triple `({v}, N^out(v), rest)`.
pub fn reconstruct_separation(g: &DirectedGraph, x: VertexId, l_prime: &[VertexId]) -> Reconstruction {
    let split = SplitView::new(g, x);
    let inside: FxHashSet<VertexId> = l_prime.iter().copied().collect();
    let mut split_cut = 0;
    let mut split_volume = 0;
    let mut s2 = Vec::new();
    for &c in l_prime {
        let d = split.out_degree(c);
        split_volume += d;
        for slot in 0..d {
            let h = split.head(c, slot);
            if inside.contains(&h) {
                continue;
            }
            split_cut += 1;
            if split.origin(c).1 != SplitSide::In {
                s2.push(h);
            }
        }
    }
    let mut l0 = inside.clone();
    l0.extend(s2);
    let mut left: Vec<VertexId> = l0
        .iter()
        .filter_map(|&c| match split.origin(c) {
            (v, SplitSide::Root) => Some(v),
            (v, SplitSide::In) if l0.contains(&split.out_copy(v)) => Some(v),
            _ => None,
        })
        .collect();
    left.sort_unstable();
    left.dedup();
    let mut reads = split_volume;
    let (triple, read_more) = triple_from_left(g, &left);
    reads += read_more;
    if let Some(t) = triple {
        return Reconstruction { triple: Some(t), split_cut, split_volume, reads, fallback: false };
    }
    let mut outs: Vec<VertexId> = l_prime
        .iter()
        .filter_map(|&c| match split.origin(c) {
            (v, SplitSide::Out) | (v, SplitSide::Root) => Some(v),
            _ => None,
        })
        .filter(|&v| g.out_degree(v) <= split_cut)
        .collect();
    outs.sort_unstable();
    for v in outs {
        let (t, r) = triple_from_left(g, &[v]);
        reads += r;
        if t.is_some() {
            return Reconstruction { triple: t, split_cut, split_volume, reads, fallback: true };
        }
    }
    Reconstruction { triple: None, split_cut, split_volume, reads, fallback: false }
}

/// `(L, N^out(L), rest)` when `L` and the rest are nonempty.
fn triple_from_left(g: &DirectedGraph, left: &[VertexId]) -> (Option<SeparationTriple>, usize) {
    if left.is_empty() {
        return (None, 0);
    }
    let in_left = membership(g.n(), left);
    let mut sep = BTreeSet::new();
    let mut reads = 0;
    for &v in left {
        reads += g.out_degree(v);
        for &w in g.out_neighbors(v) {
            if !in_left[w] {
                sep.insert(w);
            }
        }
    }
    let right: Vec<VertexId> = (0..g.n()).filter(|&v| !in_left[v] && !sep.contains(&v)).collect();
    if right.is_empty() {
        return (None, reads);
    }
    let triple = SeparationTriple { left: left.to_vec(), separator: sep.into_iter().collect(), right };
    (Some(triple), reads)
}

fn check_basic(g: &DirectedGraph, x: VertexId, k: usize, nu: usize) -> Result<(), PreconditionError> {
    if x >= g.n() {
        return Err(PreconditionError::Invalid(format!("seed {x} ≥ n={}", g.n())));
    }
    if k == 0 || nu == 0 {
        return Err(PreconditionError::Invalid("k and ν must be at least 1".into()));
    }
    Ok(())
}

fn min_degree_check(g: &DirectedGraph) -> Result<(), PreconditionError> {
    g.require_positive_out_degree()
        .map_err(|e| PreconditionError::Violated(e.to_string()))
}

/// `1 ≤ k`, `4k < n`, `γ ≤ k < ν`, `ν·12480k < m(γ+1)`, min out-degree ≥ 1.
pub fn check_params(g: &DirectedGraph, p: &LocalCutParams) -> Result<(), PreconditionError> {
    check_basic(g, p.x, p.k, p.nu)?;
    if 4 * p.k >= g.n() {
        return Err(PreconditionError::Violated(format!("4k={} ≥ n={}", 4 * p.k, g.n())));
    }
    local_ec::regime_check(g.m(), p.nu, p.k, p.gamma, 12480)?;
    min_degree_check(g)
}

/// `(x, N^out(x), rest)` if `deg^out(x) < threshold`.
fn degree_shortcut(g: &DirectedGraph, x: VertexId, threshold: usize) -> Option<VertexCutResult> {
    if g.out_degree(x) >= threshold {
        return None;
    }
    let (t, reads) = triple_from_left(g, &[x]);
    t.map(|t| VertexCutResult {
        cut: t.separator.clone(),
        witness: Some(t),
        split_cut: 0,
        split_volume: 0,
        reconstruction_reads: reads,
        fallback: false,
    })
}

/// One search on the split graph followed by reconstruction.
pub(crate) fn search<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: &LocalCutParams,
    rng: &mut R,
) -> (Option<VertexCutResult>, RunStats) {
    let mut stats = RunStats { degree_queries: 1, ..RunStats::default() };
    if let Some(r) = degree_shortcut(g, p.x, p.k) {
        return (Some(r), stats);
    }
    let split = SplitView::new(g, p.x);
    let inner = LocalCutParams { x: split.in_copy(p.x), nu: 3 * p.nu, k: p.k, gamma: p.gamma };
    let (found, s) = local_ec::search(&split, &inner, rng);
    stats += s;
    let Some(l_prime) = found else { return (None, stats) };
    let rec = reconstruct_separation(g, p.x, &l_prime);
    let result = rec.triple.map(|t| VertexCutResult {
        cut: t.separator.clone(),
        witness: Some(t),
        split_cut: rec.split_cut,
        split_volume: rec.split_volume,
        reconstruction_reads: rec.reads,
        fallback: rec.fallback,
    });
    (result, stats)
}

fn vertex_outcome(found: Option<VertexCutResult>, stats: RunStats, void: bool) -> CutOutcome {
    match found {
        Some(r) => CutOutcome { detection: Detection::VertexCut(r), stats, guarantee_void: void },
        None => CutOutcome::bot(stats, void),
    }
}

/// Returns ⊥ or a vertex cut of size below `k + γ` with its triple. If some
/// triple `(L, S, R)` has `x ∈ L`, `|S| < k` and `vol^out(L) ≤ ν`, ⊥ comes back
/// with probability at most 1/4 under the strict preconditions.
pub fn local_vc<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: LocalCutParams,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    let void = resolve(mode, check_params(g, &p))?;
    let (found, stats) = search(g, &p, rng);
    Ok(vertex_outcome(found, stats, void))
}

/// First non-⊥ result over `reps` runs; counters summed.
pub fn local_vc_boosted<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: LocalCutParams,
    mode: Mode,
    reps: usize,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    let void = resolve(mode, check_params(g, &p))?;
    let mut total = RunStats::default();
    for _ in 0..reps.max(1) {
        let (found, stats) = search(g, &p, rng);
        total += stats;
        if found.is_some() {
            return Ok(vertex_outcome(found, total, void));
        }
    }
    Ok(CutOutcome::bot(total, void))
}

/// `1 ≤ k−γ ≤ n/4`, `2γ ≤ k`, `ν·12480(k−γ) < m(γ+1)`.
pub fn check_gap_params(g: &DirectedGraph, p: &LocalCutParams) -> Result<(), PreconditionError> {
    check_basic(g, p.x, p.k, p.nu)?;
    if p.k <= p.gamma || 4 * (p.k - p.gamma) > g.n() {
        return Err(PreconditionError::Violated(format!(
            "k−γ = {} outside [1, n/4] with n={}",
            p.k as i64 - p.gamma as i64,
            g.n()
        )));
    }
    local_ec::gap_check(g.m(), p, 12480)?;
    min_degree_check(g)
}

pub(crate) fn gap_search<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: &LocalCutParams,
    rng: &mut R,
) -> (Option<VertexCutResult>, RunStats) {
    let kk = p.k.saturating_sub(p.gamma).max(1);
    if p.nu < kk {
        let stats = RunStats { degree_queries: 1, ..RunStats::default() };
        return (degree_shortcut(g, p.x, kk), stats);
    }
    let inner = LocalCutParams { x: p.x, nu: p.nu, k: kk, gamma: p.gamma.min(kk) };
    search(g, &inner, rng)
}

/// Gap version: a triple with `|S| < k−γ` and `vol(L) ≤ ν` around `x` is
/// detected with probability ≥ 3/4; any returned cut has size below `k`.
pub fn gap_local_vc<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: LocalCutParams,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    let void = resolve(mode, check_gap_params(g, &p))?;
    let (found, stats) = gap_search(g, &p, rng);
    Ok(vertex_outcome(found, stats, void))
}
