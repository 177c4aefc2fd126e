//! Randomized local edge-cut detection.
//!
//! [`local_ec`] repeats a depth-first search from `x` up to `k + γ` times.
//! Each newly marked arc stops the search with probability `(γ+1)/(8ν)`; the
//! tree path to the tail of that arc is then reversed. If a search runs out
//! of arcs, the set it reached is returned. The total number of marked arcs
//! is capped at `⌈128νk/(γ+1)⌉`.
//!
//! A set is only ever returned together with the guarantee that it contains
//! `x`, is not all of `V`, and has fewer than `k + γ` outgoing arcs.

use crate::graph::view::NIL;
use crate::graph::{Adjacency, DirectedGraph, LocalView, VertexId};
use crate::local_vc::VertexCutResult;
use rand::{Rng, RngCore};
use serde::Serialize;
use std::ops::AddAssign;
use thiserror::Error;

/// Precondition handling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Reject parameter combinations outside the proven regime.
    Strict,
    /// Run anyway and tag the outcome as carrying no guarantee.
    #[default]
    Relaxed,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PreconditionError {
    /// Outside the proven regime; accepted in relaxed mode.
    #[error("precondition violated: {0}")]
    Violated(String),
    /// Meaningless in any mode.
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCutParams {
    pub x: VertexId,
    pub nu: usize,
    pub k: usize,
    pub gamma: usize,
}

/// Counters of a single run (or a sum of runs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    /// Distinct incidence queries.
    pub queries: u64,
    /// Distinct degree lookups; reported separately from `queries`.
    pub degree_queries: u64,
    pub marked: u64,
    /// Tree paths reversed.
    pub reversals: u64,
}

impl AddAssign for RunStats {
    fn add_assign(&mut self, o: RunStats) {
        self.queries += o.queries;
        self.degree_queries += o.degree_queries;
        self.marked += o.marked;
        self.reversals += o.reversals;
    }
}

/// A returned edge cut `S`, measured in the graph it was searched in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCutSet {
    /// Sorted.
    pub vertices: Vec<VertexId>,
    /// `|E(S, V−S)|`.
    pub cut_size: usize,
    /// `vol^out(S)`.
    pub volume: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detection {
    EdgeCut(EdgeCutSet),
    VertexCut(VertexCutResult),
    Bot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutOutcome {
    pub detection: Detection,
    pub stats: RunStats,
    /// Set when a relaxed run was outside the proven parameter regime.
    pub guarantee_void: bool,
}

impl CutOutcome {
    pub fn is_bot(&self) -> bool {
        matches!(self.detection, Detection::Bot)
    }

    pub fn edge_cut(&self) -> Option<&EdgeCutSet> {
        match &self.detection {
            Detection::EdgeCut(c) => Some(c),
            _ => None,
        }
    }

    pub fn vertex_cut(&self) -> Option<&VertexCutResult> {
        match &self.detection {
            Detection::VertexCut(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn bot(stats: RunStats, guarantee_void: bool) -> Self {
        CutOutcome { detection: Detection::Bot, stats, guarantee_void }
    }
}

/// `⌈128νk/(γ+1)⌉`, the cap on marked arcs.
pub fn mark_cap(nu: usize, k: usize, gamma: usize) -> u64 {
    div_ceil(128 * nu as u128 * k as u128, gamma as u128 + 1) as u64
}

/// `130νk/(γ+1)` rounded down, the volume bound of a returned set.
pub fn volume_bound(nu: usize, k: usize, gamma: usize) -> usize {
    (130 * nu as u128 * k as u128 / (gamma as u128 + 1)) as usize
}

fn div_ceil(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// `⌊εk⌋`, nudged so that products that are integers in exact arithmetic
/// (e.g. 0.3 · 10) are not rounded down by binary representation.
pub fn floor_eps_k(epsilon: f64, k: usize) -> usize {
    (epsilon * k as f64 + 1e-9).floor() as usize
}

/// `⌊(1+ε)k⌋`.
pub fn approx_bound(epsilon: f64, k: usize) -> usize {
    k + floor_eps_k(epsilon, k)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), PreconditionError> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(PreconditionError::Invalid(format!("ε = {epsilon} is not in (0, 1]")))
    }
}

/// Collapses a precondition check into the outcome tag for `mode`.
pub(crate) fn resolve(mode: Mode, check: Result<(), PreconditionError>) -> Result<bool, PreconditionError> {
    match (check, mode) {
        (Ok(()), _) => Ok(false),
        (Err(e @ PreconditionError::Invalid(_)), _) => Err(e),
        (Err(e), Mode::Strict) => Err(e),
        (Err(_), Mode::Relaxed) => Ok(true),
    }
}

fn basic_checks(n: usize, p: &LocalCutParams) -> Result<(), PreconditionError> {
    if p.x >= n {
        return Err(PreconditionError::Invalid(format!("seed {} ≥ n={n}", p.x)));
    }
    if p.k == 0 {
        return Err(PreconditionError::Invalid("k must be at least 1".into()));
    }
    if p.nu == 0 {
        return Err(PreconditionError::Invalid("ν must be at least 1".into()));
    }
    Ok(())
}

/// `γ ≤ k < ν` and `ν · factor · k < m(γ+1)`.
pub(crate) fn regime_check(m: usize, nu: usize, k: usize, gamma: usize, factor: u128) -> Result<(), PreconditionError> {
    if gamma > k {
        return Err(PreconditionError::Violated(format!("γ={gamma} > k={k}")));
    }
    if k >= nu {
        return Err(PreconditionError::Violated(format!("k={k} ≥ ν={nu}")));
    }
    if nu as u128 * factor * k as u128 >= m as u128 * (gamma as u128 + 1) {
        return Err(PreconditionError::Violated(format!(
            "ν={nu} ≥ m(γ+1)/({factor}k) with m={m}, γ={gamma}, k={k}"
        )));
    }
    Ok(())
}

/// Checks `params` against the proven regime for [`local_ec`] on `g`.
pub fn check_params<A: Adjacency + ?Sized>(g: &A, p: &LocalCutParams) -> Result<(), PreconditionError> {
    basic_checks(g.vertex_count(), p)?;
    regime_check(g.arc_count(), p.nu, p.k, p.gamma, 130)
}

/// Runs the search on any adjacency. Returns the reached set (sorted) or
/// `None` for ⊥, plus counters.
pub(crate) fn search<A, R>(g: &A, p: &LocalCutParams, rng: &mut R) -> (Option<Vec<VertexId>>, RunStats)
where
    A: Adjacency + ?Sized,
    R: RngCore + ?Sized,
{
    let cap = mark_cap(p.nu, p.k, p.gamma);
    // Stop iff r · 8ν < (γ+1) · 2⁶⁴ for a uniform 64-bit r.
    let stop_num = (p.gamma as u128 + 1) << 64;
    let stop_den = 8 * p.nu as u128;
    let mut view = LocalView::new(g);
    let root = view.vertex(p.x);
    let mut stack: Vec<u32> = Vec::new();
    let mut reached: Vec<VertexId> = Vec::new();

    let mut result = None;
    'passes: for _ in 0..p.k + p.gamma {
        view.begin_pass();
        stack.clear();
        reached.clear();
        view.visit(root);
        stack.push(root);
        reached.push(p.x);
        let mut stopped = false;
        while let Some(&top) = stack.last() {
            let Some(a) = view.advance(top) else {
                stack.pop();
                continue;
            };
            if view.mark(a) {
                if view.marked_count() >= cap {
                    break 'passes;
                }
                if (rng.next_u64() as u128) * stop_den < stop_num {
                    stopped = true;
                    break;
                }
            }
            let w = view.arc_head(a);
            if !view.is_visited(w) {
                let wi = view.vertex(w);
                view.visit(wi);
                stack.push(wi);
                reached.push(w);
            }
        }
        if !stopped {
            if reached.len() < g.vertex_count() {
                let mut s = reached.clone();
                s.sort_unstable();
                result = Some(s);
            }
            break;
        }
        // The stack is the tree path from x to the tail of the stopping arc;
        // each vertex's cursor is the tree arc to the next one.
        for i in 0..stack.len() - 1 {
            let a = view.cursor(stack[i]);
            debug_assert!(a != NIL && view.arc_head(a) == view.vertex_id(stack[i + 1]));
            view.reverse_arc(a);
        }
        view.note_path_reversal();
    }
    let stats = RunStats {
        queries: view.query_count(),
        degree_queries: view.degree_query_count(),
        marked: view.marked_count(),
        reversals: view.reversed_path_count(),
    };
    (result, stats)
}

/// `|E(S, V−S)|` and `vol^out(S)` read through an adjacency.
pub fn measure<A: Adjacency + ?Sized>(g: &A, set: &[VertexId]) -> (usize, usize) {
    let inside: rustc_hash::FxHashSet<VertexId> = set.iter().copied().collect();
    let mut cut = 0;
    let mut vol = 0;
    for &v in set {
        let d = g.out_degree(v);
        vol += d;
        cut += (0..d).filter(|&s| !inside.contains(&g.head(v, s))).count();
    }
    (cut, vol)
}

fn edge_outcome<A: Adjacency + ?Sized>(g: &A, found: Option<Vec<VertexId>>, stats: RunStats, void: bool) -> CutOutcome {
    match found {
        None => CutOutcome::bot(stats, void),
        Some(vertices) => {
            let (cut_size, volume) = measure(g, &vertices);
            CutOutcome {
                detection: Detection::EdgeCut(EdgeCutSet { vertices, cut_size, volume }),
                stats,
                guarantee_void: void,
            }
        }
    }
}

/// Local edge-cut detection on an arbitrary adjacency (the split view included).
pub fn local_ec_on<A, R>(g: &A, p: LocalCutParams, mode: Mode, rng: &mut R) -> Result<CutOutcome, PreconditionError>
where
    A: Adjacency + ?Sized,
    R: RngCore + ?Sized,
{
    let void = resolve(mode, check_params(g, &p))?;
    let (found, stats) = search(g, &p, rng);
    Ok(edge_outcome(g, found, stats, void))
}

/// Local edge-cut detection: returns ⊥ or `S ∋ x` with `|E(S,V−S)| < k+γ`
/// and `vol^out(S) ≤ 130νk/(γ+1)`.
pub fn local_ec<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: LocalCutParams,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    local_ec_on(g, p, mode, rng)
}

/// `γ = 0`: any returned set has fewer than `k` outgoing arcs.
pub fn local_ec_exact<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    x: VertexId,
    nu: usize,
    k: usize,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    local_ec(g, LocalCutParams { x, nu, k, gamma: 0 }, mode, rng)
}

/// `γ = ⌊εk⌋`: any returned set has fewer than `⌊(1+ε)k⌋` outgoing arcs.
pub fn local_ec_approx<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    x: VertexId,
    nu: usize,
    k: usize,
    epsilon: f64,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    check_epsilon(epsilon)?;
    let gamma = floor_eps_k(epsilon, k);
    local_ec(g, LocalCutParams { x, nu, k, gamma }, mode, rng)
}

/// Checks the gap regime: `k ≥ 1+γ`, `2γ ≤ k`, `ν · factor · (k−γ) < m(γ+1)`.
pub(crate) fn gap_check(m: usize, p: &LocalCutParams, factor: u128) -> Result<(), PreconditionError> {
    if p.k < 1 + p.gamma {
        return Err(PreconditionError::Violated(format!("k={} < 1+γ={}", p.k, 1 + p.gamma)));
    }
    if 2 * p.gamma > p.k {
        return Err(PreconditionError::Violated(format!("γ={} > k/2 with k={}", p.gamma, p.k)));
    }
    let kk = (p.k - p.gamma) as u128;
    if p.nu as u128 * factor * kk >= m as u128 * (p.gamma as u128 + 1) {
        return Err(PreconditionError::Violated(format!(
            "ν={} ≥ m(γ+1)/({factor}(k−γ)) with m={m}",
            p.nu
        )));
    }
    Ok(())
}

/// Gap version: distinguishes "a set with fewer than `k−γ` outgoing arcs and
/// volume ≤ ν exists" from "returned set has fewer than `k` outgoing arcs".
pub fn gap_local_ec_on<A, R>(g: &A, p: LocalCutParams, mode: Mode, rng: &mut R) -> Result<CutOutcome, PreconditionError>
where
    A: Adjacency + ?Sized,
    R: RngCore + ?Sized,
{
    basic_checks(g.vertex_count(), &p)?;
    let void = resolve(mode, gap_check(g.arc_count(), &p, 130))?;
    let kk = p.k.saturating_sub(p.gamma).max(1);
    if p.nu < kk {
        let d = g.out_degree(p.x);
        let stats = RunStats { degree_queries: 1, ..RunStats::default() };
        if d < kk {
            let (cut_size, volume) = measure(g, &[p.x]);
            return Ok(CutOutcome {
                detection: Detection::EdgeCut(EdgeCutSet { vertices: vec![p.x], cut_size, volume }),
                stats,
                guarantee_void: void,
            });
        }
        return Ok(CutOutcome::bot(stats, void));
    }
    let inner = LocalCutParams { x: p.x, nu: p.nu, k: kk, gamma: p.gamma.min(kk) };
    // ν = k−γ sits on the boundary of the inner regime; the outer check covers it.
    let (found, stats) = search(g, &inner, rng);
    Ok(edge_outcome(g, found, stats, void))
}

pub fn gap_local_ec<R: RngCore + ?Sized>(
    g: &DirectedGraph,
    p: LocalCutParams,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    gap_local_ec_on(g, p, mode, rng)
}

/// First non-⊥ outcome over `reps` independent runs. Counters are summed.
pub fn local_ec_boosted<R: RngCore + ?Sized>(
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
            return Ok(edge_outcome(g, found, total, void));
        }
    }
    Ok(CutOutcome::bot(total, void))
}

/// `⌈8ν/ε⌉`, the per-iteration arc budget of [`local_ec_alt`].
pub fn alt_budget(nu: usize, epsilon: f64) -> usize {
    (8.0 * nu as f64 / epsilon - 1e-9).ceil() as usize
}

/// `⌊10ν/ε⌋`, the volume bound of [`local_ec_alt`].
pub fn alt_volume_bound(nu: usize, epsilon: f64) -> usize {
    (10.0 * nu as f64 / epsilon + 1e-9).floor() as usize
}

/// Variant with a fixed per-iteration budget: `⌊(1+ε)k⌋` iterations, each a
/// DFS cut off after exactly `⌈8ν/ε⌉` explored arcs, followed by reversing
/// the tree path to the head of a uniformly chosen explored arc.
pub fn local_ec_alt<R: Rng + ?Sized>(
    g: &DirectedGraph,
    x: VertexId,
    nu: usize,
    k: usize,
    epsilon: f64,
    mode: Mode,
    rng: &mut R,
) -> Result<CutOutcome, PreconditionError> {
    check_epsilon(epsilon)?;
    let p = LocalCutParams { x, nu, k, gamma: 0 };
    basic_checks(g.n(), &p)?;
    let budget = alt_budget(nu, epsilon);
    let regime = if 8.0 * (nu as f64) < epsilon * g.m() as f64 {
        Ok(())
    } else {
        Err(PreconditionError::Violated(format!("ν={nu} ≥ εm/8 with m={}, ε={epsilon}", g.m())))
    };
    let void = resolve(mode, regime)?;

    let mut view = LocalView::new(g);
    let root = view.vertex(x);
    let mut stack: Vec<u32> = Vec::new();
    let mut reached = Vec::new();
    let mut explored: Vec<u32> = Vec::with_capacity(budget);
    let mut found = None;
    for _ in 0..approx_bound(epsilon, k) {
        view.begin_pass();
        stack.clear();
        reached.clear();
        explored.clear();
        view.visit(root);
        stack.push(root);
        reached.push(x);
        while explored.len() < budget {
            let Some(&top) = stack.last() else { break };
            let Some(a) = view.advance(top) else {
                stack.pop();
                continue;
            };
            view.mark(a);
            explored.push(a);
            let w = view.arc_head(a);
            if !view.is_visited(w) {
                let wi = view.vertex(w);
                view.visit(wi);
                view.set_parent(wi, a);
                stack.push(wi);
                reached.push(w);
            }
        }
        if explored.len() < budget {
            if reached.len() < g.n() {
                let mut s = reached.clone();
                s.sort_unstable();
                found = Some(s);
            }
            break;
        }
        let pick = explored[rng.gen_range(0..explored.len())];
        // Walk parent arcs from the head of the sampled arc back to x.
        let mut path = Vec::new();
        let mut cur = view.handle(view.arc_head(pick)).expect("explored head is known");
        while cur != root {
            let a = view.parent(cur);
            path.push(a);
            cur = view.handle(view.arc_tail(a)).expect("tree tail is known");
        }
        for a in path {
            view.reverse_arc(a);
        }
        view.note_path_reversal();
    }
    let stats = RunStats {
        queries: view.query_count(),
        degree_queries: view.degree_query_count(),
        marked: view.marked_count(),
        reversals: view.reversed_path_count(),
    };
    Ok(edge_outcome(g, found, stats, void))
}
