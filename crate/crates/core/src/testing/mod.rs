//! One-sided property testers for `k`-edge and `k`-vertex connectivity.
//!
//! Every tester first probes the degrees of a few random vertices, then runs
//! the gap local searches from random seeds (unbounded model) or from tails
//! of random arcs (bounded model), on the graph and on its reverse. A cut is
//! reported only after it has been checked against the real graph, so a
//! `k`-connected input is never rejected.
//!
//! In the bounded model the graph is padded with self-loops to out-degree
//! `d` (and the reverse to in-degree `d`), which makes arc sampling uniform.

mod certificate;

pub use certificate::{verify_far_certificate, CertificateError, FarFamily, Property};

use crate::graph::{cut_size, in_cut_size, Adjacency, DirectedGraph, SeparationTriple, VertexId};
use crate::local_ec::{self, mark_cap, Detection, LocalCutParams, Mode, PreconditionError};
use crate::local_vc;
use rand::Rng;
use serde::Serialize;
use std::borrow::Cow;
use thiserror::Error;

/// Access model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// Incidence lists of any length. `avg_degree_known` lets the seed count
    /// use `d̄ = m/n`.
    Unbounded { avg_degree_known: bool },
    /// In- and out-degrees at most `d`.
    Bounded { d: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TesterConfig {
    pub k: usize,
    pub epsilon: f64,
    pub model: Model,
    pub property: Property,
    /// Enables the degree-only path for simple graphs when `ε > 4/k`.
    pub simple_graph: bool,
    /// Degree-check sample multiplier.
    pub c1: f64,
    /// Seed sample multiplier (unbounded model).
    pub c2: f64,
    /// Arc sample multiplier (bounded model).
    pub c3: f64,
    pub mode: Mode,
}

impl TesterConfig {
    pub fn new(k: usize, epsilon: f64, model: Model, property: Property) -> Self {
        TesterConfig { k, epsilon, model, property, simple_graph: false, c1: 4.0, c2: 8.0, c3: 8.0, mode: Mode::Relaxed }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TesterError {
    #[error(transparent)]
    Precondition(#[from] PreconditionError),
    #[error("degree bound d={d} is exceeded by vertex {v}")]
    DegreeBound { d: usize, v: VertexId },
    #[error("graph has fewer than two vertices")]
    TooSmall,
}

/// A verified cut of size below `k` in the tested graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `|E(S, V−S)| < k`.
    OutEdgeCut { set: Vec<VertexId>, cut_size: usize },
    /// `|E(V−S, S)| < k`.
    InEdgeCut { set: Vec<VertexId>, cut_size: usize },
    /// `|S| < k` for the triple `(L, S, R)`.
    VertexCut { triple: SeparationTriple },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    DeclaredConnected,
    WitnessCut(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TesterVerdict {
    pub outcome: Outcome,
    /// Incidence queries plus degree lookups.
    pub queries: u64,
    pub local_calls: u64,
    /// Some local call ran outside its proven regime.
    pub guarantee_void: bool,
}

impl TesterVerdict {
    pub fn rejected(&self) -> bool {
        matches!(self.outcome, Outcome::WitnessCut(_))
    }
}

/// `⌊log₂ k⌋ + 1`.
pub fn log_factor(k: usize) -> usize {
    k.max(1).ilog2() as usize + 1
}

fn ceil_pos(x: f64) -> usize {
    ((x - 1e-9).ceil() as usize).max(1)
}

/// An arc drawn from the padded graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampledArc {
    pub tail: VertexId,
    pub head: VertexId,
    /// A padding self-loop rather than a real arc.
    pub padding: bool,
}

/// Uniform arc of `g` padded with self-loops to out-degree `d`: a uniform
/// vertex and a uniform slot in `0..d`. Each of the `nd` slots has
/// probability exactly `1/(nd)`.
pub fn sample_edge_regularized<R: Rng + ?Sized>(g: &DirectedGraph, d: usize, rng: &mut R) -> SampledArc {
    let v = rng.gen_range(0..g.n());
    let slot = rng.gen_range(0..d);
    let list = g.out_neighbors(v);
    debug_assert!(list.len() <= d);
    match list.get(slot) {
        Some(&w) => SampledArc { tail: v, head: w, padding: false },
        None => SampledArc { tail: v, head: v, padding: true },
    }
}

/// Appends self-loops so every vertex has out-degree exactly `d`.
pub fn pad_to_degree(g: &DirectedGraph, d: usize) -> DirectedGraph {
    let mut arcs = Vec::with_capacity(g.n() * d);
    for v in 0..g.n() {
        arcs.extend(g.out_neighbors(v).iter().map(|&w| (v, w)));
        arcs.extend(std::iter::repeat_n((v, v), d.saturating_sub(g.out_degree(v))));
    }
    DirectedGraph::from_arcs(g.n(), &arcs)
}

/// One volume scale of the search schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Scale {
    pub nu: usize,
    pub gamma: usize,
    /// Arc samples at this scale (bounded model only).
    pub samples: usize,
}

/// Sample counts and scales a tester will use; fixed by the config and `n`, `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    /// Vertices whose degree is checked.
    pub degree_samples: usize,
    /// Seeds, each run at every scale (unbounded model).
    pub seeds: usize,
    pub scales: Vec<Scale>,
    /// Only the degree check runs.
    pub degree_only: bool,
}

/// A tester prepared for one graph.
pub struct Tester<'g> {
    real: &'g DirectedGraph,
    forward: Cow<'g, DirectedGraph>,
    backward: DirectedGraph,
    config: TesterConfig,
    schedule: Schedule,
    regime_void: bool,
}

impl<'g> Tester<'g> {
    pub fn new(g: &'g DirectedGraph, config: TesterConfig) -> Result<Self, TesterError> {
        if g.n() < 2 {
            return Err(TesterError::TooSmall);
        }
        if config.k == 0 {
            return Err(PreconditionError::Invalid("k must be at least 1".into()).into());
        }
        local_ec::check_epsilon(config.epsilon)?;
        let (forward, backward) = match config.model {
            Model::Unbounded { .. } => (Cow::Borrowed(g), g.reversed()),
            Model::Bounded { d } => {
                let indeg = g.in_degrees();
                if let Some(v) = (0..g.n()).find(|&v| g.out_degree(v) > d || indeg[v] > d) {
                    return Err(TesterError::DegreeBound { d, v });
                }
                (Cow::Owned(pad_to_degree(g, d)), pad_to_degree(&g.reversed(), d))
            }
        };
        let m = forward.m();
        let regime_void = local_ec::resolve(config.mode, regime(&config, g.n(), m))?;
        let schedule = schedule(&config, g.n(), m);
        Ok(Tester { real: g, forward, backward, config, schedule, regime_void })
    }

    pub fn config(&self) -> &TesterConfig {
        &self.config
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Upper bound on `queries` of any run, from the schedule alone.
    pub fn budget(&self) -> u64 {
        let k = self.config.k;
        let probe = match self.config.model {
            Model::Unbounded { .. } => 1,
            Model::Bounded { .. } => k as u64,
        };
        let mut total = self.schedule.degree_samples as u64 * probe;
        if self.schedule.degree_only {
            return total;
        }
        let per_scale: Vec<u64> = self.schedule.scales.iter().map(|s| 2 * call_cost(self.config.property, k, s)).collect();
        match self.config.model {
            Model::Unbounded { .. } => total += self.schedule.seeds as u64 * per_scale.iter().sum::<u64>(),
            Model::Bounded { .. } => {
                total += self.schedule.scales.iter().zip(&per_scale).map(|(s, c)| s.samples as u64 * c).sum::<u64>()
            }
        }
        total
    }

    /// Degree-only path for simple graphs with `ε > 4/k`: many vertices then
    /// have degree below `k`. Returns `None` when it does not apply.
    pub fn simple_graph_shortcut<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<TesterVerdict> {
        if !self.schedule.degree_only {
            return None;
        }
        let mut tally = Tally::default();
        let found = self.degree_check(&mut tally, rng);
        Some(tally.finish(found, self.regime_void))
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> TesterVerdict {
        let mut tally = Tally::default();
        if let Some(w) = self.degree_check(&mut tally, rng) {
            return tally.finish(Some(w), self.regime_void);
        }
        if self.schedule.degree_only {
            return tally.finish(None, self.regime_void);
        }
        let n = self.real.n();
        match self.config.model {
            Model::Unbounded { .. } => {
                for _ in 0..self.schedule.seeds {
                    let x = rng.gen_range(0..n);
                    for s in &self.schedule.scales {
                        if let Some(w) = self.probe_both(x, s, &mut tally, rng) {
                            return tally.finish(Some(w), self.regime_void);
                        }
                    }
                }
            }
            Model::Bounded { d } => {
                for s in &self.schedule.scales {
                    for _ in 0..s.samples {
                        let x = sample_edge_regularized(self.real, d, rng).tail;
                        if let Some(w) = self.probe_both(x, s, &mut tally, rng) {
                            return tally.finish(Some(w), self.regime_void);
                        }
                    }
                }
            }
        }
        tally.finish(None, self.regime_void)
    }

    fn degree_check<R: Rng + ?Sized>(&self, tally: &mut Tally, rng: &mut R) -> Option<Witness> {
        let k = self.config.k;
        for _ in 0..self.schedule.degree_samples {
            let x = rng.gen_range(0..self.real.n());
            let deg = self.real.out_degree(x);
            tally.queries += match self.config.model {
                Model::Unbounded { .. } => 1,
                // Slots are read until a padding loop or the k-th real arc.
                Model::Bounded { d } => (deg + 1).min(k).min(d) as u64,
            };
            if deg >= k {
                continue;
            }
            let w = match self.config.property {
                Property::Edge => Witness::OutEdgeCut { set: vec![x], cut_size: 0 },
                Property::Vertex => {
                    let sep = self.real.out_neighborhood(x);
                    let right = (0..self.real.n()).filter(|&v| v != x && sep.binary_search(&v).is_err()).collect();
                    Witness::VertexCut { triple: SeparationTriple { left: vec![x], separator: sep, right } }
                }
            };
            if let Some(w) = self.verify(w) {
                return Some(w);
            }
        }
        None
    }

    fn probe_both<R: Rng + ?Sized>(&self, x: VertexId, s: &Scale, tally: &mut Tally, rng: &mut R) -> Option<Witness> {
        for reversed in [false, true] {
            let g = if reversed { &self.backward } else { &*self.forward };
            let p = LocalCutParams { x, nu: s.nu, k: self.config.k, gamma: s.gamma };
            let out = match self.config.property {
                Property::Edge => local_ec::gap_local_ec(g, p, Mode::Relaxed, rng),
                Property::Vertex => local_vc::gap_local_vc(g, p, Mode::Relaxed, rng),
            }
            .expect("tester parameters are valid");
            tally.local_calls += 1;
            tally.queries += out.stats.queries + out.stats.degree_queries;
            tally.void |= out.guarantee_void;
            let w = match out.detection {
                Detection::Bot => continue,
                Detection::EdgeCut(c) if reversed => Witness::InEdgeCut { set: c.vertices, cut_size: 0 },
                Detection::EdgeCut(c) => Witness::OutEdgeCut { set: c.vertices, cut_size: 0 },
                Detection::VertexCut(r) => {
                    let Some(t) = r.witness else { continue };
                    Witness::VertexCut { triple: if reversed { t.flipped() } else { t } }
                }
            };
            if let Some(w) = self.verify(w) {
                return Some(w);
            }
        }
        None
    }

    /// Recomputes the cut in the real graph; `None` if it is not below `k`.
    fn verify(&self, w: Witness) -> Option<Witness> {
        let g = self.real;
        let k = self.config.k;
        let proper = |set: &[VertexId]| !set.is_empty() && set.len() < g.n();
        match w {
            Witness::OutEdgeCut { set, .. } => {
                let c = cut_size(g, &set);
                (proper(&set) && c < k).then_some(Witness::OutEdgeCut { set, cut_size: c })
            }
            Witness::InEdgeCut { set, .. } => {
                let c = in_cut_size(g, &set);
                (proper(&set) && c < k).then_some(Witness::InEdgeCut { set, cut_size: c })
            }
            Witness::VertexCut { triple } => {
                (triple.is_valid_in(g) && triple.separator.len() < k).then_some(Witness::VertexCut { triple })
            }
        }
    }
}

#[derive(Default)]
struct Tally {
    queries: u64,
    local_calls: u64,
    void: bool,
}

impl Tally {
    fn finish(self, found: Option<Witness>, regime_void: bool) -> TesterVerdict {
        TesterVerdict {
            outcome: found.map_or(Outcome::DeclaredConnected, Outcome::WitnessCut),
            queries: self.queries,
            local_calls: self.local_calls,
            guarantee_void: self.void || regime_void,
        }
    }
}

/// Worst-case queries of one gap call at scale `s`.
fn call_cost(property: Property, k: usize, s: &Scale) -> u64 {
    let kk = k - s.gamma;
    if s.nu < kk {
        return 1;
    }
    // Every read arc is marked at once, and every new vertex record costs one
    // degree lookup and is reached through a marked arc.
    match property {
        Property::Edge => 2 * mark_cap(s.nu, kk, s.gamma) + 1,
        Property::Vertex => 2 * mark_cap(3 * s.nu, kk, s.gamma) + 2,
    }
}

/// Size regime of the testers: `k < εn/520 · (⌊log₂(m/n)⌋+1)` for edges,
/// `k < n/8 · min(1, ε/12480 · ⌊log₂(m/n)+1⌋)` for vertices.
fn regime(c: &TesterConfig, n: usize, m: usize) -> Result<(), PreconditionError> {
    let levels = if m >= n { ((m / n).ilog2() + 1) as f64 } else { 0.0 };
    let (limit, what) = match c.property {
        Property::Edge => (c.epsilon * n as f64 / 520.0 * levels, "εn/520·(⌊log₂(m/n)⌋+1)"),
        Property::Vertex => (n as f64 / 8.0 * (c.epsilon / 12480.0 * levels).min(1.0), "n/8·min(1, ε/12480·⌊log₂(m/n)+1⌋)"),
    };
    if (c.k as f64) < limit {
        Ok(())
    } else {
        Err(PreconditionError::Violated(format!("k={} ≥ {what} = {limit:.3}", c.k)))
    }
}

fn schedule(c: &TesterConfig, n: usize, m: usize) -> Schedule {
    let k = c.k;
    let eps = c.epsilon;
    let lk = log_factor(k);
    let ln_k = (k as f64).ln().max(1.0);
    let gamma_at = |i: usize| ((1usize << i) - 1).min(k / 2);
    // Volume scales grow as 2^(i+2) for edges and 2^(i+3) for vertices.
    let shift = match c.property {
        Property::Edge => 2,
        Property::Vertex => 3,
    };
    let degree_only = c.simple_graph
        && c.property == Property::Edge
        && matches!(c.model, Model::Unbounded { .. })
        && eps * k as f64 > 4.0;
    let degree_samples = if degree_only {
        ceil_pos(2.0 * c.c1 / eps)
    } else {
        match c.property {
            Property::Edge => ceil_pos(c.c1 / eps),
            Property::Vertex => ceil_pos(c.c1),
        }
    };
    let mut sched = Schedule { degree_samples, seeds: 0, scales: Vec::new(), degree_only };
    if degree_only {
        return sched;
    }
    match c.model {
        Model::Unbounded { avg_degree_known } => {
            sched.seeds = if avg_degree_known {
                let avg = m as f64 / n as f64;
                ceil_pos(c.c2 * k as f64 * ln_k / (eps * avg.max(1e-9)))
            } else {
                ceil_pos(c.c2 * ln_k / eps)
            };
            sched.scales = (0..lk)
                .map(|i| Scale { nu: ceil_pos((1usize << (i + shift)) as f64 * lk as f64 / eps), gamma: gamma_at(i), samples: 0 })
                .collect();
        }
        Model::Bounded { .. } => {
            for i in 0..lk {
                let eta = (1usize << (i + shift)) as f64 * lk as f64 / eps;
                let l_eta = (eta.floor() as usize).max(1).ilog2() as usize + 1;
                for j in 0..l_eta {
                    let samples = c.c3 * lk as f64 * l_eta as f64 * (1u64 << i) as f64 / (eps * (1u64 << j) as f64);
                    sched.scales.push(Scale { nu: 1 << (j + 1), gamma: gamma_at(i), samples: ceil_pos(samples) });
                }
            }
        }
    }
    sched
}
