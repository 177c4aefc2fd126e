//! Capped unit-capacity max-flow (shortest augmenting paths).
//!
//! Both routines stop after `cap` augmentations. Below the cap, the residual
//! reachability from `s` gives a minimum cut.

use crate::graph::{DirectedGraph, VertexId};
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "items", rename_all = "snake_case")]
pub enum StCut {
    /// Arcs `(u, v)` of the original graph, in arc order.
    Edges(Vec<(VertexId, VertexId)>),
    /// Sorted vertices.
    Vertices(Vec<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StCutResult {
    pub value: usize,
    /// Empty when saturated.
    pub cut: StCut,
    /// Flow reached `cap`; no cut is certified.
    pub saturated: bool,
    /// Original vertices on the `s` side of the cut (empty when saturated).
    pub source_side: Vec<VertexId>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("s and t must differ")]
    SameEndpoints,
    #[error("cap must be at least 1")]
    ZeroCap,
    #[error("adjacent pair: vertex cut undefined")]
    Adjacent,
}

struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: u32) -> usize {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(e);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(e + 1);
        e
    }

    /// Pushes up to `limit` units from `s` to `t`, one BFS path at a time.
    fn run(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let n = self.adj.len();
        let mut via = vec![usize::MAX; n];
        let mut flow = 0;
        let mut queue = VecDeque::new();
        while flow < limit {
            via.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            queue.push_back(s);
            let mut found = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let w = self.to[e];
                    if self.cap[e] > 0 && w != s && via[w] == usize::MAX {
                        via[w] = e;
                        if w == t {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                break;
            }
            let mut w = t;
            while w != s {
                let e = via[w];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                w = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Minimum `s`–`t` arc cut if its size is below `cap`.
pub fn st_edge_cut_capped(g: &DirectedGraph, s: VertexId, t: VertexId, cap: usize) -> Result<StCutResult, FlowError> {
    if s == t {
        return Err(FlowError::SameEndpoints);
    }
    if cap == 0 {
        return Err(FlowError::ZeroCap);
    }
    let mut net = Network::new(g.n());
    for (u, v) in g.arcs() {
        if u != v {
            net.add(u, v, 1);
        }
    }
    let value = net.run(s, t, cap);
    if value >= cap {
        return Ok(StCutResult { value, cut: StCut::Edges(vec![]), saturated: true, source_side: vec![] });
    }
    let side = net.residual_reach(s);
    let cut = g.arcs().filter(|&(u, v)| side[u] && !side[v]).collect();
    let source_side = (0..g.n()).filter(|&v| side[v]).collect();
    Ok(StCutResult { value, cut: StCut::Edges(cut), saturated: false, source_side })
}

/// Minimum `s`–`t` vertex cut (internal vertices only) if its size is below
/// `cap`. Fails with [`FlowError::Adjacent`] when `s → t` is an arc.
pub fn st_vertex_cut_capped(g: &DirectedGraph, s: VertexId, t: VertexId, cap: usize) -> Result<StCutResult, FlowError> {
    if s == t {
        return Err(FlowError::SameEndpoints);
    }
    if cap == 0 {
        return Err(FlowError::ZeroCap);
    }
    if g.has_arc(s, t) {
        return Err(FlowError::Adjacent);
    }
    // v_in = 2v, v_out = 2v + 1. Original arcs never bind below the cap.
    let n = g.n();
    let big = cap as u32 + 1;
    let mut net = Network::new(2 * n);
    for v in 0..n {
        if v != s && v != t {
            net.add(2 * v, 2 * v + 1, 1);
        } else {
            net.add(2 * v, 2 * v + 1, big);
        }
    }
    for (u, v) in g.arcs() {
        if u != v {
            net.add(2 * u + 1, 2 * v, big);
        }
    }
    let value = net.run(2 * s + 1, 2 * t, cap);
    if value >= cap {
        return Ok(StCutResult { value, cut: StCut::Vertices(vec![]), saturated: true, source_side: vec![] });
    }
    let side = net.residual_reach(2 * s + 1);
    let cut: Vec<_> = (0..n).filter(|&v| side[2 * v] && !side[2 * v + 1]).collect();
    let source_side = (0..n).filter(|&v| side[2 * v + 1]).collect();
    Ok(StCutResult { value, cut: StCut::Vertices(cut), saturated: false, source_side })
}
