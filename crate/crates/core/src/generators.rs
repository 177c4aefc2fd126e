//! Instance generators.
//!
//! Every generator is deterministic given its arguments (and seed, where one
//! is taken). The planted generators also return the family of sets they
//! planted, which certifies distance from the property.

use crate::graph::{DirectedGraph, VertexId};
use crate::testing::{verify_far_certificate, FarFamily, Property};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

/// Complete digraph on `n` vertices, `n(n−1)` arcs.
pub fn clique(n: usize) -> DirectedGraph {
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    DirectedGraph::from_arcs(n, &arcs)
}

/// Complete undirected graph, `n(n−1)/2` edges.
pub fn clique_undirected(n: usize) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    DirectedGraph::from_undirected_edges(n, &edges)
}

/// Cycle `0 − 1 − … − (n−1) − 0`, directed one way or undirected.
pub fn cycle(n: usize, undirected: bool) -> DirectedGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    if undirected {
        DirectedGraph::from_undirected_edges(n, &edges)
    } else {
        DirectedGraph::from_arcs(n, &edges)
    }
}

/// Undirected circulant: `i` is joined to `i ± o (mod n)` for each offset.
pub fn circulant(n: usize, offsets: &[usize]) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for &o in offsets {
            let j = (i + o) % n;
            // An offset of n/2 would otherwise add each edge twice.
            if 2 * o % n == 0 && i >= j {
                continue;
            }
            edges.push((i, j));
        }
    }
    DirectedGraph::from_undirected_edges(n, &edges)
}

/// Random digraph, each ordered pair an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    DirectedGraph::from_arcs(n, &arcs)
}

/// Random undirected graph `G(n, p)`.
pub fn random_undirected(n: usize, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::from_undirected_edges(n, &edges)
}

/// A dense core with a two-vertex pocket hanging off it.
#[derive(Clone, Debug)]
pub struct Pendant {
    pub graph: DirectedGraph,
    pub a: VertexId,
    pub b: VertexId,
    /// The core vertex `c₀` wired to the pocket.
    pub c0: VertexId,
}

/// Complete digraph on `0..30` plus `a = 30`, `b = 31` with arcs
/// `a→b, b→a, b→c₀, c₀→a` (`c₀ = 0`); 874 arcs. From `a`, the sets `{a}`
/// (volume 1, one leaving arc) and `{a, b}` (volume 3, one leaving arc) are
/// the only ones with at most one leaving arc and volume at most 3.
pub fn pendant() -> Pendant {
    pendant_with_core(30)
}

pub fn pendant_with_core(core: usize) -> Pendant {
    let (a, b, c0) = (core, core + 1, 0);
    let mut arcs = clique(core).arcs().collect::<Vec<_>>();
    arcs.extend([(a, b), (b, a), (b, c0), (c0, a)]);
    Pendant { graph: DirectedGraph::from_arcs(core + 2, &arcs), a, b, c0 }
}

/// Small clique hanging off a large one through a single articulation vertex.
#[derive(Clone, Debug)]
pub struct TwoClique {
    pub graph: DirectedGraph,
    pub x: VertexId,
    pub s: VertexId,
    /// `{x, u₁, u₂, u₃}`.
    pub small: Vec<VertexId>,
    pub large: Vec<VertexId>,
}

/// Undirected: `A = {x, u₁, u₂, u₃}` is a clique, `B` a clique on
/// `large` vertices, and `s` is adjacent to everything in `A ∪ B`. Ids:
/// `x = 0`, `u_i = i`, `s = 4`, `B = 5..`. With `large = 700` there are
/// 490720 arcs and `{s}` is the unique minimum vertex cut.
pub fn two_clique(large: usize) -> TwoClique {
    let small: Vec<VertexId> = (0..4).collect();
    let s = 4;
    let big: Vec<VertexId> = (5..5 + large).collect();
    let mut edges = Vec::new();
    for (i, &u) in small.iter().enumerate() {
        for &v in &small[i + 1..] {
            edges.push((u, v));
        }
        edges.push((u, s));
    }
    for &v in &big {
        edges.push((s, v));
    }
    for (i, &u) in big.iter().enumerate() {
        for &v in &big[i + 1..] {
            edges.push((u, v));
        }
    }
    TwoClique {
        graph: DirectedGraph::from_undirected_edges(5 + large, &edges),
        x: 0,
        s,
        small,
        large: big,
    }
}

/// Output of a planted-far generator.
#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: DirectedGraph,
    pub family: FarFamily,
    /// Result of checking `family` at generation time; always true on success.
    pub certified: bool,
}

/// Complete core on `core` vertices plus `gadgets` disjoint complete 4-vertex
/// digraphs. Each gadget receives one arc from the core and has no arc
/// leaving it, so each contributes `k` to the out-deficiency. For `k = 3`,
/// `gadgets = 40`, `core = 40` there are 2080 arcs.
pub fn planted_far_edge(k: usize, epsilon: f64, gadgets: usize, core: usize) -> Result<Planted, GeneratorError> {
    if core < 2 || gadgets == 0 {
        return Err(GeneratorError::Infeasible("need a core of at least 2 vertices and one gadget".into()));
    }
    let mut arcs: Vec<_> = clique(core).arcs().collect();
    let mut family = Vec::new();
    for gi in 0..gadgets {
        let base = core + 4 * gi;
        let members: Vec<VertexId> = (base..base + 4).collect();
        for &u in &members {
            for &v in &members {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        arcs.push((gi % core, base));
        family.push(members);
    }
    let graph = DirectedGraph::from_arcs(core + 4 * gadgets, &arcs);
    certify(graph, FarFamily::Sets(family), k, epsilon, Property::Edge, None)
}

/// Complete core plus `gadgets` isolated complete digraphs on 5 vertices.
/// Each gadget is the left side of a separation triple with empty separator.
pub fn planted_far_vertex(k: usize, epsilon: f64, gadgets: usize, core: usize) -> Result<Planted, GeneratorError> {
    if core < 2 || gadgets == 0 {
        return Err(GeneratorError::Infeasible("need a core of at least 2 vertices and one gadget".into()));
    }
    let n = core + 5 * gadgets;
    let mut arcs: Vec<_> = clique(core).arcs().collect();
    let mut triples = Vec::new();
    for gi in 0..gadgets {
        let base = core + 5 * gi;
        for u in base..base + 5 {
            for v in base..base + 5 {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        let left: Vec<VertexId> = (base..base + 5).collect();
        let right: Vec<VertexId> = (0..n).filter(|v| !(base..base + 5).contains(v)).collect();
        triples.push(crate::graph::SeparationTriple { left, separator: vec![], right });
    }
    let graph = DirectedGraph::from_arcs(n, &arcs);
    certify(graph, FarFamily::Triples(triples), k, epsilon, Property::Vertex, None)
}

/// Bounded-degree variant of [`planted_far_edge`]: core is an undirected
/// circulant of degree `d` and gadgets are complete on 4 vertices with no
/// arc from the core. Farness is measured against `εnd`.
pub fn planted_far_edge_bounded(k: usize, epsilon: f64, gadgets: usize, core: usize, d: usize) -> Result<Planted, GeneratorError> {
    bounded_planted(k, epsilon, gadgets, core, d, Property::Edge)
}

/// Bounded-degree variant of [`planted_far_vertex`].
pub fn planted_far_vertex_bounded(k: usize, epsilon: f64, gadgets: usize, core: usize, d: usize) -> Result<Planted, GeneratorError> {
    bounded_planted(k, epsilon, gadgets, core, d, Property::Vertex)
}

fn bounded_planted(k: usize, epsilon: f64, gadgets: usize, core: usize, d: usize, property: Property) -> Result<Planted, GeneratorError> {
    let size = match property {
        Property::Edge => 4,
        Property::Vertex => 5,
    };
    if d < size - 1 || !d.is_multiple_of(2) || core <= d {
        return Err(GeneratorError::Infeasible(format!(
            "degree cap d={d} must be even, at least {} and below the core size",
            size - 1
        )));
    }
    let offsets: Vec<usize> = (1..=d / 2).collect();
    let mut arcs: Vec<_> = circulant(core, &offsets).arcs().collect();
    let n = core + size * gadgets;
    let mut sets = Vec::new();
    for gi in 0..gadgets {
        let base = core + size * gi;
        for u in base..base + size {
            for v in base..base + size {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        sets.push((base..base + size).collect::<Vec<_>>());
    }
    let graph = DirectedGraph::from_arcs(n, &arcs);
    let family = match property {
        Property::Edge => FarFamily::Sets(sets),
        Property::Vertex => FarFamily::Triples(
            sets.into_iter()
                .map(|left| {
                    let right = (0..n).filter(|v| !left.contains(v)).collect();
                    crate::graph::SeparationTriple { left, separator: vec![], right }
                })
                .collect(),
        ),
    };
    certify(graph, family, k, epsilon, property, Some(n * d))
}

fn certify(
    graph: DirectedGraph,
    family: FarFamily,
    k: usize,
    epsilon: f64,
    property: Property,
    reference: Option<usize>,
) -> Result<Planted, GeneratorError> {
    let certified = verify_far_certificate(&graph, &family, k, epsilon, property, reference)
        .map_err(|e| GeneratorError::Infeasible(e.to_string()))?;
    if !certified {
        return Err(GeneratorError::Infeasible(format!(
            "planted deficiency does not exceed ε·{} for ε={epsilon}",
            reference.unwrap_or(graph.m())
        )));
    }
    Ok(Planted { graph, family, certified })
}

/// Seven vertices, twelve edges: a `K₄` on `0..4`, and `4, 5, 6` each joined
/// to two consecutive clique vertices. The graph is 2-edge-connected but only
/// the `K₄` is 3-edge-connected.
pub fn fig5() -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            edges.push((u, v));
        }
    }
    edges.extend([(4, 0), (4, 1), (5, 1), (5, 2), (6, 2), (6, 3)]);
    DirectedGraph::from_undirected_edges(7, &edges)
}

/// Thirteen-vertex digraph for split-graph reconstruction checks. Vertex
/// names in id order: x, p, q, r, u, v, w, y, z, a, b, c, t. The set
/// `{x, p, q, r}` has out-neighbourhood `{u, v, w, y, z}`; `a, b, c` point
/// back into it and `t` closes everything into one strong component.
pub fn reconstruction_example() -> DirectedGraph {
    let (x, p, q, r, u, v, w, y, z, a, b, c, t) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12);
    let arcs = [
        (x, p), (p, q), (q, r), (r, x),
        (x, w), (q, y), (r, z), (p, u), (p, v),
        (a, x), (b, y), (c, z),
        (u, t), (v, t), (w, t), (y, t), (z, t),
        (t, a), (t, b), (t, c),
    ];
    DirectedGraph::from_arcs(13, &arcs)
}

/// Serializable description of a generator call.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Clique { n: usize, undirected: bool },
    Cycle { n: usize, undirected: bool },
    Pendant,
    TwoClique { large: usize },
    /// `d` selects the bounded-degree variant.
    PlantedFarEdge {
        k: usize,
        epsilon: f64,
        gadgets: usize,
        core: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
    },
    PlantedFarVertex {
        k: usize,
        epsilon: f64,
        gadgets: usize,
        core: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
    },
    Fig5,
    Random { n: usize, p: f64, undirected: bool, seed: u64 },
    Circulant { n: usize, offsets: Vec<usize> },
}

impl GeneratorSpec {
    /// The graph and, for planted kinds, the certificate.
    pub fn build(&self) -> Result<(DirectedGraph, Option<Planted>), GeneratorError> {
        Ok(match self {
            GeneratorSpec::Clique { n, undirected: false } => (clique(*n), None),
            GeneratorSpec::Clique { n, undirected: true } => (clique_undirected(*n), None),
            GeneratorSpec::Cycle { n, undirected } => (cycle(*n, *undirected), None),
            GeneratorSpec::Pendant => (pendant().graph, None),
            GeneratorSpec::TwoClique { large } => (two_clique(*large).graph, None),
            GeneratorSpec::PlantedFarEdge { k, epsilon, gadgets, core, d } => {
                let p = match d {
                    Some(d) => planted_far_edge_bounded(*k, *epsilon, *gadgets, *core, *d)?,
                    None => planted_far_edge(*k, *epsilon, *gadgets, *core)?,
                };
                (p.graph.clone(), Some(p))
            }
            GeneratorSpec::PlantedFarVertex { k, epsilon, gadgets, core, d } => {
                let p = match d {
                    Some(d) => planted_far_vertex_bounded(*k, *epsilon, *gadgets, *core, *d)?,
                    None => planted_far_vertex(*k, *epsilon, *gadgets, *core)?,
                };
                (p.graph.clone(), Some(p))
            }
            GeneratorSpec::Fig5 => (fig5(), None),
            GeneratorSpec::Random { n, p, undirected: false, seed } => (random_digraph(*n, *p, *seed), None),
            GeneratorSpec::Random { n, p, undirected: true, seed } => (random_undirected(*n, *p, *seed), None),
            GeneratorSpec::Circulant { n, offsets } => (circulant(*n, offsets), None),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(clique(8).m(), 56);
        assert_eq!(pendant().graph.m(), 874);
        assert_eq!(fig5().undirected_edges().len(), 12);
        assert_eq!(planted_far_edge(3, 0.05, 40, 40).unwrap().graph.m(), 2080);
        assert_eq!(circulant(10, &[1, 2]).stats().max_degree, 4);
        assert_eq!(circulant(6, &[3]).undirected_edges().len(), 3);
    }

    #[test]
    fn two_clique_arc_count() {
        assert_eq!(two_clique(700).graph.m(), 490_720);
    }

    #[test]
    fn planted_generators_certify() {
        assert!(planted_far_edge(3, 0.05, 40, 40).unwrap().certified);
        assert!(planted_far_vertex(3, 0.05, 30, 30).unwrap().certified);
        assert!(planted_far_edge(3, 0.9, 1, 40).is_err());
    }
}
