//! The split graph with respect to a root `x`.
//!
//! Every `v ≠ x` becomes `v_in → v_out`; `x` stays a single vertex; an arc
//! `(u, v)` becomes `(u_out, v_in)`. Ids are arithmetic: before collapsing,
//! `v_in = 2v` and `v_out = 2v + 1`; the slot `2x + 1` is dropped, so every raw
//! id above it shifts down by one. Nothing is materialised up front.

use super::{Adjacency, DirectedGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitSide {
    In,
    Out,
    /// The collapsed root.
    Root,
}

/// Lazy split graph over a base adjacency.
#[derive(Clone, Copy, Debug)]
pub struct SplitView<'g, A: Adjacency + ?Sized> {
    base: &'g A,
    x: VertexId,
}

impl<'g, A: Adjacency + ?Sized> SplitView<'g, A> {
    pub fn new(base: &'g A, x: VertexId) -> Self {
        assert!(x < base.vertex_count());
        SplitView { base, x }
    }

    pub fn root(&self) -> VertexId {
        self.x
    }

    pub fn base(&self) -> &'g A {
        self.base
    }

    fn compact(&self, raw: usize) -> VertexId {
        if raw <= 2 * self.x {
            raw
        } else {
            raw - 1
        }
    }

    fn raw(&self, c: VertexId) -> usize {
        if c <= 2 * self.x {
            c
        } else {
            c + 1
        }
    }

    pub fn in_copy(&self, v: VertexId) -> VertexId {
        self.compact(2 * v)
    }

    pub fn out_copy(&self, v: VertexId) -> VertexId {
        if v == self.x {
            self.compact(2 * v)
        } else {
            self.compact(2 * v + 1)
        }
    }

    /// Original vertex and side of a split-graph vertex.
    pub fn origin(&self, c: VertexId) -> (VertexId, SplitSide) {
        let r = self.raw(c);
        let v = r / 2;
        if v == self.x {
            (v, SplitSide::Root)
        } else if r.is_multiple_of(2) {
            (v, SplitSide::In)
        } else {
            (v, SplitSide::Out)
        }
    }
}

impl<A: Adjacency + ?Sized> Adjacency for SplitView<'_, A> {
    fn vertex_count(&self) -> usize {
        2 * self.base.vertex_count() - 1
    }

    fn arc_count(&self) -> usize {
        self.base.arc_count() + self.base.vertex_count() - 1
    }

    fn out_degree(&self, c: VertexId) -> usize {
        match self.origin(c) {
            (_, SplitSide::In) => 1,
            (v, _) => self.base.out_degree(v),
        }
    }

    fn head(&self, c: VertexId, slot: usize) -> VertexId {
        match self.origin(c) {
            (v, SplitSide::In) => {
                debug_assert_eq!(slot, 0);
                self.out_copy(v)
            }
            (v, _) => self.in_copy(self.base.head(v, slot)),
        }
    }
}

/// Materialised split graph, for tests and small inputs.
pub fn split_graph(g: &DirectedGraph, x: VertexId) -> DirectedGraph {
    let view = SplitView::new(g, x);
    let n = view.vertex_count();
    let arcs: Vec<_> = (0..n)
        .flat_map(|c| (0..view.out_degree(c)).map(move |s| (c, s)))
        .map(|(c, s)| (c, view.head(c, s)))
        .collect();
    DirectedGraph::from_arcs(n, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_rooted_at_zero() {
        let g = DirectedGraph::from_arcs(2, &[(0, 1), (1, 0)]);
        let s = split_graph(&g, 0);
        let view = SplitView::new(&g, 0);
        assert_eq!(s.n(), 3);
        let (i1, o1) = (view.in_copy(1), view.out_copy(1));
        let mut arcs: Vec<_> = s.arcs().collect();
        arcs.sort();
        let mut want = vec![(0, i1), (i1, o1), (o1, 0)];
        want.sort();
        assert_eq!(arcs, want);
    }

    #[test]
    fn counts_and_ids_round_trip() {
        let g = DirectedGraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 2)]);
        for x in 0..4 {
            let s = split_graph(&g, x);
            assert_eq!(s.n(), 2 * 4 - 1);
            assert_eq!(s.m(), g.m() + 4 - 1);
            let view = SplitView::new(&g, x);
            for v in 0..4 {
                assert_eq!(view.origin(view.in_copy(v)).0, v);
                assert_eq!(view.origin(view.out_copy(v)).0, v);
            }
            assert_eq!(view.in_copy(x), view.out_copy(x));
        }
    }
}
