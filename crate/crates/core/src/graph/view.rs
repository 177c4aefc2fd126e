//! Per-run overlay over a shared graph.
//!
//! A [`LocalView`] records which arcs have been read, which of them are
//! marked, and which have been reversed. The base graph is only ever read.
//! Every vertex that has been touched owns a doubly linked list of the arcs
//! currently leaving it in the overlay; arcs not yet read are implicitly the
//! tail of that list, starting at `next_slot` in the base out-list.

use super::{Adjacency, VertexId};
use rustc_hash::FxHashMap;
use thiserror::Error;

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViewError {
    #[error("no arc {from}→{to} in the current orientation")]
    MissingArc { from: VertexId, to: VertexId },
}

/// Answer to an incidence query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryAnswer {
    Head(VertexId),
    EndOfList,
}

#[derive(Clone, Debug)]
struct VertexState {
    id: VertexId,
    degree: usize,
    next_slot: usize,
    first: u32,
    last: u32,
    len: u32,
    /// Pass in which the vertex was last reached.
    epoch: u32,
    /// Last arc explored out of this vertex in the current pass.
    cursor: u32,
    /// Tree arc into this vertex in the current pass.
    parent: u32,
    end_probed: bool,
}

#[derive(Clone, Debug)]
struct ArcRecord {
    tail: VertexId,
    head: VertexId,
    prev: u32,
    next: u32,
    marked: bool,
    reversed: bool,
}

/// Mutable overlay over an immutable [`Adjacency`].
pub struct LocalView<'g, A: Adjacency + ?Sized> {
    base: &'g A,
    index: FxHashMap<VertexId, u32>,
    verts: Vec<VertexState>,
    arcs: Vec<ArcRecord>,
    queries: u64,
    degree_queries: u64,
    marked: u64,
    reversed_paths: u64,
    epoch: u32,
}

impl<'g, A: Adjacency + ?Sized> LocalView<'g, A> {
    pub fn new(base: &'g A) -> Self {
        LocalView {
            base,
            index: FxHashMap::default(),
            verts: Vec::new(),
            arcs: Vec::new(),
            queries: 0,
            degree_queries: 0,
            marked: 0,
            reversed_paths: 0,
            epoch: 0,
        }
    }

    pub fn base(&self) -> &'g A {
        self.base
    }

    /// Distinct incidence queries answered so far.
    pub fn query_count(&self) -> u64 {
        self.queries
    }

    /// Distinct degree lookups answered so far.
    pub fn degree_query_count(&self) -> u64 {
        self.degree_queries
    }

    pub fn marked_count(&self) -> u64 {
        self.marked
    }

    pub fn reversed_path_count(&self) -> u64 {
        self.reversed_paths
    }

    /// Number of vertices the view has touched.
    pub fn touched_vertices(&self) -> usize {
        self.verts.len()
    }

    /// `q(v, slot)` against the current orientation. Slots index the
    /// effective out-list: arcs already read (in list order) followed by the
    /// unread base slots. Unread slots are read in order, each counted once.
    pub fn query_arc(&mut self, v: VertexId, slot: usize) -> QueryAnswer {
        let vi = self.vertex(v);
        let mut a = self.verts[vi as usize].first;
        let mut i = 0;
        while a != NIL {
            if i == slot {
                return QueryAnswer::Head(self.arcs[a as usize].head);
            }
            i += 1;
            a = self.arcs[a as usize].next;
        }
        loop {
            match self.read_next_slot(vi) {
                Some(a) => {
                    if i == slot {
                        return QueryAnswer::Head(self.arcs[a as usize].head);
                    }
                    i += 1;
                }
                None => {
                    let st = &mut self.verts[vi as usize];
                    if !st.end_probed {
                        st.end_probed = true;
                        self.queries += 1;
                    }
                    return QueryAnswer::EndOfList;
                }
            }
        }
    }

    /// Reverses every arc along the walk `path[0] → path[1] → …`.
    ///
    /// For each step the arc last explored out of the tail is preferred,
    /// otherwise the first matching arc in the effective out-list is used.
    pub fn reverse_path(&mut self, path: &[VertexId]) -> Result<(), ViewError> {
        let mut ids = Vec::with_capacity(path.len().saturating_sub(1));
        for w in path.windows(2) {
            let (from, to) = (w[0], w[1]);
            let vi = self.vertex(from);
            let cur = self.verts[vi as usize].cursor;
            let pick = if cur != NIL
                && self.verts[vi as usize].epoch == self.epoch
                && self.arcs[cur as usize].tail == from
                && self.arcs[cur as usize].head == to
            {
                Some(cur)
            } else {
                self.find_arc(vi, to)
            };
            match pick {
                Some(a) => ids.push(a),
                None => return Err(ViewError::MissingArc { from, to }),
            }
        }
        for a in ids {
            self.reverse_arc(a);
        }
        self.reversed_paths += 1;
        Ok(())
    }

    /// Multiset of arcs in the current orientation over vertices `0..n`,
    /// sorted. Reads the base graph directly and is meant for tests.
    pub fn effective_arcs(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.base.vertex_count();
        let mut out = Vec::new();
        for v in 0..n {
            match self.index.get(&v) {
                None => {
                    for s in 0..self.base.out_degree(v) {
                        out.push((v, self.base.head(v, s)));
                    }
                }
                Some(&vi) => {
                    let st = &self.verts[vi as usize];
                    let mut a = st.first;
                    while a != NIL {
                        let r = &self.arcs[a as usize];
                        out.push((r.tail, r.head));
                        a = r.next;
                    }
                    for s in st.next_slot..st.degree {
                        out.push((v, self.base.head(v, s)));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    // ---- primitives used by the local search ----

    /// Internal handle of `v`, creating its record with one degree lookup.
    pub(crate) fn vertex(&mut self, v: VertexId) -> u32 {
        if let Some(&vi) = self.index.get(&v) {
            return vi;
        }
        let vi = self.verts.len() as u32;
        self.degree_queries += 1;
        self.verts.push(VertexState {
            id: v,
            degree: self.base.out_degree(v),
            next_slot: 0,
            first: NIL,
            last: NIL,
            len: 0,
            epoch: 0,
            cursor: NIL,
            parent: NIL,
            end_probed: false,
        });
        self.index.insert(v, vi);
        vi
    }

    pub(crate) fn vertex_id(&self, vi: u32) -> VertexId {
        self.verts[vi as usize].id
    }

    /// Starts a new search pass; all vertices become unvisited.
    pub(crate) fn begin_pass(&mut self) {
        self.epoch += 1;
    }

    /// Marks `vi` visited in the current pass. Returns false if it already was.
    pub(crate) fn visit(&mut self, vi: u32) -> bool {
        let st = &mut self.verts[vi as usize];
        if st.epoch == self.epoch {
            return false;
        }
        st.epoch = self.epoch;
        st.cursor = NIL;
        st.parent = NIL;
        true
    }

    pub(crate) fn set_parent(&mut self, vi: u32, a: u32) {
        self.verts[vi as usize].parent = a;
    }

    pub(crate) fn parent(&self, vi: u32) -> u32 {
        self.verts[vi as usize].parent
    }

    pub(crate) fn handle(&self, v: VertexId) -> Option<u32> {
        self.index.get(&v).copied()
    }

    pub(crate) fn is_visited(&self, v: VertexId) -> bool {
        match self.index.get(&v) {
            Some(&vi) => self.verts[vi as usize].epoch == self.epoch,
            None => false,
        }
    }

    /// Advances the exploration cursor of `vi` and returns the arc now under
    /// it, reading a new base slot when the known list is used up.
    pub(crate) fn advance(&mut self, vi: u32) -> Option<u32> {
        let st = &self.verts[vi as usize];
        let next = if st.cursor == NIL { st.first } else { self.arcs[st.cursor as usize].next };
        let a = if next != NIL { next } else { self.read_next_slot(vi)? };
        self.verts[vi as usize].cursor = a;
        Some(a)
    }

    pub(crate) fn cursor(&self, vi: u32) -> u32 {
        self.verts[vi as usize].cursor
    }

    pub(crate) fn arc_head(&self, a: u32) -> VertexId {
        self.arcs[a as usize].head
    }

    pub(crate) fn arc_tail(&self, a: u32) -> VertexId {
        self.arcs[a as usize].tail
    }

    /// Marks arc `a`; returns true if it was not marked before.
    pub(crate) fn mark(&mut self, a: u32) -> bool {
        let r = &mut self.arcs[a as usize];
        if r.marked {
            return false;
        }
        r.marked = true;
        self.marked += 1;
        true
    }

    /// Flips arc `a`: it leaves its tail's list and is appended to its head's.
    pub(crate) fn reverse_arc(&mut self, a: u32) {
        let (tail, head) = {
            let r = &self.arcs[a as usize];
            (r.tail, r.head)
        };
        let ti = self.index[&tail];
        let hi = self.vertex(head);
        self.unlink(ti, a);
        {
            let r = &mut self.arcs[a as usize];
            r.tail = head;
            r.head = tail;
            r.reversed = !r.reversed;
        }
        self.append(hi, a);
    }

    pub(crate) fn note_path_reversal(&mut self) {
        self.reversed_paths += 1;
    }

    fn find_arc(&mut self, vi: u32, to: VertexId) -> Option<u32> {
        let mut a = self.verts[vi as usize].first;
        while a != NIL {
            if self.arcs[a as usize].head == to {
                return Some(a);
            }
            a = self.arcs[a as usize].next;
        }
        while let Some(a) = self.read_next_slot(vi) {
            if self.arcs[a as usize].head == to {
                return Some(a);
            }
        }
        None
    }

    /// Reads the next unread base slot of `vi` (one counted query) and
    /// appends it to the vertex's list.
    fn read_next_slot(&mut self, vi: u32) -> Option<u32> {
        let st = &mut self.verts[vi as usize];
        if st.next_slot >= st.degree {
            return None;
        }
        let v = st.id;
        let slot = st.next_slot;
        st.next_slot += 1;
        self.queries += 1;
        let head = self.base.head(v, slot);
        let a = self.arcs.len() as u32;
        self.arcs.push(ArcRecord {
            tail: v,
            head,
            prev: NIL,
            next: NIL,
            marked: false,
            reversed: false,
        });
        self.append(vi, a);
        Some(a)
    }

    fn append(&mut self, vi: u32, a: u32) {
        let last = self.verts[vi as usize].last;
        {
            let r = &mut self.arcs[a as usize];
            r.prev = last;
            r.next = NIL;
        }
        if last == NIL {
            self.verts[vi as usize].first = a;
        } else {
            self.arcs[last as usize].next = a;
        }
        let st = &mut self.verts[vi as usize];
        st.last = a;
        st.len += 1;
    }

    fn unlink(&mut self, vi: u32, a: u32) {
        let (prev, next) = {
            let r = &self.arcs[a as usize];
            (r.prev, r.next)
        };
        if prev == NIL {
            self.verts[vi as usize].first = next;
        } else {
            self.arcs[prev as usize].next = next;
        }
        if next == NIL {
            self.verts[vi as usize].last = prev;
        } else {
            self.arcs[next as usize].prev = prev;
        }
        let st = &mut self.verts[vi as usize];
        st.len -= 1;
        if st.cursor == a {
            st.cursor = prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;

    fn k3() -> DirectedGraph {
        DirectedGraph::from_arcs(3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    }

    #[test]
    fn first_query_counts_once() {
        let g = k3();
        let mut view = LocalView::new(&g);
        assert_eq!(view.query_arc(0, 0), QueryAnswer::Head(1));
        assert_eq!(view.query_count(), 1);
        assert_eq!(view.query_arc(0, 0), QueryAnswer::Head(1));
        assert_eq!(view.query_count(), 1);
    }

    #[test]
    fn past_the_end_is_end_of_list() {
        let g = k3();
        let mut view = LocalView::new(&g);
        assert_eq!(view.query_arc(0, 10), QueryAnswer::EndOfList);
        assert_eq!(view.query_count(), 3);
        assert_eq!(view.query_arc(0, 10), QueryAnswer::EndOfList);
        assert_eq!(view.query_count(), 3);
    }

    #[test]
    fn single_reversal_and_involution() {
        let g = DirectedGraph::from_arcs(2, &[(0, 1)]);
        let mut view = LocalView::new(&g);
        view.reverse_path(&[0, 1]).unwrap();
        assert_eq!(view.effective_arcs(), vec![(1, 0)]);
        view.reverse_path(&[1, 0]).unwrap();
        assert_eq!(view.effective_arcs(), vec![(0, 1)]);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn reversing_two_steps_of_a_triangle() {
        let g = DirectedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut view = LocalView::new(&g);
        view.reverse_path(&[0, 1, 2]).unwrap();
        assert_eq!(view.effective_arcs(), vec![(1, 0), (2, 0), (2, 1)]);
    }

    #[test]
    fn inconsistent_path_is_rejected() {
        let g = DirectedGraph::from_arcs(3, &[(0, 1), (1, 2)]);
        let mut view = LocalView::new(&g);
        assert_eq!(
            view.reverse_path(&[0, 2]),
            Err(ViewError::MissingArc { from: 0, to: 2 })
        );
        view.reverse_path(&[0, 1]).unwrap();
        assert!(view.reverse_path(&[0, 1]).is_err());
    }

    #[test]
    fn reversed_arc_is_listed_after_known_arcs() {
        let g = DirectedGraph::from_arcs(2, &[(0, 1), (1, 0), (1, 1)]);
        let mut view = LocalView::new(&g);
        view.reverse_path(&[0, 1]).unwrap();
        assert_eq!(view.query_arc(1, 0), QueryAnswer::Head(0));
        assert_eq!(view.query_arc(1, 1), QueryAnswer::Head(0));
        assert_eq!(view.query_arc(1, 2), QueryAnswer::Head(1));
        assert_eq!(view.query_arc(0, 0), QueryAnswer::EndOfList);
    }
}
