//! Local cut detection in directed graphs and the algorithms built on it.
//!
//! The central routine, [`local_ec::local_ec`], looks for a set `S ∋ x` with
//! few outgoing arcs and small out-volume while reading only a bounded number
//! of arcs around `x`. Everything else in the crate is an application of it:
//!
//! * [`local_vc`]: the same search on the split graph, yielding vertex cuts.
//! * [`global_vc`]: deciding k-vertex connectivity by sampling seeds.
//! * [`testing`]: one-sided property testers in the incidence-list model.
//! * [`kecs`]: maximal k-edge-connected subgraphs.
//!
//! [`oracle`] contains slow exact reference implementations used by the tests.

pub mod generators;
pub mod global_vc;
pub mod graph;
pub mod kecs;
pub mod local_ec;
pub mod local_vc;
pub mod maxflow;
pub mod oracle;
pub mod testing;
pub mod trials;

pub use graph::{Adjacency, DirectedGraph, GraphStats, LocalView, SeparationTriple, VertexId};
pub use local_ec::{CutOutcome, LocalCutParams, Mode, PreconditionError};
