use crate::graph::{cut_size, in_cut_size, membership, DirectedGraph, SeparationTriple, VertexId};
use serde::Serialize;
use thiserror::Error;

/// Which connectivity notion a tester or certificate is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Edge,
    Vertex,
}

/// A family witnessing that a graph is far from `k`-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "items", rename_all = "snake_case")]
pub enum FarFamily {
    /// Pairwise disjoint vertex sets.
    Sets(Vec<Vec<VertexId>>),
    /// Pairwise independent separation triples.
    Triples(Vec<SeparationTriple>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("vertex {0} appears in two sets of the family")]
    Overlap(VertexId),
    #[error("triples {0} and {1} are not independent")]
    Dependent(usize, usize),
    #[error("member {0} is not a proper nonempty subset or not a valid triple")]
    BadMember(usize),
    #[error("family kind does not match the property")]
    Mismatch,
}

/// Deficiency check against `ε · reference` (`reference` defaults to `m`).
///
/// Edge: true iff `Σ max(k − d^out(X), 0)` or `Σ max(k − d^in(X), 0)` exceeds
/// it. Vertex: true iff `Σ max(k − |S|, 0)` does.
pub fn verify_far_certificate(
    g: &DirectedGraph,
    family: &FarFamily,
    k: usize,
    epsilon: f64,
    property: Property,
    reference: Option<usize>,
) -> Result<bool, CertificateError> {
    let threshold = epsilon * reference.unwrap_or(g.m()) as f64;
    match (family, property) {
        (FarFamily::Sets(sets), Property::Edge) => {
            let mut owner = vec![false; g.n()];
            let (mut out_def, mut in_def) = (0usize, 0usize);
            for (i, set) in sets.iter().enumerate() {
                if set.is_empty() || set.len() >= g.n() || set.iter().any(|&v| v >= g.n()) {
                    return Err(CertificateError::BadMember(i));
                }
                for &v in set {
                    if owner[v] {
                        return Err(CertificateError::Overlap(v));
                    }
                    owner[v] = true;
                }
                out_def += k.saturating_sub(cut_size(g, set));
                in_def += k.saturating_sub(in_cut_size(g, set));
            }
            Ok(out_def as f64 > threshold || in_def as f64 > threshold)
        }
        (FarFamily::Triples(triples), Property::Vertex) => {
            for (i, t) in triples.iter().enumerate() {
                if !t.is_valid_in(g) {
                    return Err(CertificateError::BadMember(i));
                }
            }
            let lefts: Vec<Vec<bool>> = triples.iter().map(|t| membership(g.n(), &t.left)).collect();
            let rights: Vec<Vec<bool>> = triples.iter().map(|t| membership(g.n(), &t.right)).collect();
            for i in 0..triples.len() {
                for (j, tj) in triples.iter().enumerate().skip(i + 1) {
                    let left_meet = tj.left.iter().any(|&v| lefts[i][v]);
                    let right_meet = tj.right.iter().any(|&v| rights[i][v]);
                    if left_meet && right_meet {
                        return Err(CertificateError::Dependent(i, j));
                    }
                }
            }
            let total: usize = triples.iter().map(|t| k.saturating_sub(t.separator.len())).sum();
            Ok(total as f64 > threshold)
        }
        _ => Err(CertificateError::Mismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn small_deficiency_against_large_graph() {
        // One sink gadget hanging off K₃₀.
        let mut arcs: Vec<_> = generators::clique(30).arcs().collect();
        arcs.extend([(0, 30), (30, 31), (31, 30)]);
        let g = DirectedGraph::from_arcs(32, &arcs);
        let fam = FarFamily::Sets(vec![vec![30, 31]]);
        assert_eq!(verify_far_certificate(&g, &fam, 3, 0.5, Property::Edge, None), Ok(false));
        assert_eq!(verify_far_certificate(&g, &fam, 3, 0.001, Property::Edge, None), Ok(true));
    }

    #[test]
    fn connected_graph_has_no_deficiency() {
        let g = generators::clique(8);
        let fam = FarFamily::Sets((0..4).map(|v| vec![v]).collect());
        assert_eq!(verify_far_certificate(&g, &fam, 3, 0.0, Property::Edge, None), Ok(false));
    }

    #[test]
    fn overlap_and_mismatch() {
        let g = generators::clique(5);
        let fam = FarFamily::Sets(vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(verify_far_certificate(&g, &fam, 3, 0.1, Property::Edge, None), Err(CertificateError::Overlap(1)));
        assert_eq!(verify_far_certificate(&g, &fam, 3, 0.1, Property::Vertex, None), Err(CertificateError::Mismatch));
    }

    #[test]
    fn dependent_triples_rejected() {
        let g = DirectedGraph::from_arcs(4, &[]);
        let t = SeparationTriple { left: vec![0], separator: vec![], right: vec![1, 2, 3] };
        let u = SeparationTriple { left: vec![0, 1], separator: vec![], right: vec![2, 3] };
        let fam = FarFamily::Triples(vec![t, u]);
        assert_eq!(verify_far_certificate(&g, &fam, 1, 0.1, Property::Vertex, None), Err(CertificateError::Dependent(0, 1)));
    }
}
