use super::{DirectedGraph, GraphError, VertexId};
use std::collections::VecDeque;

/// Union of `k` successive scan-first (BFS) spanning forests.
///
/// Forest `F_i` spans what is left after removing `F_1 ∪ … ∪ F_{i-1}`. The
/// result has at most `k(n−1)` edges and keeps every edge cut and every
/// vertex cut of size below `k`. Edges keep their input order.
pub fn sparse_certificate(g: &DirectedGraph, k: usize) -> Result<DirectedGraph, GraphError> {
    if !g.is_undirected() {
        return Err(GraphError::NotUndirected);
    }
    let n = g.n();
    let edges = g.undirected_edges();
    let mut incident: Vec<Vec<(usize, VertexId)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        if u != v {
            incident[u].push((id, v));
            incident[v].push((id, u));
        }
    }
    let mut taken = vec![false; edges.len()];
    let mut seen = vec![0usize; n];
    let mut queue = VecDeque::new();
    for round in 1..=k {
        let mut grew = false;
        for root in 0..n {
            if seen[root] == round {
                continue;
            }
            seen[root] = round;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &(id, w) in &incident[u] {
                    if !taken[id] && seen[w] != round {
                        seen[w] = round;
                        taken[id] = true;
                        grew = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        if !grew {
            break;
        }
        for list in incident.iter_mut() {
            list.retain(|&(id, _)| !taken[id]);
        }
    }
    let kept: Vec<_> = edges
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| t)
        .map(|(&e, _)| e)
        .collect();
    Ok(DirectedGraph::from_undirected_edges(n, &kept))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_is_its_own_certificate() {
        let edges = [(0, 1), (1, 2), (1, 3), (3, 4)];
        let g = DirectedGraph::from_undirected_edges(5, &edges);
        for k in 1..4 {
            assert_eq!(sparse_certificate(&g, k).unwrap().undirected_edges(), &edges);
        }
    }

    #[test]
    fn k5_with_two_forests() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = DirectedGraph::from_undirected_edges(5, &edges);
        // Scanning the root marks every other vertex, so the first forest is a
        // star and the second can only span the remaining K₄: 4 + 3 edges.
        let c = sparse_certificate(&g, 2).unwrap();
        assert_eq!(c.undirected_edges().len(), 7);
        assert!(c.undirected_edges().len() <= 2 * (5 - 1));
    }

    #[test]
    fn directed_input_rejected() {
        let g = DirectedGraph::from_arcs(2, &[(0, 1)]);
        assert_eq!(sparse_certificate(&g, 1), Err(GraphError::NotUndirected));
    }
}
