use super::{DirectedGraph, GraphError};
use std::fmt::Write as _;
use std::path::Path;

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// p <n> <m> directed|undirected
/// e <u> <v>        (exactly m lines)
/// ```
pub fn parse_graph(text: &str) -> Result<DirectedGraph, GraphError> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let tag = tok.next().unwrap_or_default();
        let rest: Vec<&str> = tok.collect();
        match (tag, header) {
            ("p", None) => {
                if rest.len() != 3 {
                    return Err(parse_err(line_no, "expected `p <n> <m> directed|undirected`"));
                }
                let n = parse_num(rest[0], line_no)?;
                let m = parse_num(rest[1], line_no)?;
                let undirected = match rest[2] {
                    "directed" => false,
                    "undirected" => true,
                    other => return Err(parse_err(line_no, &format!("unknown orientation `{other}`"))),
                };
                header = Some((n, m, undirected));
            }
            ("p", Some(_)) => return Err(parse_err(line_no, "duplicate problem line")),
            ("e", Some((n, m, _))) => {
                if rest.len() != 2 {
                    return Err(parse_err(line_no, "expected `e <u> <v>`"));
                }
                if pairs.len() == m {
                    return Err(GraphError::EdgeCount { expected: m, found: m + 1 });
                }
                let u = parse_num(rest[0], line_no)?;
                let v = parse_num(rest[1], line_no)?;
                for vertex in [u, v] {
                    if vertex >= n {
                        return Err(GraphError::VertexOutOfRange { line: line_no, vertex, n });
                    }
                }
                pairs.push((u, v));
            }
            ("e", None) => return Err(GraphError::MissingHeader),
            (other, _) => return Err(parse_err(line_no, &format!("unknown line tag `{other}`"))),
        }
    }
    let (n, m, undirected) = header.ok_or(GraphError::MissingHeader)?;
    if pairs.len() != m {
        return Err(GraphError::EdgeCount { expected: m, found: pairs.len() });
    }
    Ok(if undirected {
        DirectedGraph::from_undirected_edges(n, &pairs)
    } else {
        DirectedGraph::from_arcs(n, &pairs)
    })
}

fn parse_num(s: &str, line: usize) -> Result<usize, GraphError> {
    s.parse()
        .map_err(|_| parse_err(line, &format!("`{s}` is not a non-negative integer")))
}

fn parse_err(line: usize, msg: &str) -> GraphError {
    GraphError::Parse { line, msg: msg.to_string() }
}

pub fn load_graph(path: &Path) -> Result<DirectedGraph, Box<dyn std::error::Error + Send + Sync>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_graph(&text)?)
}

/// Serializes `g` in the format accepted by [`parse_graph`]. Undirected
/// graphs are written edge by edge, so a round trip is exact.
pub fn write_graph(g: &DirectedGraph) -> String {
    let mut out = String::new();
    if g.is_undirected() {
        let edges = g.undirected_edges();
        writeln!(out, "p {} {} undirected", g.n(), edges.len()).unwrap();
        for &(u, v) in edges {
            writeln!(out, "e {u} {v}").unwrap();
        }
    } else {
        writeln!(out, "p {} {} directed", g.n(), g.m()).unwrap();
        for (u, v) in g.arcs() {
            writeln!(out, "e {u} {v}").unwrap();
        }
    }
    out
}
