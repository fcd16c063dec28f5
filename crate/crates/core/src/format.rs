//! Text formats: edge lists, graph6, DOT and a small JSON document.
//!
//! graph6 carries no labels. Encoding uses the sorted label order; decoding
//! assigns consecutive labels starting from a caller-chosen base.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Vertex};

/// Parses `u v` lines. A line with a single label declares an isolated
/// vertex; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut vertices = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<Vertex>()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex label {s:?}", lineno + 1)))
        };
        match fields.as_slice() {
            [v] => {
                vertices.insert(parse(v)?);
            }
            [u, v] => {
                let (u, v) = (parse(u)?, parse(v)?);
                if u == v {
                    return Err(Error::SelfLoop(u));
                }
                vertices.insert(u);
                vertices.insert(v);
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected `u v` or a single vertex",
                    lineno + 1
                )))
            }
        }
    }
    LabeledGraph::from_edges(vertices, edges)
}

/// Emits one edge per line; isolated vertices get a line of their own.
pub fn to_edge_list(g: &LabeledGraph) -> String {
    let mut out = String::new();
    let edges = g.edges();
    for &v in g.vertices() {
        if g.degree(v).unwrap() == 0 {
            writeln!(out, "{v}").unwrap();
        }
    }
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// graph6 encoding of the upper triangle, column by column
/// (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed six bits per byte.
pub fn to_graph6(g: &LabeledGraph) -> String {
    let n = g.len();
    let mut out = Vec::with_capacity(1 + n * n / 12);
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge_idx(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// Decodes one graph6 line; vertex `k` gets label `first_label + k`.
pub fn parse_graph6(line: &str, first_label: Vertex) -> Result<LabeledGraph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6: byte outside 63..=126".into()));
    }
    let digit = |k: usize| -> Result<usize> {
        bytes
            .get(k)
            .map(|&b| (b - 63) as usize)
            .ok_or_else(|| Error::Parse("graph6: truncated size field".into()))
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(Error::Parse("graph6: empty input".into())),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0;
            for k in 2..8 {
                n = (n << 6) | digit(k)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0;
            for k in 1..4 {
                n = (n << 6) | digit(k)?;
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if bytes.len() - pos != expected {
        return Err(Error::Parse(format!(
            "graph6: expected {expected} data bytes for n = {n}, found {}",
            bytes.len() - pos
        )));
    }
    let labels = (0..n).map(|k| first_label + k as Vertex);
    let mut g = LabeledGraph::new(labels)?;
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.set_edge_idx(i, j, true);
            }
            k += 1;
            if k == nbits {
                break 'outer;
            }
        }
    }
    pos += expected;
    debug_assert_eq!(pos, bytes.len());
    if nbits % 6 != 0 && (bytes[bytes.len() - 1] - 63) & ((1 << (6 - nbits % 6)) - 1) != 0 {
        return Err(Error::Parse("graph6: nonzero padding bits".into()));
    }
    Ok(g)
}

/// DOT export; `name` becomes the graph identifier.
pub fn to_dot(g: &LabeledGraph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for &v in g.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// JSON form of a graph: `{"vertices": [...], "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl From<&LabeledGraph> for GraphDoc {
    fn from(g: &LabeledGraph) -> Self {
        GraphDoc { vertices: g.vertices().to_vec(), edges: g.edges() }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<LabeledGraph> {
        LabeledGraph::from_edges(self.vertices.iter().copied(), self.edges.iter().copied())
    }
}
