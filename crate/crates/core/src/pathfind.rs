//! Shortest paths with the minimum-combined-neighborhood selection rule.
//!
//! Shortest paths are enumerated over the BFS layer DAG in ascending label
//! order, so the first path found is the lexicographically smallest one and
//! ties are always broken toward it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, LabeledGraph, Vertex, VertexSet};

/// Default cap on the number of enumerated shortest paths.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000;

/// Ordered list of distinct vertices, consecutive ones adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPath(Vec<Vertex>);

impl VertexPath {
    /// Validates the path against `g`.
    pub fn new(g: &LabeledGraph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        let mut seen = VertexSet::new();
        for &v in &vertices {
            g.index_of(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("vertex {v} repeats")));
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(Error::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        Ok(VertexPath(vertices))
    }

    /// Wraps a vertex sequence without checking it against a graph.
    pub fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Self {
        VertexPath(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Number of vertices on the path.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn source(&self) -> Vertex {
        self.0[0]
    }

    pub fn sink(&self) -> Vertex {
        *self.0.last().unwrap()
    }

    pub fn interior(&self) -> &[Vertex] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        VertexPath(self.0.iter().rev().copied().collect())
    }
}

/// Terminal pair with an optional set of vertices the path must avoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathQuery {
    pub source: Vertex,
    pub sink: Vertex,
    pub forbidden: VertexSet,
}

impl PathQuery {
    pub fn new(source: Vertex, sink: Vertex) -> Self {
        PathQuery { source, sink, forbidden: VertexSet::new() }
    }

    pub fn avoiding(mut self, forbidden: impl IntoIterator<Item = Vertex>) -> Self {
        self.forbidden.extend(forbidden);
        self
    }
}

/// Result of the minimum-neighborhood selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathChoice {
    pub path: VertexPath,
    pub combined_neighborhood: VertexSet,
    /// False when the shortest-path count exceeded the cap and the greedy
    /// walk was used instead of full enumeration.
    pub exact: bool,
    /// Number of shortest paths, saturating at `u64::MAX`.
    pub shortest_paths: u64,
}

/// Layer DAG towards the sink: `dist[i]` is the distance of vertex `i` to
/// the sink avoiding forbidden vertices.
struct Layers {
    source: usize,
    sink: usize,
    dist: Vec<Option<usize>>,
}

impl Layers {
    fn build(g: &LabeledGraph, q: &PathQuery) -> Result<Self> {
        if q.source == q.sink {
            return Err(Error::InvalidPath("source and sink coincide".into()));
        }
        let source = g.index_of(q.source)?;
        let sink = g.index_of(q.sink)?;
        let mut forbidden = vec![false; g.len()];
        for &v in &q.forbidden {
            if let Ok(i) = g.index_of(v) {
                forbidden[i] = true;
            }
        }
        forbidden[source] = false;
        forbidden[sink] = false;
        let dist = g.distances_idx(sink, &forbidden);
        Ok(Layers { source, sink, dist })
    }

    fn length(&self) -> Option<usize> {
        self.dist[self.source]
    }

    fn next<'a>(&'a self, g: &'a LabeledGraph, i: usize) -> impl Iterator<Item = usize> + 'a {
        let d = self.dist[i].expect("on the DAG");
        g.neighbors_idx(i).filter(move |&j| self.dist[j].map(|dj| dj + 1 == d).unwrap_or(false))
    }

    fn count(&self, g: &LabeledGraph) -> u64 {
        let Some(len) = self.length() else { return 0 };
        let mut by_layer: Vec<Vec<usize>> = vec![Vec::new(); len + 1];
        for (i, d) in self.dist.iter().enumerate() {
            if let Some(d) = d {
                if *d <= len {
                    by_layer[*d].push(i);
                }
            }
        }
        let mut ways = vec![0u64; g.len()];
        ways[self.sink] = 1;
        for layer in by_layer.iter().skip(1) {
            for &i in layer {
                ways[i] = self.next(g, i).fold(0u64, |acc, j| acc.saturating_add(ways[j]));
            }
        }
        ways[self.source]
    }
}

fn to_path(g: &LabeledGraph, idx: &[usize]) -> VertexPath {
    VertexPath(idx.iter().map(|&i| g.label(i)).collect())
}

/// Lexicographically smallest shortest path, or `None` when disconnected.
pub fn shortest_path(g: &LabeledGraph, a: Vertex, b: Vertex) -> Result<Option<VertexPath>> {
    shortest_path_query(g, &PathQuery::new(a, b))
}

pub fn shortest_path_query(g: &LabeledGraph, q: &PathQuery) -> Result<Option<VertexPath>> {
    let layers = Layers::build(g, q)?;
    if layers.length().is_none() {
        return Ok(None);
    }
    let mut idx = vec![layers.source];
    let mut cur = layers.source;
    while cur != layers.sink {
        cur = layers.next(g, cur).next().expect("layer DAG reaches the sink");
        idx.push(cur);
    }
    Ok(Some(to_path(g, &idx)))
}

pub fn count_shortest_paths(g: &LabeledGraph, a: Vertex, b: Vertex) -> Result<u64> {
    Ok(Layers::build(g, &PathQuery::new(a, b))?.count(g))
}

/// All shortest paths in lexicographic order, at most `cap` of them.
pub fn all_shortest_paths(g: &LabeledGraph, a: Vertex, b: Vertex, cap: u64) -> Result<Vec<VertexPath>> {
    let layers = Layers::build(g, &PathQuery::new(a, b))?;
    let mut out = Vec::new();
    if layers.length().is_none() {
        return Ok(out);
    }
    let mut idx = vec![layers.source];
    enumerate(g, &layers, &mut idx, &mut |p| {
        out.push(to_path(g, p));
        (out.len() as u64) < cap
    });
    Ok(out)
}

/// Depth-first walk over the layer DAG; `visit` returns false to stop.
fn enumerate(
    g: &LabeledGraph,
    layers: &Layers,
    idx: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let cur = *idx.last().unwrap();
    if cur == layers.sink {
        return visit(idx);
    }
    let next: Vec<usize> = layers.next(g, cur).collect();
    for j in next {
        idx.push(j);
        let go_on = enumerate(g, layers, idx, visit);
        idx.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn union_mask(g: &LabeledGraph, idx: &[usize]) -> Vec<u64> {
    let mut acc = vec![0u64; g.words()];
    for &i in idx {
        for (a, b) in acc.iter_mut().zip(g.row(i)) {
            *a |= b;
        }
    }
    acc
}

pub fn min_neighborhood_shortest_path(g: &LabeledGraph, a: Vertex, b: Vertex) -> Result<PathChoice> {
    min_neighborhood_shortest_path_with_cap(g, a, b, DEFAULT_ENUMERATION_CAP)
}

/// Among all shortest `a`–`b` paths, one with the smallest combined
/// neighborhood; exact when at most `cap` shortest paths exist, greedy
/// otherwise.
pub fn min_neighborhood_shortest_path_with_cap(
    g: &LabeledGraph,
    a: Vertex,
    b: Vertex,
    cap: u64,
) -> Result<PathChoice> {
    let layers = Layers::build(g, &PathQuery::new(a, b))?;
    if layers.length().is_none() {
        return Err(Error::Disconnected(a, b));
    }
    let count = layers.count(g);
    let mut idx = vec![layers.source];
    let (best, exact) = if count <= cap {
        let mut best: Option<(usize, Vec<usize>)> = None;
        enumerate(g, &layers, &mut idx, &mut |p| {
            let size = bits::count(&union_mask(g, p));
            if best.as_ref().map(|(s, _)| size < *s).unwrap_or(true) {
                best = Some((size, p.to_vec()));
            }
            true
        });
        (best.expect("connected").1, true)
    } else {
        let mut acc = g.row(layers.source).to_vec();
        let mut cur = layers.source;
        while cur != layers.sink {
            let mut pick: Option<(usize, usize)> = None;
            for j in layers.next(g, cur) {
                let size: usize = acc
                    .iter()
                    .zip(g.row(j))
                    .map(|(x, y)| (x | y).count_ones() as usize)
                    .sum();
                if pick.map(|(s, _)| size < s).unwrap_or(true) {
                    pick = Some((size, j));
                }
            }
            cur = pick.expect("layer DAG reaches the sink").1;
            for (x, y) in acc.iter_mut().zip(g.row(cur)) {
                *x |= y;
            }
            idx.push(cur);
        }
        (idx, false)
    };
    let mask = union_mask(g, &best);
    Ok(PathChoice {
        path: to_path(g, &best),
        combined_neighborhood: bits::ones(&mask).map(|i| g.label(i)).collect(),
        exact,
        shortest_paths: count,
    })
}

/// True when `path` is a valid path whose length equals the distance
/// between its ends.
pub fn is_shortest_path(g: &LabeledGraph, path: &[Vertex]) -> bool {
    if VertexPath::new(g, path.to_vec()).is_err() {
        return false;
    }
    matches!(g.distance(path[0], path[path.len() - 1]), Ok(Some(d)) if d + 1 == path.len())
}
