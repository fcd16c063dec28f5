//! Labeled simple graphs and the local-complementation / Pauli-measurement
//! rewrite calculus.
//!
//! A [`LabeledGraph`] stores one neighborhood bitset per vertex. Vertex labels
//! are kept sorted, so row `i` belongs to the `i`-th smallest label and two
//! graphs are equal exactly when they have the same labels and edges.
//! Every rewrite returns a new graph; labels survive all operations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

pub type VertexSet = BTreeSet<Vertex>;

pub(crate) mod bits {
    #[inline]
    pub fn words_for(n: usize) -> usize {
        n.div_ceil(64)
    }

    #[inline]
    pub fn get(row: &[u64], i: usize) -> bool {
        row[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(row: &mut [u64], i: usize) {
        row[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(row: &mut [u64], i: usize) {
        row[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn toggle(row: &mut [u64], i: usize) {
        row[i / 64] ^= 1 << (i % 64);
    }

    pub fn count(row: &[u64]) -> usize {
        row.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
        row.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

/// Pauli measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// One Pauli measurement. `neighbor` is the pivot used by the X rule and must
/// be a current neighbor of `vertex` unless the vertex is isolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementStep {
    pub vertex: Vertex,
    pub basis: Basis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<Vertex>,
}

impl MeasurementStep {
    pub fn z(vertex: Vertex) -> Self {
        MeasurementStep { vertex, basis: Basis::Z, neighbor: None }
    }

    pub fn y(vertex: Vertex) -> Self {
        MeasurementStep { vertex, basis: Basis::Y, neighbor: None }
    }

    pub fn x(vertex: Vertex, neighbor: Option<Vertex>) -> Self {
        MeasurementStep { vertex, basis: Basis::X, neighbor }
    }
}

/// Set of undirected edges, each stored as `(smaller, larger)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(BTreeSet<(Vertex, Vertex)>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    /// Inserts `{u, v}`; self-pairs are ignored.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        self.0.insert((u.min(v), u.max(v)))
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.0.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.iter().copied()
    }

    /// `E(A, B)`: every pair `{a, b}` with `a ∈ A`, `b ∈ B`, `a ≠ b`.
    pub fn between(a: &VertexSet, b: &VertexSet) -> Self {
        let mut out = EdgeSet::new();
        for &x in a {
            for &y in b {
                out.insert(x, y);
            }
        }
        out
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> Self {
        EdgeSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &EdgeSet) -> Self {
        EdgeSet(self.0.difference(&other.0).copied().collect())
    }

    /// `E_{|W}`: the edges touching at least one vertex of `w`.
    pub fn restrict_incident(&self, w: &VertexSet) -> Self {
        EdgeSet(
            self.0
                .iter()
                .filter(|(a, b)| w.contains(a) || w.contains(b))
                .copied()
                .collect(),
        )
    }
}

impl FromIterator<(Vertex, Vertex)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        let mut out = EdgeSet::new();
        for (u, v) in iter {
            out.insert(u, v);
        }
        out
    }
}

/// Simple undirected graph on labeled vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    labels: Vec<Vertex>,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledGraph")
            .field("vertices", &self.labels)
            .field("edges", &self.edges())
            .finish()
    }
}

impl LabeledGraph {
    /// Edgeless graph on the given labels.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self> {
        let mut labels: Vec<Vertex> = vertices.into_iter().collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        let words = bits::words_for(labels.len());
        let rows = vec![0; labels.len() * words];
        Ok(LabeledGraph { labels, words, rows })
    }

    /// Edgeless graph on `1..=n`.
    pub fn empty(n: usize) -> Self {
        Self::new(1..=n as Vertex).expect("distinct labels")
    }

    /// Builds a graph from a vertex list and edges whose endpoints must be
    /// among the vertices.
    pub fn from_edges<I, E>(vertices: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::new(vertices)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph whose vertex set is exactly the edge endpoints.
    pub fn from_edge_list(edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let vs: VertexSet = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Self::from_edges(vs, edges.iter().copied())
    }

    pub fn from_edge_set<I: IntoIterator<Item = Vertex>>(vertices: I, edges: &EdgeSet) -> Result<Self> {
        Self::from_edges(vertices, edges.iter())
    }

    pub fn path(vertices: &[Vertex]) -> Result<Self> {
        Self::from_edges(vertices.iter().copied(), vertices.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn cycle(vertices: &[Vertex]) -> Result<Self> {
        let n = vertices.len();
        Self::from_edges(vertices.iter().copied(), (0..n).map(|i| (vertices[i], vertices[(i + 1) % n])))
    }

    pub fn star(center: Vertex, leaves: &[Vertex]) -> Result<Self> {
        Self::from_edges(
            std::iter::once(center).chain(leaves.iter().copied()),
            leaves.iter().map(|&l| (center, l)),
        )
    }

    pub fn complete(vertices: &[Vertex]) -> Result<Self> {
        let mut g = Self::new(vertices.iter().copied())?;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                g.set_edge_idx(i, j, true);
            }
        }
        Ok(g)
    }

    /// `rows × cols` grid numbered row by row starting at 1.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| (r * cols + c + 1) as Vertex;
        let mut g = Self::empty(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    g.add_edge(id(r, c), id(r, c + 1)).unwrap();
                }
                if r + 1 < rows {
                    g.add_edge(id(r, c), id(r + 1, c)).unwrap();
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.labels.iter().copied().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.labels.binary_search(&v).is_ok()
    }

    pub fn index_of(&self, v: Vertex) -> Result<usize> {
        self.labels.binary_search(&v).map_err(|_| Error::UnknownVertex(v))
    }

    pub fn label(&self, i: usize) -> Vertex {
        self.labels[i]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.rows[i * self.words..(i + 1) * self.words]
    }

    /// Raw adjacency bits, row by row. Equal keys mean equal graphs when the
    /// vertex sets agree.
    pub fn adjacency_key(&self) -> &[u64] {
        &self.rows
    }

    pub(crate) fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        bits::get(self.row(i), j)
    }

    pub(crate) fn set_edge_idx(&mut self, i: usize, j: usize, on: bool) {
        debug_assert_ne!(i, j);
        if on {
            bits::set(self.row_mut(i), j);
            bits::set(self.row_mut(j), i);
        } else {
            bits::clear(self.row_mut(i), j);
            bits::clear(self.row_mut(j), i);
        }
    }

    pub(crate) fn toggle_edge_idx(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        bits::toggle(self.row_mut(i), j);
        bits::toggle(self.row_mut(j), i);
    }

    pub(crate) fn neighbors_idx(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.row(i))
    }

    pub(crate) fn degree_idx(&self, i: usize) -> usize {
        bits::count(self.row(i))
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let (i, j) = (self.index_of(u)?, self.index_of(v)?);
        self.set_edge_idx(i, j, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let (i, j) = (self.index_of(u)?, self.index_of(v)?);
        if i != j {
            self.set_edge_idx(i, j, false);
        }
        Ok(())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Ok(i), Ok(j)) => i != j && self.has_edge_idx(i, j),
            _ => false,
        }
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self.degree_idx(self.index_of(v)?))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.degree_idx(i)).sum::<usize>() / 2
    }

    /// Edges as `(smaller, larger)` label pairs in ascending order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.len() {
            for j in self.neighbors_idx(i).filter(|&j| j > i) {
                out.push((self.labels[i], self.labels[j]));
            }
        }
        out
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().into_iter().collect()
    }

    /// `N_a`.
    pub fn neighborhood(&self, a: Vertex) -> Result<VertexSet> {
        let i = self.index_of(a)?;
        Ok(self.neighbors_idx(i).map(|j| self.labels[j]).collect())
    }

    /// Neighbors of `a` in ascending label order.
    pub fn neighbors(&self, a: Vertex) -> Result<Vec<Vertex>> {
        let i = self.index_of(a)?;
        Ok(self.neighbors_idx(i).map(|j| self.labels[j]).collect())
    }

    /// Union of `N_v` over the given vertices.
    pub fn combined_neighborhood(&self, path: &[Vertex]) -> Result<VertexSet> {
        let mut acc = vec![0u64; self.words];
        for &v in path {
            let i = self.index_of(v)?;
            for (a, b) in acc.iter_mut().zip(self.row(i)) {
                *a |= b;
            }
        }
        Ok(bits::ones(&acc).map(|j| self.labels[j]).collect())
    }

    pub(crate) fn lc_idx_in_place(&mut self, a: usize) {
        let mask: Vec<u64> = self.row(a).to_vec();
        for i in bits::ones(&mask) {
            let row = self.row_mut(i);
            for (r, m) in row.iter_mut().zip(&mask) {
                *r ^= m;
            }
            bits::toggle(row, i);
        }
    }

    /// `τ_a(G)`: complement the subgraph induced on `N_a`.
    pub fn local_complement(&self, a: Vertex) -> Result<Self> {
        let i = self.index_of(a)?;
        let mut g = self.clone();
        g.lc_idx_in_place(i);
        Ok(g)
    }

    /// Applies local complementations in order.
    pub fn local_complement_seq(&self, seq: &[Vertex]) -> Result<Self> {
        let mut g = self.clone();
        for &a in seq {
            let i = g.index_of(a)?;
            g.lc_idx_in_place(i);
        }
        Ok(g)
    }

    pub(crate) fn delete_idx(&self, v: usize) -> Self {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.remove(v);
        let words = bits::words_for(n - 1);
        let mut rows = vec![0u64; (n - 1) * words];
        for i in (0..n).filter(|&i| i != v) {
            let ni = if i < v { i } else { i - 1 };
            let dst = &mut rows[ni * words..(ni + 1) * words];
            for j in self.neighbors_idx(i).filter(|&j| j != v) {
                bits::set(dst, if j < v { j } else { j - 1 });
            }
        }
        LabeledGraph { labels, words, rows }
    }

    /// Removes `v` and its incident edges.
    pub fn remove_vertex(&self, v: Vertex) -> Result<Self> {
        Ok(self.delete_idx(self.index_of(v)?))
    }

    /// Z-measurement: the vertex and its edges disappear.
    pub fn measure_z(&self, v: Vertex) -> Result<Self> {
        self.remove_vertex(v)
    }

    /// Y-measurement: `τ_v` followed by deletion of `v`.
    pub fn measure_y(&self, v: Vertex) -> Result<Self> {
        let i = self.index_of(v)?;
        let mut g = self.clone();
        g.lc_idx_in_place(i);
        Ok(g.delete_idx(i))
    }

    fn x_pivot(&self, v: Vertex, w: Option<Vertex>) -> Result<Option<(usize, usize)>> {
        let i = self.index_of(v)?;
        if self.degree_idx(i) == 0 {
            return Ok(None);
        }
        let w = w.ok_or(Error::MissingNeighbor(v))?;
        let j = self.index_of(w)?;
        if i == j || !self.has_edge_idx(i, j) {
            return Err(Error::NotANeighbor { vertex: v, neighbor: w });
        }
        Ok(Some((i, j)))
    }

    /// X-measurement of `v` with pivot neighbor `w`, by the symmetric
    /// difference rule
    /// `(E Δ E(N_w, N_v) Δ E(N_w ∩ N_v, N_w ∩ N_v) Δ E({w}, N_v \ {w})) \ E_{|{v}}`.
    ///
    /// An isolated `v` is simply deleted and `w` is ignored.
    pub fn measure_x(&self, v: Vertex, w: Option<Vertex>) -> Result<Self> {
        let Some((vi, wi)) = self.x_pivot(v, w)? else {
            return self.remove_vertex(v);
        };
        let nv: Vec<usize> = self.neighbors_idx(vi).collect();
        let nw: Vec<usize> = self.neighbors_idx(wi).collect();
        let in_nv = |x: usize| self.has_edge_idx(vi, x);
        let in_nw = |x: usize| self.has_edge_idx(wi, x);
        let mut g = self.clone();
        // E(N_w, N_v) as a set: a pair inside N_v ∩ N_w shows up twice.
        for &x in &nw {
            for &y in &nv {
                if x == y || (x > y && in_nv(x) && in_nw(y)) {
                    continue;
                }
                g.toggle_edge_idx(x, y);
            }
        }
        let both: Vec<usize> = nv.iter().copied().filter(|&x| in_nw(x)).collect();
        for (k, &x) in both.iter().enumerate() {
            for &y in &both[k + 1..] {
                g.toggle_edge_idx(x, y);
            }
        }
        for &y in nv.iter().filter(|&&y| y != wi) {
            g.toggle_edge_idx(wi, y);
        }
        Ok(g.delete_idx(vi))
    }

    /// X-measurement through the decomposition `τ_w ∘ Z_v ∘ τ_v ∘ τ_w`.
    pub fn measure_x_by_lc(&self, v: Vertex, w: Option<Vertex>) -> Result<Self> {
        let Some((vi, wi)) = self.x_pivot(v, w)? else {
            return self.remove_vertex(v);
        };
        let mut g = self.clone();
        g.lc_idx_in_place(wi);
        g.lc_idx_in_place(vi);
        let g = g.delete_idx(vi);
        let w = w.expect("pivot checked");
        g.local_complement(w)
    }

    pub fn measure(&self, step: &MeasurementStep) -> Result<Self> {
        match step.basis {
            Basis::X => self.measure_x(step.vertex, step.neighbor),
            Basis::Y => self.measure_y(step.vertex),
            Basis::Z => self.measure_z(step.vertex),
        }
    }

    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Self> {
        for &v in keep {
            self.index_of(v)?;
        }
        let mut g = LabeledGraph::new(keep.iter().copied())?;
        for (u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    /// Applies a label map; every vertex must be mapped and the images must
    /// be distinct.
    pub fn relabel<F: Fn(Vertex) -> Vertex>(&self, map: F) -> Result<Self> {
        Self::from_edges(
            self.labels.iter().map(|&v| map(v)),
            self.edges().into_iter().map(|(u, v)| (map(u), map(v))),
        )
    }

    /// Vertex set of the connected component containing `v`.
    pub fn component_of(&self, v: Vertex) -> Result<VertexSet> {
        let start = self.index_of(v)?;
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in self.neighbors_idx(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        Ok((0..self.len()).filter(|&i| seen[i]).map(|i| self.labels[i]).collect())
    }

    pub fn components(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = Vec::new();
        let mut done = VertexSet::new();
        for &v in &self.labels {
            if !done.contains(&v) {
                let c = self.component_of(v).expect("own vertex");
                done.extend(c.iter().copied());
                out.push(c);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.component_of(self.labels[0]).map(|c| c.len()).unwrap_or(0) == self.len()
    }

    /// BFS distances (in edges) from `v`, indexed like `vertices()`.
    pub(crate) fn distances_idx(&self, start: usize, forbidden: &[bool]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let d = dist[i].unwrap();
            for j in self.neighbors_idx(i) {
                if dist[j].is_none() && !forbidden[j] {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Edge distance between two vertices, `None` when disconnected.
    pub fn distance(&self, a: Vertex, b: Vertex) -> Result<Option<usize>> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.distances_idx(i, &vec![false; self.len()])[j])
    }

    /// Checks the simple-graph invariants: symmetric, loop-free, no stray bits.
    pub fn check_invariants(&self) -> bool {
        let n = self.len();
        self.labels.windows(2).all(|w| w[0] < w[1])
            && self.rows.len() == n * self.words
            && (0..n).all(|i| {
                !self.has_edge_idx(i, i)
                    && self.neighbors_idx(i).all(|j| j < n && self.has_edge_idx(j, i))
            })
    }
}
