//! LC orbits, LC equivalence and vertex-minor search on small graphs.
//!
//! Everything here is brute force and guarded by a vertex-count bound.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::format::to_graph6;
use crate::graph::{LabeledGraph, Vertex};
use crate::protocols::{apply_steps, ghz4_line_cost, Step};
use crate::pathfind::VertexPath;

pub const DEFAULT_ORBIT_BOUND: usize = 10;

fn check_bound(g: &LabeledGraph, bound: usize) -> Result<()> {
    if g.len() > bound {
        return Err(Error::SizeBound { size: g.len(), bound });
    }
    Ok(())
}

/// All graphs reachable from a seed by local complementations.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    canonical_key: String,
    members: Vec<LabeledGraph>,
    parent: Vec<Option<(usize, Vertex)>>,
    index: HashMap<Vec<u64>, usize>,
}

impl OrbitRecord {
    /// Smallest graph6 string among the members.
    pub fn canonical_key(&self) -> &str {
        &self.canonical_key
    }

    /// Members in BFS order; the seed comes first.
    pub fn members(&self) -> &[LabeledGraph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn position(&self, g: &LabeledGraph) -> Option<usize> {
        if g.vertices() != self.members[0].vertices() {
            return None;
        }
        self.index.get(g.adjacency_key()).copied()
    }

    pub fn contains(&self, g: &LabeledGraph) -> bool {
        self.position(g).is_some()
    }

    /// LC sequence taking the seed to member `i`.
    pub fn witness(&self, mut i: usize) -> Vec<Vertex> {
        let mut seq = Vec::new();
        while let Some((p, a)) = self.parent[i] {
            seq.push(a);
            i = p;
        }
        seq.reverse();
        seq
    }

    pub fn witness_for(&self, g: &LabeledGraph) -> Option<Vec<Vertex>> {
        self.position(g).map(|i| self.witness(i))
    }

    /// Members as graph6 lines, sorted.
    pub fn graph6_dump(&self) -> Vec<String> {
        let mut out: Vec<String> = self.members.iter().map(to_graph6).collect();
        out.sort();
        out
    }
}

pub fn lc_orbit(g: &LabeledGraph) -> Result<OrbitRecord> {
    lc_orbit_bounded(g, DEFAULT_ORBIT_BOUND)
}

pub fn lc_orbit_bounded(g: &LabeledGraph, bound: usize) -> Result<OrbitRecord> {
    check_bound(g, bound)?;
    Ok(orbit_unchecked(g))
}

fn orbit_unchecked(g: &LabeledGraph) -> OrbitRecord {
    let mut members = vec![g.clone()];
    let mut parent = vec![None];
    let mut index = HashMap::from([(g.adjacency_key().to_vec(), 0)]);
    let mut head = 0;
    while head < members.len() {
        for a in 0..g.len() {
            let mut next = members[head].clone();
            next.lc_idx_in_place(a);
            if index.contains_key(next.adjacency_key()) {
                continue;
            }
            index.insert(next.adjacency_key().to_vec(), members.len());
            parent.push(Some((head, g.label(a))));
            members.push(next);
        }
        head += 1;
    }
    let canonical_key = members.iter().map(to_graph6).min().unwrap_or_default();
    OrbitRecord { canonical_key, members, parent, index }
}

/// `Some(witness)` with `τ_witness(g) = h` when the graphs are LC-equivalent.
pub fn lc_equivalent(g: &LabeledGraph, h: &LabeledGraph) -> Result<Option<Vec<Vertex>>> {
    lc_equivalent_bounded(g, h, DEFAULT_ORBIT_BOUND)
}

pub fn lc_equivalent_bounded(g: &LabeledGraph, h: &LabeledGraph, bound: usize) -> Result<Option<Vec<Vertex>>> {
    if g.vertices() != h.vertices() {
        return Err(Error::VertexSetMismatch);
    }
    Ok(lc_orbit_bounded(g, bound)?.witness_for(h))
}

/// Searches for operations turning `g` into exactly `h`. Vertices of `g`
/// missing from `h` are removed in ascending order; each removal branches
/// into Z, Y and X (pivot: smallest neighbor) measurements, which covers
/// every vertex-minor up to local complementation. The result is then
/// matched against the LC orbit of `h`.
pub fn vertex_minor(g: &LabeledGraph, h: &LabeledGraph) -> Result<Option<Vec<Step>>> {
    vertex_minor_bounded(g, h, DEFAULT_ORBIT_BOUND)
}

pub fn vertex_minor_bounded(g: &LabeledGraph, h: &LabeledGraph, bound: usize) -> Result<Option<Vec<Step>>> {
    for &v in h.vertices() {
        if !g.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    check_bound(g, bound)?;
    let target = orbit_unchecked(h);
    let deleted: Vec<Vertex> = g.vertices().iter().copied().filter(|&v| !h.contains(v)).collect();
    let mut seen = HashSet::new();
    let mut ops = Vec::new();
    if !minor_dfs(g, &deleted, &target, &mut seen, &mut ops)? {
        return Ok(None);
    }
    debug_assert_eq!(&apply_steps(g, &ops)?, h);
    Ok(Some(ops))
}

fn minor_dfs(
    cur: &LabeledGraph,
    deleted: &[Vertex],
    target: &OrbitRecord,
    seen: &mut HashSet<Vec<u64>>,
    ops: &mut Vec<Step>,
) -> Result<bool> {
    let Some((&v, rest)) = deleted.split_first() else {
        let Some(w) = target.witness_for(cur) else {
            return Ok(false);
        };
        // The witness leads from h to cur; LCs are involutions, so reverse it.
        ops.extend(w.iter().rev().map(|&a| Step::lc(a)));
        return Ok(true);
    };
    if !seen.insert(cur.adjacency_key().to_vec()) {
        return Ok(false);
    }
    let mut branches = vec![Step::z(v), Step::y(v)];
    if let Some(&w) = cur.neighbors(v)?.first() {
        branches.push(Step::x(v, w));
    }
    let mut tried: Vec<LabeledGraph> = Vec::new();
    for step in branches {
        let next = step.apply(cur)?;
        if tried.contains(&next) {
            continue;
        }
        ops.push(step);
        if minor_dfs(&next, rest, target, seen, ops)? {
            return Ok(true);
        }
        ops.pop();
        tried.push(next);
    }
    Ok(false)
}

/// Looks for a repeater line through the four targets that has an extra
/// vertex between the second and third target.
///
/// Induced paths of `g` ending in targets are tried first, cheapest GHZ4
/// extraction first (fewest measurements, then fewest Y-measurements, then
/// the smaller vertex sequence). Without one, five-vertex lines through
/// the targets and one extra vertex are tried as vertex-minors; that step
/// needs `|g| ≤ bound`.
pub fn find_repeater_line(g: &LabeledGraph, targets: [Vertex; 4]) -> Result<Option<VertexPath>> {
    find_repeater_line_bounded(g, targets, DEFAULT_ORBIT_BOUND)
}

pub fn find_repeater_line_bounded(
    g: &LabeledGraph,
    targets: [Vertex; 4],
    bound: usize,
) -> Result<Option<VertexPath>> {
    let mut sorted = targets;
    sorted.sort_unstable();
    for (i, &t) in sorted.iter().enumerate() {
        g.index_of(t)?;
        if i > 0 && sorted[i - 1] == t {
            return Err(Error::DuplicateVertex(t));
        }
    }
    let mut best: Option<((usize, usize), Vec<Vertex>)> = None;
    for line in induced_target_lines(g, &sorted) {
        if let Some(cost) = ghz4_line_cost(g, &sorted, &line) {
            let better = match &best {
                None => true,
                Some((c, l)) => (cost, &line) < (*c, l),
            };
            if better {
                best = Some((cost, line));
            }
        }
    }
    if let Some((_, line)) = best {
        return Ok(Some(VertexPath::from_vertices_unchecked(line)));
    }
    check_bound(g, bound)?;
    for &m in g.vertices().iter().filter(|v| !sorted.contains(v)) {
        for order in orderings(&sorted) {
            let line = vec![order[0], order[1], m, order[2], order[3]];
            let h = LabeledGraph::path(&line)?;
            if vertex_minor_bounded(g, &h, bound)?.is_some() {
                return Ok(Some(VertexPath::from_vertices_unchecked(line)));
            }
        }
    }
    Ok(None)
}

/// Target orders up to reversal, in lexicographic order.
fn orderings(t: &[Vertex; 4]) -> Vec<[Vertex; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let idx = [a, b, c, d];
                    let mut used = [false; 4];
                    idx.iter().for_each(|&i| used[i] = true);
                    if used.iter().all(|&u| u) && t[a] < t[d] {
                        out.push([t[a], t[b], t[c], t[d]]);
                    }
                }
            }
        }
    }
    out
}

/// Induced paths whose two ends are targets and which contain all four
/// targets, each listed once in its lexicographically smaller orientation.
fn induced_target_lines(g: &LabeledGraph, targets: &[Vertex; 4]) -> Vec<Vec<Vertex>> {
    let is_target: Vec<bool> = (0..g.len()).map(|i| targets.contains(&g.label(i))).collect();
    let mut out = Vec::new();
    for &t in targets {
        let mut path = vec![g.index_of(t).expect("checked")];
        extend_induced(g, &is_target, &mut path, 1, &mut out);
    }
    out
}

fn extend_induced(
    g: &LabeledGraph,
    is_target: &[bool],
    path: &mut Vec<usize>,
    found: usize,
    out: &mut Vec<Vec<Vertex>>,
) {
    let last = *path.last().unwrap();
    if found == 4 {
        if g.label(path[0]) < g.label(last) {
            out.push(path.iter().map(|&i| g.label(i)).collect());
        }
        return;
    }
    let earlier = &path[..path.len() - 1];
    let next: Vec<usize> = g
        .neighbors_idx(last)
        .filter(|&u| !path.contains(&u) && !earlier.iter().any(|&p| g.has_edge_idx(p, u)))
        .collect();
    for u in next {
        path.push(u);
        extend_induced(g, is_target, path, found + is_target[u] as usize, out);
        path.pop();
    }
}
