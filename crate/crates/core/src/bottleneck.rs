//! Two-pair routing on small graph states: bottleneck detection and an
//! exhaustive search for local operations that serve both pairs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{canonical_mask, labeled_graph, vertex_pairs};
use crate::error::{Error, Result};
use crate::format::{to_graph6, GraphDoc};
use crate::graph::{LabeledGraph, Vertex, VertexSet};
use crate::protocols::{pairs_established, Step};

/// Recorded in every report so readers know which notion was tested.
pub const BOTTLENECK_DEFINITION: &str =
    "no pair of edge-disjoint paths, one joining each terminal pair";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPairInstance {
    pub graph: LabeledGraph,
    pub pairs: [(Vertex, Vertex); 2],
}

impl TwoPairInstance {
    pub fn new(graph: LabeledGraph, pairs: [(Vertex, Vertex); 2]) -> Result<Self> {
        let mut seen = VertexSet::new();
        for v in [pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1] {
            graph.index_of(v)?;
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(TwoPairInstance { graph, pairs })
    }

    pub fn terminals(&self) -> [Vertex; 4] {
        [self.pairs[0].0, self.pairs[0].1, self.pairs[1].0, self.pairs[1].1]
    }

    /// Non-terminal vertices, all of which have to be measured.
    pub fn measurable(&self) -> Vec<Vertex> {
        let t = self.terminals();
        self.graph.vertices().iter().copied().filter(|v| !t.contains(v)).collect()
    }

    /// The two pair edges on the four terminals.
    pub fn target(&self) -> LabeledGraph {
        LabeledGraph::from_edges(self.terminals(), self.pairs).expect("terminals are distinct")
    }
}

/// Edge sets (as bit masks over `edges`) of all simple `a`–`b` paths.
fn simple_path_masks(g: &LabeledGraph, edges: &[(Vertex, Vertex)], a: Vertex, b: Vertex) -> Vec<u128> {
    let edge_bit = |u: Vertex, v: Vertex| {
        let key = (u.min(v), u.max(v));
        1u128 << edges.binary_search(&key).expect("edge is listed")
    };
    let mut out = Vec::new();
    let mut stack = vec![a];
    fn walk(
        g: &LabeledGraph,
        b: Vertex,
        stack: &mut Vec<Vertex>,
        mask: u128,
        edge_bit: &dyn Fn(Vertex, Vertex) -> u128,
        out: &mut Vec<u128>,
    ) {
        let cur = *stack.last().unwrap();
        if cur == b {
            out.push(mask);
            return;
        }
        for u in g.neighbors(cur).expect("vertex exists") {
            if !stack.contains(&u) {
                stack.push(u);
                walk(g, b, stack, mask | edge_bit(cur, u), edge_bit, out);
                stack.pop();
            }
        }
    }
    walk(g, b, &mut stack, 0, &edge_bit, &mut out);
    out
}

/// True when the two pairs cannot be joined by edge-disjoint paths.
/// Path enumeration is exponential, so graphs are limited to 128 edges.
pub fn has_bottleneck(inst: &TwoPairInstance) -> Result<bool> {
    let edges = inst.graph.edges();
    if edges.len() > 128 {
        return Err(Error::SizeBound { size: edges.len(), bound: 128 });
    }
    let [(a, b), (c, d)] = inst.pairs;
    let first = simple_path_masks(&inst.graph, &edges, a, b);
    let second = simple_path_masks(&inst.graph, &edges, c, d);
    Ok(!first.iter().any(|p| second.iter().any(|q| p & q == 0)))
}

/// Which moves the search may use between deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Allow local complementations. Without them only plain Z-deletions
    /// are searched.
    pub lc_moves: bool,
    /// Reject instances whose pairs are disconnected without searching.
    /// Local complementation keeps components and deletion only splits
    /// them, so this never changes the answer.
    pub prune_disconnected: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { lc_moves: true, prune_disconnected: true }
    }
}

/// LC orbit members with the LC sequence from the first member.
struct Orbit {
    members: Vec<LabeledGraph>,
    witness: Vec<Vec<Vertex>>,
    /// Operations from `members[0]` to the target, once known.
    result: Option<Option<Vec<Step>>>,
}

/// Memoized search over `orbit → Z-delete → orbit → …`. Solvability is
/// constant on LC orbits, so each orbit is solved once and shared by all
/// its members. A solver is tied to one terminal designation.
pub struct Solver {
    pairs: [(Vertex, Vertex); 2],
    target: LabeledGraph,
    options: SearchOptions,
    orbit_of: HashMap<LabeledGraph, (usize, usize)>,
    orbits: Vec<Orbit>,
}

impl Solver {
    pub fn new(pairs: [(Vertex, Vertex); 2], options: SearchOptions) -> Result<Self> {
        let probe = LabeledGraph::new([pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1])?;
        let inst = TwoPairInstance::new(probe, pairs)?;
        Ok(Solver { pairs, target: inst.target(), options, orbit_of: HashMap::new(), orbits: Vec::new() })
    }

    /// Number of distinct orbits explored so far.
    pub fn orbits_explored(&self) -> usize {
        self.orbits.len()
    }

    fn orbit_id(&mut self, g: &LabeledGraph) -> (usize, usize) {
        if let Some(&hit) = self.orbit_of.get(g) {
            return hit;
        }
        let id = self.orbits.len();
        let mut members = vec![g.clone()];
        let mut witness = vec![Vec::new()];
        self.orbit_of.insert(g.clone(), (id, 0));
        let mut head = 0;
        while self.options.lc_moves && head < members.len() {
            for i in 0..g.len() {
                let mut next = members[head].clone();
                next.lc_idx_in_place(i);
                if self.orbit_of.contains_key(&next) {
                    continue;
                }
                self.orbit_of.insert(next.clone(), (id, members.len()));
                let mut w = witness[head].clone();
                w.push(g.label(i));
                members.push(next);
                witness.push(w);
            }
            head += 1;
        }
        self.orbits.push(Orbit { members, witness, result: None });
        (id, self.orbit_of[g].1)
    }

    fn solve_orbit(&mut self, id: usize) -> Option<Vec<Step>> {
        if let Some(r) = &self.orbits[id].result {
            return r.clone();
        }
        let terminals = [self.pairs[0].0, self.pairs[0].1, self.pairs[1].0, self.pairs[1].1];
        let seed = self.orbits[id].members[0].clone();
        let measurable: Vec<Vertex> = seed.vertices().iter().copied().filter(|v| !terminals.contains(v)).collect();
        let mut found = None;
        if measurable.is_empty() {
            let k = (0..self.orbits[id].members.len()).find(|&k| self.orbits[id].members[k] == self.target);
            found = k.map(|k| self.orbits[id].witness[k].iter().map(|&a| Step::lc(a)).collect());
        } else {
            'search: for k in 0..self.orbits[id].members.len() {
                for &u in &measurable {
                    let next = self.orbits[id].members[k].measure_z(u).expect("member contains u");
                    if let Some(rest) = self.solve(&next) {
                        let mut ops: Vec<Step> = self.orbits[id].witness[k].iter().map(|&a| Step::lc(a)).collect();
                        ops.push(Step::z(u));
                        ops.extend(rest);
                        found = Some(ops);
                        break 'search;
                    }
                }
            }
        }
        self.orbits[id].result = Some(found.clone());
        found
    }

    /// Operations turning `g` into exactly the two pair edges, if any.
    pub fn solve(&mut self, g: &LabeledGraph) -> Option<Vec<Step>> {
        if self.options.prune_disconnected {
            let [(a, b), (c, d)] = self.pairs;
            let connected = |x, y| g.component_of(x).map(|comp| comp.contains(&y)).unwrap_or(false);
            if !connected(a, b) || !connected(c, d) {
                return None;
            }
        }
        let (id, k) = self.orbit_id(g);
        let tail = self.solve_orbit(id)?;
        // Back from member k to the orbit's first member, then its witness.
        let mut ops: Vec<Step> = self.orbits[id].witness[k].iter().rev().map(|&a| Step::lc(a)).collect();
        ops.extend(tail);
        Some(ops)
    }
}

/// Solvability of one instance with default options.
pub fn solvable(inst: &TwoPairInstance) -> Result<Option<Vec<Step>>> {
    let mut solver = Solver::new(inst.pairs, SearchOptions::default())?;
    Ok(solver.solve(&inst.graph))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub graph6: String,
    pub graph: GraphDoc,
    pub pairs: [(Vertex, Vertex); 2],
    pub has_bottleneck: bool,
    pub solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Step>>,
}

/// Which terminal designations a scan covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Designations {
    /// Pairs (1,n) and (2,n-1).
    Canonical,
    /// Every way to pick two disjoint pairs among the vertices.
    All,
    Custom(Vec<[(Vertex, Vertex); 2]>),
}

impl Designations {
    pub fn expand(&self, n: usize) -> Vec<[(Vertex, Vertex); 2]> {
        let n = n as Vertex;
        match self {
            Designations::Canonical => vec![[(1, n), (2, n - 1)]],
            Designations::Custom(list) => list.clone(),
            Designations::All => {
                let pairs = vertex_pairs(n as usize);
                let mut out = Vec::new();
                for (i, &p) in pairs.iter().enumerate() {
                    for &q in &pairs[i + 1..] {
                        if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                            out.push([p, q]);
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignationSummary {
    pub pairs: [(Vertex, Vertex); 2],
    pub solvable: usize,
    pub bottleneck: usize,
    pub hits: usize,
    pub orbits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub bottleneck_definition: String,
    pub graphs_scanned: u64,
    pub designations: Vec<DesignationSummary>,
    /// Hits in (designation, graph mask) order.
    pub hits: Vec<SearchReport>,
    /// Distinct hit graphs up to relabeling of vertices.
    pub hit_classes: usize,
}

fn scan_designation(n: usize, pairs: [(Vertex, Vertex); 2], options: SearchOptions) -> Result<(DesignationSummary, Vec<SearchReport>)> {
    let mut solver = Solver::new(pairs, options)?;
    let count = 1u64 << (n * (n - 1) / 2);
    let mut solvable = Vec::new();
    for mask in 0..count {
        let g = labeled_graph(n, mask);
        if let Some(w) = solver.solve(&g) {
            solvable.push((g, w));
        }
    }
    let checked: Vec<(LabeledGraph, Vec<Step>, bool)> = solvable
        .into_par_iter()
        .map(|(g, w)| {
            let b = has_bottleneck(&TwoPairInstance { graph: g.clone(), pairs }).expect("small graph");
            (g, w, b)
        })
        .collect();
    let bottleneck = checked.iter().filter(|c| c.2).count();
    let summary_solvable = checked.len();
    let hits: Vec<SearchReport> = checked
        .into_iter()
        .filter(|c| c.2)
        .map(|(g, w, _)| SearchReport {
            graph6: to_graph6(&g),
            graph: GraphDoc::from(&g),
            pairs,
            has_bottleneck: true,
            solvable: true,
            witness: Some(w),
        })
        .collect();
    let summary = DesignationSummary {
        pairs,
        solvable: summary_solvable,
        bottleneck,
        hits: hits.len(),
        orbits: solver.orbits_explored(),
    };
    Ok((summary, hits))
}

/// Scans every labeled graph on `1..=n` for graphs that have a bottleneck
/// yet can serve both pairs by local operations and measurements.
pub fn scan_all(n: usize, designations: &Designations, options: SearchOptions) -> Result<ScanReport> {
    if !(4..=6).contains(&n) {
        return Err(Error::SizeBound { size: n, bound: 6 });
    }
    let list = designations.expand(n);
    let results: Vec<Result<(DesignationSummary, Vec<SearchReport>)>> = list
        .par_iter()
        .map(|&pairs| scan_designation(n, pairs, options))
        .collect();
    let mut summaries = Vec::new();
    let mut hits = Vec::new();
    for r in results {
        let (s, h) = r?;
        summaries.push(s);
        hits.extend(h);
    }
    let classes: BTreeSet<u64> = hits
        .iter()
        .map(|h| canonical_mask(&h.graph.to_graph().expect("valid")))
        .collect();
    Ok(ScanReport {
        n,
        bottleneck_definition: BOTTLENECK_DEFINITION.to_string(),
        graphs_scanned: 1u64 << (n * (n - 1) / 2),
        designations: summaries,
        hits,
        hit_classes: classes.len(),
    })
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Hit graphs per designation.
    pub fn hits_by_designation(&self) -> BTreeMap<[(Vertex, Vertex); 2], Vec<&SearchReport>> {
        let mut out: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for h in &self.hits {
            out.entry(h.pairs).or_default().push(h);
        }
        out
    }
}

/// Every witness must replay to exactly the two pair edges.
pub fn witness_replays(report: &SearchReport) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Ok(false);
    };
    let g = report.graph.to_graph()?;
    let fin = crate::protocols::apply_steps(&g, w)?;
    Ok(pairs_established(&fin, report.pairs) && fin.len() == 4)
}
