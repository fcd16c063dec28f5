//! Graph generators for exhaustive and randomized checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{LabeledGraph, Vertex};

/// Vertex pairs of `1..=n` in the order used by [`labeled_graph`]:
/// `(1,2), (1,3), …, (1,n), (2,3), …`.
pub fn vertex_pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 1..=n as Vertex {
        for v in u + 1..=n as Vertex {
            out.push((u, v));
        }
    }
    out
}

/// The labeled graph on `1..=n` whose edges are the pairs selected by `mask`.
/// Pairs past the 64th are never selected.
pub fn labeled_graph(n: usize, mask: u64) -> LabeledGraph {
    let mut g = LabeledGraph::empty(n);
    for (k, (u, v)) in vertex_pairs(n).into_iter().enumerate() {
        if k < 64 && mask >> k & 1 == 1 {
            g.add_edge(u, v).expect("labels exist");
        }
    }
    g
}

/// All `2^(n(n-1)/2)` labeled graphs on `1..=n`, by mask.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
    assert!(n <= 11, "too many graphs to enumerate");
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |m| labeled_graph(n, m))
}

/// Random connected graph on `1..=n`: a random spanning tree plus every
/// other pair independently with probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> LabeledGraph {
    let mut order: Vec<Vertex> = (1..=n as Vertex).collect();
    order.shuffle(rng);
    let mut g = LabeledGraph::empty(n);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]).unwrap();
    }
    for (u, v) in vertex_pairs(n) {
        if !g.has_edge(u, v) && rng.gen_bool(p) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn mask_under(adj: &[u32], perm: &[usize]) -> u64 {
    let n = adj.len();
    let mut mask = 0u64;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            mask |= ((adj[perm[i]] >> perm[j] & 1) as u64) << k;
            k += 1;
        }
    }
    mask
}

/// Smallest edge mask over all relabelings (brute force, n ≤ 8).
pub fn canonical_mask(g: &LabeledGraph) -> u64 {
    let n = g.len();
    assert!(n <= 8, "brute-force canonical form is limited to 8 vertices");
    let adj: Vec<u32> = (0..n)
        .map(|i| g.neighbors_idx(i).fold(0u32, |acc, j| acc | 1 << j))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = mask_under(&adj, &perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(mask_under(&adj, &perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// One representative per isomorphism class of graphs on `1..=n`
/// (n ≤ 8), as canonical masks in ascending order. Built by adding a vertex
/// with every neighbor set to the representatives on `n - 1` vertices.
pub fn isomorphism_class_masks(n: usize) -> Vec<u64> {
    let mut reps = vec![0u64];
    for m in 2..=n {
        let mut next = std::collections::BTreeSet::new();
        for &r in &reps {
            let base = labeled_graph(m - 1, r);
            for s in 0..1u32 << (m - 1) {
                let mut g = LabeledGraph::empty(m);
                for (u, v) in base.edges() {
                    g.add_edge(u, v).unwrap();
                }
                for b in 0..m - 1 {
                    if s >> b & 1 == 1 {
                        g.add_edge(b as Vertex + 1, m as Vertex).unwrap();
                    }
                }
                next.insert(canonical_mask(&g));
            }
        }
        reps = next.into_iter().collect();
    }
    if n == 0 {
        return vec![0];
    }
    reps
}
