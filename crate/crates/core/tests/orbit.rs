use std::collections::HashSet;

use gsr_core::enumerate::{all_labeled_graphs, labeled_graph, random_connected_graph};
use gsr_core::orbit::{find_repeater_line, lc_equivalent, lc_orbit, vertex_minor};
use gsr_core::protocols::{apply_steps, ghz4_extract, is_ghz4};
use gsr_core::{fixtures, LabeledGraph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every graph reachable by local complementations and vertex deletions.
fn closure(g: &LabeledGraph) -> HashSet<LabeledGraph> {
    let mut seen = HashSet::from([g.clone()]);
    let mut todo = vec![g.clone()];
    while let Some(cur) = todo.pop() {
        let mut next = Vec::new();
        for &v in cur.vertices() {
            next.push(cur.local_complement(v).unwrap());
            next.push(cur.remove_vertex(v).unwrap());
        }
        for h in next {
            if seen.insert(h.clone()) {
                todo.push(h);
            }
        }
    }
    seen
}

#[test]
fn vertex_minor_agrees_with_closure_search() {
    let subsets: [&[Vertex]; 3] = [&[1, 2, 3, 4], &[1, 3, 5], &[2, 5]];
    for g in all_labeled_graphs(5) {
        let reach = closure(&g);
        for keep in subsets {
            for mask in 0..1u64 << (keep.len() * (keep.len() - 1) / 2) {
                let h = labeled_graph(keep.len(), mask).relabel(|v| keep[v as usize - 1]).unwrap();
                let found = vertex_minor(&g, &h).unwrap();
                assert_eq!(found.is_some(), reach.contains(&h), "{g:?} -> {h:?}");
                if let Some(ops) = found {
                    assert_eq!(apply_steps(&g, &ops).unwrap(), h);
                }
            }
        }
    }
}

#[test]
fn vertex_minor_agrees_with_closure_on_six_vertex_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let g = labeled_graph(6, rng.gen_range(0..1 << 15));
        let reach = closure(&g);
        for mask in 0..64 {
            let h = labeled_graph(4, mask).relabel(|v| [1, 3, 4, 6][v as usize - 1]).unwrap();
            assert_eq!(vertex_minor(&g, &h).unwrap().is_some(), reach.contains(&h));
        }
    }
}

#[test]
fn orbits_are_closed_and_witnesses_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(2..=7);
        let g = random_connected_graph(&mut rng, n, 0.3);
        let o = lc_orbit(&g).unwrap();
        for (i, m) in o.members().iter().enumerate() {
            assert_eq!(&g.local_complement_seq(&o.witness(i)).unwrap(), m);
            for &a in m.vertices() {
                assert!(o.contains(&m.local_complement(a).unwrap()));
            }
        }
        // the canonical key does not depend on the seed
        let other = &o.members()[o.len() - 1];
        assert_eq!(lc_orbit(other).unwrap().canonical_key(), o.canonical_key());
    }
}

#[test]
fn equivalence_is_symmetric_and_transitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let g = random_connected_graph(&mut rng, 6, 0.3);
        let seq: Vec<Vertex> = (0..4).map(|_| rng.gen_range(1..=6)).collect();
        let h = g.local_complement_seq(&seq).unwrap();
        let w = lc_equivalent(&g, &h).unwrap().unwrap();
        let back: Vec<Vertex> = w.iter().rev().copied().collect();
        assert_eq!(h.local_complement_seq(&back).unwrap(), g);
        let k = h.local_complement(3).unwrap();
        let w2 = lc_equivalent(&h, &k).unwrap().unwrap();
        let joined: Vec<Vertex> = w.iter().chain(&w2).copied().collect();
        assert_eq!(g.local_complement_seq(&joined).unwrap(), k);
    }
}

#[test]
fn four_vertex_classes() {
    // Each connected graph on four labeled vertices is either in the star
    // orbit or in the orbit of one of the twelve labeled paths.
    let star = lc_orbit(&LabeledGraph::star(1, &[2, 3, 4]).unwrap()).unwrap();
    let mut paths = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                let Some(d) = (1..=4).find(|v| ![a, b, c].contains(v)) else {
                    continue;
                };
                let order = [a, b, c, d];
                if a < d && (1..=4).all(|v| order.contains(&v)) {
                    paths.push(lc_orbit(&LabeledGraph::path(&order).unwrap()).unwrap());
                }
            }
        }
    }
    assert_eq!(paths.len(), 12);
    for g in all_labeled_graphs(4).filter(|g| g.is_connected()) {
        let in_paths = paths.iter().filter(|o| o.contains(&g)).count();
        assert!(star.contains(&g) != (in_paths > 0), "{g:?}");
    }
}

#[test]
fn cluster_line_is_found_and_used() {
    let g = fixtures::ghz4_cluster();
    let line = find_repeater_line(&g, fixtures::GHZ4_TARGETS).unwrap().unwrap();
    assert_eq!(line.vertices(), &[1, 6, 7, 2, 3, 4, 12, 11, 5]);
    let t = ghz4_extract(&g, fixtures::GHZ4_TARGETS, &line).unwrap();
    assert!(is_ghz4(t.final_graph(), fixtures::GHZ4_TARGETS).unwrap());
}

#[test]
fn brute_force_line_for_non_induced_case() {
    // The 5-line with a chord 1-3 has no induced line through 1, 2, 4, 5
    // with a gap in the middle, but LC at 2 removes the chord.
    let g = LabeledGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 5), (1, 3)]).unwrap();
    let line = find_repeater_line(&g, [1, 2, 4, 5]).unwrap().expect("vertex-minor line");
    let t = ghz4_extract(&g, [1, 2, 4, 5], &line).unwrap();
    assert!(is_ghz4(t.final_graph(), [1, 2, 4, 5]).unwrap());
    // The 5-cycle is in a different LC class from every 5-line.
    let c5 = LabeledGraph::cycle(&[1, 2, 3, 4, 5]).unwrap();
    assert_eq!(find_repeater_line(&c5, [1, 2, 4, 5]).unwrap(), None);
}
