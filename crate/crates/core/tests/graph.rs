use std::collections::BTreeSet;

use gsr_core::enumerate::vertex_pairs;
use gsr_core::format::*;
use gsr_core::orbit::lc_equivalent;
use gsr_core::pathfind::*;
use gsr_core::{LabeledGraph, Vertex};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = vertex_pairs(n);
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |bits| {
            let edges = pairs.iter().zip(bits).filter(|(_, b)| *b).map(|(&e, _)| e);
            LabeledGraph::from_edges(1..=n as Vertex, edges).unwrap()
        })
    })
}

/// Local complementation straight from the definition, on an edge set.
fn lc_naive(g: &LabeledGraph, a: Vertex) -> LabeledGraph {
    let mut edges: BTreeSet<(Vertex, Vertex)> = g.edges().into_iter().collect();
    let nb = g.neighbors(a).unwrap();
    for (i, &x) in nb.iter().enumerate() {
        for &y in &nb[i + 1..] {
            if !edges.remove(&(x, y)) {
                edges.insert((x, y));
            }
        }
    }
    LabeledGraph::from_edges(g.vertices().iter().copied(), edges).unwrap()
}

/// All simple paths from `a` to `b` with exactly `len` edges.
fn brute_paths(g: &LabeledGraph, a: Vertex, b: Vertex, len: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut stack = vec![a];
    fn go(g: &LabeledGraph, b: Vertex, len: usize, stack: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let cur = *stack.last().unwrap();
        if stack.len() == len + 1 {
            if cur == b {
                out.push(stack.clone());
            }
            return;
        }
        for u in g.neighbors(cur).unwrap() {
            if !stack.contains(&u) {
                stack.push(u);
                go(g, b, len, stack, out);
                stack.pop();
            }
        }
    }
    go(g, b, len, &mut stack, &mut out);
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lc_is_an_involution_and_matches_definition(g in graph_strategy(10)) {
        for &a in g.vertices() {
            let h = g.local_complement(a).unwrap();
            prop_assert!(h.check_invariants());
            prop_assert_eq!(&h, &lc_naive(&g, a));
            prop_assert_eq!(h.local_complement(a).unwrap(), g.clone());
        }
    }

    #[test]
    fn measurement_rules_agree(g in graph_strategy(9)) {
        for &v in g.vertices() {
            let y = g.measure_y(v).unwrap();
            prop_assert_eq!(&y, &g.local_complement(v).unwrap().measure_z(v).unwrap());
            let nb = g.neighbors(v).unwrap();
            if nb.is_empty() {
                prop_assert_eq!(g.measure_x(v, None).unwrap(), g.measure_z(v).unwrap());
                continue;
            }
            let results: Vec<LabeledGraph> =
                nb.iter().map(|&w| g.measure_x(v, Some(w)).unwrap()).collect();
            for (&w, r) in nb.iter().zip(&results) {
                prop_assert_eq!(r, &g.measure_x_by_lc(v, Some(w)).unwrap());
            }
            // Different pivots differ only by local complementations.
            if g.len() <= 8 {
                for r in &results[1..] {
                    prop_assert!(lc_equivalent(&results[0], r).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn formats_round_trip(g in graph_strategy(12)) {
        prop_assert_eq!(parse_graph6(&to_graph6(&g), 1).unwrap(), g.clone());
        prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g.clone());
        let doc: GraphDoc = serde_json::from_str(&serde_json::to_string(&GraphDoc::from(&g)).unwrap()).unwrap();
        prop_assert_eq!(doc.to_graph().unwrap(), g);
    }

    #[test]
    fn shortest_paths_match_brute_force(g in graph_strategy(7)) {
        let n = g.len() as Vertex;
        for a in 1..=n {
            for b in a + 1..=n {
                let Some(d) = g.distance(a, b).unwrap() else {
                    prop_assert_eq!(count_shortest_paths(&g, a, b).unwrap(), 0);
                    continue;
                };
                let want = brute_paths(&g, a, b, d);
                let got: Vec<Vec<Vertex>> = all_shortest_paths(&g, a, b, DEFAULT_ENUMERATION_CAP)
                    .unwrap()
                    .iter()
                    .map(|p| p.vertices().to_vec())
                    .collect();
                prop_assert_eq!(&got, &want);
                prop_assert_eq!(count_shortest_paths(&g, a, b).unwrap(), want.len() as u64);
                let first = shortest_path(&g, a, b).unwrap().unwrap();
                prop_assert_eq!(first.vertices(), want[0].as_slice());
                let best = want.iter().map(|p| g.combined_neighborhood(p).unwrap().len()).min().unwrap();
                let choice = min_neighborhood_shortest_path(&g, a, b).unwrap();
                prop_assert!(choice.exact);
                prop_assert_eq!(choice.combined_neighborhood.len(), best);
                prop_assert!(is_shortest_path(&g, choice.path.vertices()));
            }
        }
    }
}

#[test]
fn avoiding_query_skips_forbidden_vertices() {
    let g = LabeledGraph::grid(3, 3);
    let p = shortest_path_query(&g, &PathQuery::new(1, 9).avoiding([2, 5])).unwrap().unwrap();
    assert_eq!(p.vertices(), &[1, 4, 7, 8, 9]);
    let none = shortest_path_query(&g, &PathQuery::new(1, 9).avoiding([2, 4])).unwrap();
    assert_eq!(none, None);
}
