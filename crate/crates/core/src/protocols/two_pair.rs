//! Serving two terminal pairs at once from one graph state.

use crate::error::Result;
use crate::graph::{LabeledGraph, Vertex};

use super::{ProtocolTranscript, Step};

/// LC 1, LC 3, LC 4, then Z on 3 and 4: routes pairs (1,6) and (2,5) on
/// the butterfly graph.
pub const BUTTERFLY_SEQUENCE: [Step; 5] = [
    Step::Lc { vertex: 1 },
    Step::Lc { vertex: 3 },
    Step::Lc { vertex: 4 },
    Step::Measure(crate::graph::MeasurementStep { vertex: 3, basis: crate::Basis::Z, neighbor: None }),
    Step::Measure(crate::graph::MeasurementStep { vertex: 4, basis: crate::Basis::Z, neighbor: None }),
];

pub const BUTTERFLY_PAIRS: [(Vertex, Vertex); 2] = [(1, 6), (2, 5)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPairOutcome {
    pub transcript: ProtocolTranscript,
    pub success: bool,
}

/// True when the edges touching the four terminals are exactly the two
/// pair edges.
pub fn pairs_established(g: &LabeledGraph, pairs: [(Vertex, Vertex); 2]) -> bool {
    let terminals = [pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1];
    if terminals.iter().any(|&v| !g.contains(v)) {
        return false;
    }
    let mut touching: Vec<(Vertex, Vertex)> = g
        .edges()
        .into_iter()
        .filter(|(u, v)| terminals.contains(u) || terminals.contains(v))
        .collect();
    touching.sort_unstable();
    let mut want: Vec<(Vertex, Vertex)> = pairs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    want.sort_unstable();
    touching == want
}

/// Replays `steps` and reports whether both pairs end up as isolated edges.
pub fn route_two_pairs(g: &LabeledGraph, pairs: [(Vertex, Vertex); 2], steps: &[Step]) -> Result<TwoPairOutcome> {
    let terminals = vec![pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1];
    let mut transcript = ProtocolTranscript::new(g.clone(), terminals);
    transcript.extend(steps.iter().copied())?;
    let success = pairs_established(transcript.final_graph(), pairs);
    Ok(TwoPairOutcome { transcript, success })
}

/// The butterfly sequence on `g` with the pairs (1,6) and (2,5).
pub fn butterfly_route(g: &LabeledGraph) -> Result<TwoPairOutcome> {
    route_two_pairs(g, BUTTERFLY_PAIRS, &BUTTERFLY_SEQUENCE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_fails() {
        let out = butterfly_route(&LabeledGraph::empty(6)).unwrap();
        assert!(!out.success);
        assert_eq!(out.transcript.measurement_count(), 2);
    }

    #[test]
    fn pair_predicate() {
        let g = LabeledGraph::from_edges(1..=6, [(1, 6), (2, 5)]).unwrap();
        assert!(pairs_established(&g, BUTTERFLY_PAIRS));
        let g = LabeledGraph::from_edges(1..=6, [(1, 6), (2, 5), (5, 3)]).unwrap();
        assert!(!pairs_established(&g, BUTTERFLY_PAIRS));
    }
}
