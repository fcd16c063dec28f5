//! Named graphs shared by the tests, the acceptance suite and the CLI examples.

use crate::format::parse_edge_list;
use crate::graph::LabeledGraph;

pub const BUTTERFLY_EDGES: &str = include_str!("../fixtures/butterfly.edges");
pub const GHZ4_CLUSTER_EDGES: &str = include_str!("../fixtures/ghz4_cluster.edges");
pub const GHZ4_CLUSTER_GOLDEN: &str = include_str!("../fixtures/ghz4_cluster.transcript.json");

/// Two-pair graph where the pairs (1,6) and (2,5) must share the 3–4 link.
pub fn butterfly() -> LabeledGraph {
    parse_edge_list(BUTTERFLY_EDGES).expect("fixture parses")
}

/// 3×3 cluster, rows 1-2-3 / 4-5-6 / 7-8-9.
pub fn grid_cluster() -> LabeledGraph {
    LabeledGraph::grid(3, 3)
}

/// 12-vertex cluster for GHZ4 extraction on targets 1, 2, 4, 5.
pub fn ghz4_cluster() -> LabeledGraph {
    parse_edge_list(GHZ4_CLUSTER_EDGES).expect("fixture parses")
}

pub const GHZ4_TARGETS: [u32; 4] = [1, 2, 4, 5];
