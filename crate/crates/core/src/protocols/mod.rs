//! Routing protocols on graph states. Every protocol returns a transcript
//! that replays through the graph rewrite rules.

mod epr;
mod ghz;
mod lc_path;
mod transcript;
mod two_pair;

pub use epr::{
    compare_protocols, neighborhood_recursion_violations, repeater_protocol, repeater_protocol_on_path,
    sequential_x_snapshots, x_protocol, x_protocol_on_path, EprResult, ProtocolComparison,
};
pub use ghz::{ghz3_extract, ghz4_extract, ghz4_line_cost, is_ghz3, is_ghz4};
pub use lc_path::{path_lc_decomposition, sequential_x, LcDecomposition};
pub use transcript::{apply_steps, ProtocolTranscript, Step, StepCounts, TranscriptDoc};
pub use two_pair::{
    butterfly_route, pairs_established, route_two_pairs, TwoPairOutcome, BUTTERFLY_PAIRS, BUTTERFLY_SEQUENCE,
};
