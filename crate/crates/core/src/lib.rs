//! Graph-state routing for quantum networks.
//!
//! The crate models graph states by their graphs and provides:
//!
//! - [`graph`]: labeled graphs with local complementation and the X/Y/Z
//!   Pauli-measurement rewrite rules;
//! - [`format`]: edge-list, graph6, DOT and JSON encodings;
//! - [`pathfind`]: shortest paths with minimum combined neighborhood;
//! - [`protocols`]: EPR extraction (repeater and X protocols), the
//!   measurement/local-complementation equivalence along a path, GHZ3 and
//!   GHZ4 extraction and the butterfly two-pair routine;
//! - [`orbit`]: LC orbits, LC equivalence and vertex-minor search on small
//!   graphs;
//! - [`bottleneck`]: exhaustive two-pair bottleneck scans;
//! - [`quantum`]: a dense state-vector oracle that checks the graph rules
//!   against actual quantum operations.

pub mod bottleneck;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod orbit;
pub mod pathfind;
pub mod protocols;
pub mod quantum;

pub use error::{Error, Result};
pub use graph::{Basis, EdgeSet, LabeledGraph, MeasurementStep, Vertex, VertexSet};
pub use pathfind::{PathChoice, PathQuery, VertexPath};
pub use protocols::{ProtocolTranscript, Step};
