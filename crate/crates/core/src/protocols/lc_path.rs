//! Sequential X-measurements along a shortest path rewritten as local
//! complementations followed by Z-measurements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Vertex};
use crate::pathfind::is_shortest_path;

use super::Step;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LcDecomposition {
    /// `(v1, v2, …, v(k-1), v1)`.
    pub lcs: Vec<Vertex>,
    /// The interior, in path order.
    pub z_measurements: Vec<Vertex>,
}

impl LcDecomposition {
    pub fn apply(&self, g: &LabeledGraph) -> Result<LabeledGraph> {
        let mut cur = g.local_complement_seq(&self.lcs)?;
        for &v in &self.z_measurements {
            cur = cur.measure_z(v)?;
        }
        Ok(cur)
    }

    pub fn steps(&self) -> Vec<Step> {
        let lcs = self.lcs.iter().map(|&v| Step::lc(v));
        lcs.chain(self.z_measurements.iter().map(|&v| Step::z(v))).collect()
    }
}

/// Decomposes the X-measurement of the interior of `path` (pivot `v1`).
/// The path must be a shortest path of `g`.
pub fn path_lc_decomposition(g: &LabeledGraph, path: &[Vertex]) -> Result<LcDecomposition> {
    for &v in path {
        g.index_of(v)?;
    }
    if path.len() < 2 || !is_shortest_path(g, path) {
        return Err(Error::HypothesisUnmet(format!("{path:?} is not a shortest path")));
    }
    let k = path.len();
    let mut lcs: Vec<Vertex> = path[..k - 1].to_vec();
    lcs.push(path[0]);
    Ok(LcDecomposition { lcs, z_measurements: path[1..k - 1].to_vec() })
}

/// Sequential X-measurements of the interior with pivot `v1`.
pub fn sequential_x(g: &LabeledGraph, path: &[Vertex]) -> Result<LabeledGraph> {
    let mut cur = g.clone();
    for &v in &path[1..path.len().saturating_sub(1)] {
        cur = cur.measure_x(v, Some(path[0]))?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_line() {
        let g = LabeledGraph::path(&[1, 2, 3]).unwrap();
        let d = path_lc_decomposition(&g, &[1, 2, 3]).unwrap();
        assert_eq!(d.lcs, vec![1, 2, 1]);
        assert_eq!(d.z_measurements, vec![2]);
        assert_eq!(d.apply(&g).unwrap().edges(), vec![(1, 3)]);
    }

    #[test]
    fn single_edge_is_two_lcs_at_the_source() {
        let g = LabeledGraph::grid(2, 2);
        let d = path_lc_decomposition(&g, &[1, 2]).unwrap();
        assert_eq!(d.lcs, vec![1, 1]);
        assert_eq!(d.apply(&g).unwrap(), g);
    }

    #[test]
    fn grid_centre_path() {
        let g = LabeledGraph::grid(3, 3);
        let p = [1, 2, 5, 6, 9];
        let d = path_lc_decomposition(&g, &p).unwrap();
        assert_eq!(d.lcs, vec![1, 2, 5, 6, 1]);
        assert_eq!(d.apply(&g).unwrap(), sequential_x(&g, &p).unwrap());
    }

    #[test]
    fn rejects_non_shortest() {
        let g = LabeledGraph::cycle(&[1, 2, 3, 4, 5]).unwrap();
        assert!(matches!(path_lc_decomposition(&g, &[1, 2, 3, 4]), Err(Error::HypothesisUnmet(_))));
    }
}
