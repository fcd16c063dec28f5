//! GHZ extraction: three parties on any connected graph, four parties
//! along a repeater line.

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Vertex, VertexSet};
use crate::orbit::{lc_equivalent, vertex_minor, DEFAULT_ORBIT_BOUND};
use crate::pathfind::{all_shortest_paths, min_neighborhood_shortest_path, shortest_path_query, PathQuery, VertexPath};

use super::{ProtocolTranscript, Step};

fn z_clean(t: &mut ProtocolTranscript, around: &[Vertex], keep: &[Vertex]) -> Result<()> {
    let mut set = VertexSet::new();
    for &v in around {
        set.extend(t.current().neighborhood(v)?);
    }
    for v in set.into_iter().filter(|v| !keep.contains(v)) {
        t.push(Step::z(v))?;
    }
    Ok(())
}

/// True when the component of the targets is exactly the targets and
/// connected. Every connected three-vertex graph is LC-equivalent to the
/// GHZ3 star.
pub fn is_ghz3(g: &LabeledGraph, targets: [Vertex; 3]) -> Result<bool> {
    let want: VertexSet = targets.into_iter().collect();
    Ok(want.len() == 3 && g.component_of(targets[0])? == want)
}

/// True when the targets form their own component lying in the LC orbit
/// of the four-vertex star.
pub fn is_ghz4(g: &LabeledGraph, targets: [Vertex; 4]) -> Result<bool> {
    let want: VertexSet = targets.into_iter().collect();
    if want.len() != 4 || g.component_of(targets[0])? != want {
        return Ok(false);
    }
    let sub = g.induced_subgraph(&want)?;
    let labels: Vec<Vertex> = want.into_iter().collect();
    let star = LabeledGraph::star(labels[0], &labels[1..])?;
    Ok(lc_equivalent(&sub, &star)?.is_some())
}

/// Extracts a GHZ3 state on `a, b, c`, which must share a component.
///
/// If `c` lies on a shortest `a`–`b` path, the half towards `a` is fused
/// into `a` and the half towards `b` into `b`. Otherwise the interior of
/// an `a`–`b` leg is X-measured. If `c` was next to the leg, that usually
/// connects it already. If not, the nearer of `a`, `b` is joined to `c` by
/// a second X-measured leg. Everything else adjacent to the targets is
/// Z-measured at the end.
///
/// A leg whose measurements cut `c` off is retried with the other
/// shortest paths and then with the other pairings of the targets.
pub fn ghz3_extract(g: &LabeledGraph, a: Vertex, b: Vertex, c: Vertex) -> Result<ProtocolTranscript> {
    let targets = [a, b, c];
    for v in targets {
        g.index_of(v)?;
    }
    if a == b || a == c || b == c {
        return Err(Error::HypothesisUnmet("GHZ3 needs three distinct targets".into()));
    }
    let comp = g.component_of(a)?;
    for v in [b, c] {
        if !comp.contains(&v) {
            return Err(Error::Disconnected(a, v));
        }
    }
    for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
        let preferred = min_neighborhood_shortest_path(g, x, y)?.path;
        let mut t = ghz3_case_analysis(g, x, y, z, &preferred)?;
        if !is_ghz3(t.final_graph(), targets)? {
            for leg in all_shortest_paths(g, x, y, GHZ3_LEG_CAP)? {
                if leg != preferred {
                    t = ghz3_case_analysis(g, x, y, z, &leg)?;
                    if is_ghz3(t.final_graph(), targets)? {
                        break;
                    }
                }
            }
        }
        if is_ghz3(t.final_graph(), targets)? {
            t.set_terminals(targets.to_vec());
            return Ok(t);
        }
    }
    Err(Error::Internal(format!("GHZ3 extraction on ({a}, {b}, {c}) did not isolate the targets")))
}

/// Shortest paths tried per pairing before giving up.
const GHZ3_LEG_CAP: u64 = 64;

fn ghz3_case_analysis(
    g: &LabeledGraph,
    a: Vertex,
    b: Vertex,
    c: Vertex,
    path: &VertexPath,
) -> Result<ProtocolTranscript> {
    let targets = [a, b, c];
    let mut t = ProtocolTranscript::new(g.clone(), targets.to_vec());
    let dist = |x, y| g.distance(x, y).map(|d| d.expect("same component"));
    if dist(a, c)? + dist(c, b)? == dist(a, b)? {
        // `c` sits on a shortest a–b path: fuse each half into its outer end.
        let first = min_neighborhood_shortest_path(g, a, c)?.path;
        let second = min_neighborhood_shortest_path(g, c, b)?.path;
        for &v in first.interior() {
            t.push(Step::x(v, a))?;
        }
        for &v in second.interior().iter().rev() {
            t.push(Step::x(v, b))?;
        }
        z_clean(&mut t, &targets, &targets)?;
        return Ok(t);
    }
    for &v in path.interior() {
        t.push(Step::x(v, a))?;
    }
    if g.combined_neighborhood(path.vertices())?.contains(&c) {
        let mut attempt = t.clone();
        z_clean(&mut attempt, &targets, &targets)?;
        if is_ghz3(attempt.final_graph(), targets)? {
            return Ok(attempt);
        }
    }
    // Attach `c` through the nearer terminal.
    let cur = t.current().clone();
    let (Some(da), Some(db)) = (cur.distance(a, c)?, cur.distance(b, c)?) else {
        // this leg cut `c` off; the caller tries another one
        return Ok(t);
    };
    let order = if db <= da { [(b, a), (a, b)] } else { [(a, b), (b, a)] };
    for clear_first in [true, false] {
        for (y, z) in order {
            let mut attempt = t.clone();
            if clear_first {
                let clear: Vec<Vertex> = cur.neighbors(z)?.into_iter().filter(|&v| v != y && v != c).collect();
                for v in clear {
                    attempt.push(Step::z(v))?;
                }
            }
            let q = PathQuery::new(y, c).avoiding([z]);
            let Some(leg) = shortest_path_query(attempt.current(), &q)? else {
                continue;
            };
            for &v in leg.interior() {
                attempt.push(Step::x(v, y))?;
            }
            z_clean(&mut attempt, &targets, &targets)?;
            if is_ghz3(attempt.final_graph(), targets)? {
                return Ok(attempt);
            }
        }
    }
    Ok(t)
}

fn line_positions(line: &[Vertex], targets: &[Vertex; 4]) -> Option<[usize; 4]> {
    let mut pos: Vec<usize> = targets.iter().filter_map(|t| line.iter().position(|v| v == t)).collect();
    if pos.len() != 4 {
        return None;
    }
    pos.sort_unstable();
    Some([pos[0], pos[1], pos[2], pos[3]])
}

fn hypothesis(line: &[Vertex], targets: &[Vertex; 4]) -> Result<[usize; 4]> {
    let p = line_positions(line, targets)
        .ok_or_else(|| Error::HypothesisUnmet("the line does not contain all four targets".into()))?;
    if p[2] - p[1] < 2 {
        return Err(Error::HypothesisUnmet(
            "the line has no extra vertex between the second and third target".into(),
        ));
    }
    Ok(p)
}

fn is_induced_path(g: &LabeledGraph, line: &[Vertex]) -> Result<bool> {
    let set: VertexSet = line.iter().copied().collect();
    if set.len() != line.len() {
        return Ok(false);
    }
    let sub = g.induced_subgraph(&set)?;
    Ok(sub == LabeledGraph::path(line)?)
}

/// Measurements removing the line vertices outside the four-target
/// skeleton `t1 - t2 - m - t3 - t4`. Outer segments are fused into the
/// adjacent outer target by X-measurements. In the middle segment the
/// vertex next to `t3` is kept. The others go in adjacent pairs of X
/// measurements pivoting on `t2`, plus one Y-measurement when their
/// number is odd.
fn contraction_steps(line: &[Vertex], pos: [usize; 4]) -> (Vec<Step>, Vertex) {
    let mut steps = Vec::new();
    for &v in line[..pos[0]].iter() {
        steps.push(Step::z(v));
    }
    for &v in line[pos[3] + 1..].iter().rev() {
        steps.push(Step::z(v));
    }
    let (t1, t2, t4) = (line[pos[0]], line[pos[1]], line[pos[3]]);
    for &v in &line[pos[0] + 1..pos[1]] {
        steps.push(Step::x(v, t1));
    }
    for &v in line[pos[2] + 1..pos[3]].iter().rev() {
        steps.push(Step::x(v, t4));
    }
    let middle = &line[pos[1] + 1..pos[2]];
    let (drop, keep) = middle.split_at(middle.len() - 1);
    let mut rest = drop;
    if drop.len() % 2 == 1 {
        steps.push(Step::y(drop[0]));
        rest = &drop[1..];
    }
    for &v in rest {
        steps.push(Step::x(v, t2));
    }
    (steps, keep[0])
}

/// Cost of [`ghz4_extract`] on an induced line as
/// `(measurements, Y-measurements)`, or `None` if the line does not meet
/// the hypothesis or is not an induced path.
pub fn ghz4_line_cost(g: &LabeledGraph, targets: &[Vertex; 4], line: &[Vertex]) -> Option<(usize, usize)> {
    let pos = hypothesis(line, targets).ok()?;
    if !is_induced_path(g, line).ok()? {
        return None;
    }
    let on_line: VertexSet = line.iter().copied().collect();
    let outside = g.combined_neighborhood(line).ok()?.difference(&on_line).count();
    let (steps, _) = contraction_steps(line, pos);
    let y = steps.iter().filter(|s| matches!(s, Step::Measure(m) if m.basis == crate::Basis::Y)).count();
    Some((outside + steps.len() + 1, y))
}

/// Extracts a GHZ4 state on `targets` from a repeater line.
///
/// The line must contain the four targets with at least one extra vertex
/// between the second and the third of them. An induced line is isolated
/// by Z-measuring its neighborhood. Any other line must be a vertex-minor
/// of `g`, which is searched for when `|g|` is within the orbit bound.
/// The line is then contracted to five vertices `t1 - t2 - m - t3 - t4`,
/// `t2`, `m`, `t3` are locally complemented and `m` is Z-measured.
pub fn ghz4_extract(g: &LabeledGraph, targets: [Vertex; 4], line: &VertexPath) -> Result<ProtocolTranscript> {
    let mut sorted = targets;
    sorted.sort_unstable();
    for (i, &v) in sorted.iter().enumerate() {
        g.index_of(v)?;
        if i > 0 && sorted[i - 1] == v {
            return Err(Error::DuplicateVertex(v));
        }
    }
    let mut t = ProtocolTranscript::new(g.clone(), targets.to_vec());
    if is_ghz4(g, targets)? {
        return Ok(t);
    }
    let line = line.vertices();
    let pos = hypothesis(line, &sorted)?;
    for &v in line {
        g.index_of(v)?;
    }
    if is_induced_path(g, line)? {
        let on_line: VertexSet = line.iter().copied().collect();
        for &v in g.combined_neighborhood(line)?.difference(&on_line) {
            t.push(Step::z(v))?;
        }
    } else {
        if g.len() > DEFAULT_ORBIT_BOUND {
            return Err(Error::HypothesisUnmet(format!(
                "the line is not an induced path and a vertex-minor check needs at most {DEFAULT_ORBIT_BOUND} vertices"
            )));
        }
        let ops = vertex_minor(g, &LabeledGraph::path(line)?)?
            .ok_or_else(|| Error::HypothesisUnmet("the line is not a vertex-minor of the graph".into()))?;
        t.extend(ops)?;
    }
    let (steps, m) = contraction_steps(line, pos);
    t.extend(steps)?;
    let (t2, t3) = (line[pos[1]], line[pos[2]]);
    t.extend([Step::lc(t2), Step::lc(m), Step::lc(t3), Step::z(m)])?;
    if !is_ghz4(t.final_graph(), targets)? {
        return Err(Error::Internal("GHZ4 extraction did not end in the star class".into()));
    }
    Ok(t)
}
