use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::GraphDoc;
use crate::graph::{Basis, LabeledGraph, MeasurementStep, Vertex};

/// One protocol step: a free local complementation or a Pauli measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Step {
    Lc { vertex: Vertex },
    Measure(MeasurementStep),
}

impl Step {
    pub fn lc(vertex: Vertex) -> Self {
        Step::Lc { vertex }
    }

    pub fn z(vertex: Vertex) -> Self {
        Step::Measure(MeasurementStep::z(vertex))
    }

    pub fn y(vertex: Vertex) -> Self {
        Step::Measure(MeasurementStep::y(vertex))
    }

    pub fn x(vertex: Vertex, neighbor: Vertex) -> Self {
        Step::Measure(MeasurementStep::x(vertex, Some(neighbor)))
    }

    pub fn vertex(&self) -> Vertex {
        match self {
            Step::Lc { vertex } => *vertex,
            Step::Measure(m) => m.vertex,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Step::Measure(_))
    }

    pub fn apply(&self, g: &LabeledGraph) -> Result<LabeledGraph> {
        match self {
            Step::Lc { vertex } => g.local_complement(*vertex),
            Step::Measure(m) => g.measure(m),
        }
    }
}

/// Replays `steps` from `g`.
pub fn apply_steps(g: &LabeledGraph, steps: &[Step]) -> Result<LabeledGraph> {
    let mut cur = g.clone();
    for s in steps {
        cur = s.apply(&cur)?;
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub measurements: usize,
    pub lc: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl StepCounts {
    pub fn of(steps: &[Step]) -> Self {
        let mut c = StepCounts::default();
        for s in steps {
            match s {
                Step::Lc { .. } => c.lc += 1,
                Step::Measure(m) => {
                    c.measurements += 1;
                    match m.basis {
                        Basis::X => c.x += 1,
                        Basis::Y => c.y += 1,
                        Basis::Z => c.z += 1,
                    }
                }
            }
        }
        c
    }
}

/// Record of a protocol run. `snapshots[t]` is the graph after step `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolTranscript {
    initial: LabeledGraph,
    steps: Vec<Step>,
    snapshots: Vec<LabeledGraph>,
    terminals: Vec<Vertex>,
}

impl ProtocolTranscript {
    pub fn new(initial: LabeledGraph, terminals: Vec<Vertex>) -> Self {
        ProtocolTranscript { initial, steps: Vec::new(), snapshots: Vec::new(), terminals }
    }

    /// Applies a step to the current graph and records it.
    pub fn push(&mut self, step: Step) -> Result<&LabeledGraph> {
        let next = step.apply(self.current())?;
        self.steps.push(step);
        self.snapshots.push(next);
        Ok(self.snapshots.last().unwrap())
    }

    pub fn extend(&mut self, steps: impl IntoIterator<Item = Step>) -> Result<()> {
        for s in steps {
            self.push(s)?;
        }
        Ok(())
    }

    pub fn initial(&self) -> &LabeledGraph {
        &self.initial
    }

    pub fn current(&self) -> &LabeledGraph {
        self.snapshots.last().unwrap_or(&self.initial)
    }

    pub fn final_graph(&self) -> &LabeledGraph {
        self.current()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn snapshots(&self) -> &[LabeledGraph] {
        &self.snapshots
    }

    /// Graph before step `t` (`t = 0` is the initial graph).
    pub fn graph_before(&self, t: usize) -> &LabeledGraph {
        if t == 0 {
            &self.initial
        } else {
            &self.snapshots[t - 1]
        }
    }

    pub fn set_terminals(&mut self, terminals: Vec<Vertex>) {
        self.terminals = terminals;
    }

    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn counts(&self) -> StepCounts {
        StepCounts::of(&self.steps)
    }

    pub fn measurement_count(&self) -> usize {
        self.counts().measurements
    }

    /// Replays every step from the initial graph and checks each snapshot.
    pub fn validate(&self) -> Result<()> {
        let mut cur = self.initial.clone();
        for (t, (step, snap)) in self.steps.iter().zip(&self.snapshots).enumerate() {
            cur = step.apply(&cur)?;
            if &cur != snap {
                return Err(Error::Internal(format!("snapshot {t} does not follow from its step")));
            }
        }
        Ok(())
    }

    pub fn to_doc(&self, include_snapshots: bool) -> TranscriptDoc {
        TranscriptDoc {
            initial: GraphDoc::from(&self.initial),
            steps: self.steps.clone(),
            snapshots: include_snapshots.then(|| self.snapshots.iter().map(GraphDoc::from).collect()),
            final_graph: GraphDoc::from(self.final_graph()),
            counts: self.counts(),
            terminals: self.terminals.clone(),
        }
    }

    pub fn to_json(&self, include_snapshots: bool) -> String {
        serde_json::to_string_pretty(&self.to_doc(include_snapshots)).expect("transcript serializes")
    }

    /// Rebuilds a transcript by replaying the document's steps. The stored
    /// final graph, counts and snapshots must agree with the replay.
    pub fn from_doc(doc: &TranscriptDoc) -> Result<Self> {
        let mut t = ProtocolTranscript::new(doc.initial.to_graph()?, doc.terminals.clone());
        t.extend(doc.steps.iter().copied())?;
        if t.final_graph() != &doc.final_graph.to_graph()? || t.counts() != doc.counts {
            return Err(Error::Parse("transcript does not replay to its recorded final graph".into()));
        }
        if let Some(snaps) = &doc.snapshots {
            let replayed: Vec<GraphDoc> = t.snapshots.iter().map(GraphDoc::from).collect();
            if &replayed != snaps {
                return Err(Error::Parse("transcript snapshots do not match the replay".into()));
            }
        }
        Ok(t)
    }
}

/// Serialized transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub initial: GraphDoc,
    pub steps: Vec<Step>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<GraphDoc>>,
    #[serde(rename = "final")]
    pub final_graph: GraphDoc,
    pub counts: StepCounts,
    pub terminals: Vec<Vertex>,
}
