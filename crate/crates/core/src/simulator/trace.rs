use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ambiguity::AmbiguityReport;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::stabilizer::{Outcome, Pauli};
use crate::temporal::Task;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Slotted,
    Async,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EventKind {
    FeedforwardArrive,
    MeasureStart {
        logical: Pauli,
        physical: Pauli,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slot: Option<u32>,
    },
    MeasureEnd {
        outcome: Outcome,
    },
    FeedbackArrive {
        origin: NodeId,
        outcome: Outcome,
        toward: NodeId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slot: Option<u32>,
    },
}

impl EventKind {
    /// Tie-break rank among events at the same time and node.
    pub(crate) fn rank(&self) -> u8 {
        match self {
            EventKind::FeedforwardArrive => 0,
            EventKind::MeasureEnd { .. } => 1,
            EventKind::MeasureStart { .. } => 2,
            EventKind::FeedbackArrive { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimEvent {
    #[serde(with = "rational::serde_text")]
    pub t: Rational,
    pub node: NodeId,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    AmbiguityDetected(AmbiguityReport),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub mode: SimMode,
    pub seed: Option<u64>,
    pub task: Task,
    pub n: usize,
    pub t_q: Option<Rational>,
    pub events: Vec<SimEvent>,
    /// Frame exponent per end node after correction.
    pub final_frames: BTreeMap<NodeId, u8>,
    pub verdict: Verdict,
}

/// One physical measurement as recorded in a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub node: NodeId,
    pub slot: Option<u32>,
    pub logical: Pauli,
    pub physical: Pauli,
    pub start: Rational,
    pub end: Rational,
    pub outcome: Outcome,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Summary {
    mode: SimMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    task: [NodeId; 2],
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_q: Option<String>,
    final_frames: BTreeMap<NodeId, u8>,
    verdict: Verdict,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryLine {
    summary: Summary,
}

impl SimTrace {
    /// Completed measurements, ordered by start time then node.
    pub fn measurements(&self) -> Result<Vec<MeasurementRecord>> {
        let mut open: BTreeMap<NodeId, (Rational, Pauli, Pauli, Option<u32>)> = BTreeMap::new();
        let mut out = Vec::new();
        for e in &self.events {
            match e.kind {
                EventKind::MeasureStart {
                    logical,
                    physical,
                    slot,
                } => {
                    open.insert(e.node, (e.t, logical, physical, slot));
                }
                EventKind::MeasureEnd { outcome } => {
                    let (start, logical, physical, slot) = open
                        .remove(&e.node)
                        .ok_or_else(|| Error::TraceIncomplete(format!("node {} ends without starting", e.node)))?;
                    out.push(MeasurementRecord {
                        node: e.node,
                        slot,
                        logical,
                        physical,
                        start,
                        end: e.t,
                        outcome,
                    });
                }
                _ => {}
            }
        }
        if let Some(node) = open.keys().next() {
            return Err(Error::TraceIncomplete(format!("node {node} never finished measuring")));
        }
        out.sort_by_key(|a| (a.start, a.node));
        Ok(out)
    }

    /// Feedback received by `end` (as the final hop): `(time, origin, outcome, slot)`.
    pub fn feedback_at(&self, end: NodeId) -> Vec<(Rational, NodeId, Outcome, Option<u32>)> {
        self.events
            .iter()
            .filter_map(|e| match e.kind {
                EventKind::FeedbackArrive {
                    origin,
                    outcome,
                    toward,
                    slot,
                } if e.node == end && toward == end => Some((e.t, origin, outcome, slot)),
                _ => None,
            })
            .collect()
    }

    /// JSON lines: one event per line, then a summary object.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = writeln!(out, "{}", serde_json::to_string(e).expect("event serialises"));
        }
        let summary = SummaryLine {
            summary: Summary {
                mode: self.mode,
                seed: self.seed,
                task: [self.task.s, self.task.r],
                n: self.n,
                t_q: self.t_q.as_ref().map(rational::format),
                final_frames: self.final_frames.clone(),
                verdict: self.verdict.clone(),
            },
        };
        let _ = writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serialises"));
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let (last, body) = lines
            .split_last()
            .ok_or_else(|| Error::TraceIncomplete("empty trace".into()))?;
        let events = body
            .iter()
            .map(|l| serde_json::from_str::<SimEvent>(l).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        let SummaryLine { summary: s } = serde_json::from_str(last)?;
        Ok(SimTrace {
            mode: s.mode,
            seed: s.seed,
            task: Task::new(s.task[0], s.task[1])?,
            n: s.n,
            t_q: s.t_q.as_deref().map(rational::parse).transpose()?,
            events,
            final_frames: s.final_frames,
            verdict: s.verdict,
        })
    }
}

/// Outcomes as seen at `end`, ordered by arrival (ties: slot, then origin).
pub fn infer_order(trace: &SimTrace, end: NodeId) -> Result<Vec<(NodeId, Outcome)>> {
    if !trace.task.is_end(end) {
        return Err(Error::NotAnEndNode(end));
    }
    let mut got = trace.feedback_at(end);
    got.sort_by_key(|a| (a.0, a.3, a.1));
    Ok(got
        .into_iter()
        .map(|(_, origin, outcome, _)| (origin, outcome))
        .collect())
}
