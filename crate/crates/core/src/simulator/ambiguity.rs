use serde::{Deserialize, Serialize};

use super::trace::{MeasurementRecord, SimMode, SimTrace};
use crate::error::Result;
use crate::graph_state::Graph;
use crate::rational::{self, Rational};
use crate::stabilizer::Outcome;
use crate::NodeId;

/// Two measurements that overlapped in time on nodes that could correct
/// each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousPair {
    pub first: NodeId,
    pub second: NodeId,
    pub first_interval: [String; 2],
    pub second_interval: [String; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityReport {
    pub pairs: Vec<AmbiguousPair>,
}

impl AmbiguityReport {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// When a measurement's graph effect counts as done: end of its slot in
/// slotted mode, its own completion otherwise.
fn effect_time(trace: &SimTrace, m: &MeasurementRecord) -> Rational {
    match (trace.mode, m.slot, trace.t_q) {
        (SimMode::Slotted, Some(slot), Some(t_q)) => t_q * Rational::from_integer(slot as i64),
        _ => m.end,
    }
}

fn interval(m: &MeasurementRecord) -> [String; 2] {
    [rational::format(&m.start), rational::format(&m.end)]
}

/// Flags every pair of measurements with overlapping `[start, end)`
/// intervals whose nodes are adjacent in the graph as evolved up to the
/// earlier start.
pub fn detect_ambiguity(trace: &SimTrace, g0: &Graph) -> Result<AmbiguityReport> {
    let ms = trace.measurements()?;
    let mut effects: Vec<(Rational, NodeId, &MeasurementRecord)> =
        ms.iter().map(|m| (effect_time(trace, m), m.node, m)).collect();
    effects.sort_by_key(|a| (a.0, a.1));

    let mut report = AmbiguityReport::default();
    let mut g = g0.clone();
    let mut applied = 0;
    // `ms` is ordered by start, so the graph only ever moves forward
    for (i, first) in ms.iter().enumerate() {
        while applied < effects.len() && effects[applied].0 <= first.start {
            let m = effects[applied].2;
            g = g.measure_zy(m.node, m.logical, Outcome::Plus)?.0;
            applied += 1;
        }
        for second in &ms[i + 1..] {
            let overlap = first.start < second.end && second.start < first.end;
            if overlap && g.is_alive(first.node) && g.is_alive(second.node) && g.has_edge(first.node, second.node) {
                report.pairs.push(AmbiguousPair {
                    first: first.node,
                    second: second.node,
                    first_interval: interval(first),
                    second_interval: interval(second),
                });
            }
        }
    }
    Ok(report)
}
