use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::trace::{SimMode, SimTrace};
use crate::error::{Error, Result};
use crate::graph_state::{FrameTracker, Graph, PauliFrame};
use crate::rational::{self, Rational};
use crate::stabilizer::{Outcome, Pauli};
use crate::temporal::Schedule;
use crate::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsumedOutcome {
    pub node: NodeId,
    pub physical: Outcome,
    pub logical: Outcome,
}

/// What an end node did after all relevant outcomes of one slot arrived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotStep {
    pub slot: u32,
    #[serde(with = "rational::serde_text")]
    pub ready_at: Rational,
    pub consumed: Vec<ConsumedOutcome>,
    pub exponent: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamingResult {
    pub end: NodeId,
    pub steps: Vec<SlotStep>,
    pub frame: PauliFrame,
}

impl StreamingResult {
    pub fn exponent(&self) -> u8 {
        self.frame.exponent(self.end)
    }
}

/// Measuring nodes in logical order `(slot, node)` with their bases.
fn ordered(sched: &Schedule) -> Vec<(NodeId, u32, Pauli)> {
    let mut v: Vec<_> = sched
        .measurements()
        .map(|(n, s, b)| (n, s, b.pauli().expect("measuring")))
        .collect();
    v.sort_by_key(|&(n, s, _)| (s, n));
    v
}

/// Outcomes `end` needs: those whose corrections can reach `end`, plus,
/// recursively, earlier outcomes that decide how a needed `Y` outcome is
/// read. Correction targets are the measured node's neighborhood at that
/// moment, whatever the outcome.
pub fn relevant_nodes(sched: &Schedule, g0: &Graph, end: NodeId) -> Result<BTreeSet<NodeId>> {
    let order = ordered(sched);
    let mut g = g0.clone();
    let mut targets: Vec<BTreeSet<NodeId>> = Vec::with_capacity(order.len());
    for &(node, _, basis) in &order {
        targets.push(g.neighbors(node).clone());
        g = g.measure_zy(node, basis, Outcome::Plus)?.0;
    }
    let mut relevant = BTreeSet::new();
    for i in (0..order.len()).rev() {
        let needed = targets[i].contains(&end)
            || order[i + 1..]
                .iter()
                .any(|&(m, _, b)| b == Pauli::Y && relevant.contains(&m) && targets[i].contains(&m));
        if needed {
            relevant.insert(order[i].0);
        }
    }
    Ok(relevant)
}

/// Latest time the outcome of `origin` (measured in `slot`) may reach `end`:
/// it leaves at the first classical boundary after the slot and needs one
/// classical slot per hop.
pub fn feedback_deadline(t_q: Rational, slot: u32, origin: NodeId, end: NodeId) -> Rational {
    let depart = rational::ceil(&(t_q * Rational::from_integer(slot as i64)));
    Rational::from_integer(depart + origin.abs_diff(end) as i64)
}

/// Replays `(node, logical basis, physical outcome)` in the given order.
pub fn interpret(g0: &Graph, sequence: &[(NodeId, Pauli, Outcome)]) -> Result<FrameTracker> {
    let mut t = FrameTracker::new(g0.clone());
    for &(node, basis, physical) in sequence {
        t.measure(node, basis, physical)?;
    }
    Ok(t)
}

/// Offline interpretation of a slotted trace in `(slot, node)` order.
pub fn batch_frame(trace: &SimTrace, g0: &Graph) -> Result<FrameTracker> {
    let mut ms = trace.measurements()?;
    match trace.mode {
        SimMode::Slotted => ms.sort_by_key(|m| (m.slot, m.node)),
        SimMode::Async => ms.sort_by_key(|a| (a.end, a.node)),
    }
    let seq: Vec<_> = ms.iter().map(|m| (m.node, m.logical, m.outcome)).collect();
    interpret(g0, &seq)
}

/// Slot-by-slot correction at one end node. Slot `S+1` is only processed
/// once every relevant outcome of slot `S` is in; a relevant outcome that
/// misses its deadline is reported as missing.
pub fn streaming_corrector(trace: &SimTrace, sched: &Schedule, g0: &Graph, end: NodeId) -> Result<StreamingResult> {
    if trace.mode != SimMode::Slotted {
        return Err(Error::TraceIncomplete(
            "streaming correction needs a slotted trace".into(),
        ));
    }
    if !trace.task.is_end(end) {
        return Err(Error::NotAnEndNode(end));
    }
    let t_q = trace
        .t_q
        .ok_or_else(|| Error::TraceIncomplete("slotted trace without t_q".into()))?;
    let relevant = relevant_nodes(sched, g0, end)?;
    let mut arrivals: BTreeMap<NodeId, (Rational, Outcome, Option<u32>)> = BTreeMap::new();
    for (t, origin, outcome, slot) in trace.feedback_at(end) {
        arrivals.entry(origin).or_insert((t, outcome, slot));
    }

    let mut tracker = FrameTracker::new(g0.clone());
    let mut by_slot: BTreeMap<u32, Vec<(NodeId, Pauli)>> = BTreeMap::new();
    for (node, slot, basis) in ordered(sched) {
        by_slot.entry(slot).or_default().push((node, basis));
    }
    let mut steps = Vec::new();
    let mut ready_at = rational::zero();
    for (slot, nodes) in by_slot {
        let mut consumed = Vec::new();
        for (node, basis) in nodes {
            if !relevant.contains(&node) {
                // target sets do not depend on the outcome
                tracker.measure(node, basis, Outcome::Plus)?;
                continue;
            }
            let deadline = feedback_deadline(t_q, slot, node, end);
            let missing = || Error::MissingFeedback {
                node,
                slot,
                end,
                deadline: rational::format(&deadline),
            };
            let &(t, physical, got_slot) = arrivals.get(&node).ok_or_else(missing)?;
            if t > deadline {
                return Err(missing());
            }
            if got_slot != Some(slot) {
                return Err(Error::TraceIncomplete(format!(
                    "feedback from node {node} carries slot {got_slot:?}, schedule says {slot}"
                )));
            }
            ready_at = ready_at.max(t);
            let step = tracker.measure(node, basis, physical)?;
            consumed.push(ConsumedOutcome {
                node,
                physical,
                logical: step.logical_outcome,
            });
        }
        steps.push(SlotStep {
            slot,
            ready_at,
            consumed,
            exponent: tracker.frame().exponent(end),
        });
    }
    Ok(StreamingResult {
        end,
        steps,
        frame: tracker.frame().clone(),
    })
}
