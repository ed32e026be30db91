use std::collections::BTreeMap;

use super::corrector::batch_frame;
use super::trace::SimTrace;
use crate::error::{Error, Result};
use crate::graph_state::Graph;
use crate::stabilizer::{LocalOp, OutcomePolicy, StabTableau};
use crate::temporal::Task;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    /// The replayed graph ends as the single edge `s-r` (plus untouched nodes).
    pub edge_graph: bool,
    /// Physical state with all frames applied equals the expected graph state.
    pub exact: bool,
    /// State before end-node corrections is LC-equivalent to the EPR edge,
    /// with `s` and `r` free.
    pub lc_equivalent: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.edge_graph && self.exact && self.lc_equivalent
    }
}

/// Oracle check of a finished run using the end-node frames stored in the
/// trace.
pub fn verify_task(trace: &SimTrace, task: &Task, g0: &Graph) -> Result<bool> {
    Ok(verify_with_frames(trace, task, g0, &trace.final_frames)?.ok())
}

/// Replays the recorded physical measurements on the tableau of `g0` with
/// their recorded outcomes, applies `end_frames` at `s` and `r` and the
/// offline frame everywhere else, and compares against the graph state the
/// rules predict.
pub fn verify_with_frames(
    trace: &SimTrace,
    task: &Task,
    g0: &Graph,
    end_frames: &BTreeMap<NodeId, u8>,
) -> Result<VerifyReport> {
    let records = trace.measurements()?;
    let batch = batch_frame(trace, g0)?;
    let fin = batch.graph();
    let edge_graph = fin.is_alive(task.s)
        && fin.is_alive(task.r)
        && fin.neighbors(task.s).iter().eq([task.r].iter())
        && fin.neighbors(task.r).iter().eq([task.s].iter());

    let mut physical = StabTableau::from_graph(g0)?;
    for m in &records {
        physical = physical
            .measure_pauli(m.node, m.physical, OutcomePolicy::Forced(m.outcome))?
            .1;
    }
    let alive: Vec<NodeId> = fin.alive_nodes().collect();
    for &node in &alive {
        if !task.is_end(node) {
            physical =
                physical.apply_single_qubit_clifford(node, LocalOp::from_s_power(batch.frame().exponent(node)))?;
        }
    }
    let before_ends = physical.clone();
    for end in [task.s, task.r] {
        let k = *end_frames
            .get(&end)
            .ok_or_else(|| Error::TraceIncomplete(format!("no final frame for end node {end}")))?;
        physical = physical.apply_single_qubit_clifford(end, LocalOp::from_s_power(k))?;
    }
    let measured: Vec<_> = records.iter().map(|m| (m.node, m.physical, m.outcome)).collect();
    let expected = StabTableau::from_graph_with_measured(fin, &measured)?;
    let exact = physical.states_equal(&expected)?;

    let mut edge = Graph::new(g0.len());
    for (a, b) in fin.edges() {
        if !task.is_end(a) && !task.is_end(b) {
            edge.add_edge(a, b)?;
        }
    }
    edge.add_edge(task.s, task.r)?;
    for m in &records {
        edge = edge.delete_node(m.node)?;
    }
    for node in 0..g0.len() {
        if !g0.is_alive(node) && edge.is_alive(node) {
            edge = edge.delete_node(node)?;
        }
    }
    let target = StabTableau::from_graph_with_measured(&edge, &measured)?;
    let lc_equivalent = before_ends.equal_up_to_local_clifford(&target, &[task.s, task.r])?;
    Ok(VerifyReport {
        edge_graph,
        exact,
        lc_equivalent,
    })
}
