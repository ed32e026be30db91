//! Dual time-division model: feedforward and adjacency constraints.
//!
//! Time is normalised to the classical slot (`T_c = 1`); the quantum slot
//! length `t_q` is an exact rational. Slots are numbered from 1, so slot `S`
//! spans `[(S-1) t_q, S t_q)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_state::Graph;
use crate::rational::{self, Rational};
use crate::stabilizer::{Outcome, Pauli};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotModel {
    #[serde(with = "rational::serde_text")]
    t_q: Rational,
}

impl SlotModel {
    pub fn new(t_q: Rational) -> Result<Self> {
        if !rational::is_positive(&t_q) {
            return Err(Error::NonPositiveSlot(rational::format(&t_q)));
        }
        Ok(SlotModel { t_q })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(rational::parse(text)?)
    }

    pub fn t_q(&self) -> Rational {
        self.t_q
    }

    /// Scheduling proper is defined for `t_q >= 1`.
    pub fn require_scheduling_regime(&self) -> Result<()> {
        if rational::at_least_one(&self.t_q) {
            Ok(())
        } else {
            Err(Error::SlotBelowOne(rational::format(&self.t_q)))
        }
    }

    pub fn slot_start(&self, slot: u32) -> Rational {
        self.t_q * Rational::from_integer(slot as i64 - 1)
    }

    pub fn slot_end(&self, slot: u32) -> Rational {
        self.t_q * Rational::from_integer(slot as i64)
    }
}

/// EPR request between initiator `s` and receiver `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Task {
    pub s: NodeId,
    pub r: NodeId,
}

impl Task {
    pub fn new(s: NodeId, r: NodeId) -> Result<Self> {
        if s == r {
            return Err(Error::InvalidTask(format!("s and r are both {s}")));
        }
        Ok(Task { s, r })
    }

    /// `r - s` as an unsigned hop count.
    pub fn distance(&self) -> usize {
        self.s.abs_diff(self.r)
    }

    pub fn is_end(&self, node: NodeId) -> bool {
        node == self.s || node == self.r
    }

    /// Inner nodes strictly between the end nodes, in hop order from `s`.
    pub fn inner_nodes(&self) -> Vec<NodeId> {
        if self.s < self.r {
            (self.s + 1..self.r).collect()
        } else {
            (self.r + 1..self.s).rev().collect()
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.r)
    }
}

/// A 1D cluster of `n` nodes labelled `1..=n`; the classical topology is the
/// same line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathNetwork {
    pub n: usize,
}

impl PathNetwork {
    pub fn new(n: usize) -> Self {
        PathNetwork { n }
    }

    pub fn graph(&self) -> Graph {
        Graph::line(self.n)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        (1..=self.n).contains(&node)
    }

    pub fn check_task(&self, task: &Task) -> Result<()> {
        for node in [task.s, task.r] {
            if !self.contains(node) {
                return Err(Error::InvalidTask(format!(
                    "node {node} outside network 1..={}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Outer neighbors `s-1` / `r+1` (on the far side of each end node).
    pub fn outer_nodes(&self, task: &Task) -> Vec<NodeId> {
        let (lo, hi) = (task.s.min(task.r), task.s.max(task.r));
        let mut out = Vec::new();
        if lo > 1 {
            out.push(lo - 1);
        }
        if hi < self.n {
            out.push(hi + 1);
        }
        out
    }

    /// Measuring nodes with their logical basis: Y inside, Z outside.
    pub fn measurement_plan(&self, task: &Task) -> Vec<(NodeId, Basis)> {
        let mut plan: Vec<(NodeId, Basis)> = task.inner_nodes().into_iter().map(|i| (i, Basis::Y)).collect();
        plan.extend(self.outer_nodes(task).into_iter().map(|i| (i, Basis::Z)));
        plan.sort();
        plan
    }
}

/// Logical basis in a schedule; `I` means the node does not measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    I,
    Z,
    Y,
}

impl Basis {
    pub fn pauli(self) -> Option<Pauli> {
        match self {
            Basis::I => None,
            Basis::Z => Some(Pauli::Z),
            Basis::Y => Some(Pauli::Y),
        }
    }

    pub fn measures(self) -> bool {
        self != Basis::I
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::I => "I",
            Basis::Z => "Z",
            Basis::Y => "Y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub slot: u32,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    assignments: BTreeMap<NodeId, Assignment>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, node: NodeId, slot: u32, basis: Basis) {
        self.assignments.insert(node, Assignment { slot, basis });
    }

    pub fn get(&self, node: NodeId) -> Option<Assignment> {
        self.assignments.get(&node).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Assignment)> + '_ {
        self.assignments.iter().map(|(&n, &a)| (n, a))
    }

    /// Nodes that actually measure, as `(node, slot, basis)`.
    pub fn measurements(&self) -> impl Iterator<Item = (NodeId, u32, Basis)> + '_ {
        self.iter()
            .filter(|(_, a)| a.basis.measures())
            .map(|(n, a)| (n, a.slot, a.basis))
    }

    /// Measuring nodes grouped by slot, slots ascending, nodes ascending.
    pub fn slots(&self) -> BTreeMap<u32, Vec<NodeId>> {
        let mut out: BTreeMap<u32, Vec<NodeId>> = BTreeMap::new();
        for (node, slot, _) in self.measurements() {
            out.entry(slot).or_default().push(node);
        }
        out
    }

    /// Largest slot used by a measuring node, 0 if nobody measures.
    pub fn t_star(&self) -> u32 {
        self.measurements().map(|(_, s, _)| s).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Checks the structural invariants against a network and task.
    pub fn check_complete(&self, task: &Task, net: &PathNetwork) -> Result<()> {
        for node in 1..=net.n {
            let a = self.get(node).ok_or(Error::MissingAssignment(node))?;
            if a.slot == 0 {
                return Err(Error::InvalidTask(format!("node {node} has slot 0")));
            }
            if task.is_end(node) && a.basis != Basis::I {
                return Err(Error::InvalidTask(format!("end node {node} must not measure")));
            }
        }
        Ok(())
    }
}

/// Distance from the initiator along the line topology.
pub fn hop_distance(task: &Task, node: NodeId) -> usize {
    node.abs_diff(task.s)
}

/// Earliest slot node `node` may measure in: `ceil(d / t_q) + 1`, with the
/// initiator itself at 1.
pub fn earliest_slot(task: &Task, node: NodeId, model: &SlotModel) -> u32 {
    let d = hop_distance(task, node) as i64;
    if d == 0 {
        return 1;
    }
    (rational::ceil_div(d, &model.t_q()) + 1) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Breakpoint {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for Breakpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Breakpoint::Finite(v) => f.write_str(&rational::format(v)),
            Breakpoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Values of `t_q >= 1` at which some earliest slot changes:
/// `{ d(i)/k : 1 <= k <= d(i) }` over the measuring nodes, plus infinity.
pub fn breakpoints(task: &Task, measuring: &[NodeId]) -> Result<Vec<Breakpoint>> {
    if measuring.is_empty() {
        return Err(Error::InvalidTask("no measuring nodes".into()));
    }
    let mut set = BTreeSet::new();
    for &node in measuring {
        let d = hop_distance(task, node) as i64;
        if d == 0 {
            return Err(Error::InvalidTask(format!("node {node} is the initiator")));
        }
        for k in 1..=d {
            set.insert(Breakpoint::Finite(Rational::new(d, k)));
        }
    }
    set.insert(Breakpoint::Infinity);
    Ok(set.into_iter().collect())
}

/// Finite breakpoints only, for evaluation.
pub fn finite_breakpoints(task: &Task, measuring: &[NodeId]) -> Result<Vec<Rational>> {
    Ok(breakpoints(task, measuring)?
        .into_iter()
        .filter_map(|b| match b {
            Breakpoint::Finite(v) => Some(v),
            Breakpoint::Infinity => None,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    Feedforward,
    Adjacency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub nodes: Vec<NodeId>,
    pub slot: u32,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} violation in slot {} at nodes {:?}: {}",
            self.kind, self.slot, self.nodes, self.detail
        )
    }
}

pub fn check_feedforward(sched: &Schedule, task: &Task, model: &SlotModel) -> Vec<Violation> {
    sched
        .measurements()
        .filter_map(|(node, slot, _)| {
            let need = earliest_slot(task, node, model);
            (slot < need).then(|| Violation {
                kind: ViolationKind::Feedforward,
                nodes: vec![node],
                slot,
                detail: format!("node {node} needs slot >= {need}"),
            })
        })
        .collect()
}

/// Applies one slot's measurements to `g`. Within a valid slot the order is
/// irrelevant; ids ascending otherwise. Outcomes do not affect the graph.
pub(crate) fn apply_slot(g: &Graph, sched: &Schedule, nodes: &[NodeId], slot: u32) -> Result<Graph> {
    let mut g = g.clone();
    for &node in nodes {
        let basis = sched.get(node).and_then(|a| a.basis.pauli()).expect("measuring node");
        if !g.is_alive(node) {
            return Err(Error::MeasuresDeletedNode { node, slot });
        }
        g = g.measure_zy(node, basis, Outcome::Plus)?.0;
    }
    Ok(g)
}

/// Replays the schedule slot by slot and reports adjacent pairs measuring in
/// the same slot, judged on the graph as it stands at the start of the slot.
pub fn check_adjacency(sched: &Schedule, _task: &Task, g0: &Graph) -> Result<Vec<Violation>> {
    let mut g = g0.clone();
    let mut out = Vec::new();
    for (slot, nodes) in sched.slots() {
        for &node in &nodes {
            if !g.is_alive(node) {
                return Err(Error::MeasuresDeletedNode { node, slot });
            }
        }
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if g.has_edge(a, b) {
                    out.push(Violation {
                        kind: ViolationKind::Adjacency,
                        nodes: vec![a, b],
                        slot,
                        detail: format!("nodes {a} and {b} are adjacent at the start of slot {slot}"),
                    });
                }
            }
        }
        g = apply_slot(&g, sched, &nodes, slot)?;
    }
    Ok(out)
}

/// Both constraints; an empty list means the schedule preserves causality.
pub fn validate(sched: &Schedule, task: &Task, g0: &Graph, model: &SlotModel) -> Result<Vec<Violation>> {
    let mut out = check_feedforward(sched, task, model);
    out.extend(check_adjacency(sched, task, g0)?);
    Ok(out)
}

/// Wire form of a schedule:
/// `{"task":[s,r],"t_q":"p/q","assignments":[{"node":i,"slot":S,"basis":"Y"},...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub task: [NodeId; 2],
    #[serde(with = "rational::serde_text")]
    pub t_q: Rational,
    pub assignments: Vec<AssignmentDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub node: NodeId,
    pub slot: u32,
    pub basis: Basis,
}

impl ScheduleDoc {
    pub fn new(task: &Task, model: &SlotModel, sched: &Schedule) -> Self {
        ScheduleDoc {
            task: [task.s, task.r],
            t_q: model.t_q(),
            assignments: sched
                .iter()
                .map(|(node, a)| AssignmentDoc {
                    node,
                    slot: a.slot,
                    basis: a.basis,
                })
                .collect(),
        }
    }

    pub fn task(&self) -> Result<Task> {
        Task::new(self.task[0], self.task[1])
    }

    pub fn model(&self) -> Result<SlotModel> {
        SlotModel::new(self.t_q)
    }

    pub fn schedule(&self) -> Result<Schedule> {
        let mut s = Schedule::new();
        for a in &self.assignments {
            if s.get(a.node).is_some() {
                return Err(Error::Json(format!("node {} assigned twice", a.node)));
            }
            s.assign(a.node, a.slot, a.basis);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
