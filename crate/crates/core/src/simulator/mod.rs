//! Discrete-event execution of schedules on the dual-slot timeline.
//!
//! Time is exact and rational with `T_c = 1`. In slotted mode a node of
//! slot `S` starts measuring at `(S-1) t_q`, its effect counts at `S t_q`
//! and its outcome leaves at the next classical boundary, travelling one hop
//! per classical slot toward both end nodes. In async mode nodes measure as
//! soon as the feedforward reaches them and forward outcomes immediately.

mod ambiguity;
mod corrector;
mod profile;
mod trace;
mod verify;

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub use ambiguity::{detect_ambiguity, AmbiguityReport, AmbiguousPair};
pub use corrector::{
    batch_frame, feedback_deadline, interpret, relevant_nodes, streaming_corrector, ConsumedOutcome, SlotStep,
    StreamingResult,
};
pub use profile::{DropFeedback, NodeProfile, NodeTiming, ProfileDoc, Profiles};
pub use trace::{infer_order, EventKind, MeasurementRecord, SimEvent, SimMode, SimTrace, Verdict};
pub use verify::{verify_task, verify_with_frames, VerifyReport};

use crate::error::{Error, Result};
use crate::graph_state::FrameTracker;
use crate::rational::{self, Rational};
use crate::stabilizer::{Outcome, Pauli};
use crate::temporal::{hop_distance, validate, PathNetwork, Schedule, SlotModel, Task};
use crate::NodeId;

/// Where measurement outcomes come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcomes {
    Seeded(u64),
    Forced(BTreeMap<NodeId, Outcome>),
}

impl Outcomes {
    /// Bit `k` of `pattern` forces `nodes[k]` to `-1`.
    pub fn pattern(nodes: &[NodeId], pattern: u64) -> Self {
        Outcomes::Forced(
            nodes
                .iter()
                .enumerate()
                .map(|(k, &n)| (n, Outcome::from_pattern(pattern, k)))
                .collect(),
        )
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Outcomes::Seeded(s) => Some(*s),
            Outcomes::Forced(_) => None,
        }
    }
}

/// Feedback parked at a relay: origin, outcome, destination end, slot.
type HeldFeedback = (NodeId, Outcome, NodeId, Option<u32>);

enum Source {
    Rng(Box<StdRng>),
    Forced(BTreeMap<NodeId, Outcome>),
}

impl Source {
    fn new(o: &Outcomes) -> Self {
        match o {
            Outcomes::Seeded(s) => Source::Rng(Box::new(StdRng::seed_from_u64(*s))),
            Outcomes::Forced(m) => Source::Forced(m.clone()),
        }
    }

    fn draw(&mut self, node: NodeId) -> Result<Outcome> {
        match self {
            Source::Rng(rng) => Ok(if rng.gen::<bool>() {
                Outcome::Minus
            } else {
                Outcome::Plus
            }),
            Source::Forced(m) => m
                .get(&node)
                .copied()
                .ok_or_else(|| Error::TraceIncomplete(format!("no forced outcome for node {node}"))),
        }
    }
}

struct Pending {
    t: Rational,
    node: NodeId,
    seq: u64,
    kind: EventKind,
}

impl Pending {
    fn key(&self) -> (Rational, NodeId, u8, u64) {
        (self.t, self.node, self.kind.rank(), self.seq)
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// One planned measurement: logical basis, the physical basis the node
/// will actually use, and its slot if any.
#[derive(Debug, Clone, Copy)]
struct Planned {
    logical: Pauli,
    physical: Pauli,
    slot: Option<u32>,
}

/// Physical bases for a logical order. Only the parity of the pending `S`
/// exponent decides the letter, so outcomes do not matter here.
fn physical_plan(
    g0: &crate::graph_state::Graph,
    order: &[(NodeId, Pauli, Option<u32>)],
) -> Result<BTreeMap<NodeId, Planned>> {
    let mut tracker = FrameTracker::new(g0.clone());
    let mut out = BTreeMap::new();
    for &(node, logical, slot) in order {
        let (physical, _) = tracker.physical_basis_for(node, logical);
        tracker.measure(node, logical, Outcome::Plus)?;
        out.insert(
            node,
            Planned {
                logical,
                physical,
                slot,
            },
        );
    }
    Ok(out)
}

struct Engine<'a> {
    mode: SimMode,
    task: Task,
    n: usize,
    t_q: Option<Rational>,
    profiles: &'a Profiles,
    plan: BTreeMap<NodeId, Planned>,
    source: Source,
    queue: BinaryHeap<Reverse<Pending>>,
    seq: u64,
    events: Vec<SimEvent>,
    has_feedforward: Vec<bool>,
    finished: Vec<bool>,
    held: BTreeMap<NodeId, Vec<HeldFeedback>>,
}

impl Engine<'_> {
    fn push(&mut self, t: Rational, node: NodeId, kind: EventKind) {
        self.seq += 1;
        self.queue.push(Reverse(Pending {
            t,
            node,
            seq: self.seq,
            kind,
        }));
    }

    fn delay(&self, node: NodeId) -> Rational {
        self.profiles.node(node, self.t_q).forward_delay
    }

    fn step_toward(&self, from: NodeId, to: NodeId) -> NodeId {
        if to > from {
            from + 1
        } else {
            from - 1
        }
    }

    fn send_feedback(
        &mut self,
        t: Rational,
        at: NodeId,
        origin: NodeId,
        outcome: Outcome,
        toward: NodeId,
        slot: Option<u32>,
    ) {
        let next = self.step_toward(at, toward);
        let arrive = t + self.delay(at);
        self.push(
            arrive,
            next,
            EventKind::FeedbackArrive {
                origin,
                outcome,
                toward,
                slot,
            },
        );
    }

    fn run(mut self) -> Result<Vec<SimEvent>> {
        let s = self.task.s;
        self.push(rational::zero(), s, EventKind::FeedforwardArrive);
        if self.mode == SimMode::Slotted {
            let t_q = self.t_q.expect("slotted run has t_q");
            let starts: Vec<_> = self.plan.iter().map(|(&n, p)| (n, *p)).collect();
            for (node, p) in starts {
                let slot = p.slot.expect("slotted plan has slots");
                let start = t_q * Rational::from_integer(slot as i64 - 1);
                self.push(
                    start,
                    node,
                    EventKind::MeasureStart {
                        logical: p.logical,
                        physical: p.physical,
                        slot: p.slot,
                    },
                );
            }
        }
        while let Some(Reverse(ev)) = self.queue.pop() {
            self.handle(ev)?;
        }
        Ok(self.events)
    }

    fn handle(&mut self, ev: Pending) -> Result<()> {
        let Pending { t, node, kind, .. } = ev;
        self.events.push(SimEvent {
            t,
            node,
            kind: kind.clone(),
        });
        match kind {
            EventKind::FeedforwardArrive => {
                if self.has_feedforward[node] {
                    return Ok(());
                }
                self.has_feedforward[node] = true;
                let s = self.task.s;
                let delay = self.delay(node);
                for next in [node.wrapping_sub(1), node + 1] {
                    let outward = next.abs_diff(s) > node.abs_diff(s);
                    if (1..=self.n).contains(&next) && (outward || node == s) {
                        self.push(t + delay, next, EventKind::FeedforwardArrive);
                    }
                }
                if self.mode == SimMode::Async {
                    if let Some(p) = self.plan.get(&node).copied() {
                        self.push(
                            t,
                            node,
                            EventKind::MeasureStart {
                                logical: p.logical,
                                physical: p.physical,
                                slot: None,
                            },
                        );
                    }
                }
            }
            EventKind::MeasureStart { .. } => {
                if !self.has_feedforward[node] {
                    return Err(Error::TraceIncomplete(format!(
                        "node {node} starts measuring at t={} before the feedforward arrived",
                        rational::format(&t)
                    )));
                }
                let d = self.profiles.node(node, self.t_q).measure_duration;
                let outcome = self.source.draw(node)?;
                self.push(t + d, node, EventKind::MeasureEnd { outcome });
            }
            EventKind::MeasureEnd { outcome } => {
                self.finished[node] = true;
                let slot = self.plan[&node].slot;
                let depart = match (self.mode, slot, self.t_q) {
                    (SimMode::Slotted, Some(slot), Some(t_q)) => {
                        Rational::from_integer(rational::ceil(&(t_q * Rational::from_integer(slot as i64))))
                    }
                    _ => t,
                };
                for end in [self.task.s, self.task.r] {
                    let dropped = self
                        .profiles
                        .drop_feedback
                        .is_some_and(|d| d.origin == node && d.toward == end);
                    if !dropped {
                        self.send_feedback(depart, node, node, outcome, end, slot);
                    }
                }
                for (origin, o, toward, s) in self.held.remove(&node).unwrap_or_default() {
                    self.send_feedback(t, node, origin, o, toward, s);
                }
            }
            EventKind::FeedbackArrive {
                origin,
                outcome,
                toward,
                slot,
            } => {
                if node == toward {
                    return Ok(());
                }
                let hold = self.mode == SimMode::Async
                    && self.profiles.relay_after_measure
                    && self.plan.contains_key(&node)
                    && !self.finished[node];
                if hold {
                    self.held.entry(node).or_default().push((origin, outcome, toward, slot));
                } else {
                    self.send_feedback(t, node, origin, outcome, toward, slot);
                }
            }
        }
        Ok(())
    }
}

fn engine<'a>(
    mode: SimMode,
    task: &Task,
    net: &PathNetwork,
    t_q: Option<Rational>,
    profiles: &'a Profiles,
    plan: BTreeMap<NodeId, Planned>,
    outcomes: &Outcomes,
) -> Engine<'a> {
    Engine {
        mode,
        task: *task,
        n: net.n,
        t_q,
        profiles,
        plan,
        source: Source::new(outcomes),
        queue: BinaryHeap::new(),
        seq: 0,
        events: Vec::new(),
        has_feedforward: vec![false; net.n + 1],
        finished: vec![false; net.n + 1],
        held: BTreeMap::new(),
    }
}

/// Runs a validated schedule slot by slot, corrects at both end nodes and
/// verifies the result against the oracle.
pub fn run_slotted(
    sched: &Schedule,
    task: &Task,
    net: &PathNetwork,
    model: &SlotModel,
    profiles: &Profiles,
    outcomes: &Outcomes,
) -> Result<SimTrace> {
    net.check_task(task)?;
    let g0 = net.graph();
    let violations = validate(sched, task, &g0, model)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSchedule(violations.len()));
    }
    sched.check_complete(task, net)?;
    let t_q = model.t_q();
    profiles.check_slotted(1..=net.n, t_q)?;

    let mut order: Vec<_> = sched
        .measurements()
        .map(|(n, s, b)| (n, b.pauli().expect("measuring"), Some(s)))
        .collect();
    order.sort_by_key(|&(n, _, s)| (s, n));
    let plan = physical_plan(&g0, &order)?;
    let events = engine(SimMode::Slotted, task, net, Some(t_q), profiles, plan, outcomes).run()?;

    let mut trace = SimTrace {
        mode: SimMode::Slotted,
        seed: outcomes.seed(),
        task: *task,
        n: net.n,
        t_q: Some(t_q),
        events,
        final_frames: BTreeMap::new(),
        verdict: Verdict::Verified,
    };
    let mut failure = None;
    for end in [task.s, task.r] {
        match streaming_corrector(&trace, sched, &g0, end) {
            Ok(res) => {
                trace.final_frames.insert(end, res.exponent());
            }
            Err(e) => {
                failure.get_or_insert(e.to_string());
            }
        }
    }
    trace.verdict = match failure {
        Some(reason) => Verdict::Failed(reason),
        None => conclude(&trace, task, &g0)?,
    };
    Ok(trace)
}

fn conclude(trace: &SimTrace, task: &Task, g0: &crate::graph_state::Graph) -> Result<Verdict> {
    let report = detect_ambiguity(trace, g0)?;
    if !report.is_empty() {
        return Ok(Verdict::AmbiguityDetected(report));
    }
    Ok(if verify_task(trace, task, g0)? {
        Verdict::Verified
    } else {
        Verdict::Failed("final state is not the requested EPR pair".into())
    })
}

/// Measure-on-arrival execution without slots. Inner nodes measure `Y`,
/// outer neighbors `Z`; physical bases assume the hop order from `s`.
pub fn run_async(task: &Task, net: &PathNetwork, profiles: &Profiles, outcomes: &Outcomes) -> Result<SimTrace> {
    net.check_task(task)?;
    let g0 = net.graph();
    let mut order: Vec<_> = net
        .measurement_plan(task)
        .into_iter()
        .map(|(n, b)| (n, b.pauli().expect("measuring"), None))
        .collect();
    order.sort_by_key(|&(n, _, _)| (hop_distance(task, n), n));
    let plan = physical_plan(&g0, &order)?;
    let events = engine(SimMode::Async, task, net, None, profiles, plan.clone(), outcomes).run()?;
    let mut trace = SimTrace {
        mode: SimMode::Async,
        seed: outcomes.seed(),
        task: *task,
        n: net.n,
        t_q: None,
        events,
        final_frames: BTreeMap::new(),
        verdict: Verdict::Verified,
    };
    let report = detect_ambiguity(&trace, &g0)?;
    if !report.is_empty() {
        trace.verdict = Verdict::AmbiguityDetected(report);
        return Ok(trace);
    }
    // each end reads outcomes in the order they reached it
    for end in [task.s, task.r] {
        let seen = infer_order(&trace, end)?;
        if seen.len() < plan.len() {
            trace.verdict = Verdict::Failed(format!("end node {end} is missing feedback"));
            return Ok(trace);
        }
        let seq: Vec<_> = seen.iter().map(|&(n, o)| (n, plan[&n].logical, o)).collect();
        let exp = interpret(&g0, &seq)?.frame().exponent(end);
        trace.final_frames.insert(end, exp);
    }
    trace.verdict = if verify_task(&trace, task, &g0)? {
        Verdict::Verified
    } else {
        Verdict::Failed("final state is not the requested EPR pair".into())
    };
    Ok(trace)
}
