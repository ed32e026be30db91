//! Causality-preserving schedules for an EPR task on a path.
//!
//! Inner nodes (strictly between `s` and `r`) measure `Y`, the outer
//! neighbors `s-1` and `r+1` measure `Z`, everybody else (including the end
//! nodes) is assigned `(1, I)`.

mod brute;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use brute::brute_force_min_slots;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::temporal::{earliest_slot, hop_distance, Basis, PathNetwork, Schedule, SlotModel, Task};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    Parallel,
    Brute,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sequential => "sequential",
            Mode::Parallel => "parallel",
            Mode::Brute => "brute",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Mode::Sequential),
            "parallel" => Ok(Mode::Parallel),
            "brute" => Ok(Mode::Brute),
            other => Err(Error::InvalidTask(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleResult {
    pub schedule: Schedule,
    /// Max slot over measuring nodes; 0 when nobody measures.
    pub t_star: u32,
    pub inner_slots: u32,
    pub outer_slots: Option<u32>,
}

impl ScheduleResult {
    fn assemble(task: &Task, net: &PathNetwork, inner: &BTreeMap<NodeId, u32>, outer: &BTreeMap<NodeId, u32>) -> Self {
        let mut schedule = Schedule::new();
        for node in 1..=net.n {
            schedule.assign(node, 1, Basis::I);
        }
        for (&node, &slot) in inner {
            schedule.assign(node, slot, Basis::Y);
        }
        for (&node, &slot) in outer {
            schedule.assign(node, slot, Basis::Z);
        }
        let inner_slots = inner.values().copied().max().unwrap_or(0);
        let outer_slots = outer.values().copied().max();
        debug_assert!(task.distance() >= 1);
        ScheduleResult {
            t_star: inner_slots.max(outer_slots.unwrap_or(0)),
            schedule,
            inner_slots,
            outer_slots,
        }
    }
}

/// One round of the parallel algorithm: feedforward-eligible inner nodes and
/// those still unassigned at the beginning of slot `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EligibleState {
    pub k: u32,
    pub eligible: BTreeSet<NodeId>,
    pub unassigned: Vec<NodeId>,
    pub chosen: Vec<NodeId>,
}

/// `Z` measurements on the outer neighbors at their earliest slot.
pub fn outer_slots(task: &Task, net: &PathNetwork, model: &SlotModel) -> BTreeMap<NodeId, u32> {
    net.outer_nodes(task)
        .into_iter()
        .map(|i| (i, earliest_slot(task, i, model)))
        .collect()
}

fn check(task: &Task, net: &PathNetwork) -> Result<()> {
    net.check_task(task)?;
    if task.distance() < 1 {
        return Err(Error::InvalidTask("distance must be at least 1".into()));
    }
    Ok(())
}

/// One measurement per slot: inner node `s+i` in slot `i+1`, pushed later if
/// the feedforward has not arrived yet (only possible for `t_q < 1`).
pub fn sequential_schedule(task: &Task, net: &PathNetwork, model: &SlotModel) -> Result<ScheduleResult> {
    check(task, net)?;
    let inner: BTreeMap<NodeId, u32> = task
        .inner_nodes()
        .into_iter()
        .map(|node| {
            let i = hop_distance(task, node) as u32;
            (node, (i + 1).max(earliest_slot(task, node, model)))
        })
        .collect();
    Ok(ScheduleResult::assemble(
        task,
        net,
        &inner,
        &outer_slots(task, net, model),
    ))
}

/// Rounds of the parallel algorithm for the inner nodes.
pub fn parallel_rounds(task: &Task, model: &SlotModel) -> Vec<EligibleState> {
    let inner = task.inner_nodes();
    // hop order from s, so "ascending" is by distance and mirrors cleanly
    let mut assigned: BTreeSet<NodeId> = BTreeSet::new();
    let mut rounds = Vec::new();
    let mut k: u32 = 1;
    while assigned.len() < inner.len() {
        let reach = model.t_q() * Rational::from_integer(k as i64);
        let eligible: BTreeSet<NodeId> = inner
            .iter()
            .copied()
            .filter(|&i| Rational::from_integer(hop_distance(task, i) as i64) <= reach)
            .collect();
        let unassigned: Vec<NodeId> = inner
            .iter()
            .copied()
            .filter(|i| eligible.contains(i) && !assigned.contains(i))
            .collect();
        let chosen: Vec<NodeId> = unassigned.iter().copied().step_by(2).collect();
        assigned.extend(chosen.iter().copied());
        rounds.push(EligibleState {
            k,
            eligible,
            unassigned,
            chosen,
        });
        k += 1;
    }
    rounds
}

/// Parallelised scheduling: in round `k`, every other node of the eligible
/// unassigned list (1st, 3rd, ...) is assigned slot `k+1`.
pub fn parallel_schedule(task: &Task, net: &PathNetwork, model: &SlotModel) -> Result<ScheduleResult> {
    check(task, net)?;
    model.require_scheduling_regime()?;
    let inner: BTreeMap<NodeId, u32> = parallel_rounds(task, model)
        .into_iter()
        .flat_map(|round| round.chosen.into_iter().map(move |i| (i, round.k + 1)))
        .collect();
    Ok(ScheduleResult::assemble(
        task,
        net,
        &inner,
        &outer_slots(task, net, model),
    ))
}

pub fn schedule(mode: Mode, task: &Task, net: &PathNetwork, model: &SlotModel) -> Result<ScheduleResult> {
    match mode {
        Mode::Sequential => sequential_schedule(task, net, model),
        Mode::Parallel => parallel_schedule(task, net, model),
        Mode::Brute => {
            model.require_scheduling_regime()?;
            check(task, net)?;
            let (_, witness) =
                brute_force_min_slots(task, &net.graph(), &net.measurement_plan(task), model, brute::MAX_CAP)?;
            let split = |basis: Basis| -> BTreeMap<NodeId, u32> {
                witness
                    .measurements()
                    .filter(|&(_, _, b)| b == basis)
                    .map(|(n, s, _)| (n, s))
                    .collect()
            };
            Ok(ScheduleResult::assemble(task, net, &split(Basis::Y), &split(Basis::Z)))
        }
    }
}

/// `(floor(log2(D-1)) + 2, D)`.
pub fn tstar_bounds(d: usize) -> Result<(u32, u32)> {
    if d < 2 {
        return Err(Error::InvalidTask(format!("bounds need D >= 2, got {d}")));
    }
    Ok(((d - 1).ilog2() + 2, d as u32))
}

/// Smallest `t_q` for which sequential scheduling needs no extra slots for
/// the receiver-side outer node: `(D+1)/(D-1)`.
pub fn sequential_inflation_threshold(d: usize) -> Result<Rational> {
    if d < 2 {
        return Err(Error::InvalidTask(format!("threshold needs D >= 2, got {d}")));
    }
    Ok(rational::ratio(d as i64 + 1, d as i64 - 1))
}
