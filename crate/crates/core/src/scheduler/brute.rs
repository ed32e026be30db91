use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph_state::Graph;
use crate::stabilizer::Outcome;
use crate::temporal::{earliest_slot, Basis, Schedule, SlotModel, Task};
use crate::NodeId;

pub const MAX_MEASURING: usize = 8;
pub const MAX_CAP: u32 = 10;

struct Search<'a> {
    plan: &'a [(NodeId, Basis)],
    earliest: Vec<u32>,
    cap: u32,
    failed: HashSet<(u32, u32, Graph)>,
    slots: Vec<u32>,
}

impl Search<'_> {
    /// Can every node in `remaining` be measured in slots `t..=cap`?
    fn feasible(&mut self, t: u32, remaining: u32, g: &Graph) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        if t > self.cap {
            return Ok(false);
        }
        let key = (t, remaining, g.clone());
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let eligible: Vec<usize> = (0..self.plan.len())
            .filter(|&j| remaining >> j & 1 == 1 && self.earliest[j] <= t)
            .collect();
        // largest subsets first, so a witness tends to be found early
        let mut subsets: Vec<u32> = (0..1u32 << eligible.len()).collect();
        subsets.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        for pick in subsets {
            let chosen: Vec<usize> = (0..eligible.len())
                .filter(|&b| pick >> b & 1 == 1)
                .map(|b| eligible[b])
                .collect();
            let nodes: Vec<NodeId> = chosen.iter().map(|&j| self.plan[j].0).collect();
            if !g.is_independent(&nodes) {
                continue;
            }
            let mut next = g.clone();
            let mut mask = remaining;
            for &j in &chosen {
                let (node, basis) = self.plan[j];
                next = next
                    .measure_zy(node, basis.pauli().expect("measuring"), Outcome::Plus)?
                    .0;
                mask &= !(1 << j);
                self.slots[j] = t;
            }
            if self.feasible(t + 1, mask, &next)? {
                return Ok(true);
            }
        }
        self.failed.insert(key);
        Ok(false)
    }
}

/// Exhaustive minimum of the largest slot over all valid slot assignments
/// for the given `(node, basis)` plan, with one witness schedule. Nodes not
/// in the plan are left out of the witness.
pub fn brute_force_min_slots(
    task: &Task,
    g0: &Graph,
    plan: &[(NodeId, Basis)],
    model: &SlotModel,
    slot_cap: u32,
) -> Result<(u32, Schedule)> {
    if plan.len() > MAX_MEASURING {
        return Err(Error::InstanceTooLarge(format!(
            "{} measuring nodes (max {MAX_MEASURING})",
            plan.len()
        )));
    }
    if slot_cap > MAX_CAP {
        return Err(Error::InstanceTooLarge(format!("slot cap {slot_cap} (max {MAX_CAP})")));
    }
    if plan.iter().any(|(_, b)| !b.measures()) {
        return Err(Error::InvalidTask("plan entries must measure".into()));
    }
    for &(node, _) in plan {
        g0.require_alive(node)?;
    }
    if plan.is_empty() {
        return Ok((0, Schedule::new()));
    }
    let earliest: Vec<u32> = plan.iter().map(|&(i, _)| earliest_slot(task, i, model)).collect();
    let all = (1u32 << plan.len()) - 1;
    let lower = *earliest.iter().max().expect("non-empty");
    for cap in lower..=slot_cap {
        let mut search = Search {
            plan,
            earliest: earliest.clone(),
            cap,
            failed: HashSet::new(),
            slots: vec![0; plan.len()],
        };
        if search.feasible(1, all, g0)? {
            let mut witness = Schedule::new();
            for (j, &(node, basis)) in plan.iter().enumerate() {
                witness.assign(node, search.slots[j], basis);
            }
            let t_star = witness.t_star();
            return Ok((t_star, witness));
        }
    }
    Err(Error::NoScheduleWithinCap(slot_cap))
}
