//! `(D, t_q)` sweeps over a path with both outer neighbors present.
//!
//! For distance `D` the task is `(2, 2+D)` on `n = D+3` nodes, so node 1 is
//! the source-side outer node and `D+3` the receiver-side one.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::scheduler::{schedule, tstar_bounds, Mode};
use crate::temporal::{breakpoints, validate, Breakpoint, PathNetwork, SlotModel, Task};

pub const CSV_HEADER: &str = "D,t_q,t_star_inner,t_star_outer,t_star_total,lower_bound,upper_bound,mode";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub d: usize,
    pub t_q: Breakpoint,
    pub inner: u32,
    pub outer: Option<u32>,
    pub total: u32,
    pub lower: u32,
    pub upper: u32,
    pub mode: Mode,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.d,
            self.t_q,
            self.inner,
            self.outer.map(|o| o.to_string()).unwrap_or_default(),
            self.total,
            self.lower,
            self.upper,
            self.mode
        )
    }
}

pub fn sweep_task(d: usize) -> (Task, PathNetwork) {
    (Task { s: 2, r: 2 + d }, PathNetwork::new(d + 3))
}

/// Finite slot length standing in for `t_q = inf`: every node is already
/// eligible in the first round once `t_q >= D+1`.
pub fn effective_t_q(d: usize, t_q: Breakpoint) -> Rational {
    match t_q {
        Breakpoint::Finite(v) => v,
        Breakpoint::Infinity => rational::int(d as i64 + 1),
    }
}

pub fn parse_t_q(text: &str) -> Result<Breakpoint> {
    match text.trim() {
        "inf" | "Inf" | "infinity" => Ok(Breakpoint::Infinity),
        other => Ok(Breakpoint::Finite(rational::parse(other)?)),
    }
}

/// Schedules one point and re-validates the result.
pub fn sweep_point(d: usize, t_q: Breakpoint, mode: Mode) -> Result<SweepRow> {
    let (task, net) = sweep_task(d);
    let (lower, upper) = tstar_bounds(d)?;
    let model = SlotModel::new(effective_t_q(d, t_q))?;
    model.require_scheduling_regime()?;
    let res = schedule(mode, &task, &net, &model)?;
    let violations = validate(&res.schedule, &task, &net.graph(), &model)?;
    if !violations.is_empty() {
        return Err(Error::InvalidSchedule(violations.len()));
    }
    Ok(SweepRow {
        d,
        t_q,
        inner: res.inner_slots,
        outer: res.outer_slots,
        total: res.t_star,
        lower,
        upper,
        mode,
    })
}

/// Every `(D, t_q)` combination, D-major.
pub fn distance_points(ds: &[usize], tqs: &[Breakpoint]) -> Result<Vec<(usize, Breakpoint)>> {
    if ds.is_empty() || tqs.is_empty() {
        return Err(Error::InvalidTask("empty sweep range".into()));
    }
    Ok(ds.iter().flat_map(|&d| tqs.iter().map(move |&t| (d, t))).collect())
}

/// All breakpoints of each `D` plus `extra`, ascending per `D`.
pub fn tq_points(ds: &[usize], extra: &[Breakpoint]) -> Result<Vec<(usize, Breakpoint)>> {
    if ds.is_empty() {
        return Err(Error::InvalidTask("empty sweep range".into()));
    }
    let mut out = Vec::new();
    for &d in ds {
        let (task, net) = sweep_task(d);
        let nodes: Vec<_> = net.measurement_plan(&task).into_iter().map(|(i, _)| i).collect();
        let mut pts = breakpoints(&task, &nodes)?;
        pts.extend(extra.iter().copied());
        pts.sort();
        pts.dedup();
        out.extend(pts.into_iter().map(|t| (d, t)));
    }
    Ok(out)
}

pub fn run_points(points: &[(usize, Breakpoint)], mode: Mode) -> Result<Vec<SweepRow>> {
    points.iter().map(|&(d, t)| sweep_point(d, t, mode)).collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}
