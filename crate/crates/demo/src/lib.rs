//! Browser bindings. Every export takes plain strings or numbers and returns
//! a JSON string; errors come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use slotq::rational::{self, Rational};
use slotq::scheduler::{schedule, Mode};
use slotq::simulator::{detect_ambiguity, infer_order, run_async, run_slotted, Outcomes, Profiles, SimTrace};
use slotq::sweep::{effective_t_q, parse_t_q, sweep_point, sweep_task, tq_points};
use slotq::temporal::{Breakpoint, PathNetwork, SlotModel, Task};

fn respond(r: slotq::Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

fn grid(d: usize, t_q: &str, mode: &str) -> slotq::Result<Value> {
    let mode: Mode = mode.parse()?;
    let t_q = parse_t_q(t_q)?;
    let (task, net) = sweep_task(d);
    let model = SlotModel::new(effective_t_q(d, t_q))?;
    let res = schedule(mode, &task, &net, &model)?;
    let cells: Vec<Value> = res
        .schedule
        .iter()
        .map(|(node, a)| json!({ "node": node, "slot": a.slot, "basis": a.basis.to_string() }))
        .collect();
    Ok(json!({
        "n": net.n,
        "task": [task.s, task.r],
        "t_q": t_q.to_string(),
        "t_star": res.t_star,
        "inner": res.inner_slots,
        "outer": res.outer_slots,
        "cells": cells,
    }))
}

/// Slot assignment for distance `d` on the sweep layout (one outer node on each side).
#[wasm_bindgen]
pub fn schedule_grid(d: usize, t_q: &str, mode: &str) -> String {
    respond(grid(d, t_q, mode))
}

fn curve(d: usize) -> slotq::Result<Value> {
    let points = tq_points(&[d], &[])?;
    let mut rows = Vec::new();
    for (_, t) in points {
        let seq = sweep_point(d, t, Mode::Sequential)?;
        let par = sweep_point(d, t, Mode::Parallel)?;
        rows.push(json!({
            "t_q": t.to_string(),
            "value": match t {
                Breakpoint::Finite(v) => Some(rational::to_f64(&v)),
                Breakpoint::Infinity => None,
            },
            "sequential": seq.total,
            "parallel": par.total,
            "lower": par.lower,
            "upper": par.upper,
        }));
    }
    Ok(json!({ "d": d, "rows": rows }))
}

/// Total slot count against `t_q` at every breakpoint, both modes.
#[wasm_bindgen]
pub fn tstar_curve(d: usize) -> String {
    respond(curve(d))
}

fn trace_json(trace: &SimTrace, net: &PathNetwork) -> slotq::Result<Value> {
    let f = |v: &Rational| rational::to_f64(v);
    let measurements: Vec<Value> = trace
        .measurements()?
        .iter()
        .map(|m| {
            json!({
                "node": m.node,
                "slot": m.slot,
                "basis": m.logical.to_string(),
                "start": f(&m.start),
                "end": f(&m.end),
            })
        })
        .collect();
    let feedback: Vec<Value> = [trace.task.s, trace.task.r]
        .iter()
        .flat_map(|&end| {
            trace
                .feedback_at(end)
                .into_iter()
                .map(move |(t, origin, _, _)| json!({ "end": end, "origin": origin, "t": f(&t) }))
        })
        .collect();
    let order =
        |end| -> slotq::Result<Vec<usize>> { Ok(infer_order(trace, end)?.into_iter().map(|(n, _)| n).collect()) };
    let pairs: Vec<[usize; 2]> = detect_ambiguity(trace, &net.graph())?
        .pairs
        .iter()
        .map(|p| [p.first, p.second])
        .collect();
    Ok(json!({
        "measurements": measurements,
        "feedback": feedback,
        "order_s": order(trace.task.s)?,
        "order_r": order(trace.task.r)?,
        "ambiguous": pairs,
        "verdict": match &trace.verdict {
            slotq::simulator::Verdict::Verified => "verified".to_string(),
            slotq::simulator::Verdict::AmbiguityDetected(_) => "ambiguity".to_string(),
            slotq::simulator::Verdict::Failed(why) => format!("failed: {why}"),
        },
    }))
}

fn compare(slow: &str) -> slotq::Result<Value> {
    let slow = rational::parse(slow)?;
    let task = Task::new(1, 4)?;
    let net = PathNetwork::new(4);
    let profiles = Profiles::uniform().with_duration(2, slow);
    let asynchronous = run_async(&task, &net, &profiles, &Outcomes::Seeded(7))?;

    let t_q = slow.max(rational::int(1));
    let model = SlotModel::new(t_q)?;
    let sched = schedule(Mode::Parallel, &task, &net, &model)?.schedule;
    let slotted = run_slotted(&sched, &task, &net, &model, &profiles, &Outcomes::Seeded(7))?;
    Ok(json!({
        "t_q": rational::format(&t_q),
        "async": trace_json(&asynchronous, &net)?,
        "slotted": trace_json(&slotted, &net)?,
    }))
}

/// Runs task (1,4) on a 4-node path with node 2 taking `slow` time units,
/// once asynchronously and once on the parallel schedule with slots of
/// length `max(slow, 1)`.
#[wasm_bindgen]
pub fn compare_timelines(slow: &str) -> String {
    respond(compare(slow))
}
