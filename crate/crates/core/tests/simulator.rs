use std::collections::BTreeMap;

use slotq::rational::{int, ratio};
use slotq::scheduler::{parallel_schedule, sequential_schedule};
use slotq::simulator::{
    batch_frame, detect_ambiguity, infer_order, interpret, run_async, run_slotted, streaming_corrector, verify_task,
    verify_with_frames, EventKind, Outcomes, Profiles, SimTrace, Verdict,
};
use slotq::stabilizer::Outcome;
use slotq::temporal::{Basis, PathNetwork, Schedule, SlotModel, Task};
use slotq::Error;

fn fixture(name: &str) -> Profiles {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    Profiles::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn reference_parallel() -> Schedule {
    let mut s = Schedule::new();
    for (n, slot, b) in [
        (1, 1, Basis::I),
        (2, 2, Basis::Y),
        (3, 3, Basis::Y),
        (4, 2, Basis::Y),
        (5, 2, Basis::I),
        (6, 2, Basis::Z),
    ] {
        s.assign(n, slot, b);
    }
    s
}

fn reference_sequential() -> Schedule {
    sequential_schedule(
        &Task::new(1, 5).unwrap(),
        &PathNetwork::new(6),
        &SlotModel::new(int(1)).unwrap(),
    )
    .unwrap()
    .schedule
}

fn measuring(sched: &Schedule) -> Vec<usize> {
    sched.measurements().map(|(n, _, _)| n).collect()
}

fn ends(trace: &SimTrace) -> Vec<(usize, slotq::Rational)> {
    trace
        .events
        .iter()
        .filter(|e| matches!(e.kind, EventKind::MeasureEnd { .. }))
        .map(|e| (e.node, e.t))
        .collect()
}

#[test]
fn parallel_run_verifies() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let model = SlotModel::new(int(5)).unwrap();
    let trace = run_slotted(
        &reference_parallel(),
        &task,
        &net,
        &model,
        &Profiles::uniform(),
        &Outcomes::Seeded(7),
    )
    .unwrap();
    assert_eq!(trace.verdict, Verdict::Verified);
    let starts: BTreeMap<usize, u32> = trace
        .events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::MeasureStart { slot, .. } => Some((e.node, slot.unwrap())),
            _ => None,
        })
        .collect();
    assert_eq!(starts, BTreeMap::from([(2, 2), (3, 3), (4, 2), (6, 2)]));
}

#[test]
fn sequential_run_completes_in_order() {
    let task = Task::new(1, 5).unwrap();
    let trace = run_slotted(
        &reference_sequential(),
        &task,
        &PathNetwork::new(6),
        &SlotModel::new(int(1)).unwrap(),
        &Profiles::uniform(),
        &Outcomes::Seeded(1),
    )
    .unwrap();
    assert_eq!(trace.verdict, Verdict::Verified);
    let order: Vec<usize> = ends(&trace).into_iter().map(|(n, _)| n).collect();
    assert_eq!(order, vec![2, 3, 4, 6]);
    let times: Vec<_> = ends(&trace).into_iter().map(|(_, t)| t).collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn heterogeneous_durations_change_nothing_logical() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let model = SlotModel::new(int(5)).unwrap();
    let fast = Profiles::uniform().with_duration(3, ratio(5, 4));
    let a = run_slotted(
        &reference_parallel(),
        &task,
        &net,
        &model,
        &Profiles::uniform(),
        &Outcomes::Seeded(3),
    )
    .unwrap();
    let b = run_slotted(&reference_parallel(), &task, &net, &model, &fast, &Outcomes::Seeded(3)).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.final_frames, b.final_frames);
    for end in [1, 5] {
        assert_eq!(infer_order(&a, end).unwrap(), infer_order(&b, end).unwrap());
    }
    assert!(run_slotted(
        &reference_parallel(),
        &task,
        &net,
        &model,
        &Profiles::uniform().with_duration(2, int(6)),
        &Outcomes::Seeded(3)
    )
    .is_err());
}

#[test]
fn invalid_schedule_is_refused() {
    let mut bad = reference_parallel();
    bad.assign(3, 2, Basis::Y);
    let r = run_slotted(
        &bad,
        &Task::new(1, 5).unwrap(),
        &PathNetwork::new(6),
        &SlotModel::new(int(5)).unwrap(),
        &Profiles::uniform(),
        &Outcomes::Seeded(0),
    );
    assert!(matches!(r, Err(Error::InvalidSchedule(_))));
}

#[test]
fn runs_are_deterministic() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let model = SlotModel::new(int(5)).unwrap();
    let run = |seed| {
        run_slotted(
            &reference_parallel(),
            &task,
            &net,
            &model,
            &Profiles::uniform(),
            &Outcomes::Seeded(seed),
        )
        .unwrap()
    };
    assert_eq!(run(42).to_json_lines(), run(42).to_json_lines());
    let text = run(42).to_json_lines();
    assert_eq!(SimTrace::from_json_lines(&text).unwrap().to_json_lines(), text);
    let outcomes = |t: &SimTrace| -> Vec<_> {
        t.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::MeasureEnd { .. }))
            .cloned()
            .collect()
    };
    assert!((0..20).any(|s| outcomes(&run(s)) != outcomes(&run(42))));
}

#[test]
fn slow_middle_profile_shows_disagreement() {
    let p = fixture("slow_middle.json");
    let task = Task::new(1, 4).unwrap();
    let net = PathNetwork::new(4);
    let trace = run_async(&task, &net, &p, &Outcomes::Seeded(5)).unwrap();
    let at1: Vec<usize> = infer_order(&trace, 1).unwrap().into_iter().map(|(n, _)| n).collect();
    let at4: Vec<usize> = infer_order(&trace, 4).unwrap().into_iter().map(|(n, _)| n).collect();
    assert_eq!(at1, vec![2, 3]);
    assert_eq!(at4, vec![3, 2]);
    let report = detect_ambiguity(&trace, &net.graph()).unwrap();
    assert_eq!(report.pairs.len(), 1);
    assert_eq!((report.pairs[0].first, report.pairs[0].second), (2, 3));
    assert!(matches!(trace.verdict, Verdict::AmbiguityDetected(_)));
}

#[test]
fn symmetric_async_agrees() {
    let task = Task::new(1, 4).unwrap();
    let net = PathNetwork::new(4);
    let trace = run_async(&task, &net, &fixture("symmetric.json"), &Outcomes::Seeded(5)).unwrap();
    assert_eq!(infer_order(&trace, 1).unwrap(), infer_order(&trace, 4).unwrap());
    assert!(detect_ambiguity(&trace, &net.graph()).unwrap().is_empty());
    assert_eq!(trace.verdict, Verdict::Verified);
}

#[test]
fn overlapping_neighbours_are_flagged() {
    let task = Task::new(1, 4).unwrap();
    let net = PathNetwork::new(4);
    let trace = run_async(&task, &net, &fixture("overlap.json"), &Outcomes::Seeded(0)).unwrap();
    assert!(!detect_ambiguity(&trace, &net.graph()).unwrap().is_empty());
}

#[test]
fn relay_after_measure_delays_feedback() {
    let task = Task::new(1, 4).unwrap();
    let net = PathNetwork::new(4);
    let slow = fixture("slow_middle.json").with_duration(2, ratio(9, 2));
    let m3_at_1 = |p: &Profiles| {
        let trace = run_async(&task, &net, p, &Outcomes::Seeded(5)).unwrap();
        trace.feedback_at(1).iter().find(|f| f.1 == 3).unwrap().0
    };
    assert_eq!(m3_at_1(&slow), int(5));
    let mut held = slow.clone();
    held.relay_after_measure = true;
    // node 2 finishes at 11/2 and only then passes M3 on
    assert_eq!(m3_at_1(&held), ratio(13, 2));
}

#[test]
fn slotted_orders_agree_across_slots() {
    for (sched, tq) in [(reference_parallel(), int(5)), (reference_sequential(), int(1))] {
        let model = SlotModel::new(tq).unwrap();
        let trace = run_slotted(
            &sched,
            &Task::new(1, 5).unwrap(),
            &PathNetwork::new(6),
            &model,
            &Profiles::uniform(),
            &Outcomes::Seeded(9),
        )
        .unwrap();
        let slot = |n: usize| sched.get(n).unwrap().slot;
        // ordered pairs (earlier, later) of outcomes from different slots
        let cross = |order: Vec<(usize, Outcome)>| -> Vec<(usize, usize)> {
            let mut v = Vec::new();
            for (i, a) in order.iter().enumerate() {
                for b in &order[i + 1..] {
                    if slot(a.0) != slot(b.0) {
                        v.push((a.0, b.0));
                    }
                }
            }
            v.sort();
            v
        };
        assert_eq!(
            cross(infer_order(&trace, 1).unwrap()),
            cross(infer_order(&trace, 5).unwrap())
        );
        assert!(detect_ambiguity(&trace, &PathNetwork::new(6).graph())
            .unwrap()
            .is_empty());
    }
}

#[test]
fn streaming_matches_batch_and_reports_slots() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let g0 = net.graph();
    let sched = reference_parallel();
    let model = SlotModel::new(int(5)).unwrap();
    for pattern in 0..16u64 {
        let trace = run_slotted(
            &sched,
            &task,
            &net,
            &model,
            &Profiles::uniform(),
            &Outcomes::pattern(&measuring(&sched), pattern),
        )
        .unwrap();
        let batch = batch_frame(&trace, &g0).unwrap();
        for end in [1, 5] {
            let res = streaming_corrector(&trace, &sched, &g0, end).unwrap();
            assert_eq!(res.exponent(), batch.frame().exponent(end));
            assert_eq!(res.steps.iter().map(|s| s.slot).collect::<Vec<_>>(), vec![2, 3]);
        }
        // node 1 hears from node 2 in slot 2 and node 3 in slot 3
        let at1 = streaming_corrector(&trace, &sched, &g0, 1).unwrap();
        assert_eq!(
            at1.steps[0].consumed.iter().map(|c| c.node).collect::<Vec<_>>(),
            vec![2, 4]
        );
        assert_eq!(
            at1.steps[1].consumed.iter().map(|c| c.node).collect::<Vec<_>>(),
            vec![3]
        );
        assert_eq!(trace.verdict, Verdict::Verified);
    }
}

#[test]
fn untouched_end_keeps_zero_frame() {
    // D = 1: nothing between the ends, the outer node is a Z that only
    // touches r, never s
    let task = Task::new(1, 2).unwrap();
    let net = PathNetwork::new(3);
    let model = SlotModel::new(int(1)).unwrap();
    let res = parallel_schedule(&task, &net, &model).unwrap();
    let trace = run_slotted(
        &res.schedule,
        &task,
        &net,
        &model,
        &Profiles::uniform(),
        &Outcomes::Forced(BTreeMap::from([(3, Outcome::Minus)])),
    )
    .unwrap();
    assert_eq!(trace.final_frames[&1], 0);
    assert_eq!(trace.final_frames[&2], 2);
    assert_eq!(trace.verdict, Verdict::Verified);
}

#[test]
fn dropped_feedback_is_reported() {
    let p = fixture("dropped_feedback.json");
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let model = SlotModel::new(int(5)).unwrap();
    let trace = run_slotted(&reference_parallel(), &task, &net, &model, &p, &Outcomes::Seeded(2)).unwrap();
    let err = streaming_corrector(&trace, &reference_parallel(), &net.graph(), 1).unwrap_err();
    assert_eq!(
        err,
        Error::MissingFeedback {
            node: 3,
            slot: 3,
            end: 1,
            deadline: "17/1".into()
        }
    );
    assert!(matches!(trace.verdict, Verdict::Failed(ref r) if r.contains("node 3")));
}

#[test]
fn verification_examples() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    for (sched, tq) in [(reference_parallel(), int(5)), (reference_sequential(), int(1))] {
        let model = SlotModel::new(tq).unwrap();
        for pattern in 0..16 {
            let trace = run_slotted(
                &sched,
                &task,
                &net,
                &model,
                &Profiles::uniform(),
                &Outcomes::pattern(&measuring(&sched), pattern),
            )
            .unwrap();
            assert!(verify_task(&trace, &task, &net.graph()).unwrap());
        }
    }
}

#[test]
fn misordered_interpretation_is_caught() {
    let task = Task::new(1, 5).unwrap();
    let net = PathNetwork::new(6);
    let g0 = net.graph();
    let sched = reference_parallel();
    let model = SlotModel::new(int(5)).unwrap();
    let mut caught = 0;
    for pattern in 0..16 {
        let trace = run_slotted(
            &sched,
            &task,
            &net,
            &model,
            &Profiles::uniform(),
            &Outcomes::pattern(&measuring(&sched), pattern),
        )
        .unwrap();
        let mut ms = trace.measurements().unwrap();
        ms.sort_by_key(|m| (m.slot, m.node));
        let mut seq: Vec<_> = ms.iter().map(|m| (m.node, m.logical, m.outcome)).collect();
        // node 3 (slot 3) read before node 2 (slot 2)
        let i2 = seq.iter().position(|s| s.0 == 2).unwrap();
        let i3 = seq.iter().position(|s| s.0 == 3).unwrap();
        seq.swap(i2, i3);
        let wrong = interpret(&g0, &seq).unwrap();
        let frames = BTreeMap::from([(1, wrong.frame().exponent(1)), (5, wrong.frame().exponent(5))]);
        if !verify_with_frames(&trace, &task, &g0, &frames).unwrap().ok() {
            caught += 1;
        }
    }
    assert!(caught > 0);
}

#[test]
fn infer_order_rejects_inner_nodes() {
    let trace = run_async(
        &Task::new(1, 4).unwrap(),
        &PathNetwork::new(4),
        &fixture("symmetric.json"),
        &Outcomes::Seeded(0),
    )
    .unwrap();
    assert_eq!(infer_order(&trace, 2), Err(Error::NotAnEndNode(2)));
    let single = run_async(
        &Task::new(1, 3).unwrap(),
        &PathNetwork::new(3),
        &Profiles::uniform(),
        &Outcomes::Seeded(0),
    )
    .unwrap();
    assert_eq!(infer_order(&single, 1).unwrap().len(), 1);
}
