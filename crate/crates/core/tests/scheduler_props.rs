use proptest::prelude::*;
use slotq::rational::{self, int, ratio, Rational};
use slotq::scheduler::{
    brute_force_min_slots, outer_slots, parallel_schedule, sequential_inflation_threshold, sequential_schedule,
    tstar_bounds,
};
use slotq::temporal::{
    breakpoints, earliest_slot, finite_breakpoints, validate, Basis, Breakpoint, PathNetwork, SlotModel, Task,
};

/// Task `(s, s+D)` on a path; `left`/`right` add outer neighbors.
fn setup(d: usize, left: bool, right: bool) -> (Task, PathNetwork) {
    let s = if left { 2 } else { 1 };
    let r = s + d;
    (
        Task::new(s, r).unwrap(),
        PathNetwork::new(if right { r + 1 } else { r }),
    )
}

fn measuring(task: &Task, net: &PathNetwork) -> Vec<usize> {
    net.measurement_plan(task).into_iter().map(|(i, _)| i).collect()
}

#[test]
fn schedules_are_sound_at_every_breakpoint() {
    for d in 2..=12 {
        for (left, right) in [(false, false), (true, true), (false, true), (true, false)] {
            let (task, net) = setup(d, left, right);
            for tq in finite_breakpoints(&task, &measuring(&task, &net)).unwrap() {
                let model = SlotModel::new(tq).unwrap();
                for res in [
                    sequential_schedule(&task, &net, &model).unwrap(),
                    parallel_schedule(&task, &net, &model).unwrap(),
                ] {
                    assert!(validate(&res.schedule, &task, &net.graph(), &model).unwrap().is_empty());
                    res.schedule.check_complete(&task, &net).unwrap();
                }
            }
        }
    }
}

#[test]
fn parallel_is_optimal_on_small_instances() {
    for d in 2..=7 {
        let (task, net) = setup(d, true, true);
        for tq in finite_breakpoints(&task, &measuring(&task, &net)).unwrap() {
            let model = SlotModel::new(tq).unwrap();
            let par = parallel_schedule(&task, &net, &model).unwrap();
            let (best, witness) =
                brute_force_min_slots(&task, &net.graph(), &net.measurement_plan(&task), &model, 10).unwrap();
            assert!(validate(&witness, &task, &net.graph(), &model).unwrap().is_empty());
            assert_eq!(par.t_star, best, "D={d} t_q={}", rational::format(&tq));
        }
    }
}

#[test]
fn inner_only_brute_force_matches() {
    let task = Task::new(1, 7).unwrap();
    let net = PathNetwork::new(7);
    let model = SlotModel::new(int(2)).unwrap();
    let plan: Vec<_> = task.inner_nodes().into_iter().map(|i| (i, Basis::Y)).collect();
    let (best, _) = brute_force_min_slots(&task, &net.graph(), &plan, &model, 10).unwrap();
    assert_eq!(parallel_schedule(&task, &net, &model).unwrap().inner_slots, best);
}

#[test]
fn bounds_and_regimes() {
    for d in 2..=32 {
        let (task, net) = setup(d, false, false);
        let (lo, hi) = tstar_bounds(d).unwrap();
        let seq = sequential_schedule(&task, &net, &SlotModel::new(int(1)).unwrap()).unwrap();
        assert_eq!(seq.inner_slots, d as u32);
        let big = SlotModel::new(int(d as i64 - 1).max(int(1))).unwrap();
        assert_eq!(parallel_schedule(&task, &net, &big).unwrap().inner_slots, lo);
        for tq in finite_breakpoints(&task, &task.inner_nodes()).unwrap() {
            let model = SlotModel::new(tq).unwrap();
            let par = parallel_schedule(&task, &net, &model).unwrap();
            assert!((lo..=hi).contains(&par.inner_slots), "D={d} t_q={tq}");
            let seq = sequential_schedule(&task, &net, &model).unwrap();
            assert_eq!(seq.inner_slots, d as u32);
        }
    }
}

#[test]
fn parallel_dominates_sequential() {
    for d in 2..=16 {
        for (left, right) in [(false, false), (true, true)] {
            let (task, net) = setup(d, left, right);
            for tq in finite_breakpoints(&task, &measuring(&task, &net)).unwrap() {
                let model = SlotModel::new(tq).unwrap();
                let par = parallel_schedule(&task, &net, &model).unwrap();
                let seq = sequential_schedule(&task, &net, &model).unwrap();
                assert!(par.t_star <= seq.t_star);
            }
        }
    }
}

#[test]
fn outer_rules() {
    for d in 2..=12 {
        let (task, net) = setup(d, true, true);
        let threshold = sequential_inflation_threshold(d).unwrap();
        for tq in finite_breakpoints(&task, &measuring(&task, &net)).unwrap() {
            let model = SlotModel::new(tq).unwrap();
            assert_eq!(outer_slots(&task, &net, &model)[&(task.s - 1)], 2);
            let seq = sequential_schedule(&task, &net, &model).unwrap();
            assert_eq!(seq.t_star > d as u32, tq < threshold, "D={d} t_q={tq}");
        }
    }
}

#[test]
fn breakpoint_pieces_are_constant() {
    let eps = ratio(1, 1000);
    for d in 1..=12usize {
        let task = Task::new(1, 1 + d).unwrap();
        let node = 1 + d;
        let pts = breakpoints(&task, &[node]).unwrap();
        for w in pts.windows(2) {
            let Breakpoint::Finite(lo) = w[0] else { unreachable!() };
            let probes: Vec<Rational> = match w[1] {
                Breakpoint::Finite(hi) => vec![lo, (lo + hi) / int(2), hi - eps.min((hi - lo) / int(2))],
                Breakpoint::Infinity => vec![lo, lo + int(1), lo * int(1000)],
            };
            let slots: Vec<u32> = probes
                .iter()
                .map(|&t| earliest_slot(&task, node, &SlotModel::new(t).unwrap()))
                .collect();
            assert!(slots.windows(2).all(|p| p[0] == p[1]), "d={d} {slots:?}");
        }
    }
}

proptest! {
    #[test]
    fn earliest_slot_is_monotone(p1 in 1i64..200, q1 in 1i64..50, p2 in 1i64..200, q2 in 1i64..50, d in 1usize..40) {
        let (a, b) = (ratio(p1, q1), ratio(p2, q2));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let task = Task::new(1, 100).unwrap();
        let at = |t: Rational, node: usize| earliest_slot(&task, node, &SlotModel::new(t).unwrap());
        prop_assert!(at(lo, 1 + d) >= at(hi, 1 + d));
        prop_assert!(at(lo, 1 + d) <= at(lo, 2 + d));
    }

    #[test]
    fn within_slot_order_does_not_matter(d in 2usize..12, k in 1i64..12) {
        let (task, net) = setup(d, true, true);
        let model = SlotModel::new(int(k)).unwrap();
        let res = parallel_schedule(&task, &net, &model).unwrap();
        let mut g = net.graph();
        let mut rev = net.graph();
        for (_, nodes) in res.schedule.slots() {
            for &i in &nodes {
                let b = res.schedule.get(i).unwrap().basis.pauli().unwrap();
                g = g.measure_zy(i, b, slotq::stabilizer::Outcome::Plus).unwrap().0;
            }
            for &i in nodes.iter().rev() {
                let b = res.schedule.get(i).unwrap().basis.pauli().unwrap();
                rev = rev.measure_zy(i, b, slotq::stabilizer::Outcome::Plus).unwrap().0;
            }
            prop_assert_eq!(&g, &rev);
        }
    }
}
