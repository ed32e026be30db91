use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slotq::graph_state::{rule_agrees_with_oracle, FrameTracker, Graph};
use slotq::stabilizer::{LocalOp, Outcome, OutcomePolicy, Pauli, StabTableau};

fn random_graph(rng: &mut StdRng, n: usize) -> Graph {
    let p = rng.gen_range(0.2..0.8);
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

#[test]
fn z_and_y_rules_match_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5107);
    for case in 0..500 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(&mut rng, n);
        let a = rng.gen_range(0..n);
        let basis = if rng.gen_bool(0.5) { Pauli::Z } else { Pauli::Y };
        for outcome in [Outcome::Plus, Outcome::Minus] {
            assert!(
                rule_agrees_with_oracle(&g, a, basis, None, outcome).unwrap(),
                "case {case}: {basis:?} on {a} outcome {outcome:?}, edges {:?}",
                g.edges()
            );
        }
    }
}

#[test]
fn x_rule_matches_oracle() {
    let mut rng = StdRng::seed_from_u64(0x0b0b);
    let mut checked = 0;
    while checked < 300 {
        let n = rng.gen_range(2..=10);
        let g = random_graph(&mut rng, n);
        let a = rng.gen_range(0..n);
        let nb: Vec<_> = g.neighbors(a).iter().copied().collect();
        if nb.is_empty() {
            continue;
        }
        let b = nb[rng.gen_range(0..nb.len())];
        for outcome in [Outcome::Plus, Outcome::Minus] {
            assert!(
                rule_agrees_with_oracle(&g, a, Pauli::X, Some(b), outcome).unwrap(),
                "X on {a} via {b} outcome {outcome:?}, edges {:?}",
                g.edges()
            );
        }
        checked += 1;
    }
}

#[test]
fn example_pipeline_y_on_middle_of_path() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let (_, t) = StabTableau::from_graph(&g)
        .unwrap()
        .measure_pauli(1, Pauli::Y, OutcomePolicy::Forced(Outcome::Plus))
        .unwrap();
    // sqrt(iZ) on both neighbours
    let t = t
        .apply_single_qubit_clifford(0, LocalOp::SDag)
        .unwrap()
        .apply_single_qubit_clifford(2, LocalOp::SDag)
        .unwrap();
    let edge = Graph::from_edges(3, &[(0, 2)]).unwrap().delete_node(1).unwrap();
    let expected = StabTableau::from_graph_with_measured(&edge, &[(1, Pauli::Y, Outcome::Plus)]).unwrap();
    assert!(t.states_equal(&expected).unwrap());
}

/// Physical execution with postponed corrections, then the final frame,
/// reproduces the logical graph-rule sequence.
fn frame_case(seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let g0 = random_graph(&mut rng, n);
    let steps = rng.gen_range(1..=5.min(n));
    let mut tracker = FrameTracker::new(g0.clone());
    let mut physical = StabTableau::from_graph(&g0).unwrap();
    let mut measured = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..steps {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
        let node = order[i];
        let logical = if rng.gen_bool(0.5) { Pauli::Z } else { Pauli::Y };
        let (pb, _) = tracker.physical_basis_for(node, logical);
        let forced = if rng.gen_bool(0.5) {
            Outcome::Plus
        } else {
            Outcome::Minus
        };
        let (o, t) = physical.measure_pauli(node, pb, OutcomePolicy::Forced(forced)).unwrap();
        physical = t;
        tracker.measure(node, logical, o).unwrap();
        measured.push((node, pb, o));
    }
    for node in tracker.graph().alive_nodes().collect::<Vec<_>>() {
        physical = physical
            .apply_single_qubit_clifford(node, tracker.frame().op(node))
            .unwrap();
    }
    let expected = StabTableau::from_graph_with_measured(tracker.graph(), &measured).unwrap();
    assert!(physical.states_equal(&expected).unwrap(), "seed {seed}");
}

#[test]
fn frame_tracking_matches_logical_sequence() {
    for seed in 0..400 {
        frame_case(seed);
    }
}

#[test]
fn frame_y_after_z_correction_flips_outcome() {
    // framed state Z|+> = |->, logical Y after Z frame measures physical Y with flipped sign
    let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let mut tracker = FrameTracker::new(g);
    tracker.measure(0, Pauli::Z, Outcome::Minus).unwrap();
    assert_eq!(tracker.frame().exponent(1), 2);
    assert_eq!(tracker.physical_basis_for(1, Pauli::Y), (Pauli::Y, true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_complement_is_involution(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let a = rng.gen_range(0..n);
        prop_assert_eq!(g.local_complement(a).unwrap().local_complement(a).unwrap(), g);
    }

    #[test]
    fn non_adjacent_complements_commute(seed in any::<u64>(), n in 2usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        prop_assume!(a != b && !g.has_edge(a, b));
        let ab = g.local_complement(a).unwrap().local_complement(b).unwrap();
        let ba = g.local_complement(b).unwrap().local_complement(a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn independent_measurements_commute(seed in any::<u64>(), n in 2usize..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let mut set = Vec::new();
        for v in 0..n {
            if set.iter().all(|&u| !g.has_edge(u, v)) && rng.gen_bool(0.5) {
                set.push(v);
            }
        }
        prop_assume!(set.len() >= 2);
        let plan: Vec<(usize, Pauli, Outcome)> = set
            .iter()
            .map(|&v| {
                let b = if rng.gen_bool(0.5) { Pauli::Z } else { Pauli::Y };
                let o = if rng.gen_bool(0.5) { Outcome::Plus } else { Outcome::Minus };
                (v, b, o)
            })
            .collect();
        let run = |order: &[(usize, Pauli, Outcome)]| {
            let mut t = FrameTracker::new(g.clone());
            for &(v, b, o) in order {
                // logical outcomes fixed by feeding physical = logical under a zero frame
                let (_, flip) = t.physical_basis_for(v, b);
                let phys = if flip { o.flipped() } else { o };
                t.measure(v, b, phys).unwrap();
            }
            (t.graph().clone(), t.frame().clone())
        };
        let forward = run(&plan);
        let mut rev = plan.clone();
        rev.reverse();
        prop_assert_eq!(forward, run(&rev));
    }

    #[test]
    fn canonical_form_ignores_generating_set(seed in any::<u64>(), n in 2usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let t = StabTableau::from_graph(&g).unwrap();
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let rows = t.generators().to_vec();
        let mixed = rows[i].product(&rows[j]).unwrap();
        let t2 = t.clone().with_generator(i, mixed).unwrap();
        prop_assert_eq!(t.canonical(), t2.canonical());
        prop_assert!(t.states_equal(&t2).unwrap());
    }

    #[test]
    fn deterministic_remeasurement_is_stable(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let a = rng.gen_range(0..n);
        let basis = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
        let (o1, t1) = StabTableau::from_graph(&g).unwrap().measure_pauli(a, basis, OutcomePolicy::Random(&mut rng)).unwrap();
        let (o2, t2) = t1.measure_pauli(a, basis, OutcomePolicy::Random(&mut rng)).unwrap();
        prop_assert_eq!(o1, o2);
        prop_assert!(t1.states_equal(&t2).unwrap());
    }
}
