use super::Graph;
use crate::error::{Error, Result};
use crate::stabilizer::{Outcome, OutcomePolicy, Pauli, StabTableau};
use crate::NodeId;

/// Measures `a` on the tableau of `g`, applies the rule's correction
/// operations, and compares against the rule's output graph with `a` left in
/// its measured eigenstate. `special` is required for X.
pub fn rule_agrees_with_oracle(
    g: &Graph,
    a: NodeId,
    basis: Pauli,
    special: Option<NodeId>,
    outcome: Outcome,
) -> Result<bool> {
    let (g2, spec) = match basis {
        Pauli::X => g.measure_x(a, special.ok_or(Error::IsolatedNode(a))?, outcome)?,
        _ => g.measure_zy(a, basis, outcome)?,
    };
    let (_, mut t) = StabTableau::from_graph(g)?.measure_pauli(a, basis, OutcomePolicy::Forced(outcome))?;
    for (&node, &op) in &spec.targets {
        t = t.apply_single_qubit_clifford(node, op)?;
    }
    let expected = StabTableau::from_graph_with_measured(&g2, &[(a, basis, outcome)])?;
    t.states_equal(&expected)
}
