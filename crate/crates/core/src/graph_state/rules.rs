//! Pauli measurement graph rules and their correction operations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::stabilizer::{LocalOp, Outcome, Pauli};
use crate::NodeId;

/// Local corrections that return a measured graph state to graph-state
/// form: `corrected = targets . measured`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionSpec {
    pub basis: Pauli,
    pub outcome: Outcome,
    pub measured: NodeId,
    pub special_neighbor: Option<NodeId>,
    pub targets: BTreeMap<NodeId, LocalOp>,
}

impl CorrectionSpec {
    fn uniform(
        basis: Pauli,
        outcome: Outcome,
        measured: NodeId,
        nodes: impl IntoIterator<Item = NodeId>,
        op: LocalOp,
    ) -> Self {
        let targets = if op == LocalOp::I {
            BTreeMap::new()
        } else {
            nodes.into_iter().map(|b| (b, op)).collect()
        };
        CorrectionSpec {
            basis,
            outcome,
            measured,
            special_neighbor: None,
            targets,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.targets.values().all(|op| op.s_power().is_some())
    }
}

impl Graph {
    /// Z measurement: vertex deletion, `Z` on `N(a)` for outcome `-1`.
    pub fn measure_z(&self, a: NodeId, outcome: Outcome) -> Result<(Graph, CorrectionSpec)> {
        self.require_alive(a)?;
        let op = match outcome {
            Outcome::Plus => LocalOp::I,
            Outcome::Minus => LocalOp::Z,
        };
        let spec = CorrectionSpec::uniform(Pauli::Z, outcome, a, self.neighbors(a).iter().copied(), op);
        Ok((self.delete_node(a)?, spec))
    }

    /// Y measurement: local complementation at `a`, then deletion of `a`.
    /// Corrections on `N(a)` are `sqrt(iZ)` (outcome `+1`) or `sqrt(-iZ)`
    /// (outcome `-1`), i.e. `S_dag` and `S` respectively.
    pub fn measure_y(&self, a: NodeId, outcome: Outcome) -> Result<(Graph, CorrectionSpec)> {
        self.require_alive(a)?;
        let op = match outcome {
            Outcome::Plus => LocalOp::SDag,
            Outcome::Minus => LocalOp::S,
        };
        let spec = CorrectionSpec::uniform(Pauli::Y, outcome, a, self.neighbors(a).iter().copied(), op);
        Ok((self.local_complement(a)?.delete_node(a)?, spec))
    }

    /// X measurement with special neighbor `b`:
    /// `tau_b(tau_a(tau_b(G)) - a)`.
    pub fn measure_x(&self, a: NodeId, b: NodeId, outcome: Outcome) -> Result<(Graph, CorrectionSpec)> {
        self.require_alive(a)?;
        if self.degree(a) == 0 {
            return Err(Error::IsolatedNode(a));
        }
        if !self.has_edge(a, b) {
            return Err(Error::NotANeighbor { a, b });
        }
        let na = self.neighbors(a);
        let nb = self.neighbors(b);
        let mut targets = BTreeMap::new();
        match outcome {
            Outcome::Plus => {
                targets.insert(b, LocalOp::SqrtYNeg);
                for &c in na {
                    if c != b && !nb.contains(&c) {
                        targets.insert(c, LocalOp::Z);
                    }
                }
            }
            Outcome::Minus => {
                targets.insert(b, LocalOp::SqrtYPos);
                for &c in nb {
                    if c != a && !na.contains(&c) {
                        targets.insert(c, LocalOp::Z);
                    }
                }
            }
        }
        let g = self
            .local_complement(b)?
            .local_complement(a)?
            .delete_node(a)?
            .local_complement(b)?;
        let spec = CorrectionSpec {
            basis: Pauli::X,
            outcome,
            measured: a,
            special_neighbor: Some(b),
            targets,
        };
        Ok((g, spec))
    }

    /// Z or Y rule by basis. X needs an explicit special neighbor.
    pub fn measure_zy(&self, a: NodeId, basis: Pauli, outcome: Outcome) -> Result<(Graph, CorrectionSpec)> {
        match basis {
            Pauli::Z => self.measure_z(a, outcome),
            Pauli::Y => self.measure_y(a, outcome),
            Pauli::X => Err(Error::NonDiagonalCorrection),
        }
    }
}
