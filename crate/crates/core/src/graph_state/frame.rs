//! Postponed corrections: a per-node power of `S`.
//!
//! With only Z and Y measurements every correction lies in the abelian group
//! `{I, S, Z, S_dag}`, so a node's pending correction is a single exponent
//! mod 4 and the order in which corrections arrive does not matter.

use serde::{Deserialize, Serialize};

use super::{CorrectionSpec, Graph};
use crate::error::{Error, Result};
use crate::stabilizer::{LocalOp, Outcome, Pauli};
use crate::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliFrame {
    exponents: Vec<u8>,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        PauliFrame { exponents: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, node: NodeId) -> u8 {
        self.exponents.get(node).copied().unwrap_or(0)
    }

    pub fn set_exponent(&mut self, node: NodeId, k: u8) {
        self.exponents[node] = k % 4;
    }

    /// Pending correction on `node` as a named operation.
    pub fn op(&self, node: NodeId) -> LocalOp {
        LocalOp::from_s_power(self.exponent(node))
    }

    pub fn add(&mut self, node: NodeId, k: u8) {
        self.exponents[node] = (self.exponents[node] + k) % 4;
    }

    /// Folds a Z/Y correction into the frame.
    pub fn accumulate(&self, spec: &CorrectionSpec) -> Result<PauliFrame> {
        if spec.basis == Pauli::X {
            return Err(Error::NonDiagonalCorrection);
        }
        let mut out = self.clone();
        for (&node, &op) in &spec.targets {
            let k = op.s_power().ok_or(Error::NonDiagonalCorrection)?;
            if node >= out.exponents.len() {
                return Err(Error::UnknownNode(node));
            }
            out.add(node, k);
        }
        Ok(out)
    }
}

/// Physical basis (and outcome sign flip) that realises a logical
/// measurement of `logical` on a node carrying pending correction `S^k`.
///
/// The logical state is `S^k` applied to the physical one, so the physical
/// observable is `S^-k P S^k`. For `Y` this cycles `Y, X, -Y, -X`.
pub fn physical_basis(logical: Pauli, k: u8) -> (Pauli, bool) {
    let undo = LocalOp::from_s_power((4 - k % 4) % 4).clifford();
    let (x, z) = match logical {
        Pauli::X => (true, false),
        Pauli::Y => (true, true),
        Pauli::Z => (false, true),
    };
    let (px, pz, flip) = undo.conjugate(x, z);
    let basis = match (px, pz) {
        (true, false) => Pauli::X,
        (true, true) => Pauli::Y,
        _ => Pauli::Z,
    };
    (basis, flip)
}

pub fn logical_outcome(physical: Outcome, flip: bool) -> Outcome {
    if flip {
        physical.flipped()
    } else {
        physical
    }
}

/// One interpreted measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementStep {
    pub node: NodeId,
    pub logical_basis: Pauli,
    pub physical_basis: Pauli,
    pub flip: bool,
    pub physical_outcome: Outcome,
    pub logical_outcome: Outcome,
    pub spec: CorrectionSpec,
}

/// Replays logical Z/Y measurements on a graph while accumulating the frame.
#[derive(Debug, Clone)]
pub struct FrameTracker {
    graph: Graph,
    frame: PauliFrame,
    steps: Vec<MeasurementStep>,
}

impl FrameTracker {
    pub fn new(graph: Graph) -> Self {
        let frame = PauliFrame::new(graph.len());
        FrameTracker {
            graph,
            frame,
            steps: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn frame(&self) -> &PauliFrame {
        &self.frame
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.steps
    }

    /// Basis the apparatus at `node` must use right now for `logical`.
    pub fn physical_basis_for(&self, node: NodeId, logical: Pauli) -> (Pauli, bool) {
        physical_basis(logical, self.frame.exponent(node))
    }

    /// Measures `node` in `logical` given the raw `physical` outcome.
    pub fn measure(&mut self, node: NodeId, logical: Pauli, physical: Outcome) -> Result<&MeasurementStep> {
        let (physical_basis, flip) = self.physical_basis_for(node, logical);
        let logical_outcome = logical_outcome(physical, flip);
        let (graph, spec) = self.graph.measure_zy(node, logical, logical_outcome)?;
        self.frame = self.frame.accumulate(&spec)?;
        self.graph = graph;
        self.steps.push(MeasurementStep {
            node,
            logical_basis: logical,
            physical_basis,
            flip,
            physical_outcome: physical,
            logical_outcome,
            spec,
        });
        Ok(self.steps.last().expect("just pushed"))
    }
}
