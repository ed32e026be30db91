use thiserror::Error;

use crate::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..={max}", max = crate::stabilizer::MAX_QUBITS)]
    QubitCount(usize),
    #[error("qubit {qubit} out of range for {n}-qubit tableau")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("tableau sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("generators do not form a valid stabilizer group: {0}")]
    InvalidGenerators(String),
    #[error("forced outcome {forced} contradicts deterministic outcome {actual}")]
    ContradictoryOutcome { forced: i8, actual: i8 },
    #[error("too many free qubits for exhaustive local Clifford search ({0} > 4)")]
    TooManyFreeQubits(usize),

    #[error("node {0} is not part of the graph")]
    UnknownNode(NodeId),
    #[error("node {0} has been deleted")]
    DeletedNode(NodeId),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("node {b} is not a neighbor of {a}")]
    NotANeighbor { a: NodeId, b: NodeId },
    #[error("node {0} has no neighbors, X measurement needs a special neighbor")]
    IsolatedNode(NodeId),
    #[error("X-basis corrections cannot be tracked in a diagonal Pauli frame")]
    NonDiagonalCorrection,

    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("quantum slot length must be positive, got {0}")]
    NonPositiveSlot(String),
    #[error("scheduling needs t_q >= 1, got {0}")]
    SlotBelowOne(String),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("schedule is missing an assignment for node {0}")]
    MissingAssignment(NodeId),
    #[error("schedule measures node {node} in slot {slot} after it was deleted")]
    MeasuresDeletedNode { node: NodeId, slot: u32 },
    #[error("brute-force instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("no valid schedule within {0} slots")]
    NoScheduleWithinCap(u32),

    #[error("invalid node profile: {0}")]
    InvalidProfile(String),
    #[error("schedule failed validation with {0} violation(s)")]
    InvalidSchedule(usize),
    #[error("missing feedback from node {node} (slot {slot}) at end node {end}, deadline t={deadline}")]
    MissingFeedback {
        node: NodeId,
        slot: u32,
        end: NodeId,
        deadline: String,
    },
    #[error("node {0} is not an end node of the task")]
    NotAnEndNode(NodeId),
    #[error("trace incomplete: {0}")]
    TraceIncomplete(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
