use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("assignment has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("node order mismatch between operands")]
    NodeOrderMismatch,

    #[error("duplicate node {0:?} in node order")]
    DuplicateNode(String),

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("zero vector cannot be normalized")]
    DegenerateState,

    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network has {nodes} nodes, enumeration limit is {limit}")]
    TooManyNodes { nodes: usize, limit: usize },

    #[error("energy parameter {name} = {value} must be positive and at least the base energy")]
    InvalidEnergy { name: String, value: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("degenerate dynamics at t = {t}: sector {sector} of node {node:?} has no admissible state")]
    DegenerateDynamics { t: f64, node: String, sector: u8 },

    #[error("network cannot be prepared: no assignment satisfies the gates and input pins")]
    Unpreparable,

    #[error("network has no drive node")]
    NoDriveNode,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Causes of a DSL parse failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared node {0:?}")]
    UndeclaredNode(String),
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("duplicate gate name {0:?}")]
    DuplicateGate(String),
    #[error("arity mismatch in gate {gate:?}: {detail}")]
    ArityMismatch { gate: String, detail: String },
    #[error("gate {gate:?} lists input pattern {pattern} more than once")]
    DuplicatePattern { gate: String, pattern: String },
    #[error("gate {0:?} has an empty truth table")]
    EmptyTable(String),
    #[error("gate {gate:?} uses node {node:?} more than once")]
    RepeatedGateNode { gate: String, node: String },
    #[error("node {0:?} is pinned more than once")]
    MultiplePins(String),
    #[error("pin value must be 0 or 1, got {0:?}")]
    PinValue(String),
    #[error("drive declared more than once")]
    MultipleDrives,
    #[error("drive node {0:?} carries no output pin")]
    DriveWithoutOutputPin(String),
}

pub type Result<T> = std::result::Result<T, Error>;
