use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate sort `{0}`")]
    DuplicateSort(String),
    #[error("duplicate box `{0}`")]
    DuplicateBox(String),
    #[error("box `{box_name}` uses undeclared sort `{sort}`")]
    UnknownSort { box_name: String, sort: String },
    #[error("word uses undeclared sort `{0}`")]
    UnknownSortInWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hypergraph has a cycle through boxes {boxes:?}")]
pub struct CycleError {
    pub boxes: Vec<String>,
}

/// Which leg of a cospan a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leg {
    Input,
    Output,
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Leg::Input => "p",
            Leg::Output => "q",
        })
    }
}

/// One violated clause of the string-diagram conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Error)]
pub enum Violation {
    #[error("duplicate wire id `{0}`")]
    DuplicateWireId(String),
    #[error("duplicate box id `{0}`")]
    DuplicateBoxId(String),
    #[error("{context} references unknown wire `{wire}`")]
    UnknownWire { context: String, wire: String },
    #[error("wire `{wire}` has undeclared sort `{sort}`")]
    UnknownSort { wire: String, sort: String },
    #[error("box `{box_id}` has undeclared label `{label}`")]
    UnknownBox { box_id: String, label: String },
    #[error("box `{box_id}` has {found_inputs}->{found_outputs} ports, its label needs {expected_inputs}->{expected_outputs}")]
    ArityMismatch {
        box_id: String,
        expected_inputs: usize,
        expected_outputs: usize,
        found_inputs: usize,
        found_outputs: usize,
    },
    #[error("box `{box_id}` port {port} expects sort `{expected}` but wire has `{found}`")]
    PortSortMismatch {
        box_id: String,
        port: String,
        expected: String,
        found: String,
    },
    #[error("leg {leg} has length {found}, boundary word has length {expected}")]
    LegLengthMismatch { leg: Leg, expected: usize, found: usize },
    #[error("leg {leg} position {position} expects sort `{expected}` but wire has `{found}`")]
    LegSortMismatch {
        leg: Leg,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("left monogamy fails at wire `{wire}`: {sources} sources")]
    LeftMonogamy { wire: String, sources: usize },
    #[error("cycle through wires {wires:?}")]
    Acyclicity { wires: Vec<String> },
}

impl Violation {
    /// Short class name, stable across versions. Used by the CLI and tests.
    pub fn class(&self) -> &'static str {
        match self {
            Violation::DuplicateWireId(_) => "DuplicateWireId",
            Violation::DuplicateBoxId(_) => "DuplicateBoxId",
            Violation::UnknownWire { .. } => "UnknownWire",
            Violation::UnknownSort { .. } => "UnknownSort",
            Violation::UnknownBox { .. } => "UnknownBox",
            Violation::ArityMismatch { .. } => "ArityMismatch",
            Violation::PortSortMismatch { .. } => "PortSortMismatch",
            Violation::LegLengthMismatch { .. } => "LegLengthMismatch",
            Violation::LegSortMismatch { .. } => "LegSortMismatch",
            Violation::LeftMonogamy { .. } => "LeftMonogamy",
            Violation::Acyclicity { .. } => "Acyclicity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("codomain {left:?} does not match domain {right:?}")]
    DomainMismatch { left: Vec<String>, right: Vec<String> },
    #[error("diagrams are over different signatures")]
    SignatureMismatch,
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown box `{0}`")]
    UnknownBox(String),
    #[error("{0:?} is not a permutation of the word positions")]
    BadPermutation(Vec<usize>),
    #[error("invalid diagram: {}", display_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("piece does not apply: {0}")]
    InvalidPiece(String),
}

pub(crate) fn display_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<SignatureError> for DiagramError {
    fn from(e: SignatureError) -> Self {
        match e {
            SignatureError::UnknownSortInWord(s) | SignatureError::UnknownSort { sort: s, .. } => {
                DiagramError::UnknownSort(s)
            }
            SignatureError::DuplicateSort(s) => DiagramError::UnknownSort(s),
            SignatureError::DuplicateBox(b) => DiagramError::UnknownBox(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("shape mismatch: expected {expected:?} -> {expected_cod:?}, found {found:?} -> {found_cod:?}")]
    ShapeMismatch {
        expected: Vec<usize>,
        expected_cod: Vec<usize>,
        found: Vec<usize>,
        found_cod: Vec<usize>,
    },
    #[error("value for box `{box_name}` violates the backend axioms: {reason}")]
    BackendAxiomViolation { box_name: String, reason: String },
    #[error("no carrier size for sort `{0}`")]
    MissingSortSize(String),
    #[error("no value for box `{0}`")]
    MissingBox(String),
    #[error("interpretation and diagram use different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausalError {
    #[error("outputs {0} and {1} share a wire")]
    NonInjectiveOutputs(usize, usize),
    #[error("output position {0} out of range")]
    BadPosition(usize),
    #[error("output position {0} occurs in more than one set")]
    OverlappingSets(usize),
    #[error("duplicate output name `{0}`")]
    DuplicateName(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("diagram `{name}` is invalid: {}", display_violations(.violations))]
    Validation {
        name: String,
        violations: Vec<Violation>,
    },
    #[error("interpretation is invalid: {0}")]
    Interpretation(#[from] EvalError),
}
