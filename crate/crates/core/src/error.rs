use thiserror::Error;

use crate::wiring::Side;

/// A malformed input file, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("endpoint {endpoint} is matched more than once on {side}'s side")]
    DuplicateEndpoint { side: Side, endpoint: usize },
    #[error("endpoint {endpoint} is connected to itself on {side}'s side")]
    SelfLoop { side: Side, endpoint: usize },
    #[error("endpoint {endpoint} is out of range for {side}'s side with {pipes} pipes")]
    EndpointOutOfRange {
        side: Side,
        endpoint: usize,
        pipes: usize,
    },
    #[error("the tap (endpoint 0) cannot be wired on Bob's side")]
    TapOnBobSide,
    #[error("invalid wiring for {side} on input {input}: {source}")]
    InvalidWiring {
        side: Side,
        input: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("truth table has undefined cells; a total table is required")]
    PartialTable,
    #[error("inconsistent protocol tree: {0}")]
    InconsistentTree(String),
    #[error("malformed one-way message: {0}")]
    MalformedMessage(String),
    #[error("boundary layout needs {needed} pipes, above the cap of {cap}")]
    LayoutTooLarge { needed: u128, cap: u128 },
    #[error("reversibility violation: {0}")]
    ReversibilityViolation(String),
    #[error("run did not halt within {cap} steps")]
    NonterminatingRun { cap: u64 },
    #[error("all {pool} ACCEPT pipes are in use on input x={input}")]
    AcceptPoolExhausted { pool: usize, input: usize },
    #[error("search limits exceeded: {0}")]
    CapExceeded(String),
    #[error("model violates the matching constraint: {0}")]
    ModelViolatesMatching(String),
    #[error("seed space of 2^{rho} seeds exceeds the cap of 2^{cap}")]
    SeedSpaceTooLarge { rho: u32, cap: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for errors caused by malformed or mismatched input rather than
    /// by the computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch(_)
                | Error::InvalidArgument(_)
                | Error::DuplicateEndpoint { .. }
                | Error::SelfLoop { .. }
                | Error::EndpointOutOfRange { .. }
                | Error::TapOnBobSide
                | Error::InvalidWiring { .. }
                | Error::PartialTable
                | Error::InconsistentTree(_)
                | Error::MalformedMessage(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
