use thiserror::Error;

/// Errors produced by the simulator, code construction and experiment layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("CSS condition violated: X-stabilizer row {x_row} anticommutes with Z-stabilizer row {z_row}")]
    CssCondition { x_row: usize, z_row: usize },

    #[error("degenerate code: k = {0} logical qubits")]
    DegenerateCode(i64),

    #[error("distance violation: errors {first} and {second} share a syndrome but differ by a logical operator")]
    DistanceViolation { first: String, second: String },

    #[error("encoder construction bug: {0}")]
    EncoderConstruction(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
