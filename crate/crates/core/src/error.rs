use thiserror::Error;

use crate::graph::Role;

/// Errors produced by graph construction, decoding and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 1, got {0}")]
    EmptyAlphabet(usize),

    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("duplicate row ({0}, {1}, {2}) in satisfaction table")]
    DuplicateRow(usize, usize, usize),

    #[error("not a constraint function: f_{role:?} maps {witness:?} to more than one symbol")]
    NotAFunction { role: Role, witness: (usize, usize) },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("normalizer underflowed to zero")]
    DegenerateMass,

    #[error("mass has {got} entries, expected {expected}")]
    MassLength { expected: usize, got: usize },

    #[error("relaxation parameter {0} outside (0, 1)")]
    BetaOutOfRange(f64),

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("packet incomplete: {got} of {expected} observations")]
    IncompletePacket { expected: u64, got: u64 },

    #[error("cycle through edges {0:?} contains no supernode")]
    UncoveredCycle(Vec<usize>),

    #[error("codebook of 2^{0} words is too large to enumerate")]
    CodebookTooLarge(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short stable name used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyAlphabet(_) => "EmptyAlphabet",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::DuplicateRow(..) => "DuplicateRow",
            Error::NotAFunction { .. } => "NotAFunction",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::Parse { .. } => "Parse",
            Error::DegenerateMass => "DegenerateMass",
            Error::MassLength { .. } => "MassLength",
            Error::BetaOutOfRange(_) => "BetaOutOfRange",
            Error::EmptyHistogram => "EmptyHistogram",
            Error::IncompletePacket { .. } => "IncompletePacket",
            Error::UncoveredCycle(_) => "UncoveredCycle",
            Error::CodebookTooLarge(_) => "CodebookTooLarge",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ConfigInvalid(_) => "ConfigInvalid",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
