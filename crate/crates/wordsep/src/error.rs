use thiserror::Error;

/// Errors shared across the engines and constructors.
#[derive(Debug, Error)]
pub enum Error {
    /// A pair operation was given two equal words, or words over
    /// incompatible alphabets.
    #[error("invalid pair: {0}")]
    InvalidPair(String),

    /// A word contained a symbol outside the machine's alphabet.
    #[error("unknown symbol index {symbol} for alphabet of size {alphabet}")]
    UnknownSymbol { symbol: u8, alphabet: u8 },

    /// A constructor was given parameters outside its domain.
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    /// A machine failed its structural invariants (unitarity, column sums,
    /// normalization, finiteness).
    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    /// Separation evaluation was asked about overlapping word sets.
    #[error("word sets overlap: {0}")]
    OverlappingSets(String),

    /// A word could not be parsed.
    #[error("cannot parse word {input:?}: {reason}")]
    WordParse { input: String, reason: String },

    /// A free-group word could not be parsed.
    #[error("cannot parse free-group word {input:?}: {reason}")]
    FreeWordParse { input: String, reason: String },

    /// A certificate construction refused because the optimizer's witness
    /// was below the required threshold.
    #[error("certificate refused: {0}")]
    CertificateRefused(String),

    /// A precondition of a check or evaluator was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
}
