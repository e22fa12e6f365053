use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("doubled coordinates {0:?} mix integer and half-integer parity")]
    InvalidHurwitz([i64; 4]),

    #[error("non-finite coordinate in quantizer input")]
    NonFinite,

    #[error("modulus has zero norm")]
    ZeroModulus,

    #[error("partition enumeration found {found} coset leaders, expected {expected}")]
    PartitionCount { expected: usize, found: usize },

    #[error("quotient group is not elementary abelian: {0}")]
    NotElementaryAbelian(String),

    #[error("constellation needs at least two points")]
    DegenerateConstellation,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("check degree {degree} exceeds the direct-evaluation limit {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("degree distribution cannot be realized: {0}")]
    Unrealizable(String),

    /// `margin` is the best achievable minimum tunnel gap (negative).
    #[error("no feasible degree distribution at {snr_db} dB: best tunnel margin {margin:.5}")]
    Infeasible { snr_db: f64, margin: f64 },

    #[error("threshold bracket not found in [{lo} dB, {hi} dB]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("mutual information {0} outside the invertible range of the J table")]
    OutOfRange(f64),

    #[error("corrupt record: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
