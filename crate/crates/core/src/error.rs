use thiserror::Error;

/// Errors raised by the quantizer, coder and benchmark routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A zero (or otherwise unnormalizable) vector was used where a
    /// direction is required.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// An argument violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A codebook index was outside `[0, N(L, K))`.
    #[error("index {index} out of range for codebook L={l}, K={k}")]
    IndexOutOfRange { index: String, l: usize, k: u32 },

    /// The lattice optimizer produced a non-finite gradient.
    #[error("non-finite gradient at vertex {vertex} (step {step})")]
    NonFinite { vertex: usize, step: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
