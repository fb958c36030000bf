use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The frequency table has no words.
    #[error("empty corpus: nothing to analyze")]
    EmptyCorpus,

    /// The spectrum stores no points.
    #[error("empty spectrum: nothing to analyze")]
    EmptySpectrum,

    /// Fewer than two distinct k inside the fit range.
    #[error("insufficient distinct k for a power-law fit (need >= 2, found {found})")]
    InsufficientPoints { found: usize },

    /// The fitted or requested slope violates `a >= 1`.
    #[error("bound inapplicable: slope a = {a} is below 1")]
    InapplicableBound { a: f64 },

    /// A parameter was non-finite or out of its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A spectrum point violated `k >= 1` or `F(k) > 0`.
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// A real-valued spectrum was passed where whole counts are required.
    #[error("spectrum has real-valued counts and cannot be materialized as a corpus")]
    RealValuedSpectrum,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
