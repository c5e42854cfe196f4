use thiserror::Error;

/// Errors surfaced by the library. Each variant maps to a documented CLI exit
/// code: parse errors to 2, non-isolated input to 3, exceeded iteration caps
/// to 4, everything else (internal invariant violations) to 5.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("Jacobian ideal is not zero-dimensional; input has non-isolated critical locus")]
    NotIsolated,

    #[error("characteristic polynomial has an irreducible factor of degree >= 2; spectrum not rational")]
    IrrationalSpectrum,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("generator span has rank below the ambient rank")]
    RankDeficient,

    #[error("iteration cap exceeded in stage {stage} (suspected non-tame input)")]
    IterationCapExceeded { stage: &'static str },

    #[error("saturation did not stabilize within the iteration cap")]
    SaturationDiverged,

    #[error("tau-divisibility violated during window normalization")]
    DivisibilityViolation,

    #[error("strictness violated: input lattice is not good")]
    NotGoodLattice,

    #[error("spectrum multiplicities sum to {got}, expected {expected}")]
    SpectrumCountMismatch { got: usize, expected: usize },

    #[error("spectrum mean below (n+1)/2; upstream inconsistency")]
    MeanBelowBound,

    #[error("basis representation has nonzero residual")]
    RepresentationFailure,

    #[error("irreducible leading term during simultaneous normal form")]
    DecompositionStall,

    #[error("zero correction denominator in good-basis transformation")]
    ZeroDenominator,

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
