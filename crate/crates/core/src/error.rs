use thiserror::Error;

/// Errors raised by the exact engine.
///
/// Every variant carries enough context (a degree, an entry, an atom pair)
/// to locate the failure without re-running the computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch at degree {degree}: {detail}")]
    ShapeMismatch { degree: i64, detail: String },

    #[error("not a complex: composite is nonzero at degree {degree}")]
    NotAComplex { degree: i64 },

    #[error("invalid degree window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("window [{lo}, {hi}] has empty interior at margin {margin}")]
    WindowTooSmall { lo: i64, hi: i64, margin: i64 },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("morphism violation at entry ({row}, {col}): {rule}")]
    MorphismViolation { row: usize, col: usize, rule: String },

    #[error("entry not expandable at t = 0: {0}")]
    NotExpandable(String),

    #[error("unsupported RHom pair ({source_atom}, {target_atom})")]
    UnsupportedRHom {
        source_atom: String,
        target_atom: String,
    },

    #[error("tower out of calculus: {0}")]
    TowerOutOfCalculus(String),

    #[error("cohomology not in calculus: {0}")]
    CohomologyNotInCalculus(String),

    #[error("not a chain map: square at degree {degree} fails")]
    NotAChainMap { degree: i64 },

    #[error("composition leaves calculus: {0}")]
    CompositionLeavesCalculus(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
