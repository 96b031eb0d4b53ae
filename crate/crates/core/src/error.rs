use alloc::string::String;

/// Errors raised by the core routines.
///
/// Variants carry enough context to be printed directly as a diagnostic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exponent out of range: {0}")]
    ExponentRange(String),
    #[error("point outside the admissible region: {0}")]
    OutsideRegion(String),
    #[error("no corkscrew at this scale: r = {r}, limit = {limit}")]
    NoCorkscrew { r: f64, limit: f64 },
    #[error("mesh size h = {h} too coarse; need h <= {limit}")]
    MeshTooCoarse { h: f64, limit: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("vanishing gradient: normalized operator undefined")]
    VanishingGradient,
    #[error("annulus too large for barrier: r = {r} > r_star = {r_star}")]
    AnnulusTooLarge { r: f64, r_star: f64 },
    #[error("outside admissibility region: {0}")]
    Inadmissible(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("test function must vanish on pinned nodes (node {0})")]
    TestFunctionOnBoundary(usize),
    #[error("field is not extended by zero (exterior node {0} = {1})")]
    NotExtended(usize, f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
