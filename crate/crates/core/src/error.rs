use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system {family}{rank}")]
    UnsupportedRootSystem { family: String, rank: usize },
    #[error("weight has {got} coordinates, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("weight is not integral: {0}")]
    NonIntegral(String),
    #[error("weight is not dominant: {0}")]
    NonDominant(String),
    #[error("representation dimension {dim} exceeds the configured cap {cap}")]
    SizeGuard { dim: u128, cap: u128 },
    #[error("Weyl group of order {0} is too large to enumerate")]
    WeylGroupTooLarge(u128),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("triple is not compatible: lambda + mu - nu is not in the root lattice")]
    Incompatible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polygon is unbounded")]
    Unbounded,
    #[error("polygon is degenerate (dimension {0})")]
    Degenerate(usize),
    #[error("insufficient samples for residue class {class}: need {need}, have {have}")]
    InsufficientSamples { class: usize, need: usize, have: usize },
    #[error("samples inconsistent with degree {degree} and period {period} at s = {s}")]
    InconsistentSamples { degree: usize, period: usize, s: i64 },
    #[error("leading coefficient differs between residue classes")]
    NonConstantLeading,
    #[error("quadratic fit failed on a cell: {0}")]
    FitInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
