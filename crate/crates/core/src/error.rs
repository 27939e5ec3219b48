use thiserror::Error;

/// Errors raised by the measure, transform and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeError {
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("masses sum to {0}, expected 1")]
    MassNotNormalized(f64),
    #[error("nonpositive mass {mass} at position {position}")]
    NonpositiveMass { position: f64, mass: f64 },
    #[error("invalid measure data: {0}")]
    InvalidMeasure(String),
    #[error("moment order {0} exceeds the supported maximum")]
    OrderTooLarge(usize),
    #[error("evaluation at atom position {0}")]
    PoleAtAtom(f64),
    #[error("Cauchy transform vanishes at {0}")]
    ZeroCauchyTransform(f64),
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("invalid stable parameters: {0}")]
    InvalidStableParameters(String),
    #[error("evaluation at sigma node {0}")]
    PoleAtSigmaNode(f64),
    #[error("law is degenerate (sigma = 0)")]
    DegenerateLaw,
    #[error("boundary curve is not monotone near x = {0}")]
    CurveMonotonicityViolation(f64),
    #[error("inversion did not converge for w = {re} + {im}i")]
    NoConvergence { re: f64, im: f64 },
    #[error("could not bracket t = {0}")]
    BracketExpansionFailure(f64),
    #[error("density evaluated at the zero of F, t = {0}")]
    EvaluationAtSingularity(f64),
    #[error("convolution power {0} must be at least 2")]
    InvalidPower(u32),
    #[error("jump distribution is the point mass at 0")]
    ZeroJump,
    #[error("subordination mismatch at w = {re} + {im}i (gap {gap:e})")]
    SubordinationMismatch { re: f64, im: f64, gap: f64 },
    #[error("no admissible root: {0}")]
    NoAdmissibleRoot(String),
    #[error("row {0} unavailable")]
    RowUnavailable(usize),
    #[error("custom scheme requires an explicit target")]
    TargetRequired,
    #[error("density tables are sampled on different grids")]
    GridMismatch,
    #[error("exponent {0} must exceed 1")]
    InvalidExponent(f64),
    #[error("cutoff {cutoff} is below 9|F(i)| = {required}")]
    CutoffTooSmall { cutoff: f64, required: f64 },
    #[error("target vanishes at t = {0} but the exclusion does not cover it")]
    MissingExclusion(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point outside the closed upper half-plane: {0}")]
    OutsideDomain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl FreeError {
    /// Stable, machine-readable variant name.
    pub fn name(&self) -> &'static str {
        match self {
            FreeError::EmptyMeasure => "EmptyMeasure",
            FreeError::MassNotNormalized(_) => "MassNotNormalized",
            FreeError::NonpositiveMass { .. } => "NonpositiveMass",
            FreeError::InvalidMeasure(_) => "InvalidMeasure",
            FreeError::OrderTooLarge(_) => "OrderTooLarge",
            FreeError::PoleAtAtom(_) => "PoleAtAtom",
            FreeError::ZeroCauchyTransform(_) => "ZeroCauchyTransform",
            FreeError::RootFindingFailure(_) => "RootFindingFailure",
            FreeError::InvalidStableParameters(_) => "InvalidStableParameters",
            FreeError::PoleAtSigmaNode(_) => "PoleAtSigmaNode",
            FreeError::DegenerateLaw => "DegenerateLaw",
            FreeError::CurveMonotonicityViolation(_) => "CurveMonotonicityViolation",
            FreeError::NoConvergence { .. } => "NoConvergence",
            FreeError::BracketExpansionFailure(_) => "BracketExpansionFailure",
            FreeError::EvaluationAtSingularity(_) => "EvaluationAtSingularity",
            FreeError::InvalidPower(_) => "InvalidPower",
            FreeError::ZeroJump => "ZeroJump",
            FreeError::SubordinationMismatch { .. } => "SubordinationMismatch",
            FreeError::NoAdmissibleRoot(_) => "NoAdmissibleRoot",
            FreeError::RowUnavailable(_) => "RowUnavailable",
            FreeError::TargetRequired => "TargetRequired",
            FreeError::GridMismatch => "GridMismatch",
            FreeError::InvalidExponent(_) => "InvalidExponent",
            FreeError::CutoffTooSmall { .. } => "CutoffTooSmall",
            FreeError::MissingExclusion(_) => "MissingExclusion",
            FreeError::InvalidGrid(_) => "InvalidGrid",
            FreeError::OutsideDomain(_) => "OutsideDomain",
            FreeError::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, FreeError>;
