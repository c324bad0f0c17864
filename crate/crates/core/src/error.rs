use thiserror::Error;

/// Errors shared by every numerical module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("composition center mismatch: inner constant term {inner} != outer center {outer}")]
    CenterMismatch { inner: f64, outer: f64 },

    #[error("series inversion needs |f'(center)| > {tol}, got {deriv}")]
    SingularDerivative { deriv: f64, tol: f64 },

    #[error("root bracket failure in {context}: f({a}) = {fa}, f({b}) = {fb}")]
    BracketFailure {
        context: &'static str,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
    },

    #[error("{context}: no convergence after {iterations} iterations, residual {residual}")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("singular Jacobian in {context} (condition estimate {cond:e})")]
    SingularJacobian { context: &'static str, cond: f64 },

    #[error("eigensolver failure: {0}")]
    EigenFailure(&'static str),

    #[error("boundary component has fewer than 3 distinct points")]
    DegenerateBoundary,

    #[error("branch violation in {context}: argument {arg} crosses the cut")]
    BranchViolation { context: &'static str, arg: f64 },

    #[error("branch tracking lost continuity between samples {index} and {} (jump {jump})", index + 1)]
    BranchTrackingFailure { index: usize, jump: f64 },

    #[error("normalization drift {drift:e} exceeds {limit:e}")]
    NormalizationDrift { drift: f64, limit: f64 },

    #[error("infeasible normalization: rescaling would force a negative affine weight ({a})")]
    InfeasibleNormalization { a: f64 },

    #[error("argument {x} outside domain {domain}")]
    DomainError { x: f64, domain: &'static str },

    #[error("scaling-triple iteration escaped the admissible box: {which} = {value}")]
    EscapedBox { which: &'static str, value: f64 },

    #[error("degenerate scaling: |{name}| = {value:e} below floor {floor:e}")]
    DegenerateScaling {
        name: &'static str,
        value: f64,
        floor: f64,
    },

    #[error("lambda sanity floor violated: |lambda| = {0} <= 0.1")]
    LambdaFloor(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("covering infeasible: {context} (worst margin {margin})")]
    CoveringInfeasible { context: String, margin: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
