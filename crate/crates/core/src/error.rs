use thiserror::Error;

/// Errors raised by packet construction, the symbolic engines and the
/// numerical oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid variance for degree of freedom {dof}: dQ = {dq}, dP = {dp} (both must be > 0)")]
    InvalidVariance { dof: usize, dq: f64, dp: f64 },

    #[error("invalid constant {name} = {value} (must be finite and > 0)")]
    InvalidConstant { name: &'static str, value: f64 },

    #[error("uncertainty violation: nu = {nu} < 1 (dQ*dP must be at least hbar/2)")]
    UncertaintyViolation { nu: f64 },

    #[error("pure-state boundary: nu = 1 has no finite Lagrange multipliers")]
    PureStateBoundary,

    #[error("operation requires nu = 1, got nu = {nu}")]
    NotPureState { nu: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation supports a single degree of freedom, packet has {0}")]
    SingleDofOnly(usize),

    #[error("operator is not self-adjoint; request symmetrization explicitly")]
    NotSelfAdjoint,

    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("polynomial has {terms} terms, above the cap of {cap}")]
    TermCap { terms: usize, cap: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("truncated basis too small: dim {dim}, tail bound {tail:e}; try dim >= {suggested}")]
    Truncation { dim: usize, tail: f64, suggested: usize },

    #[error("truncation leak at t = {t}: occupation of the top levels is {leak:e}")]
    TruncationLeak { t: f64, leak: f64 },

    #[error("Taylor series did not converge at t = {t} (order {order}, last term {last:e})")]
    SeriesDivergence { t: f64, order: usize, last: f64 },

    #[error("Monte Carlo instability: sample {sample} has relative energy drift {drift:e}")]
    McInstability { sample: usize, drift: f64 },

    #[error("infeasible energy: E = {energy} below zero-point energy {zero_point}")]
    InfeasibleEnergy { energy: f64, zero_point: f64 },

    #[error("invalid chain model: {0}")]
    InvalidChain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("scan point s = {s}: {source}")]
    AtScanPoint { s: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Numerical failures (as opposed to invalid input).
    pub fn is_numerical(&self) -> bool {
        if let Error::AtScanPoint { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::TruncationLeak { .. }
                | Error::SeriesDivergence { .. }
                | Error::McInstability { .. }
                | Error::RootFinding(_)
                | Error::Truncation { .. }
                | Error::DegreeCap { .. }
                | Error::TermCap { .. }
        )
    }
}
