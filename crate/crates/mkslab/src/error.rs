use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Each variant maps to a stable kebab-case kind string
/// (see [`Error::kind`]) that the CLI emits in machine-readable error JSON.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ODE integration stalled at z = {z:.6} (step underflow)")]
    IntegrationFailure { z: f64 },

    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("singular Jacobian encountered: {0}")]
    SingularJacobian(String),

    #[error("eigenvalue computation failed: {0}")]
    EigFailure(String),

    #[error("shooting mismatch {mismatch:.3e} above threshold {threshold:.3e}")]
    ShootingFailure { mismatch: f64, threshold: f64 },

    #[error("collocation Newton diverged: {0}")]
    CollocationFailure(String),

    #[error("continuation terminated at mu = {mu:.6}: {detail}")]
    ContinuationTerminated { mu: f64, detail: String },

    #[error("equilibrium is not hyperbolic (s + 3 phi^2 = {coef:.3e})")]
    DegenerateEquilibrium { coef: f64 },

    #[error("no sign change in the supplied bracket: {0}")]
    BracketMissing(String),

    #[error("energy estimate inapplicable: {0}")]
    BoundInapplicable(String),

    #[error("consistent splitting failed: {0}")]
    SplittingFailure(String),

    #[error("|D| fell below floor on the contour ({0}); perturb eta or the radius")]
    ContourDegenerate(String),

    #[error("weight a = {a} is outside the admissible window")]
    WeightInadmissible { a: f64 },

    #[error("truncation tolerance {tol:.3e} is below the profile tail resolution")]
    TruncationTooTight { tol: f64 },

    #[error("segments cannot be joined: {0}")]
    IncompatibleSegments(String),

    #[error("cell block does not wrap periodically: {0}")]
    IncompatibleWrap(String),

    #[error("Fourier coefficients not decayed at truncation order {order}: {detail}")]
    TruncationInsufficient { order: usize, detail: String },

    #[error("periodic refinement diverged: {0}")]
    RefinementFailure(String),

    #[error("time evolution failed at t = {t:.4}: {detail}")]
    EvolutionFailure { t: f64, detail: String },

    #[error("cannot plot empty data")]
    PlotEmpty,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable kind, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::IntegrationFailure { .. } => "integration-failure",
            Error::NoConvergence { .. } => "no-convergence",
            Error::SingularJacobian(_) => "singular-jacobian",
            Error::EigFailure(_) => "eig-failure",
            Error::ShootingFailure { .. } => "shooting-failure",
            Error::CollocationFailure(_) => "collocation-failure",
            Error::ContinuationTerminated { .. } => "continuation-terminated",
            Error::DegenerateEquilibrium { .. } => "degenerate-equilibrium",
            Error::BracketMissing(_) => "bracket-missing",
            Error::BoundInapplicable(_) => "bound-inapplicable",
            Error::SplittingFailure(_) => "splitting-failure",
            Error::ContourDegenerate(_) => "contour-degenerate",
            Error::WeightInadmissible { .. } => "weight-inadmissible",
            Error::TruncationTooTight { .. } => "truncation-too-tight",
            Error::IncompatibleSegments(_) => "incompatible-segments",
            Error::IncompatibleWrap(_) => "incompatible-wrap",
            Error::TruncationInsufficient { .. } => "truncation-insufficient",
            Error::RefinementFailure(_) => "refinement-failure",
            Error::EvolutionFailure { .. } => "evolution-failure",
            Error::PlotEmpty => "plot-empty",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}
