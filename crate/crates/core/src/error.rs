use thiserror::Error;

/// Errors surfaced by the toolkit. Validation failures map to CLI exit
/// code 2, numeric failures to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitude count {got} does not match N+1 = {want}")]
    AmplitudeCount { want: usize, got: usize },
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("state norm {norm} is not 1 (pass normalize to rescale)")]
    NotNormalized { norm: f64 },
    #[error("axis is not a unit vector (|n| = {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("matrix is not Hermitian (max deviation {dev})")]
    NonHermitian { dev: f64 },
    #[error("matrix is not a proper rotation (residual {residual})")]
    NotARotation { residual: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expectation value has non-negligible imaginary part {imag}")]
    ComplexExpectation { imag: f64 },
    #[error("rotation parameters must be finite")]
    NonFiniteAngles,
    #[error("matrix is singular (det = {det})")]
    Singular { det: f64 },
    #[error("bound diverges at Theta = {theta} (multiple of pi)")]
    DivergentBound { theta: f64 },
    #[error("derivative of the projection signal vanishes at chi = {chi}")]
    VanishingDerivative { chi: f64 },
    #[error("numeric generator failed the Hermiticity check (residual {residual})")]
    DerivativeResidual { residual: f64 },
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
    #[error("constellation is empty")]
    EmptyConstellation,
    #[error("invalid constellation point: {0}")]
    InvalidPoint(String),
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("support spacing violates the gap rule between indices {a} and {b}")]
    GapViolation { a: usize, b: usize },
    #[error("infeasible constraint system: {0}")]
    Infeasible(String),
    #[error("psi4 precondition violated: {0}")]
    Psi4(String),
    #[error("N = {n} is not divisible by {divisor}")]
    Divisibility { n: usize, divisor: usize },
    #[error("unknown solid name: {0}")]
    UnknownSolid(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON failure: {0}")]
    Json(#[from] serde_json::Error),
}
