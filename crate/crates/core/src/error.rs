use thiserror::Error;

/// Every failure the library can report. The CLI maps these to exit code 1.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("offdiagonal entry a[{index}] is not strictly positive")]
    NonPositiveOffdiagonal { index: usize },
    #[error("precision exhausted at {digits} digits: {reason}")]
    PrecisionExhausted { digits: u32, reason: String },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    AsymmetricInput(f64),
    #[error("empty or malformed matrix: {0}")]
    BadDimension(String),
    #[error("Favard condition violated: {0}")]
    FavardViolation(String),
    #[error("point {0} lies outside the support of the weight")]
    OutOfSupport(String),
    #[error("function evaluation failed at node {0}")]
    EvaluationFailure(usize),
    #[error("samples are not strictly increasing at index {0}")]
    NonMonotoneSamples(usize),
    #[error("interpolation window too small: {0}")]
    WindowTooSmall(String),
    #[error("evaluation point {0} outside the sample range")]
    EvalOutOfRange(f64),
    #[error("continued-fraction interpolant has a pole in the window")]
    PoleInWindow,
    #[error("non-positive node derivative at k = {0}")]
    ZeroDerivative(usize),
    #[error("degenerate convergence fit: {0}")]
    DegenerateFit(String),
    #[error("z coincides with pole {0}")]
    PoleHit(usize),
    #[error("continued-fraction denominator vanished at level {0}")]
    DivisionNearZero(usize),
    #[error("inner quadrature order insufficient (change {0:e})")]
    QuadratureOrderInsufficient(f64),
    #[error("energies are not strictly increasing at index {0}")]
    NonMonotoneEnergies(usize),
    #[error("energy must be positive, got {0}")]
    NonPositiveEnergy(String),
    #[error("cannot parse system spec `{0}`")]
    BadSystemSpec(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("csv parse error at line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
