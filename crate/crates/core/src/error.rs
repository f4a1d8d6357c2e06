use thiserror::Error;

pub type Result<T> = std::result::Result<T, FvmError>;

#[derive(Debug, Error)]
pub enum FvmError {
    #[error("Newton iteration for {family} nodes of order {order} did not converge")]
    NonConvergence { family: &'static str, order: usize },
    #[error("unsupported quadrature order {0} (must be in 1..=64)")]
    InvalidOrder(usize),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },
    #[error("function does not vanish at the boundary: u(a) = {ua:e}, u(b) = {ub:e}")]
    BoundaryMismatch { ua: f64, ub: f64 },
    #[error("manufactured source needs {0}")]
    MissingDerivative(&'static str),
    #[error("ellipticity audit failed: {0}")]
    Ellipticity(String),
    #[error("banded system is singular at pivot {0}")]
    SingularMatrix(usize),
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Gram matrix of the {0} norm is numerically singular")]
    SingularGram(&'static str),
    #[error("derivative recovery needs at least two elements, got {0}")]
    MeshTooCoarse(usize),
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("observed order requires positive errors, got {coarse:e} and {fine:e}")]
    DegenerateError { coarse: f64, fine: f64 },
    #[error("format error: {0}")]
    Format(String),
    #[error("expression error: {0}")]
    Expression(String),
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
    #[error("run r = {r}, N = {n} failed: {source}")]
    Run {
        r: usize,
        n: usize,
        #[source]
        source: Box<FvmError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
