use thiserror::Error;

/// Errors raised by geometry, quadrature and reporting code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point outside the open unit disk (|x| = {0})")]
    InvalidPoint(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("vector is not timelike future-directed ({0})")]
    NotTimelikeFuture(String),
    #[error("radius {r} lies inside the core of the family (asymptotic radius {core})")]
    RadiusInsideCore { r: f64, core: f64 },
    #[error("boundary series does not converge (fitted decay exponent {exponent})")]
    NonConvergentSeries { exponent: f64 },
    #[error("scalar curvature excess is not integrable (radial tail exponent {exponent})")]
    NonIntegrableScalarCurvature { exponent: f64 },
    #[error("point is not on the wall (height mismatch {distance:e})")]
    WallMismatch { distance: f64 },
    #[error("finite-difference step {step} too large: stencil comes within {distance:e} of a boundary")]
    StepTooLargeNearBoundary { step: f64, distance: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("spline query {query} outside table domain [{lo}, {hi}]")]
    SplineDomain { query: f64, lo: f64, hi: f64 },
    #[error("spline abscissae not strictly increasing at row {0}")]
    NonMonotone(usize),
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidPoint(_) => "InvalidPoint",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::NotTimelikeFuture(_) => "NotTimelikeFuture",
            Error::RadiusInsideCore { .. } => "RadiusInsideCore",
            Error::NonConvergentSeries { .. } => "NonConvergentSeries",
            Error::NonIntegrableScalarCurvature { .. } => "NonIntegrableScalarCurvature",
            Error::WallMismatch { .. } => "WallMismatch",
            Error::StepTooLargeNearBoundary { .. } => "StepTooLargeNearBoundary",
            Error::BadParams(_) => "BadParams",
            Error::SplineDomain { .. } => "SplineDomain",
            Error::NonMonotone(_) => "NonMonotone",
            Error::Config(_) => "ConfigError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
