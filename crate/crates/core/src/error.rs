use thiserror::Error;

/// Every failure the library can report. Variant names double as the stable
/// error kind printed by the CLI and returned through the C interface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not a unit: {0}")]
    ZeroElement(String),
    #[error("bad field backend: {0}")]
    BadBackend(String),
    #[error("operands live over different fields: {0} vs {1}")]
    BackendMismatch(String, String),
    #[error("bad place: {0}")]
    BadPlace(String),
    #[error("ordering has length {got}, field needs {expected}")]
    OrderingLengthMismatch { expected: usize, got: usize },
    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),
    #[error("operation not supported over {0}")]
    UnsupportedBackend(String),
    #[error("symbol factor must be a nonzero element: {0}")]
    ZeroFactor(String),
    #[error("could not factor {0} below the trial-division bound")]
    FactorBoundExceeded(String),
    #[error("polynomial is not separable: {0}")]
    NotSquarefree(String),
    #[error("element is not a unit modulo its component polynomial: {0}")]
    NotUnit(String),
    #[error("square classes are not independent: {0}")]
    NotIndependent(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("flip set has odd weight, element is not in D_n: {0}")]
    NotInDn(String),
    #[error("inconsistent action: {0}")]
    InconsistentAction(String),
    #[error("wrong target group: {0}")]
    WrongTarget(String),
    #[error("class is not in the requested power of the fundamental ideal: {0}")]
    NotInIdealPower(String),
    #[error("target is not in the span of the generators: {0}")]
    NotInSpan(String),
    #[error("residual did not become constant: {0}")]
    ResidualNonConstant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroElement(_) => "ZeroElement",
            Error::BadBackend(_) => "BadBackend",
            Error::BackendMismatch(..) => "BackendMismatch",
            Error::BadPlace(_) => "BadPlace",
            Error::OrderingLengthMismatch { .. } => "OrderingLengthMismatch",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::DegenerateMatrix(_) => "DegenerateMatrix",
            Error::UnsupportedBackend(_) => "UnsupportedBackend",
            Error::ZeroFactor(_) => "ZeroFactor",
            Error::FactorBoundExceeded(_) => "FactorBoundExceeded",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::NotUnit(_) => "NotUnit",
            Error::NotIndependent(_) => "NotIndependent",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::NotInDn(_) => "NotInDn",
            Error::InconsistentAction(_) => "InconsistentAction",
            Error::WrongTarget(_) => "WrongTarget",
            Error::NotInIdealPower(_) => "NotInIdealPower",
            Error::NotInSpan(_) => "NotInSpan",
            Error::ResidualNonConstant(_) => "ResidualNonConstant",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
