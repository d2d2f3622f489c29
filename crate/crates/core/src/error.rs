use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is irregular: Newton polygon has a positive slope {slope}")]
    IrregularOperator { slope: String },

    #[error("value leaves the Gaussian rationals: {0}")]
    UnsupportedField(String),

    #[error("exponential-part search did not converge: {0}")]
    NoConvergence(String),

    #[error("formal solution recursion degenerated at exponent {exponent}: {reason}")]
    DegenerateLift { exponent: String, reason: String },

    #[error("model is not Z/{q}Z-stable: missing orbit element {witness}")]
    NotGaloisStable { q: u32, witness: String },

    #[error("blow-up budget k0 <= {budget} exceeded by monomial (m={m}, n={n}) requiring k0={required}")]
    BudgetExceeded {
        budget: u32,
        m: u32,
        n: i32,
        required: u32,
    },

    #[error("s={s} lies below the abscissa 2Re s > {abscissa}")]
    DomainError { s: String, abscissa: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureWarning { estimate: f64, tolerance: f64 },

    #[error("s={s} is within {radius:e} of candidate pole {pole}")]
    NearPole { s: String, pole: String, radius: f64 },

    #[error("contour around {center} passes through candidate pole {pole}")]
    ContourThroughPole { center: String, pole: String },

    #[error("parse error at {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },

    #[error("term is not of moderate growth: {0}")]
    NonModerate(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IrregularOperator { .. } => "irregular_operator",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::NoConvergence(_) => "no_convergence",
            Error::DegenerateLift { .. } => "degenerate_lift",
            Error::NotGaloisStable { .. } => "not_galois_stable",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::DomainError { .. } => "domain_error",
            Error::QuadratureWarning { .. } => "quadrature_warning",
            Error::NearPole { .. } => "near_pole",
            Error::ContourThroughPole { .. } => "contour_through_pole",
            Error::Parse { .. } => "parse_error",
            Error::NonModerate(_) => "non_moderate",
            Error::Unsupported(_) => "unsupported",
            Error::Invalid(_) => "invalid",
            Error::Io(_) => "io_error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
