use crate::expr::{ChartError, EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("evaluation failed at {point:?}: {source}")]
    Eval { point: Vec<f64>, source: EvalError },
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular or ill-conditioned (smallest eigenvalue {smallest_eigenvalue:e}, condition {condition:e})")]
    Singular {
        smallest_eigenvalue: f64,
        condition: f64,
    },
    #[error("assembled metric is not positive definite at {point:?} ({detail})")]
    Positivity { point: Vec<f64>, detail: String },
    #[error("one-form is not contact at {point:?}: contact volume {volume:e}")]
    NotContact { point: Vec<f64>, volume: f64 },
    #[error("contact forms need an odd-dimensional base, got dimension {0}")]
    EvenDimensionalBase(usize),
    #[error("vector field vanishes at {point:?}")]
    VanishingField { point: Vec<f64> },
    #[error("check `{check}` failed: residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualExceeded {
        check: String,
        residual: f64,
        tolerance: f64,
    },
    #[error("check `{check}` produced a non-finite residual at {point:?}")]
    NonFinite { check: String, point: Vec<f64> },
    #[error("no sample points supplied")]
    NoSamples,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("check `{check}`: {source}")]
    InCheck { check: String, source: Box<Error> },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("spec: {0}")]
    Spec(String),
    #[error("spec field `{field}`: {source}")]
    InField { field: String, source: Box<Error> },
}

impl Error {
    pub fn eval(point: &[f64], source: EvalError) -> Self {
        Error::Eval {
            point: point.to_vec(),
            source,
        }
    }

    pub(crate) fn in_field(self, field: impl Into<String>) -> Self {
        Error::InField {
            field: field.into(),
            source: Box::new(self),
        }
    }

    /// Attach the name of the check that was running when this error surfaced.
    pub fn in_check(self, check: &str) -> Self {
        match self {
            e @ Error::InCheck { .. } => e,
            e => Error::InCheck {
                check: check.to_string(),
                source: Box::new(e),
            },
        }
    }
}
