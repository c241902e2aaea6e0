use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid leg permutation: {0}")]
    InvalidPermutation(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("{what} is not unitary (residual {residual:e})")]
    NotUnitary { what: String, residual: f64 },

    /// A validating constructor or a precondition check failed; the report
    /// says which equation and by how much.
    #[error("check `{}` failed (residual {:e} > {:e})", .0.name, .0.residual, .0.tolerance)]
    CheckFailed(Box<CheckReport>),

    #[error("{what}: no trivial leg (residual {residual:e})")]
    ExtractionFailed { what: String, residual: f64 },

    #[error("side mismatch: {0}")]
    SideMismatch(String),

    #[error("representations are over different base unitaries")]
    BaseMismatch,

    #[error("absorber family has no entry for {0}")]
    MissingFamilyEntry(String),

    #[error("search budget exhausted after {examined} candidates")]
    BudgetExhausted { examined: usize },

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            found,
        }
    }

    pub(crate) fn failed(report: CheckReport) -> Self {
        Error::CheckFailed(Box::new(report))
    }

    /// True for errors that mean "the mathematics did not hold" rather than
    /// "the input could not be understood". The CLI maps the former to exit
    /// code 1 and the latter to exit code 2.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::NotUnitary { .. }
                | Error::CheckFailed(_)
                | Error::ExtractionFailed { .. }
                | Error::BudgetExhausted { .. }
        )
    }
}
