use thiserror::Error;

pub type Result<T> = std::result::Result<T, SocError>;

/// Errors raised by the library.
///
/// `Contract` is a violated mathematical precondition (non-normal input,
/// non-reduced inner functor, ...). `Capacity` is a resource limit. The CLI
/// maps them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SocError {
    #[error("shape error in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("capacity exceeded in {what}: requested {requested}, cap {cap}")]
    Capacity {
        what: String,
        requested: u128,
        cap: u128,
    },

    #[error("contract violation: {precondition} (guards {guards})")]
    Contract {
        precondition: String,
        guards: &'static str,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("ill-conditioned probe set: condition estimate {estimate:e} exceeds {limit:e}")]
    Conditioning { estimate: f64, limit: f64 },

    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl SocError {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        SocError::Shape {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn capacity(what: impl Into<String>, requested: u128, cap: u128) -> Self {
        SocError::Capacity {
            what: what.into(),
            requested,
            cap,
        }
    }

    pub(crate) fn contract(precondition: impl Into<String>, guards: &'static str) -> Self {
        SocError::Contract {
            precondition: precondition.into(),
            guards,
        }
    }

    pub fn is_contract(&self) -> bool {
        matches!(self, SocError::Contract { .. })
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, SocError::Capacity { .. })
    }
}
