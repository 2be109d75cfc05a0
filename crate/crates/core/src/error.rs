use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("binomial({n}, k) is undefined for negative n")]
    NegativeBinomial { n: i64 },

    #[error("{what} is out of domain: {detail}")]
    OutOfDomain { what: String, detail: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("cannot parse {0:?} as a rational (expected \"num/den\" or an integer)")]
    ParseRational(String),
}

impl Error {
    pub(crate) fn out_of_domain(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::OutOfDomain {
            what: what.into(),
            detail: detail.into(),
        }
    }
}
