use num_rational::Rational64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("residue {value} is outside [0, {modulus})")]
    ResidueOutOfRange { value: i64, modulus: u32 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("modulus mismatch: Z_{left} vs Z_{right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Enumeration or decomposition ran out of budget. `certified_floor`
    /// is the largest norm `b` for which "no nonzero vector of norm < b"
    /// was established by complete coverage, if any.
    #[error("resource limit exceeded: {what}")]
    Resource {
        what: String,
        certified_floor: Option<Rational64>,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>) -> Self {
        Error::Resource {
            what: what.into(),
            certified_floor: None,
        }
    }
}
