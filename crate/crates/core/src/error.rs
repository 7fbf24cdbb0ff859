use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate element: {0}")]
    DegenerateElement(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("{0} is divisible by {1}")]
    NotAUnit(i64, u64),
    #[error("field has no tower variables")]
    NotATower,
    #[error("field has no orderings")]
    NoOrdering,
    #[error("forms live over different fields: {0} and {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("search budget exhausted: {0}")]
    ResourceExceeded(String),
    #[error("form is isotropic")]
    Isotropic,
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a neighbour of the given Pfister form")]
    NotANeighbor,
    #[error("invalid witness: {0}")]
    WitnessError(String),
    #[error("form does not split as q (x) <1,x> over the top variable")]
    NoGenericFactor,
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error("incomplete hypothesis: {0}")]
    IncompleteHypothesis(String),
    #[error("parse error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("corpus error at line {line}: {msg}")]
    Corpus { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across message changes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateElement(_) => "DegenerateElement",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::NotAUnit(..) => "NotAUnit",
            Error::NotATower => "NotATower",
            Error::NoOrdering => "NoOrdering",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::ResourceExceeded(_) => "ResourceExceeded",
            Error::Isotropic => "Isotropic",
            Error::DimensionError(_) => "DimensionError",
            Error::Unsupported(_) => "Unsupported",
            Error::NotANeighbor => "NotANeighbor",
            Error::WitnessError(_) => "WitnessError",
            Error::NoGenericFactor => "NoGenericFactor",
            Error::InconsistentCertificate(_) => "InconsistentCertificate",
            Error::IncompleteHypothesis(_) => "IncompleteHypothesis",
            Error::Syntax { .. } => "Syntax",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::Corpus { .. } => "Corpus",
        }
    }
}
