use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field data: {0}")]
    InvalidField(String),
    #[error("unknown field label `{0}`")]
    UnknownField(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("search bound exceeded: {0}")]
    SearchBound(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("element is not integral at {0}")]
    NotIntegral(String),
    #[error("element is not coprime to the modulus: {0}")]
    NotCoprime(String),
    #[error("finite field too large for discrete logarithms: order {0}")]
    FieldTooLarge(u128),
    #[error("group enumeration bound exceeded: {0}")]
    GroupTooLarge(String),
    #[error("zero element where a unit of K* was required")]
    ZeroElement,
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("unit compatibility fails at unit {unit}: {detail}")]
    UnitCompatibility { unit: String, detail: String },
    #[error("value field lacks the required roots of unity: {0}")]
    MissingRootsOfUnity(String),
    #[error("fields do not match: {0}")]
    FieldMismatch(String),
    #[error("place lies in the defect set: {0}")]
    DefectPlace(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("realization unavailable: {0}")]
    NoRealization(String),
    #[error("not of Hecke type: {0}")]
    NotHeckeType(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
