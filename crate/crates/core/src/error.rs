use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("precision must be at least 1 (the zero ring is not allowed)")]
    ZeroPrecision,

    #[error("modulus p^m = {p}^{m} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, m: u32 },

    #[error("modulus mismatch: ({lhs_p}, {lhs_m}) vs ({rhs_p}, {rhs_m})")]
    ModulusMismatch {
        lhs_p: u64,
        lhs_m: u32,
        rhs_p: u64,
        rhs_m: u32,
    },

    #[error("exact division by {p} failed: {what}")]
    NotDivisible { p: u64, what: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("algebra is not p-Boolean")]
    NotPBoolean,

    #[error("base ring is not perfect")]
    NotPerfect,

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("invalid pro-map: {0}")]
    InvalidProMap(String),

    #[error("relation is not an equivalence at level {level}: {reason}")]
    NotAnEquivalence { level: usize, reason: String },

    #[error("quotient transition from level {level} is not well defined: {reason}")]
    IncompatibleTransition { level: usize, reason: String },

    #[error("level {level} exceeds tower depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("not a ring homomorphism: {0}")]
    NotRingHom(String),

    #[error("enumeration bound exceeded: {0}")]
    TooLarge(String),

    #[error("missing site object: {0}")]
    MissingObject(String),

    #[error("invalid site: {0}")]
    InvalidSite(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("empty set is not allowed here")]
    EmptySet,

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("internal fault: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
