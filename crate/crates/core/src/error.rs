use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} out of range (expected 2..=65536)")]
    BadModulus(u32),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("matrix [[{a},{b}],[{c},{d}]] is not invertible mod {modulus}")]
    NotInvertible {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        modulus: u32,
    },

    #[error("cannot split modulus {modulus} as {p} * {q} with coprime factors")]
    BadSplit { modulus: u32, p: u32, q: u32 },

    #[error("group order {order} exceeds the configured cap of {cap} ({what})")]
    CapExceeded {
        what: &'static str,
        order: usize,
        cap: usize,
    },

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid group spec at {path}: {message}")]
    Spec { path: String, message: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, order: usize, cap: usize) -> Self {
        Error::CapExceeded { what, order, cap }
    }

    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Whether the error is a caller-side precondition violation, as opposed
    /// to an internal failure.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
