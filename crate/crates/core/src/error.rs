use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("singular intersection matrix")]
    SingularMatrix,

    #[error("cycle has {found} coordinates, graph has {expected} vertices")]
    GraphMismatch { expected: usize, found: usize },

    #[error("cycle is not in the dual lattice L'")]
    NotInLPrime,

    #[error("enumeration budget of {budget} tuples exceeded")]
    RegionTooLarge { budget: u64 },

    #[error("graph is not rational")]
    NotRational,

    #[error("bad fraction {d}/{q}: need 0 < q < d and gcd(d, q) = 1")]
    BadFraction { d: i64, q: i64 },

    #[error("value {value} out of range: {what}")]
    OutOfRange { value: i64, what: String },

    #[error("class is zero: the minimal generic curve is empty")]
    EmptyCurve,

    #[error("graph is not star-shaped: {0}")]
    NotStarShaped(String),

    #[error("leg {leg} contains a vertex with self-intersection > -2")]
    NonMinimalLeg { leg: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("graph is not a quotient graph")]
    NotQuotient,

    #[error("graph has no node")]
    NoNodes,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("class {class_id}: {source}")]
    InClass { class_id: usize, source: Box<Error> },
}

impl Error {
    /// True for errors that signal an implementation bug rather than bad input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self.root(), Error::InternalInconsistency(_))
    }

    /// The underlying error with any row context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InClass { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn in_class(self, class_id: usize) -> Error {
        match self {
            e @ Error::InClass { .. } => e,
            e => Error::InClass { class_id, source: Box::new(e) },
        }
    }
}

macro_rules! inconsistency {
    ($($arg:tt)*) => {
        $crate::error::Error::InternalInconsistency(format!($($arg)*))
    };
}
pub(crate) use inconsistency;
