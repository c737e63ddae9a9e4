use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring descriptor parse error at {position}: {message}")]
    DescriptorParse { position: usize, message: String },

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("ring mismatch: `{left}` vs `{right}`")]
    RingMismatch { left: String, right: String },

    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },

    #[error("value is not an element of `{ring}`: {detail}")]
    NotAnElement { ring: String, detail: String },

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("morphism `{name}` does not apply to `{ring}`")]
    MorphismRingMismatch { name: String, ring: String },

    #[error("`{0}` has no registered inverse")]
    NoInverse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("law check failed at construction: {0}")]
    LawViolation(String),

    #[error("degree bound {bound} exceeded (word of length {length})")]
    DegreeBound { bound: usize, length: usize },

    #[error("result leaves the representable class: {0}")]
    Unrepresentable(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("ring `{0}` is not enumerable")]
    NotEnumerable(String),

    #[error("evaluation budget of {budget} exceeded (needed {needed})")]
    BudgetExceeded { budget: u64, needed: String },
}
