use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("index {index} is out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("cannot mutate at frozen index {0}")]
    FrozenMutation(usize),
    #[error("exchange matrix entry ({0}, {1}) is not an integer")]
    NonIntegralExchange(usize, usize),
    #[error("elements live in different quantum tori")]
    SeedMismatch,
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    #[error("expression is not Laurent after mutating at {0}")]
    NotLaurent(usize),
    #[error("expression has a negative coefficient")]
    NotSubtractionFree,
    #[error("zero element has no tropical value")]
    ZeroElement,
    #[error("element has a negative exponent in the initial seed")]
    NotAPolynomial,
    #[error("exchange column {0} vanishes; binomial exchange is degenerate")]
    DegenerateExchange(usize),
    #[error("invalid folding: {0}")]
    InvalidFolding(String),
    #[error("element is not invariant under the orbit permutations")]
    NotInvariant,
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
    #[error("hypothesis {bullet} violated: {detail}")]
    HypothesisViolated { bullet: u8, detail: String },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("expression grew to {terms} terms, over the limit of {limit}")]
    TermLimitExceeded { terms: usize, limit: usize },
}
