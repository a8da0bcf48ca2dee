use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a supported prime (need a prime 2 <= p < 2^31)")]
    InvalidPrime(u64),
    #[error("expected a non-negative integer")]
    NegativeInput,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: &'static str },
    #[error("unknown variable '{found}' at byte {offset}")]
    UnknownVariable { offset: usize, found: char },
    #[error("exponent at byte {offset} exceeds the cap of {cap}")]
    ExponentOverflow { offset: usize, cap: u32 },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("polynomial has total degree {0}, at most 2 is allowed")]
    DegreeTooHigh(u32),

    #[error("closed form is only known for 1 <= k <= 4 and n >= k (got n = {n}, k = {k})")]
    ClosedFormRange { n: u64, k: u64 },
    #[error("depth {depth} exceeds the cap of {cap}")]
    DepthCapExceeded { depth: u32, cap: u32 },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("node budget of {0} exceeded")]
    NodeBudgetExceeded(usize),
    #[error("insufficient data: class {residue} at level {level} has {members} members, need {required}")]
    InsufficientData {
        level: u32,
        residue: u64,
        members: u64,
        required: u64,
    },

    #[error("value {0} is not a bit (expected 0 or 1)")]
    InvalidBit(i64),
    #[error("operation requires p = 2")]
    RequiresTwoAdic,
    #[error("node at level {level} is not a star node")]
    NotStar { level: u32 },
    #[error("coefficient range is empty or too large")]
    InvalidRange,

    #[error("Hensel condition violated: 2v = {two_v} is not greater than w = {w}")]
    HenselConditionViolated { two_v: String, w: String },
    #[error("Newton iteration did not reach precision {target} within {iterations} steps")]
    NonConvergence { target: u32, iterations: usize },
    #[error("Newton step leaves Z_p: numerator valuation {numerator} below Jacobian valuation {jacobian}")]
    NonIntegralStep { numerator: u64, jacobian: u64 },
    #[error("certificate precision {available} is below the requested {requested} digits")]
    PrecisionShortfall { available: u32, requested: u32 },
}
