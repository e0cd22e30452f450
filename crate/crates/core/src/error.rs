use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("cover mentions unknown element `{0}`")]
    UnknownElementInCover(String),
    #[error("cover relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("{what} has {size} elements, cap is {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("poset has no elements")]
    EmptyPoset,
    #[error("operands live on different posets")]
    PosetMismatch,
    #[error("scalar {0} is outside its allowed range")]
    ScalarOutOfRange(String),
    #[error("mass {0} is negative")]
    NegativeMass(String),
    #[error("valuation has total mass {0} > 1")]
    NotSubprobability(String),
    #[error("predicate is not monotone: {0} <= {1} but value decreases")]
    NonMonotonePredicate(String, String),
    #[error("predicate value {0} is outside the unit interval")]
    OutOfUnitRange(String),
    #[error("interval predicate has lower end above upper end at `{0}`")]
    InvertedInterval(String),
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("point is a member of the hull; no separating predicate exists")]
    NotSeparable,
    #[error("malformed linear system: {0}")]
    MalformedSystem(String),
    #[error("flavor mismatch: {0} vs {1}")]
    FlavorMismatch(String, String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("fuel must be non-negative, got {0}")]
    FuelNegative(i64),
    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("probability {0} is outside [0,1]")]
    ProbabilityOutOfRange(String),
    #[error("model does not bind operation `{0}`")]
    UnboundOperation(String),
    #[error("random-set operands use different ground sets")]
    GroundSetMismatch,
    #[error("transformer table is missing an entry for `{0}`")]
    MissingEntry(String),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
