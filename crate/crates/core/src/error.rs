use thiserror::Error;

/// Errors raised anywhere in the pipeline, from symbol evaluation up to
/// fixture verification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} must be odd and positive")]
    BadModulus(i64),
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("{0} is not congruent to 1 mod 8")]
    NotOneModEight(i64),
    #[error("{a} is not a quadratic residue modulo {p}")]
    NotQuadraticResidue { a: i64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not congruent to 5 mod 8")]
    NotFiveModEight(u64),
    #[error("the two primes must differ (got {0} twice)")]
    EqualPrimes(u64),
    #[error("{alpha} is divisible by the Gaussian prime {pi}")]
    DivisibleByPrime { alpha: String, pi: String },
    #[error("{0} is not a split Gaussian prime of odd norm")]
    NotGaussianPrime(String),
    #[error("{0} is not a square-free integer greater than 1")]
    BadRadicand(i64),
    #[error("{0} is not a valid non-square discriminant")]
    BadDiscriminant(i64),
    #[error("|D| = {0} exceeds the configured bound {1}")]
    BoundExceeded(u64, u64),
    #[error("{rule} violated: {detail}")]
    Consistency { rule: &'static str, detail: String },
    #[error("unit index requires (p1/p2) = -1")]
    SymbolCriterionUnavailable,
    #[error("square-root search failed at maximal precision")]
    PrecisionExhausted,
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("group order 2^{0} exceeds the enumeration guard")]
    GroupTooLarge(u32),
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("no prime pairs up to {0}; the smallest is (5, 13)")]
    EmptyRange(u64),
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
