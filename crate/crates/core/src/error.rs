use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree {d} must be at least 2 and coprime to p = {p}")]
    BadDegree { d: usize, p: u64 },
    #[error("index {value} outside the range {lo}..={hi}")]
    OutOfRange { value: usize, lo: usize, hi: usize },
    #[error("brute force limited to n <= {cap}, got n = {n}")]
    BruteForceCap { n: usize, cap: usize },
    #[error("operation requires p >= {required} (d = {d}, p = {p})")]
    Tier { d: usize, p: u64, required: u64 },
    #[error("polygon has an infinite ordinate at x = {0}")]
    InfiniteEndpoint(i64),
    #[error("invalid hull input: {0}")]
    HullInput(String),
    #[error("polygons span different ranges ({0} vs {1})")]
    RangeMismatch(i64, i64),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("field of size {size} exceeds the enumeration cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial degree {got} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("modulus is not irreducible")]
    Reducible,
    #[error("L-function coefficient c_{0} is not integral")]
    NonIntegral(usize),
    #[error("precision {got} too small, need at least {need}")]
    Precision { got: usize, need: usize },
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("census of {count} polynomials exceeds the cap {cap}")]
    CensusCap { count: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}
