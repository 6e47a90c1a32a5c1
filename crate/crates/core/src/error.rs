use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("d = {d} is not square-free: divisible by {factor}^2")]
    NotSquareFree { d: i64, factor: i64 },
    #[error("d = {0} does not define a quadratic field")]
    DegenerateField(i64),
    #[error("Q(sqrt({0})) is imaginary; a real quadratic field is required")]
    ImaginaryField(i64),
    #[error("class group of Q(sqrt({d})) is not cyclic (h = {h}, no class of order h)")]
    NonCyclicClassGroup { d: i64, h: u64 },
    #[error("the zero ideal has no inverse")]
    ZeroIdeal,
    #[error("ideal {0} is not principal")]
    NotPrincipal(String),
    #[error("class mismatch: expected class {expected}, found {found}")]
    ClassMismatch { expected: u64, found: u64 },
    #[error("prime ideal {0} divides C")]
    NotCoprime(String),
    #[error("element {element} is not in {ideal}")]
    NotInIdeal { element: String, ideal: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("generator {0} lies in the prime ideal")]
    GeneratorInPrime(String),
    #[error("rational prime {0} exceeds the residue arithmetic range (< 2^32)")]
    PrimeTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
