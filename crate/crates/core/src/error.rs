use thiserror::Error;

/// Errors raised while building fields, functions and tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotPrime: {0} is not a prime")]
    NotPrime(u64),
    #[error("EvenCharacteristic: only odd primes are supported")]
    EvenCharacteristic,
    #[error("InvalidDegree: extension degree must be at least 1")]
    InvalidDegree,
    #[error("InvalidModulus: {0}")]
    InvalidModulus(String),
    #[error("ReducibleModulus: modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("Overflow: {p}^{n} does not fit the element width")]
    Overflow { p: u64, n: u32 },
    #[error("ElementOutOfRange: {value} is not an element of a field with {q} elements")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("BadLutLength: expected {expected} entries, found {found}")]
    BadLutLength { expected: usize, found: usize },
    #[error("CycleEntryOutOfRange: {0}")]
    CycleEntryOutOfRange(u64),
    #[error("CycleRepeated: cycle entry {0} appears twice")]
    CycleRepeated(u32),
    #[error("NotAPermutation")]
    NotAPermutation,
    #[error("ConditionViolated: {0}")]
    ConditionViolated(String),
    #[error("NotAPowerMap")]
    NotAPowerMap,
    #[error("SizeCapExceeded: q = {q} exceeds the table cap {cap}")]
    SizeCapExceeded { q: u32, cap: u64 },
    #[error("ZeroC: c must be nonzero")]
    ZeroC,
    #[error("ZeroU: u must be nonzero")]
    ZeroU,
    #[error("ZeroAlpha: alpha must be nonzero")]
    ZeroAlpha,
    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
