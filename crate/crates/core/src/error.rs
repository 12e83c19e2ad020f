use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("field order {p}^{degree} does not fit the element encoding")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element encoding {enc} is outside a field of order {order}")]
    FieldMismatch { enc: u64, order: u64 },
    #[error("relative trace and norm need an even extension degree, got {0}")]
    OddDegree(u32),
    #[error("element {0} does not have relative trace zero")]
    NotAKernelElement(u32),
    #[error("kernel elements are not linearly independent over the prime field")]
    NotIndependent,
    #[error("cannot parse field element {0:?}")]
    ParseElement(String),

    #[error("evaluation set is empty")]
    EmptyEvaluationSet,
    #[error("field of order {order} is above the enumeration cap {cap}")]
    TooLargeToEnumerate { order: u64, cap: u64 },

    #[error("l = {l} is too large (largest admissible value is {max})")]
    LTooLarge { l: u64, max: u64 },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("recovery group for position {position} in direction {direction} has {size} points, expected {expected}")]
    MalformedFiber { position: usize, direction: usize, size: usize, expected: usize },
    #[error("two interpolation nodes share the abscissa {0}")]
    RepeatedAbscissa(u32),
    #[error("recovery set has {have} surviving symbols, need {need}")]
    NotEnoughSurvivors { have: usize, need: usize },

    #[error("brute force would enumerate {count} codewords, cap is {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("witness fails condition ({condition}): {detail}")]
    InvalidWitness { condition: u8, detail: String },
    #[error("l = {l} outside the admissible range 0..={max}")]
    LOutOfRange { l: u64, max: u64 },
    #[error("field is too small for this construction")]
    FieldTooSmall,
    #[error("candidate pool has {have} values, need {need}")]
    PoolTooSmall { need: usize, have: usize },
    #[error("no admissible mu exists")]
    NoValidMu,

    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("closed-form value overflows 128-bit arithmetic")]
    Overflow,
}

impl Error {
    /// True for errors caused by asking for something too large to compute,
    /// as opposed to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::FieldTooLarge { .. } | Error::TooLargeToEnumerate { .. } | Error::TooLarge { .. } | Error::Overflow
        )
    }
}
