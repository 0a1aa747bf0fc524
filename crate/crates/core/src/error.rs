use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,

    #[error("prime {0} is outside the supported range 3 <= p < 2^20")]
    PrimeOutOfRange(u64),

    #[error("curve is singular")]
    SingularCurve,

    #[error("singular configuration")]
    SingularConfiguration,

    #[error("singular Legendre parameter")]
    SingularLegendreParameter,

    #[error("degenerate gluing")]
    DegenerateGluing,

    #[error("roots not rational")]
    RootsNotRational,

    #[error("unexpected degeneration")]
    UnexpectedDegeneration,

    #[error("unsupported genus {0}")]
    UnsupportedGenus(usize),

    #[error("brute force out of configured range (p = {p}, max = {max})")]
    BruteForceOutOfRange { p: u64, max: u64 },

    #[error("the Richelot walk requires p >= 7 (got {0})")]
    PrimeTooSmallForRichelotWalk(u64),

    #[error("cannot parse field element {0:?}")]
    Parse(String),

    #[error("{0}")]
    NotApplicable(String),
}
