use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid interval bounds: lo {lo} > hi {hi}")]
    InvalidBounds { lo: String, hi: String },
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("{0}")]
    Parse(String),

    #[error("no sign change of f over the interval")]
    NoSignChange,
    #[error("f is not verified monotone: derivative range contains zero")]
    NotMonotone,

    #[error("derivative vanishes at the iterate")]
    DerivativeZero,
    #[error("King correction denominator f(x) + (beta - 2) f(y) is zero")]
    CorrectionDenominatorZero,
    #[error("step {k} failed: {source}")]
    AtIteration {
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("derivative enclosure contains zero")]
    DerivativeStraddlesZero,
    #[error("corrective factor denominator 1 + (beta - 2) t is zero")]
    DegenerateFactor,
    #[error("f(md(X)) is not separated from zero at the working precision")]
    PrecisionExhausted,
    #[error("f vanishes exactly at the midpoint {0}")]
    MidpointIsZero(String),

    #[error("trace has too few usable entries for a convergence-order estimate")]
    InsufficientTrace,
    #[error("radius reached zero: the iteration converged exactly")]
    ZeroRadius,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}
