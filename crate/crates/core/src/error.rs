use thiserror::Error;

/// Errors raised by the number-theoretic and geometric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative input {0} where a nonnegative integer is required")]
    NegativeInput(String),

    #[error("input must be a positive integer, got {0}")]
    NonPositive(String),

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("{0} is a perfect square; an irrational square root is required")]
    SquareDiscriminant(String),

    #[error("{0} is not a valid positive discriminant (need D > 0, D = 0 or 1 mod 4, D nonsquare)")]
    InvalidDiscriminant(String),

    #[error("invalid form {form}: {reason}")]
    InvalidForm { form: String, reason: &'static str },

    #[error("malformed form literal {0:?}; expected \"[A,B,C]\"")]
    FormSyntax(String),

    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(String),

    #[error("matrix with trace {0} is not hyperbolic (|trace| must exceed 2)")]
    NotHyperbolic(String),

    #[error("invalid path letter {0:?}; expected one of L, R, S")]
    InvalidPathLetter(char),

    #[error("invalid river word {0:?}; need letters R/L with at least one of each")]
    InvalidRiver(String),

    #[error("form {0} is not reduced")]
    NotReduced(String),

    #[error("root geodesics of {0} and {1} do not cross")]
    NotCrossing(String, String),

    #[error("forms {0} and {1} are not strongly inequivalent")]
    StronglyEquivalent(String, String),

    #[error("point {0} is not in the upper half plane")]
    NotInUpperHalfPlane(String),

    #[error("outside the scope of the divisor-sum formula: {0}")]
    FormulaScope(String),

    #[error("epsilon undefined at prime {prime}: {reason}")]
    EpsilonUndefined { prime: u64, reason: &'static str },

    #[error("value {0} exceeds the supported machine-integer range")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
