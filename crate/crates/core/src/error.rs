use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    /// The ratio is not a polynomial. `factor` names a cyclotomic
    /// `Phi_ell` with negative exponent when the route that failed knows it.
    #[error("ratio is not a polynomial{}", fmt_factor(.factor))]
    NotPolynomial { factor: Option<(u32, i64)> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("tuple cancels to the trivial ratio 1")]
    Degenerate,
    #[error("shift would produce exponent {exponent} < 0")]
    NegativeExponent { exponent: i64 },
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T, E = QError> = std::result::Result<T, E>;

fn fmt_factor(factor: &Option<(u32, i64)>) -> String {
    match factor {
        Some((ell, e)) => format!(": Phi_{ell} has exponent {e}"),
        None => String::new(),
    }
}
