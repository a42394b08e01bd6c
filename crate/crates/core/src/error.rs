use std::fmt;

use thiserror::Error;

/// One member of the damped log-power family `U[a, b, eps](x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UTerm {
    pub a: u32,
    pub b: u32,
    pub eps: u32,
}

impl fmt::Display for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U[{},{},{}]", self.a, self.b, self.eps)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole at s = {0}")]
    Pole(f64),

    #[error(
        "quadrature did not converge{}: best estimate {best_estimate:e}, error estimate {abs_error_estimate:e} (tol {tol:e})",
        term.map(|t| format!(" for {t}")).unwrap_or_default()
    )]
    NonConvergence {
        term: Option<UTerm>,
        best_estimate: f64,
        abs_error_estimate: f64,
        tol: f64,
    },

    #[error("loss of significance in finite-difference oracle: value {value:e}, error estimate {error_estimate:e}")]
    LossOfSignificance { value: f64, error_estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
