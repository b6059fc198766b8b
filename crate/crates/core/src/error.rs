use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor rejected a parameter that violates its invariant.
    InvalidParameter { name: &'static str, value: f64 },
    /// The operation is undefined for the given argument (for instance a
    /// Fourier-Laplace transform evaluated exactly on the real axis).
    Domain(&'static str),
    /// A numerical procedure did not reach its tolerance. `estimate` is the
    /// best value obtained and `error` its estimated absolute error.
    Numeric {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
    /// An argument exceeded a hard limit such as the exponential growth guard.
    Range {
        what: &'static str,
        value: f64,
        limit: f64,
    },
}

impl Error {
    pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(Error::InvalidParameter { name, value })
        }
    }

    pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<f64> {
        if value.is_finite() && value >= 0.0 {
            Ok(value)
        } else {
            Err(Error::InvalidParameter { name, value })
        }
    }

    pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::InvalidParameter { name, value })
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric {
                what,
                estimate,
                error,
            } => write!(
                f,
                "{what} did not converge (estimate {estimate:e}, error {error:e})"
            ),
            Error::Range { what, value, limit } => {
                write!(f, "{what} = {value} exceeds limit {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
