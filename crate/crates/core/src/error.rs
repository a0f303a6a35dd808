use thiserror::Error;

/// Errors raised by the library.
///
/// Variants other than [`Error::Io`] and [`Error::Verification`] signal bad
/// input; see [`Error::is_validation`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not prime")]
    NotPrime(u32),
    #[error("dimension {d} is not supported here: {reason}")]
    UnsupportedDimension { d: u32, reason: &'static str },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error was caused by the caller's input rather than by
    /// an internal failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Verification(_))
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Returns `Ok(())` when `d` is prime.
pub fn ensure_prime(d: u32) -> Result<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(Error::NotPrime(d))
    }
}

/// Returns `Ok(())` when `d` is an odd prime.
pub fn ensure_odd_prime(d: u32) -> Result<()> {
    ensure_prime(d)?;
    if d == 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "an odd prime dimension is required",
        });
    }
    Ok(())
}

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}
