use core::fmt;

/// Error taxonomy shared across the crate.
///
/// `Structural` covers shape mismatches (wrong domain, wrong length, malformed
/// message), `Parameter` invalid parameter combinations, `Capability` exact
/// searches that would exceed an enumeration cap, and `Precondition` honest-role
/// operations handed dishonest input (e.g. dividing a polynomial that does not
/// vanish on the claimed set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Structural(String),
    Parameter(String),
    Capability(String),
    Precondition(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Structural(m) => write!(f, "structural error: {m}"),
            Error::Parameter(m) => write!(f, "parameter error: {m}"),
            Error::Capability(m) => write!(f, "capability error: {m}"),
            Error::Precondition(m) => write!(f, "precondition violation: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Shorthand constructors; most call sites want a one-liner.
pub fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

pub fn parameter<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}

pub fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
