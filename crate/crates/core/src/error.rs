use std::fmt;

/// Library-wide error type.
///
/// Variants are kept structured (rather than stringly) so front ends can map
/// failure classes onto exit codes without matching on messages: anything a
/// caller caused is a usage error, `CapExceeded` is a resource refusal, and
/// `Internal` marks a broken invariant that should never be reachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` passed where a prime is required.
    NotPrime(u64),
    /// Extension degree outside the supported range (must be ≥ 1).
    BadExtensionDegree(u32),
    /// Supplied modulus polynomial is unusable (wrong degree, not monic,
    /// coefficients out of range, or reducible).
    BadModulus(String),
    /// `p^e` (or `q^k` for a tower) does not fit in a `u64`.
    FieldTooLarge { base: u64, degree: u32 },
    /// Canonical integer not in `[0, q)` for the context it was given to.
    ElementOutOfRange { value: u64, order: u64 },
    /// Multiplicative inverse of zero requested.
    DivisionByZero,
    /// Code parameter validation failed (the message names the violated rule).
    BadCodeParams(String),
    /// A slice had the wrong number of entries for its role.
    WrongLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// Codeword shape does not match the parameter set it is used with.
    ShapeMismatch(String),
    /// The interpolation degree bound came out below 1: the parameter
    /// combination cannot support decoding.
    DegenerateDegreeBound { conditions: usize, k: usize, s: usize },
    /// Caller-supplied agreement threshold is below the guaranteed one.
    ThresholdTooSmall { t: usize, t_min: usize },
    /// List-recovery input had no candidate columns at some position.
    EmptyRecoverySet { position: usize },
    /// Evasive-set parameter validation failed.
    BadEvasiveParams(String),
    /// Systematic evasive encoding found no suffix completing the prefix.
    NoCompletingSuffix,
    /// An exhaustive enumeration would exceed the configured cap.
    /// `needed == u64::MAX` means the true count overflows a `u64`.
    CapExceeded { needed: u64, cap: u64 },
    /// A mathematical invariant the library relies on was violated; this is
    /// a bug in the library, not in the caller's input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::BadExtensionDegree(e) => write!(f, "extension degree {e} is invalid (need e >= 1)"),
            Error::BadModulus(msg) => write!(f, "bad modulus polynomial: {msg}"),
            Error::FieldTooLarge { base, degree } => {
                write!(f, "field order {base}^{degree} does not fit in 64 bits")
            }
            Error::ElementOutOfRange { value, order } => {
                write!(f, "element value {value} is out of range for a field of order {order}")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::BadCodeParams(msg) => write!(f, "bad code parameters: {msg}"),
            Error::WrongLength { what, expected, got } => {
                write!(f, "{what} must have length {expected}, got {got}")
            }
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::DegenerateDegreeBound { conditions, k, s } => write!(
                f,
                "degree bound is degenerate ({conditions} conditions, k = {k}, s = {s}): decoding is vacuous"
            ),
            Error::ThresholdTooSmall { t, t_min } => {
                write!(f, "agreement threshold {t} is below the guaranteed minimum {t_min}")
            }
            Error::EmptyRecoverySet { position } => {
                write!(f, "candidate set at position {position} is empty")
            }
            Error::BadEvasiveParams(msg) => write!(f, "bad evasive-set parameters: {msg}"),
            Error::NoCompletingSuffix => write!(f, "no suffix completes the prefix inside the set"),
            Error::CapExceeded { needed, cap } => {
                if *needed == u64::MAX {
                    write!(f, "enumeration size overflows u64 (cap {cap})")
                } else {
                    write!(f, "enumeration needs {needed} steps, exceeding the cap {cap}")
                }
            }
            Error::Internal(msg) => write!(f, "internal invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
