use alloc::string::String;
use core::fmt;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// `|Re(β̃)·E|` exceeded the exponent range of `f64` for some configuration.
    Overflow { exponent: f64, bound: f64 },
    /// The real-temperature partition function underflowed to zero.
    Underflow,
    /// The two level energies coincide, so the zero family is undefined.
    DegenerateSpectrum,
    /// Every coefficient of a weighted polynomial vanished.
    IdenticallyZero(String),
    /// An operation precondition was violated.
    Precondition(String),
    /// A root finder did not meet its residual bound.
    Convergence {
        iterations: usize,
        worst_residual: f64,
    },
    /// A constrained sector or dense expansion exceeded its configured cap.
    Resource { size: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Overflow { exponent, bound } => write!(
                f,
                "exponent {exponent:.6e} exceeds the safe bound {bound} for exp"
            ),
            Error::Underflow => f.write_str("partition function underflowed to zero"),
            Error::DegenerateSpectrum => {
                f.write_str("degenerate spectrum: level energies coincide")
            }
            Error::IdenticallyZero(msg) => f.write_str(msg),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Convergence {
                iterations,
                worst_residual,
            } => write!(
                f,
                "no convergence after {iterations} iterations (worst residual {worst_residual:.3e})"
            ),
            Error::Resource { size, cap } => {
                write!(f, "problem size {size} exceeds the configured cap {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
