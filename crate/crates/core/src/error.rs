use alloc::string::String;
use core::fmt;

use crate::C64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied inconsistent sizes or out-of-range arguments.
    Usage(String),
    /// Physical parameters violate positivity constraints.
    InvalidParams(String),
    /// `rho*lambda + mu*tau^2` fell on the closed negative real axis.
    Branch { lambda: C64, tau: C64 },
    /// The zero wavenumber was passed to a symbol that is singular there.
    SingularMode,
    /// A symbol denominator vanished.
    Singularity { what: &'static str, magnitude: f64 },
    /// Spectrum is not conjugate symmetric; `mode` is the flat index of the worst offender.
    Asymmetric { mode: usize, defect: f64 },
    /// Discrete boundary-value system is numerically singular.
    Discretization { pivot: f64, row: usize },
    /// A non-finite value was produced on the inversion contour.
    Contour { node: usize, lambda: C64 },
    /// Time stepping produced a non-finite mode amplitude (`mode` is the
    /// flat mode index) or a height above the divergence limit (`mode` is
    /// the grid point).
    Divergence { step: usize, mode: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::Branch { lambda, tau } => {
                write!(f, "branch cut hit at lambda = {lambda}, tau = {tau}: rho*lambda + mu*tau^2 is on (-inf, 0]")
            }
            Error::SingularMode => write!(f, "symbol is singular at zero wavenumber"),
            Error::Singularity { what, magnitude } => {
                write!(f, "singular symbol: |{what}| = {magnitude:e}")
            }
            Error::Asymmetric { mode, defect } => {
                write!(f, "spectrum is not conjugate symmetric: worst mode {mode} (relative defect {defect:e})")
            }
            Error::Discretization { pivot, row } => {
                write!(f, "discrete system is singular (pivot {pivot:e} at row {row}); refine the grid or enlarge Y")
            }
            Error::Contour { node, lambda } => {
                write!(f, "non-finite transform value at contour node {node} (lambda = {lambda})")
            }
            Error::Divergence { step, mode } => {
                write!(f, "interface blew up at step {step} (index {mode})")
            }
        }
    }
}

impl core::error::Error for Error {}
