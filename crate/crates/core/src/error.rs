use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// Evaluation requested on (or within the guard band of) a charged face.
    Singular { x: f64, z: f64 },
    /// Adaptive quadrature did not reach the requested tolerance.
    QuadratureNonConvergence { estimate: f64, error: f64 },
    /// No sign change of the homogeneity functional on the search bracket.
    RootNotFound { lo: f64, hi: f64 },
    /// The eigenvalue scan missed roots that the node count says exist.
    Resolution { expected: usize, found: usize },
    /// A non-finite value appeared where a finite one is required.
    NonFinite(&'static str),
    /// Calibration is impossible because the model predicts no relaxation.
    CalibrationImpossible,
    /// Zero detuning combined with a zero linewidth.
    ZeroWidthResonance,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Singular { x, z } => write!(
                f,
                "field evaluated on a charged face at x = {x:e} m, z = {z:e} m"
            ),
            Error::QuadratureNonConvergence { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error {error:e})"
            ),
            Error::RootNotFound { lo, hi } => {
                write!(f, "no sign change on bracket [{lo:e}, {hi:e}] m")
            }
            Error::Resolution { expected, found } => write!(
                f,
                "eigenvalue scan too coarse: node count gives {expected} roots, scan found {found}"
            ),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::CalibrationImpossible => {
                write!(f, "calibration impossible: mode sum is zero at the anchor")
            }
            Error::ZeroWidthResonance => {
                write!(f, "zero detuning with zero linewidth is singular")
            }
        }
    }
}

impl core::error::Error for Error {}
