use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong while building inputs or running a solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Polynomial profile without coefficients.
    EmptyCoefficients,
    /// Spline or tabulated law with fewer knots than a cubic needs.
    TooFewSamples { needed: usize, got: usize },
    /// Knot abscissae must be strictly increasing; `index` is the first offender.
    NonIncreasingAbscissae { index: usize },
    /// A knot lies outside the declared domain.
    SampleOutsideDomain { y: f64 },
    /// `lo < hi` with both finite is required.
    InvalidDomain { lo: f64, hi: f64 },
    /// Evaluation requested outside the domain.
    OutsideDomain { y: f64, lo: f64, hi: f64 },
    /// A speed law evaluated to zero or a negative magnitude.
    NonPositiveSpeed { y: f64, value: f64 },
    InvalidParameter(&'static str),
    NonFinite(&'static str),
    /// The initial rate of a forward run was zero.
    ZeroInitialRate,
    /// The sign of the initial rate disagrees with the frame's direction.
    DirectionMismatch,
    /// The prescribed speed exceeds the conserved total speed at `y`, so no
    /// real slope exists there.
    LawExceedsSpeed { y: f64 },
    EmptyTrajectory,
    /// Adaptive quadrature hit its recursion limit before meeting `tol`.
    QuadratureNotConverged { a: f64, b: f64 },
    /// The adaptive integrator could not meet its tolerance with a usable step.
    StepSizeUnderflow { at: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyCoefficients => write!(f, "empty coefficients"),
            Error::TooFewSamples { needed, got } => {
                write!(f, "too few samples: need at least {needed}, got {got}")
            }
            Error::NonIncreasingAbscissae { index } => {
                write!(f, "sample abscissae not strictly increasing at index {index}")
            }
            Error::SampleOutsideDomain { y } => write!(f, "sample at Y={y} lies outside the domain"),
            Error::InvalidDomain { lo, hi } => write!(f, "invalid domain [{lo}, {hi}]"),
            Error::OutsideDomain { y, lo, hi } => {
                write!(f, "Y={y} outside domain [{lo}, {hi}]")
            }
            Error::NonPositiveSpeed { y, value } => {
                write!(f, "speed law is not positive at Y={y} (value {value})")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NonFinite(what) => write!(f, "non-finite input: {what}"),
            Error::ZeroInitialRate => write!(f, "initial rate w0 must be nonzero"),
            Error::DirectionMismatch => {
                write!(f, "sign of w0 does not match the frame traversal direction")
            }
            Error::LawExceedsSpeed { y } => write!(
                f,
                "law_exceeds_speed: prescribed speed exceeds the conserved speed at Y={y}"
            ),
            Error::EmptyTrajectory => write!(f, "empty trajectory"),
            Error::QuadratureNotConverged { a, b } => {
                write!(f, "quadrature did not converge on [{a}, {b}]")
            }
            Error::StepSizeUnderflow { at } => write!(f, "step size underflow at {at}"),
        }
    }
}

impl core::error::Error for Error {}
