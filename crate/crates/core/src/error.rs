use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix expected to be antisymmetric is not (max |Ω + Ωᵀ|).
    NotAntisymmetric {
        deviation: f64,
    },
    /// An inertia matrix has a zero diagonal entry.
    SingularInertia,
    /// Diagonal parameters are non-finite or used in the wrong role.
    InvalidParameters(&'static str),
    InvalidGrid {
        nodes: usize,
        length: f64,
    },
    UnsupportedStencilOrder(u8),
    FieldLength {
        expected: usize,
        found: usize,
    },
    /// The chiral Lax pair has a pole at λ = 0.
    ZeroSpectralParameter,
    TooFewTimeLevels {
        required: usize,
        found: usize,
    },
    NonUniformTrajectory,
    /// Two peakons at one s-node are closer than the proximity guard.
    CoincidentPeakons {
        node: usize,
        gap: f64,
    },
    IllConditioned {
        node: usize,
        estimate: f64,
    },
    NotPositiveDefinite {
        node: usize,
    },
    /// Momentum evaluators of the collision solution are singular at X = 0.
    CollisionInstant,
    InvalidProfile(&'static str),
    /// A time step produced a non-finite value.
    BlowUp {
        time: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotAntisymmetric { deviation } => {
                write!(f, "matrix is not antisymmetric (max |A + Aᵀ| = {deviation:e})")
            }
            Error::SingularInertia => write!(f, "inertia matrix has a zero diagonal entry"),
            Error::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InvalidGrid { nodes, length } => {
                write!(f, "invalid periodic grid: {nodes} nodes over length {length}")
            }
            Error::UnsupportedStencilOrder(order) => {
                write!(f, "unsupported stencil order {order} (expected 2 or 4)")
            }
            Error::FieldLength { expected, found } => {
                write!(f, "field has {found} entries, expected {expected}")
            }
            Error::ZeroSpectralParameter => write!(f, "spectral parameter must be nonzero"),
            Error::TooFewTimeLevels { required, found } => {
                write!(f, "need at least {required} time levels, got {found}")
            }
            Error::NonUniformTrajectory => {
                write!(f, "trajectory snapshots do not share one grid")
            }
            Error::CoincidentPeakons { node, gap } => {
                write!(f, "coincident peakons at s-node {node} (gap {gap:e})")
            }
            Error::IllConditioned { node, estimate } => {
                write!(
                    f,
                    "kernel matrix ill-conditioned at s-node {node} (estimate {estimate:e})"
                )
            }
            Error::NotPositiveDefinite { node } => {
                write!(f, "kernel matrix not positive definite at s-node {node}")
            }
            Error::CollisionInstant => {
                write!(f, "collision instant: momenta are singular at zero separation")
            }
            Error::InvalidProfile(msg) => write!(f, "invalid wave profile: {msg}"),
            Error::BlowUp { time } => write!(f, "non-finite state at t = {time}"),
        }
    }
}

impl core::error::Error for Error {}
