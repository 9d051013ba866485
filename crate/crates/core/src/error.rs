use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the arrangement, closed-form and quadrature routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A form has zero homogeneous part.
    ZeroForm { index: usize },
    /// Two input forms are rational multiples of each other.
    DuplicateHyperplane { first: usize, second: usize },
    /// The homogeneous parts do not span the dual space, so there is no vertex.
    NotEssential,
    /// Lengths of coordinate vectors or weight lists disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// The arrangement has no hyperplanes or the dimension is zero.
    Empty,
    /// An index set does not describe an edge of the arrangement.
    EdgeNotInLattice { indices: Vec<usize> },
    /// The additional linear function has no homogeneous part.
    ConstantF0,
    /// A chamber was expected to be growing with respect to `f0`.
    NotGrowing { chamber: usize },
    /// The truncation level does not exceed `f0` on every vertex.
    TThreshold,
    /// No (unique) flag-adjacency bijection between bases and chambers.
    BijectionFailure { reason: String },
    /// The flag of a basis is not adjacent to the chamber it is paired with.
    DegenerateFlag { basis: Vec<usize> },
    /// An evaluation point lies on a hyperplane.
    PointOnHyperplane { index: usize },
    /// `|f_i|` is unbounded on the chamber; the trace path is required.
    Unbounded { chamber: usize, index: usize },
    /// `f0` is unbounded below on the chamber.
    UnboundedBelow { chamber: usize },
    /// A gamma factor sits at a pole.
    GammaPole { argument: (f64, f64), context: String },
    /// The integrand is not integrable (some weight has non-positive real part).
    NonIntegrable { index: usize },
    /// The quadrature did not reach the requested tolerance.
    MaxDepthExceeded { estimate: f64, error: f64, context: String },
    /// A point of a Selberg integrand lies on the singular locus.
    OnSingularLocus,
    /// Invalid parameters for a routine (tolerances, sizes, caps).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroForm { index } => write!(f, "form {index} has zero homogeneous part"),
            Error::DuplicateHyperplane { first, second } => {
                write!(f, "forms {first} and {second} define the same hyperplane")
            }
            Error::NotEssential => write!(f, "arrangement is not essential (no vertex)"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Empty => write!(f, "empty arrangement or zero dimension"),
            Error::EdgeNotInLattice { indices } => {
                write!(f, "index set {indices:?} is not an edge of the arrangement")
            }
            Error::ConstantF0 => write!(f, "f0 is constant"),
            Error::NotGrowing { chamber } => write!(f, "chamber {chamber} is not growing"),
            Error::TThreshold => write!(f, "truncation level is not above f0 on all vertices"),
            Error::BijectionFailure { reason } => write!(f, "basis/chamber bijection failed: {reason}"),
            Error::DegenerateFlag { basis } => write!(f, "flag of basis {basis:?} is degenerate"),
            Error::PointOnHyperplane { index } => write!(f, "point lies on hyperplane {index}"),
            Error::Unbounded { chamber, index } => {
                write!(f, "|f_{index}| is unbounded on chamber {chamber}")
            }
            Error::UnboundedBelow { chamber } => {
                write!(f, "f0 is unbounded below on chamber {chamber}")
            }
            Error::GammaPole { argument, context } => write!(
                f,
                "gamma pole at {}{:+}i ({context})",
                argument.0, argument.1
            ),
            Error::NonIntegrable { index } => {
                write!(f, "weight {index} has non-positive real part")
            }
            Error::MaxDepthExceeded { estimate, error, context } => write!(
                f,
                "quadrature did not converge ({context}): estimate {estimate:e}, error {error:e}"
            ),
            Error::OnSingularLocus => write!(f, "point lies on the singular locus"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
