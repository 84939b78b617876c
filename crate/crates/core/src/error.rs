use core::fmt;

/// Failures reported by the compiler core.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Input failed the unitarity check; `residual` is `‖M·M† − I‖_F`.
    NotUnitary { residual: f64 },
    /// Matrix dimension is not a power of two (or not even where required).
    BadDimension(usize),
    /// Qubit count outside the supported range.
    QubitCount(usize),
    /// Operand sizes disagree.
    ShapeMismatch,
    /// The γ equation has no admissible root for this member.
    NoGammaRoot,
    /// A weak axis with vanishing z component was supplied in a `(kx, ky)` form.
    Gauge,
    /// Member rotations of a strong-plane multiplexor do not share one line.
    NotCollinear,
    /// A qubit index was not among the multiplexor controls.
    NotAControl(usize),
    /// Qubit index out of range or repeated.
    BadQubit(usize),
    /// Axis search never produced a parameterizable probe.
    DegenerateSubset,
    /// Splitting multiplexor `index` of a sequence failed.
    Split { index: usize },
    /// Length is not a power of two.
    BadLength(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotUnitary { residual } => write!(f, "matrix is not unitary (residual {residual:.3e})"),
            Error::BadDimension(n) => write!(f, "dimension {n} is not a power of two >= 2"),
            Error::QubitCount(n) => write!(f, "qubit count {n} out of range"),
            Error::ShapeMismatch => f.write_str("operand shapes do not match"),
            Error::NoGammaRoot => f.write_str("no admissible root for the diagonal angle"),
            Error::Gauge => f.write_str("weak axis has no z component"),
            Error::NotCollinear => f.write_str("multiplexor rotations are not collinear"),
            Error::NotAControl(q) => write!(f, "qubit {q} is not a control"),
            Error::BadQubit(q) => write!(f, "invalid qubit index {q}"),
            Error::DegenerateSubset => f.write_str("no axis could parameterize the subset"),
            Error::Split { index } => write!(f, "could not split multiplexor {index}"),
            Error::BadLength(n) => write!(f, "length {n} is not a power of two"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
