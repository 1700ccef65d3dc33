use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures of the gap-spectrum computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A block or input matrix is not symmetric within the relative tolerance.
    NonSymmetric { asymmetry: f64, tolerance: f64 },
    /// `n_plus` does not split the matrix into two nonempty blocks.
    BadSplit { n_plus: usize, size: usize },
    /// Operand shapes do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// A block exceeds the dense size cap.
    SizeCap { dim: usize, cap: usize },
    /// The dense symmetric eigensolver did not converge.
    EigFailure,
    /// A Cholesky factorization met a nonpositive pivot (`E ≤ λ0` for resolvents).
    NotPositiveDefinite { pivot: usize },
    /// `k` is outside `1..=n_plus`.
    KOutOfRange { k: usize, n_plus: usize },
    /// `energy_of_vector` was called with the zero vector.
    ZeroVector,
    /// No sign change of the level function was found in `(lo, hi]`.
    BracketFailure { lo: f64, hi: f64 },
    /// The gap condition `λ0 < λ1` is not certified.
    NoGap { lambda0: f64, lambda1: f64 },
    /// `K_E` is singular or indefinite, so `E` is not strictly inside the gap.
    SingularSchur { e: f64 },
    /// A model specification violates its invariants.
    SpecInvalid(&'static str),
    /// The random fixture generator exhausted its retries.
    GenerationFailure { retries: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonSymmetric { asymmetry, tolerance } => write!(
                f,
                "matrix is not symmetric: max |a_ij - a_ji| = {asymmetry:e} exceeds {tolerance:e}"
            ),
            Error::BadSplit { n_plus, size } => {
                write!(f, "n_plus = {n_plus} must satisfy 1 <= n_plus < {size}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SizeCap { dim, cap } => {
                write!(f, "block dimension {dim} exceeds the dense size cap {cap}")
            }
            Error::EigFailure => f.write_str("symmetric eigensolver did not converge"),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::KOutOfRange { k, n_plus } => {
                write!(f, "level index k = {k} outside 1..={n_plus}")
            }
            Error::ZeroVector => f.write_str("vector must be nonzero"),
            Error::BracketFailure { lo, hi } => {
                write!(f, "no sign change of the level function in ({lo:e}, {hi:e}]")
            }
            Error::NoGap { lambda0, lambda1 } => {
                write!(f, "gap condition fails: lambda0 = {lambda0}, lambda1 = {lambda1}")
            }
            Error::SingularSchur { e } => {
                write!(f, "Schur complement is not invertible at E = {e}")
            }
            Error::SpecInvalid(why) => write!(f, "invalid model specification: {why}"),
            Error::GenerationFailure { retries } => {
                write!(f, "random operator generation failed after {retries} retries")
            }
        }
    }
}

impl core::error::Error for Error {}
