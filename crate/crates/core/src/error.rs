//! The error type shared by every module of the library.

use thiserror::Error;

/// Errors reported by construction, reduction, and classification routines.
///
/// Programmer errors (mismatched owner fields, out-of-range indices) panic
/// instead; `Error` is reserved for conditions a caller can meaningfully
/// react to, such as malformed input data or a value outside the domain of
/// a partial operation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A modulus that is not an irreducible polynomial of the stated degree.
    #[error("modulus {modulus} is not an irreducible degree-{degree} polynomial over GF(2)")]
    BadModulus { degree: u32, modulus: u64 },

    /// Attempt to invert the zero element of a field.
    #[error("inversion of zero")]
    ZeroInverse,

    /// A polynomial that must be monic is not.
    #[error("polynomial is not monic")]
    NotMonic,

    /// A polynomial that must be irreducible factors over its field.
    #[error("polynomial is reducible over its coefficient field")]
    Reducible,

    /// A matrix that must be invertible has no inverse.
    #[error("matrix is singular")]
    Singular,

    /// An element of the extension field that should lie in the embedded
    /// base field does not.
    #[error("value does not lie in the embedded base field")]
    NotInBaseField,

    /// Input data whose shape rules it out of the structured family the
    /// operation works on.
    #[error("unexpected shape: {0}")]
    Shape(String),

    /// A Gram matrix that fails invariance under the group action.
    #[error("form is not invariant: {0}")]
    NotInvariant(String),

    /// A Gram matrix that is invariant but not symplectic.
    #[error("form is not symplectic: {0}")]
    NotSymplectic(String),

    /// A requested enumeration or search that exceeds the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A parameter combination the library does not support.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
