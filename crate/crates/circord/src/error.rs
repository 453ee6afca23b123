//! Structured errors for construction, validation and resource limits.

use thiserror::Error;

/// Errors raised by descriptor parsing, oracle construction and enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A descriptor field is malformed; `path` locates it in the input JSON.
    #[error("malformed descriptor at `{path}`: {reason}")]
    Descriptor { path: String, reason: String },

    /// An element does not match the backend's coordinate arity.
    #[error("element of wrong arity for {group}: expected {expected} coordinates, got {got}")]
    Arity {
        group: String,
        expected: usize,
        got: usize,
    },

    /// A coordinate does not fit the interchange range (i64) for serialization.
    #[error("element coordinate {value} does not fit the interchange integer range")]
    CoordinateRange { value: String },

    /// A requested ball is too large to materialize.
    #[error("ball of radius {radius} on {group} has {size} elements, over the cap {cap}")]
    BallOverflow {
        group: String,
        radius: u32,
        size: u128,
        cap: u128,
    },

    /// An enumeration or search exceeded its work cap.
    #[error("{what} exceeded the resource cap: {cells} cells > {cap}")]
    ResourceCap { what: String, cells: u64, cap: u64 },

    /// A quotient that would have to be materialized is infinite.
    #[error("quotient of {h} by the subgroup generated by z^{n} is infinite and cannot be materialized")]
    InfiniteQuotient { h: String, n: u64 },

    /// A circular ordering was rejected as provably not coming from a left order.
    #[error("ordering is provably not from a left order: rotation of {witness} is {value}, nonzero mod 1")]
    NotSecret { witness: String, value: String },

    /// A morphism required to be injective identified two sampled elements.
    #[error("morphism is not injective on samples: {a} and {b} have the same image")]
    NotInjective { a: String, b: String },

    /// No cofinality witness was found within the configured power bound.
    #[error("no cofinality witness for {g}: z^-k < g < z^k fails for every k <= {bound}")]
    NotCofinal { g: String, bound: u32 },

    /// A construction precondition failed.
    #[error("{0}")]
    Invalid(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Error for a bad descriptor field.
    pub fn descriptor(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Descriptor {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Error for a failed construction precondition.
    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::Invalid(reason.into())
    }
}
