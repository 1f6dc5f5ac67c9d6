use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::carlitz::BracketIndex;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Field parameters are malformed (non-prime p, reducible modulus, ...).
    InvalidField(String),
    /// Two operands were built over different coefficient fields.
    FieldMismatch,
    /// The series is zero at its precision, so no inverse can be formed.
    NotInvertible,
    /// A caller-supplied argument is out of range.
    Parameter(String),
    /// An admissibility test found a value that is exactly zero.
    Inadmissible { tuple: Vec<BracketIndex> },
    /// An admissibility test found a value that is zero only up to the
    /// available precision.
    Indeterminate { tuple: Vec<BracketIndex> },
    /// A denominator symbol vanished.
    VanishingDenominator(String),
    /// A summation point lies outside the certified convergence region.
    Divergent(String),
    /// A correspondence or identity failed at a given index.
    Inconsistent { index: usize, detail: String },
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "invalid-field",
            Error::FieldMismatch => "field-mismatch",
            Error::NotInvertible => "not-invertible",
            Error::Parameter(_) => "parameter",
            Error::Inadmissible { .. } => "inadmissible",
            Error::Indeterminate { .. } => "indeterminate",
            Error::VanishingDenominator(_) => "vanishing-denominator",
            Error::Divergent(_) => "divergent",
            Error::Inconsistent { .. } => "inconsistent",
        }
    }

    /// True for refusals that stem from the mathematics rather than from
    /// malformed input.
    pub fn is_refusal(&self) -> bool {
        !matches!(
            self,
            Error::InvalidField(_) | Error::FieldMismatch | Error::Parameter(_)
        )
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, tuple: &[BracketIndex]) -> fmt::Result {
    f.write_str("(")?;
    for (k, t) in tuple.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", t)?;
    }
    f.write_str(")")
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField(s) => write!(f, "invalid field parameters: {}", s),
            Error::FieldMismatch => f.write_str("operands use different field parameters"),
            Error::NotInvertible => f.write_str("not invertible at this precision"),
            Error::Parameter(s) => write!(f, "parameter error: {}", s),
            Error::Inadmissible { tuple } => {
                f.write_str("value vanishes at bracket tuple ")?;
                write_tuple(f, tuple)
            }
            Error::Indeterminate { tuple } => {
                f.write_str("indeterminate at precision for bracket tuple ")?;
                write_tuple(f, tuple)
            }
            Error::VanishingDenominator(s) => write!(f, "vanishing denominator: {}", s),
            Error::Divergent(s) => write!(f, "outside the convergence region: {}", s),
            Error::Inconsistent { index, detail } => {
                write!(f, "inconsistent at index {}: {}", index, detail)
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
