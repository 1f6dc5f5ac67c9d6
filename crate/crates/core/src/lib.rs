//! Carlitz calculus over local fields of positive characteristic.
//!
//! The crate is `no_std` (it needs `alloc`). Scalars are truncated series in
//! the perfection of `F_Q((x))` ([`series::PerfSeries`]); on top of them sit
//! the Carlitz quantities ([`carlitz`]), F_q-linear function spaces
//! ([`funcspace`]), the operator ring with its normal forms ([`opring`]),
//! the Cauchy problem for evolution equations ([`cauchy`]) and the
//! hypergeometric functions with their identities ([`hyper`]).
//!
//! Only the perfection of a constant-field extension of `F_q((x))` is
//! represented; parameters from a larger algebraic closure cannot be
//! expressed.

#![no_std]

extern crate alloc;

pub mod carlitz;
pub mod cauchy;
pub mod error;
pub mod field;
pub mod funcspace;
pub mod hyper;
pub mod opring;
pub mod qexp;
pub mod series;

pub use error::{Error, Result};
pub use field::{ConstElem, Field, FieldParams, FieldRef};
pub use qexp::QExp;
pub use series::{PerfSeries, Valuation};
