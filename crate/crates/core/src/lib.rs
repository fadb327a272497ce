//! Hilbert series of relatively free algebras of upper block triangular
//! matrix algebras, Schur-function multiplicities of their cocharacters, and
//! exact checks of known closed-form multiplicity series.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals and
//! series are truncated by total degree.

pub mod acceptance;
pub mod asymptotics;
pub mod catalog;
pub mod error;
pub mod hilbert;
pub mod multiplicity;
pub mod partitions;
pub mod schur;
pub mod series;

pub use error::{Error, Result};
