//! Exact sparse multivariate polynomials and truncated power series over
//! arbitrary-precision rationals.

mod exponent;
pub(crate) mod kernel;
mod poly;
mod rational;
mod truncated;

use num_bigint::BigInt;
use num_traits::One;

pub use exponent::{ExponentVector, Space};
pub use kernel::Execution;
pub use poly::{poly_mul, SparsePoly};
pub use rational::{expand_rational, DenominatorFactor, RationalExpr, RationalTerm};
pub use truncated::{series_mul, TruncatedSeries};

pub type Rational = num_rational::BigRational;

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
