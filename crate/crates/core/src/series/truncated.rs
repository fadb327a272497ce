use num_traits::{One, Zero};

use super::kernel::{self, Execution};
use super::poly::{add_into, check_compat};
use super::{ExponentVector, Rational, SparsePoly, Space};
use crate::error::{Error, Result};

/// A power series known exactly up to total t-degree `cap`.
///
/// Every stored term has t-degree `<= cap`; terms above the cap are unknown,
/// not zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    poly: SparsePoly,
    cap: u32,
}

impl TruncatedSeries {
    pub fn new(poly: SparsePoly, cap: u32) -> Self {
        TruncatedSeries { poly: poly.truncated(cap), cap }
    }

    pub fn zero(nvars: usize, space: Space, cap: u32) -> Self {
        TruncatedSeries { poly: SparsePoly::zero(nvars, space), cap }
    }

    pub fn one(nvars: usize, space: Space, cap: u32) -> Self {
        TruncatedSeries { poly: SparsePoly::one(nvars, space), cap }
    }

    #[inline]
    pub fn cap(&self) -> u32 {
        self.cap
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    #[inline]
    pub fn space(&self) -> Space {
        self.poly.space()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    /// Same as `is_zero`: no stored terms.
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn into_poly(self) -> SparsePoly {
        self.poly
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.poly.terms()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.poly.coeff(e)
    }

    pub fn get(&self, e: &ExponentVector) -> Option<&Rational> {
        self.poly.get(e)
    }

    pub fn truncate(&self, cap: u32) -> TruncatedSeries {
        TruncatedSeries::new(self.poly.clone(), cap.min(self.cap))
    }

    fn compat(&self, other: &TruncatedSeries) -> Result<()> {
        check_compat((self.nvars(), self.space()), (other.nvars(), other.space()))
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.compat(other)?;
        let cap = self.cap.min(other.cap);
        Ok(TruncatedSeries::new(self.poly.add(&other.poly)?, cap))
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.neg(), cap: self.cap }
    }

    pub fn scale(&self, k: &Rational) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.scale(k), cap: self.cap }
    }

    /// Adds a polynomial; its terms above the cap are discarded.
    pub fn add_poly(&self, p: &SparsePoly) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::new(self.poly.add(p)?, self.cap))
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.mul_with(other, Execution::auto(self.len() * other.len()))
    }

    /// Product with an explicit execution strategy; the result does not depend
    /// on the strategy.
    pub fn mul_with(&self, other: &TruncatedSeries, exec: Execution) -> Result<TruncatedSeries> {
        self.compat(other)?;
        let cap = self.cap.min(other.cap);
        let terms = kernel::multiply(self.poly.raw_terms(), other.poly.raw_terms(), self.space(), Some(cap), exec);
        Ok(TruncatedSeries {
            poly: SparsePoly::from_raw(self.nvars(), self.space(), terms),
            cap,
        })
    }

    /// Multiplies by a polynomial (which is exact, so the cap is unchanged).
    pub fn mul_poly(&self, p: &SparsePoly) -> Result<TruncatedSeries> {
        check_compat((self.nvars(), self.space()), (p.nvars(), p.space()))?;
        let exec = Execution::auto(self.len() * p.len());
        let terms = kernel::multiply(self.poly.raw_terms(), p.raw_terms(), self.space(), Some(self.cap), exec);
        Ok(TruncatedSeries {
            poly: SparsePoly::from_raw(self.nvars(), self.space(), terms),
            cap: self.cap,
        })
    }

    pub fn pow(&self, n: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.nvars(), self.space(), self.cap);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Builds a series from raw terms, discarding anything above `cap`.
    pub fn from_terms<I>(nvars: usize, space: Space, cap: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        Ok(TruncatedSeries::new(SparsePoly::from_terms(nvars, space, terms)?, cap))
    }

    /// `1 / (1 - m)^power` truncated at `cap`; `m` must have positive t-degree.
    pub fn geometric(m: &ExponentVector, power: u32, space: Space, cap: u32) -> Result<TruncatedSeries> {
        let step = m.t_degree(space);
        if step == 0 {
            return Err(Error::Divergent);
        }
        let mut terms = super::kernel::Terms::new();
        if power == 0 {
            add_into(&mut terms, ExponentVector::zeros(m.len()), Rational::one());
        } else {
            let k = power as u64;
            let mut e = ExponentVector::zeros(m.len());
            for n in 0..=(cap / step) as u64 {
                let c = super::binomial(n + k - 1, k - 1);
                terms.insert(e.clone(), Rational::from_integer(c));
                e = e.add(m);
            }
        }
        Ok(TruncatedSeries {
            poly: SparsePoly::from_raw(m.len(), space, terms),
            cap,
        })
    }

    /// `prod_i 1/(1 - x_i)` in `nvars` variables.
    pub fn inverse_of_one_minus_each(nvars: usize, space: Space, cap: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(nvars, space, cap);
        for i in 0..nvars {
            let g = TruncatedSeries::geometric(&ExponentVector::unit(nvars, i), 1, space, cap)
                .expect("unit monomials have positive degree");
            acc = acc.mul(&g).expect("same ring");
        }
        acc
    }

    /// True when both series agree on every term up to the smaller cap.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        if self.nvars() != other.nvars() || self.space() != other.space() {
            return false;
        }
        let cap = self.cap.min(other.cap);
        self.poly.truncated(cap) == other.poly.truncated(cap)
    }

    pub fn is_integral(&self) -> bool {
        self.poly.is_integral()
    }

    /// Coefficient sum of the homogeneous component of t-degree `n`.
    pub fn degree_slice_sum(&self, n: u32) -> Rational {
        self.terms()
            .filter(|(e, _)| e.t_degree(self.space()) == n)
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }
}

/// Product of two truncated series, truncated at the smaller cap.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}
