use std::fmt;

use num_traits::{One, Signed, Zero};

use super::kernel::{self, Execution, Terms};
use super::{ExponentVector, Rational, Space};
use crate::error::{Error, Result};

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    nvars: usize,
    space: Space,
    terms: Terms,
}

pub(crate) fn check_compat(a: (usize, Space), b: (usize, Space)) -> Result<()> {
    if a.1 != b.1 {
        return Err(Error::SpaceMismatch(a.1, b.1));
    }
    if a.0 != b.0 {
        return Err(Error::Dimension(format!("{} variables vs {}", a.0, b.0)));
    }
    Ok(())
}

pub(crate) fn add_into(terms: &mut Terms, e: ExponentVector, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl SparsePoly {
    pub fn zero(nvars: usize, space: Space) -> Self {
        SparsePoly { nvars, space, terms: Terms::new() }
    }

    pub fn one(nvars: usize, space: Space) -> Self {
        Self::constant(nvars, space, Rational::one())
    }

    pub fn constant(nvars: usize, space: Space, c: Rational) -> Self {
        Self::monomial(ExponentVector::zeros(nvars), c, space)
    }

    pub fn monomial(e: ExponentVector, c: Rational, space: Space) -> Self {
        let mut p = Self::zero(e.len(), space);
        add_into(&mut p.terms, e, c);
        p
    }

    /// The single variable `x_index` (0-based).
    pub fn variable(nvars: usize, space: Space, index: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, index), Rational::one(), space)
    }

    /// Builds a polynomial, summing repeated exponents.
    pub fn from_terms<I>(nvars: usize, space: Space, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(nvars, space);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension(format!(
                    "exponent {e} has {} entries, expected {nvars}",
                    e.len()
                )));
            }
            add_into(&mut p.terms, e, c);
        }
        Ok(p)
    }

    pub(crate) fn from_raw(nvars: usize, space: Space, terms: Terms) -> Self {
        debug_assert!(terms.iter().all(|(e, c)| e.len() == nvars && !c.is_zero()));
        SparsePoly { nvars, space, terms }
    }

    /// `x_1 + ... + x_n`.
    pub fn variable_sum(nvars: usize, space: Space) -> Self {
        let terms = (0..nvars).map(|i| (ExponentVector::unit(nvars, i), Rational::one()));
        Self::from_raw(nvars, space, terms.collect())
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as `is_zero`: no stored terms.
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get(&self, e: &ExponentVector) -> Option<&Rational> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        debug_assert_eq!(e.len(), self.nvars);
        add_into(&mut self.terms, e, c);
    }

    pub fn max_t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.t_degree(self.space)).max()
    }

    pub fn min_t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.t_degree(self.space)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_t_degree() == self.max_t_degree()
    }

    /// Largest exponent of variable `index` over all terms.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|e| e[index]).max().unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        check_compat((self.nvars, self.space), (other.nvars, other.space))?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_into(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> SparsePoly {
        if k.is_zero() {
            return Self::zero(self.nvars, self.space);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        SparsePoly { nvars: self.nvars, space: self.space, terms }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        check_compat((self.nvars, self.space), (other.nvars, other.space))?;
        let exec = Execution::auto(self.len() * other.len());
        let terms = kernel::multiply(&self.terms, &other.terms, self.space, None, exec);
        Ok(SparsePoly { nvars: self.nvars, space: self.space, terms })
    }

    pub fn pow(&self, n: u32) -> SparsePoly {
        let mut acc = Self::one(self.nvars, self.space);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Applies `f` to every exponent vector; terms mapped to `None` are dropped.
    pub fn map_exponents<F>(&self, nvars: usize, space: Space, mut f: F) -> SparsePoly
    where
        F: FnMut(&ExponentVector) -> Option<ExponentVector>,
    {
        let mut out = Self::zero(nvars, space);
        for (e, c) in &self.terms {
            if let Some(e2) = f(e) {
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Keeps only the terms of t-degree `<= cap`.
    pub fn truncated(&self, cap: u32) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.t_degree(self.space) <= cap)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        SparsePoly { nvars: self.nvars, space: self.space, terms }
    }

    /// Sets variable `index` to zero.
    pub fn at_zero(&self, index: usize) -> SparsePoly {
        self.map_exponents(self.nvars, self.space, |e| (e[index] == 0).then(|| e.clone()))
    }

    /// Re-embeds into `nvars` variables, setting dropped variables to zero.
    pub fn embedded(&self, nvars: usize) -> SparsePoly {
        self.map_exponents(nvars, self.space, |e| e.resized(nvars))
    }

    /// Terms sorted by t-degree, then lexicographically on the exponent.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            (a.0.t_degree(self.space), a.0).cmp(&(b.0.t_degree(self.space), b.0))
        });
        v
    }
}

/// Exact product of two polynomials in the same ring.
pub fn poly_mul(a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
    a.mul(b)
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = match self.space {
            Space::T => 't',
            Space::V => 'v',
        };
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = e.is_zero();
            if !abs.is_one() || unit {
                write!(f, "{abs}")?;
            }
            let mut first = abs.is_one();
            for (i, &x) in e.as_slice().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{var}{}", i + 1)?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}
