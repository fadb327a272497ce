use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// The variable set an exponent vector refers to.
///
/// `T` is the usual `t_1, ..., t_d`. `V` is the set `v_i = t_1 ... t_i`, so a
/// power of `v_i` carries t-degree `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    T,
    V,
}

impl Space {
    /// t-degree contributed by one unit of exponent at `index` (0-based).
    #[inline]
    pub fn weight(self, index: usize) -> u32 {
        match self {
            Space::T => 1,
            Space::V => index as u32 + 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVector(SmallVec<[u32; 8]>);

impl ExponentVector {
    pub fn zeros(len: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, len))
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut e = Self::zeros(len);
        e.0[index] = 1;
        e
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        ExponentVector(SmallVec::from_slice(exps))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Plain sum of the entries.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree in the t-variables: `sum e_i` in t-space, `sum i * e_i` in v-space.
    pub fn t_degree(&self, space: Space) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &x)| x * space.weight(i))
            .sum()
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = SmallVec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(ExponentVector(out))
    }

    pub fn scaled(&self, k: u32) -> ExponentVector {
        ExponentVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Re-embed into `len` variables. Padding appends zeros; shrinking is only
    /// possible when every dropped entry is zero, otherwise `None` (the monomial
    /// vanishes under `x_j = 0` for the dropped variables).
    pub fn resized(&self, len: usize) -> Option<ExponentVector> {
        if len >= self.len() {
            let mut out = self.0.clone();
            out.resize(len, 0);
            Some(ExponentVector(out))
        } else if self.0[len..].iter().all(|&x| x == 0) {
            Some(ExponentVector(SmallVec::from_slice(&self.0[..len])))
        } else {
            None
        }
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(SmallVec::from_vec(v))
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector::from_slice(v)
    }
}

impl FromIterator<u32> for ExponentVector {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        ExponentVector(iter.into_iter().collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
