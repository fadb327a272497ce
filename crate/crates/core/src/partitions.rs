//! Integer partitions: enumeration, conjugation, hook-length dimensions and the
//! two exponent-vector encodings (rows in t-space, row differences in v-space).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::series::ExponentVector;

/// A weakly decreasing sequence of positive parts. Trailing zeros are never
/// stored; the empty partition is the partition of 0.
///
/// Ordering is by size first, then decreasing lexicographic on the parts, so
/// `(3) < (2,1) < (1,1,1) < (4)`. Sorted collections therefore come out in the
/// order used by every table this crate prints.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(SmallVec<[u32; 8]>);

impl Partition {
    pub fn empty() -> Self {
        Partition(SmallVec::new())
    }

    /// Accepts trailing zeros; rejects increasing sequences.
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(format!("{parts:?}")));
        }
        let len = parts.iter().take_while(|&&x| x > 0).count();
        if parts[len..].iter().any(|&x| x > 0) {
            return Err(Error::NotAPartition(format!("{parts:?}")));
        }
        Ok(Partition(SmallVec::from_slice(&parts[..len])))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `lambda_i` with 1-based `i`; zero past the last part.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        let parts: SmallVec<[u32; 8]> = (1..=first)
            .map(|j| self.0.iter().filter(|&&x| x >= j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Degree of the irreducible S_n-character: `n! / prod(hook lengths)`.
    pub fn hook_dimension(&self) -> BigUint {
        let n = self.size();
        let conj = self.conjugate();
        let mut hooks = BigUint::one();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.0[j as usize] - i as u32 - 1;
                hooks *= arm + leg + 1;
            }
        }
        let fact: BigUint = (1..=n).fold(BigUint::one(), |acc, k| acc * k);
        fact / hooks
    }

    /// `(lambda_1, ..., lambda_d)`, or `None` if there are more than `d` parts.
    pub fn to_t_exponent(&self, d: usize) -> Option<ExponentVector> {
        (self.len() <= d).then(|| (1..=d).map(|i| self.part(i)).collect())
    }

    /// Difference coordinates `(n_1, ..., n_d)` with `n_i = lambda_i - lambda_{i+1}`.
    pub fn to_v_exponent(&self, d: usize) -> Option<ExponentVector> {
        (self.len() <= d).then(|| (1..=d).map(|i| self.part(i) - self.part(i + 1)).collect())
    }

    /// Inverse of [`Partition::to_t_exponent`]; fails unless the vector is
    /// weakly decreasing.
    pub fn from_t_exponent(e: &ExponentVector) -> Result<Partition> {
        Partition::new(e.as_slice()).map_err(|_| Error::NotAPartition(e.to_string()))
    }

    /// Inverse of [`Partition::to_v_exponent`]. Every nonnegative vector is valid.
    pub fn from_v_exponent(e: &ExponentVector) -> Partition {
        let mut parts: SmallVec<[u32; 8]> = SmallVec::with_capacity(e.len());
        let mut acc = 0;
        for &n in e.as_slice().iter().rev() {
            acc += n;
            parts.push(acc);
        }
        parts.reverse();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }
}

/// All partitions of `n` with at most `max_parts` parts, in decreasing
/// lexicographic order.
pub fn enumerate_partitions(n: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(SmallVec::from_slice(cur)));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, n, max_parts, &mut cur, &mut out);
    out
}

/// All partitions of size `<= cap` with at most `max_parts` parts, in the
/// crate's canonical order (size, then decreasing lex).
pub fn partitions_up_to(cap: u32, max_parts: usize) -> Vec<Partition> {
    (0..=cap).flat_map(|n| enumerate_partitions(n, max_parts)).collect()
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.0.as_slice().cmp(self.0.as_slice()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `3,1,1`, `(3,1,1)` or the empty string.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Argument(format!("bad partition `{s}`: {e}")))?;
        Partition::new(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_partitions(0, 3), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(3, 2), vec![p(&[3]), p(&[2, 1])]);
        assert_eq!(enumerate_partitions(6, 3).len(), 7);
        assert!(enumerate_partitions(2, 0).is_empty());
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(p(&[5]).hook_dimension(), 1u32.into());
        assert_eq!(p(&[1, 1, 1]).hook_dimension(), 1u32.into());
        assert_eq!(p(&[2, 1]).hook_dimension(), 2u32.into());
        assert_eq!(p(&[3, 2]).hook_dimension(), 5u32.into());
        assert_eq!(Partition::empty().hook_dimension(), 1u32.into());
    }

    #[test]
    fn rejects_non_partitions() {
        assert!(Partition::new(&[1, 2]).is_err());
        assert!(Partition::new(&[2, 0, 1]).is_err());
        assert_eq!(Partition::new(&[2, 1, 0, 0]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn encodings() {
        let l = p(&[4, 2, 2]);
        assert_eq!(l.to_t_exponent(4).unwrap().as_slice(), &[4, 2, 2, 0]);
        assert_eq!(l.to_v_exponent(4).unwrap().as_slice(), &[2, 0, 2, 0]);
        assert!(l.to_t_exponent(2).is_none());
        assert_eq!(Partition::from_v_exponent(&l.to_v_exponent(3).unwrap()), l);
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![p(&[4]), p(&[1, 1, 1]), p(&[3]), p(&[2, 1])];
        v.sort();
        assert_eq!(v, vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1]), p(&[4])]);
    }

    #[test]
    fn parse() {
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("(2,2)".parse::<Partition>().unwrap(), p(&[2, 2]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,3".parse::<Partition>().is_err());
    }
}
