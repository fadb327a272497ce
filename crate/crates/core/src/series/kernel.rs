//! Multiplication kernels shared by polynomials and truncated series.
//!
//! Both operands are first scaled to integer coefficients over a common
//! denominator, so the inner loop only multiplies and adds `BigInt`s. The
//! parallel kernel splits the left operand into chunks, accumulates each chunk
//! into its own map and merges; exact integer sums make the result independent
//! of chunking and thread count.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ExponentVector, Rational, Space};

pub(crate) type Terms = BTreeMap<ExponentVector, Rational>;

/// How a product is evaluated. `Parallel` degrades to `Sequential` when the
/// crate is built without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Execution {
    /// Below this many term pairs the thread hand-off costs more than it saves.
    const PARALLEL_THRESHOLD: usize = 1 << 14;

    pub fn auto(pairs: usize) -> Self {
        if cfg!(feature = "parallel") && pairs >= Self::PARALLEL_THRESHOLD {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

struct Scaled {
    // (exponent, t-degree, integer numerator), sorted by t-degree
    terms: Vec<(ExponentVector, u32, BigInt)>,
    denom: BigInt,
}

fn scale(terms: &Terms, space: Space) -> Scaled {
    let denom = terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: Vec<_> = terms
        .iter()
        .map(|(e, c)| {
            let n = c.numer() * (&denom / c.denom());
            (e.clone(), e.t_degree(space), n)
        })
        .collect();
    out.sort_by_key(|t| t.1);
    Scaled { terms: out, denom }
}

type Acc = HashMap<ExponentVector, BigInt>;

fn accumulate(
    left: &[(ExponentVector, u32, BigInt)],
    right: &[(ExponentVector, u32, BigInt)],
    bound: Option<u32>,
) -> Acc {
    let mut acc: Acc = HashMap::new();
    for (ea, da, ca) in left {
        let limit = match bound {
            Some(n) if *da > n => continue,
            Some(n) => n - da,
            None => u32::MAX,
        };
        for (eb, db, cb) in right {
            if *db > limit {
                break;
            }
            let p = ca * cb;
            match acc.entry(ea.add(eb)) {
                std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += p,
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(p);
                }
            }
        }
    }
    acc
}

fn finish(acc: Acc, denom: BigInt) -> Terms {
    acc.into_iter()
        .filter(|(_, n)| !n.is_zero())
        .map(|(e, n)| (e, Rational::new(n, denom.clone())))
        .collect()
}

pub(crate) fn multiply(a: &Terms, b: &Terms, space: Space, bound: Option<u32>, exec: Execution) -> Terms {
    if a.is_empty() || b.is_empty() {
        return Terms::new();
    }
    let (sa, sb) = (scale(a, space), scale(b, space));
    let denom = &sa.denom * &sb.denom;
    let acc = match exec {
        Execution::Sequential => accumulate(&sa.terms, &sb.terms, bound),
        Execution::Parallel => parallel_accumulate(&sa.terms, &sb.terms, bound),
    };
    finish(acc, denom)
}

#[cfg(feature = "parallel")]
fn parallel_accumulate(
    left: &[(ExponentVector, u32, BigInt)],
    right: &[(ExponentVector, u32, BigInt)],
    bound: Option<u32>,
) -> Acc {
    use rayon::prelude::*;

    let chunk = (left.len() / (4 * rayon::current_num_threads())).max(1);
    left.par_chunks(chunk)
        .map(|c| accumulate(c, right, bound))
        .reduce(HashMap::new, |mut x, mut y| {
            if x.len() < y.len() {
                std::mem::swap(&mut x, &mut y);
            }
            for (e, n) in y {
                *x.entry(e).or_insert_with(BigInt::zero) += n;
            }
            x
        })
}

#[cfg(not(feature = "parallel"))]
fn parallel_accumulate(
    left: &[(ExponentVector, u32, BigInt)],
    right: &[(ExponentVector, u32, BigInt)],
    bound: Option<u32>,
) -> Acc {
    accumulate(left, right, bound)
}

/// Maps `f` over `items`, in parallel when the feature is on. Output order
/// always matches input order.
#[cfg(feature = "parallel")]
pub(crate) fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
