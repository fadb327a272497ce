//! Schur polynomials and the symmetric series built from them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multiplicity::extract;
use crate::partitions::Partition;
use crate::series::{DenominatorFactor, ExponentVector, Rational, RationalExpr, SparsePoly, Space, TruncatedSeries};

type Cache = Mutex<HashMap<(Partition, usize), Arc<SparsePoly>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Partitions `mu` with at most `d - 1` parts interlacing `lambda`:
/// `lambda_1 >= mu_1 >= lambda_2 >= ... >= mu_{d-1} >= lambda_d`.
fn interlacing(lambda: &Partition, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(lambda: &Partition, i: usize, d: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == d {
            out.push(Partition::new(cur).expect("interlacing sequence is decreasing"));
            return;
        }
        for m in lambda.part(i + 1)..=lambda.part(i) {
            cur.push(m);
            rec(lambda, i + 1, d, cur, out);
            cur.pop();
        }
    }
    rec(lambda, 1, d, &mut cur, &mut out);
    out
}

fn compute(lambda: &Partition, d: usize) -> SparsePoly {
    if lambda.len() > d {
        return SparsePoly::zero(d, Space::T);
    }
    if d == 0 {
        return SparsePoly::one(0, Space::T);
    }
    // branching: S_lambda(t_1..t_d) = sum_mu S_mu(t_1..t_{d-1}) t_d^{|lambda|-|mu|}
    let mut out = SparsePoly::zero(d, Space::T);
    for mu in interlacing(lambda, d) {
        let shift = lambda.size() - mu.size();
        let inner = schur_shared(&mu, d - 1);
        for (e, c) in inner.terms() {
            let mut v: Vec<u32> = e.as_slice().to_vec();
            v.push(shift);
            out.add_term(ExponentVector::from(v), c.clone());
        }
    }
    out
}

pub(crate) fn schur_shared(lambda: &Partition, d: usize) -> Arc<SparsePoly> {
    let key = (lambda.clone(), d);
    if let Some(p) = cache().lock().unwrap().get(&key) {
        return p.clone();
    }
    let p = Arc::new(compute(lambda, d));
    cache().lock().unwrap().entry(key).or_insert(p).clone()
}

/// `S_lambda(t_1, ..., t_d)`, computed by the branching rule. Zero when
/// `lambda` has more than `d` parts.
pub fn schur_poly(lambda: &Partition, d: usize) -> SparsePoly {
    schur_shared(lambda, d).as_ref().clone()
}

/// `sum_{2n <= cap} S_(n,n)(T_d)`.
pub fn sum_snn(d: usize, cap: u32) -> TruncatedSeries {
    let mut acc = SparsePoly::zero(d, Space::T);
    for n in 0..=cap / 2 {
        let lambda = Partition::new(&[n, n]).expect("(n,n) is a partition");
        acc = acc.add(&schur_shared(&lambda, d)).expect("same ring");
    }
    TruncatedSeries::new(acc, cap)
}

/// Littlewood-Richardson coefficients `c^nu_{lambda mu}`, read off the product
/// `S_lambda S_mu` by multiplicity extraction. Needs `d >= len(lambda) + len(mu)`
/// so that no `nu` is lost.
pub fn lr_coefficients(lambda: &Partition, mu: &Partition, d: usize) -> Result<BTreeMap<Partition, BigInt>> {
    if d < lambda.len() + mu.len() {
        return Err(Error::Dimension(format!(
            "d = {d} is too small for {lambda} * {mu}; need at least {}",
            lambda.len() + mu.len()
        )));
    }
    let cap = lambda.size() + mu.size();
    let product = schur_shared(lambda, d).mul(&schur_shared(mu, d))?;
    let m = extract(&TruncatedSeries::new(product, cap), d)?;
    Ok(m.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| {
            debug_assert!(c.is_integer());
            (p.clone(), c.to_integer())
        })
        .collect())
}

/// `prod_{i<j} 1/(1 - t_i t_j)`, the sum of `S_nu` over `nu` whose distinct
/// row lengths each occur an even number of times.
pub fn even_row_series(d: usize, cap: u32) -> TruncatedSeries {
    let mut den = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut e = ExponentVector::zeros(d);
            e.as_mut_slice()[i] = 1;
            e.as_mut_slice()[j] = 1;
            den.push(DenominatorFactor { monomial: e, power: 1 });
        }
    }
    let expr = RationalExpr::fraction(SparsePoly::one(d, Space::T), den).expect("valid factors");
    expr.expand(d, cap).expect("positive-degree factors")
}

/// `e_k(t_1, ..., t_d) = S_(1^k)`.
pub fn elementary(k: usize, d: usize) -> SparsePoly {
    let lambda = Partition::new(&vec![1; k]).expect("(1^k) is a partition");
    schur_poly(&lambda, d)
}

/// `sum_lambda c_lambda S_lambda(T_d)` truncated at `cap`.
pub fn schur_combination<'a, I>(coeffs: I, d: usize, cap: u32) -> TruncatedSeries
where
    I: IntoIterator<Item = (&'a Partition, &'a Rational)>,
{
    let items: Vec<(&Partition, &Rational)> = coeffs
        .into_iter()
        .filter(|(p, c)| p.size() <= cap && p.len() <= d && !c.is_zero())
        .collect();
    let mut acc = SparsePoly::zero(d, Space::T);
    for (p, c) in items {
        let s = schur_shared(p, d);
        if c.is_one() {
            acc = acc.add(&s).expect("same ring");
        } else {
            acc = acc.add(&s.scale(c)).expect("same ring");
        }
    }
    TruncatedSeries::new(acc, cap)
}
