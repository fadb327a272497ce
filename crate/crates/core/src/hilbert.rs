//! Hilbert series of relatively free algebras built from products of T-ideals.
//!
//! If `T(R) = T(R_1) T(R_2)` then
//! `H(R) = H(R_1) + H(R_2) + (t_1 + ... + t_d - 1) H(R_1) H(R_2)`.
//! Everything else here is that rule applied to the polynomial algebra and to
//! the 2x2 matrix algebra.

use num_traits::One;

use crate::error::{Error, Result};
use crate::multiplicity::{young_derive, MultiplicitySeries};
use crate::partitions::enumerate_partitions;
use crate::schur::{elementary, sum_snn};
use crate::series::{binomial, Rational, SparsePoly, Space, TruncatedSeries};

/// `t_1 + ... + t_d - 1`.
fn shifted_sum(d: usize) -> SparsePoly {
    SparsePoly::variable_sum(d, Space::T)
        .sub(&SparsePoly::one(d, Space::T))
        .expect("same ring")
}

fn rat(n: num_bigint::BigInt) -> Rational {
    Rational::from_integer(n)
}

fn check_pair(h1: &TruncatedSeries, h2: &TruncatedSeries) -> Result<()> {
    if h1.nvars() != h2.nvars() || h1.space() != Space::T || h2.space() != Space::T {
        return Err(Error::Dimension(format!(
            "Hilbert series in {} and {} t-variables",
            h1.nvars(),
            h2.nvars()
        )));
    }
    Ok(())
}

/// `1 / (1 - (t_1 + ... + t_d))`, the free associative algebra.
pub fn hilbert_free(d: usize, cap: u32) -> TruncatedSeries {
    let s = SparsePoly::variable_sum(d, Space::T);
    let mut acc = SparsePoly::one(d, Space::T);
    let mut power = SparsePoly::one(d, Space::T);
    for _ in 0..cap {
        power = power.mul(&s).expect("same ring");
        acc = acc.add(&power).expect("same ring");
    }
    TruncatedSeries::new(acc, cap)
}

/// `prod 1/(1 - t_i)`, the polynomial algebra `K[X_d]`.
pub fn hilbert_polyalg(d: usize, cap: u32) -> TruncatedSeries {
    TruncatedSeries::inverse_of_one_minus_each(d, Space::T, cap)
}

/// Hilbert series for the product `T(R_1) T(R_2)` of two T-ideals.
pub fn hilbert_product2(h1: &TruncatedSeries, h2: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_pair(h1, h2)?;
    let cross = h1.mul(h2)?.mul_poly(&shifted_sum(h1.nvars()))?;
    h1.add(h2)?.add(&cross)
}

/// Left-to-right product of several T-ideals.
pub fn hilbert_product(hs: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let (first, rest) = hs
        .split_first()
        .ok_or_else(|| Error::Argument("need at least one factor".into()))?;
    rest.iter().try_fold(first.clone(), |acc, h| hilbert_product2(&acc, h))
}

/// `T(R_1)^n`: `sum_{k=1}^n C(n,k) (sum t - 1)^(k-1) H^k`.
pub fn hilbert_power(h: &TruncatedSeries, n: u32) -> Result<TruncatedSeries> {
    if n < 1 {
        return Err(Error::Argument(format!("power must be at least 1, got {n}")));
    }
    if h.space() != Space::T {
        return Err(Error::SpaceMismatch(h.space(), Space::T));
    }
    let l = shifted_sum(h.nvars());
    let mut acc = TruncatedSeries::zero(h.nvars(), Space::T, h.cap());
    let mut hk = h.clone();
    let mut lk = SparsePoly::one(h.nvars(), Space::T);
    for k in 1..=n {
        if k > 1 {
            hk = hk.mul(h)?;
            lk = lk.mul(&l)?;
        }
        let term = hk.mul_poly(&lk)?.scale(&rat(binomial(n as u64, k as u64)));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Relatively free algebra of `M_2(K)`:
/// `prod 1/(1-t_i)^2 (f - 1) + prod 1/(1-t_i) (1 - e_3)` with `f = sum S_(n,n)`.
pub fn hilbert_m2(d: usize, cap: u32) -> TruncatedSeries {
    let p = hilbert_polyalg(d, cap);
    let f_minus_one = sum_snn(d, cap).sub(&TruncatedSeries::one(d, Space::T, cap)).expect("same ring");
    let one_minus_e3 = SparsePoly::one(d, Space::T).sub(&elementary(3, d)).expect("same ring");
    let a = p.mul(&p).and_then(|p2| p2.mul(&f_minus_one)).expect("same ring");
    let b = p.mul_poly(&one_minus_e3).expect("same ring");
    a.add(&b).expect("same ring")
}

/// The first displayed form `P (P f + 1 - e_3 - P)`, kept as an independent
/// check of [`hilbert_m2`].
pub fn hilbert_m2_unfactored(d: usize, cap: u32) -> TruncatedSeries {
    m2_factor(d, cap).mul(&hilbert_polyalg(d, cap)).expect("same ring")
}

/// `f P - e_3 - P + 1`, so that `H(M_2) = P * m2_factor`.
fn m2_factor(d: usize, cap: u32) -> TruncatedSeries {
    let p = hilbert_polyalg(d, cap);
    let fp = sum_snn(d, cap).mul(&p).expect("same ring");
    let tail = SparsePoly::one(d, Space::T).sub(&elementary(3, d)).expect("same ring");
    fp.sub(&p).and_then(|s| s.add_poly(&tail)).expect("same ring")
}

fn check_pq(p: u32, q: u32) -> Result<()> {
    if p == 0 && q == 0 {
        return Err(Error::Argument("p + q must be at least 1".into()));
    }
    Ok(())
}

/// Hilbert series of `F_d(R_{p,q})`, by composing `T(K)^p` and `T(M_2)^q`.
pub fn hilbert_rpq(p: u32, q: u32, d: usize, cap: u32) -> Result<TruncatedSeries> {
    check_pq(p, q)?;
    if d == 0 {
        return Err(Error::Argument("d must be positive".into()));
    }
    let ones = (p > 0).then(|| hilbert_power(&hilbert_polyalg(d, cap), p)).transpose()?;
    let twos = (q > 0).then(|| hilbert_power(&hilbert_m2(d, cap), q)).transpose()?;
    match (ones, twos) {
        (Some(a), Some(b)) => hilbert_product2(&a, &b),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => unreachable!("checked above"),
    }
}

/// Same series as [`hilbert_rpq`], evaluated as the expanded triple sum
/// `sum_i C(p,i) L^(i-1) P^i + sum_j C(q,j) L^(j-1) P^j G^j
///  + sum_{i,j} C(p,i) C(q,j) L^(i+j-1) P^(i+j) G^j`
/// with `L = sum t - 1`, `P = prod 1/(1-t_s)`, `G = f P - e_3 - P + 1`.
pub fn hilbert_rpq_direct(p: u32, q: u32, d: usize, cap: u32) -> Result<TruncatedSeries> {
    check_pq(p, q)?;
    if d == 0 {
        return Err(Error::Argument("d must be positive".into()));
    }
    let l = shifted_sum(d);
    let pp = hilbert_polyalg(d, cap);
    let g = m2_factor(d, cap);
    let p_pow: Vec<TruncatedSeries> = (0..=(p + q)).map(|k| pp.pow(k)).collect();
    let g_pow: Vec<TruncatedSeries> = (0..=q).map(|k| g.pow(k)).collect();
    let l_pow: Vec<SparsePoly> = (0..(p + q)).map(|k| l.pow(k)).collect();

    let mut acc = TruncatedSeries::zero(d, Space::T, cap);
    let mut push = |coeff: num_bigint::BigInt, lexp: u32, pexp: u32, gexp: u32| -> Result<()> {
        let term = p_pow[pexp as usize]
            .mul(&g_pow[gexp as usize])?
            .mul_poly(&l_pow[lexp as usize])?
            .scale(&rat(coeff));
        acc = acc.add(&term)?;
        Ok(())
    };
    for i in 1..=p {
        push(binomial(p as u64, i as u64), i - 1, i, 0)?;
    }
    for j in 1..=q {
        push(binomial(q as u64, j as u64), j - 1, j, j)?;
    }
    for i in 1..=p {
        for j in 1..=q {
            let c = binomial(p as u64, i as u64) * binomial(q as u64, j as u64);
            push(c, i + j - 1, i + j, j)?;
        }
    }
    Ok(acc)
}

/// Multiplicity series of the upper triangular matrices `U_k(K)`:
/// `sum_{j=1}^k sum_{q<j} sum_{lambda |- q} (-1)^(j-q-1) C(k,j) C(j-1,q) d_lambda Y^j(t^lambda)`.
/// The inner sums are collected per `j` so that `Y^j` runs once per `j`.
pub fn mult_uk(k: u32, d: usize, cap: u32) -> Result<MultiplicitySeries> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let mut total = MultiplicitySeries::zero(d, cap);
    for j in 1..=k {
        let mut coeffs = Vec::new();
        for q in 0..j {
            let sign = if (j - q - 1) % 2 == 0 { Rational::one() } else { -Rational::one() };
            let c = rat(binomial(k as u64, j as u64) * binomial((j - 1) as u64, q as u64)) * sign;
            for lambda in enumerate_partitions(q, d) {
                let dim = Rational::from_integer(lambda.hook_dimension().into());
                coeffs.push((lambda, &c * dim));
            }
        }
        let mut m = MultiplicitySeries::from_coeffs(d, cap, coeffs)?;
        if m.is_zero() {
            continue;
        }
        for _ in 0..j {
            m = young_derive(&m)?;
        }
        total = total.add(&m)?;
    }
    Ok(total)
}

/// `true` when every coefficient of `h` at t-degree `n` sums to `expected(n)`;
/// used for word-count style sanity checks.
pub fn slice_sums_match<F>(h: &TruncatedSeries, expected: F) -> bool
where
    F: Fn(u32) -> Rational,
{
    (0..=h.cap()).all(|n| h.degree_slice_sum(n) == expected(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicity::extract;
    use crate::partitions::Partition;
    use crate::series::ExponentVector;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn free_algebra_counts_words() {
        let h = hilbert_free(2, 3);
        assert!(slice_sums_match(&h, |n| int(1 << n)));
        assert_eq!(h.coeff(&ExponentVector::from_slice(&[1, 1])), int(2));
        assert_eq!(hilbert_free(1, 4), hilbert_polyalg(1, 4));
    }

    #[test]
    fn product_with_zero_is_identity() {
        let h = hilbert_polyalg(2, 6);
        let zero = TruncatedSeries::zero(2, Space::T, 6);
        assert_eq!(hilbert_product2(&h, &zero).unwrap(), h);
    }

    #[test]
    fn power_one_and_two() {
        let h = hilbert_polyalg(2, 6);
        assert_eq!(hilbert_power(&h, 1).unwrap(), h);
        assert_eq!(hilbert_power(&h, 2).unwrap(), hilbert_product2(&h, &h).unwrap());
        assert!(matches!(hilbert_power(&h, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn m2_small_cases() {
        let m = extract(&hilbert_m2(2, 2), 2).unwrap();
        assert_eq!(m.len(), 4);
        for lambda in [p(&[]), p(&[1]), p(&[2]), p(&[1, 1])] {
            assert_eq!(m.get(&lambda), int(1));
        }
        assert_eq!(hilbert_m2(1, 5), hilbert_polyalg(1, 5));
        assert_eq!(hilbert_m2(3, 6), hilbert_m2_unfactored(3, 6));
    }

    #[test]
    fn rpq_degenerate_cases() {
        assert_eq!(hilbert_rpq(1, 0, 2, 5).unwrap(), hilbert_polyalg(2, 5));
        assert_eq!(hilbert_rpq(0, 1, 2, 5).unwrap(), hilbert_m2(2, 5));
        assert!(matches!(hilbert_rpq(0, 0, 2, 5), Err(Error::Argument(_))));
    }

    #[test]
    fn rpq_two_paths_small() {
        for (pp, qq) in [(1, 1), (2, 1), (0, 2)] {
            assert_eq!(hilbert_rpq(pp, qq, 2, 6).unwrap(), hilbert_rpq_direct(pp, qq, 2, 6).unwrap());
        }
    }

    #[test]
    fn uk_commutative_case() {
        let m = mult_uk(1, 2, 6).unwrap();
        assert_eq!(m.len(), 7);
        assert!((0..=6).all(|n| m.get(&p(&[n])) == int(1)));
    }

    #[test]
    fn uk_matches_power_of_polynomial_algebra() {
        let via_ideals = extract(&hilbert_rpq(2, 0, 2, 8).unwrap(), 2).unwrap();
        assert_eq!(mult_uk(2, 2, 8).unwrap(), via_ideals);
    }
}
