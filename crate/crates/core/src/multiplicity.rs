//! Multiplicity series: the coefficients `m_lambda` of a symmetric series in
//! the Schur basis, and the operators acting on them.
//!
//! A symmetric series `f(T_d)` is decoded by antisymmetrising with the
//! Vandermonde product `prod_{i<j}(t_i - t_j)`: the coefficient of
//! `t^(lambda + delta)` in `f * V` is `m_lambda`, where
//! `delta = (d-1, ..., 1, 0)`. `V` is homogeneous of degree `|delta|`, so
//! coefficients with `|lambda| <= cap(f)` are exact.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{partitions_up_to, Partition};
use crate::schur::{elementary, schur_combination};
use crate::series::{kernel::map_ordered, ExponentVector, Rational, SparsePoly, Space, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicitySeries {
    d: usize,
    cap: u32,
    coeffs: BTreeMap<Partition, Rational>,
}

impl MultiplicitySeries {
    pub fn zero(d: usize, cap: u32) -> Self {
        MultiplicitySeries { d, cap, coeffs: BTreeMap::new() }
    }

    /// Single coefficient `{lambda: 1}`.
    pub fn single(lambda: Partition, d: usize, cap: u32) -> Result<Self> {
        Self::from_coeffs(d, cap, [(lambda, Rational::one())])
    }

    /// Builds a series; partitions above the cap are dropped, partitions with
    /// more than `d` parts are rejected.
    pub fn from_coeffs<I>(d: usize, cap: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut out = Self::zero(d, cap);
        for (p, c) in coeffs {
            if p.len() > d {
                return Err(Error::Dimension(format!("{p} has more than {d} parts")));
            }
            if p.size() <= cap {
                out.add_coeff(p, c);
            }
        }
        Ok(out)
    }

    fn add_coeff(&mut self, p: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(p.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Same as `is_zero`: no stored terms.
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients in canonical partition order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    pub fn get(&self, p: &Partition) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &MultiplicitySeries) -> Result<MultiplicitySeries> {
        if self.d != other.d {
            return Err(Error::Dimension(format!("d = {} vs d = {}", self.d, other.d)));
        }
        let cap = self.cap.min(other.cap);
        let mut out = self.truncate(cap);
        for (p, c) in other.coeffs.iter().filter(|(p, _)| p.size() <= cap) {
            out.add_coeff(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiplicitySeries) -> Result<MultiplicitySeries> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> MultiplicitySeries {
        let mut out = Self::zero(self.d, self.cap);
        for (p, c) in &self.coeffs {
            out.add_coeff(p.clone(), c * k);
        }
        out
    }

    pub fn truncate(&self, cap: u32) -> MultiplicitySeries {
        let cap = cap.min(self.cap);
        MultiplicitySeries {
            d: self.d,
            cap,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(p, _)| p.size() <= cap)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// All coefficients are nonnegative integers, as they must be for the
    /// cocharacter of an actual algebra.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// First partition (canonical order) where the two series differ, with
    /// `(self, other)` coefficients. Compared up to the smaller cap.
    pub fn first_difference(&self, other: &MultiplicitySeries) -> Option<(Partition, Rational, Rational)> {
        let cap = self.cap.min(other.cap);
        let mut keys: Vec<&Partition> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|p| p.size() <= cap)
            .map(|p| (p, self.get(p), other.get(p)))
            .find(|(_, a, b)| a != b)
            .map(|(p, a, b)| (p.clone(), a, b))
    }
}

type VandermondeTerms = Arc<Vec<(ExponentVector, bool)>>;

/// Expansion of `prod_{i<j} (t_i - t_j)` as `(exponent, negative)` pairs: the
/// `d!` permutations of `delta` with their signs. Cached per `d`.
pub(crate) fn vandermonde_terms(d: usize) -> VandermondeTerms {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, VandermondeTerms>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&d) {
        return v.clone();
    }
    let mut perm: Vec<u32> = (0..d as u32).rev().collect();
    let mut out = Vec::new();
    permute(&mut perm, 0, &mut out);
    out.sort();
    let v = Arc::new(out);
    cache.lock().unwrap().entry(d).or_insert(v).clone()
}

fn permute(xs: &mut [u32], k: usize, out: &mut Vec<(ExponentVector, bool)>) {
    if k == xs.len() {
        // sign relative to the decreasing arrangement: count ascents
        let inversions = (0..xs.len())
            .flat_map(|i| (i + 1..xs.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| xs[i] < xs[j])
            .count();
        out.push((ExponentVector::from_slice(xs), inversions % 2 == 1));
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, out);
        xs.swap(k, i);
    }
}

/// `prod_{i<j} (t_i - t_j)` as a polynomial.
pub fn vandermonde(d: usize) -> SparsePoly {
    let terms = vandermonde_terms(d)
        .iter()
        .map(|(e, neg)| (e.clone(), if *neg { -Rational::one() } else { Rational::one() }))
        .collect::<Vec<_>>();
    SparsePoly::from_terms(d, Space::T, terms).expect("exponents have length d")
}

fn delta(d: usize) -> ExponentVector {
    (0..d as u32).rev().collect()
}

fn check_t_series(f: &TruncatedSeries, d: usize) -> Result<()> {
    if f.space() != Space::T {
        return Err(Error::SpaceMismatch(f.space(), Space::T));
    }
    if f.nvars() != d {
        return Err(Error::Dimension(format!("series in {} variables, d = {d}", f.nvars())));
    }
    Ok(())
}

/// Multiplicity series of a symmetric series `f` in `d` variables: for each
/// `lambda`, the coefficient of `t^(lambda + delta)` in `f * V`. Only these
/// strictly decreasing exponents are ever formed.
pub fn extract(f: &TruncatedSeries, d: usize) -> Result<MultiplicitySeries> {
    check_t_series(f, d)?;
    let vdm = vandermonde_terms(d);
    let shift = delta(d);
    let candidates = partitions_up_to(f.cap(), d);
    let coeffs = map_ordered(&candidates, |lambda| {
        let target = lambda.to_t_exponent(d).expect("at most d parts").add(&shift);
        let mut acc = Rational::zero();
        for (e, neg) in vdm.iter() {
            if let Some(c) = target.checked_sub(e).and_then(|r| f.get(&r)) {
                if *neg {
                    acc -= c;
                } else {
                    acc += c;
                }
            }
        }
        acc
    });
    MultiplicitySeries::from_coeffs(d, f.cap(), candidates.into_iter().zip(coeffs))
}

/// [`extract`] plus a symmetry diagnostic: `f * V` must vanish on every
/// exponent with a repeated entry, which fails for non-symmetric input.
pub fn extract_checked(f: &TruncatedSeries, d: usize) -> Result<MultiplicitySeries> {
    check_t_series(f, d)?;
    let bound = f.cap() + (d * d.saturating_sub(1) / 2) as u32;
    let product = TruncatedSeries::new(f.as_poly().mul(&vandermonde(d))?, bound);
    for (e, c) in product.terms() {
        let s = e.as_slice();
        let repeated = (0..s.len()).any(|i| (i + 1..s.len()).any(|j| s[i] == s[j]));
        if repeated {
            return Err(Error::NotSymmetric(format!("f * V has coefficient {c} at {e}")));
        }
    }
    extract(f, d)
}

/// Checks that `h` is the multiplicity series of `f` via the
/// antisymmetrisation identity
/// `f * V = sum_sigma sign(sigma) sigma(t^delta h(t))`,
/// compared on every term of t-degree `<= cap + |delta|`.
pub fn verify(f: &TruncatedSeries, h: &MultiplicitySeries) -> bool {
    let d = h.d();
    if check_t_series(f, d).is_err() {
        return false;
    }
    let cap = f.cap().min(h.cap());
    let bound = cap + (d * d.saturating_sub(1) / 2) as u32;
    let lhs = match f.truncate(cap).as_poly().mul(&vandermonde(d)) {
        Ok(p) => p.truncated(bound),
        Err(_) => return false,
    };
    let shift = delta(d);
    let mut rhs = SparsePoly::zero(d, Space::T);
    let vdm = vandermonde_terms(d);
    for (lambda, c) in h.iter().filter(|(p, _)| p.size() <= cap) {
        let Some(top) = lambda.to_t_exponent(d) else {
            return false;
        };
        let top = top.add(&shift);
        // sigma(t^(lambda+delta)) with sign(sigma): reuse the permutation
        // table of delta, which lists each arrangement with its sign
        for (perm, neg) in vdm.iter() {
            let e: ExponentVector = perm.as_slice().iter().map(|&k| top[d - 1 - k as usize]).collect();
            let coeff = if *neg { -c.clone() } else { c.clone() };
            rhs.add_term(e, coeff);
        }
    }
    lhs == rhs
}

/// `M(f; T_d)` rewritten in `v_i = t_1 ... t_i`: `lambda` becomes
/// `v^(n_1, ..., n_d)` with `n_i = lambda_i - lambda_{i+1}`. The t-degree, and
/// so the cap, is unchanged.
pub fn to_v(m: &MultiplicitySeries) -> TruncatedSeries {
    let terms = m
        .iter()
        .map(|(p, c)| (p.to_v_exponent(m.d()).expect("at most d parts"), c.clone()));
    TruncatedSeries::from_terms(m.d(), Space::V, m.cap(), terms).expect("length d")
}

pub fn from_v(s: &TruncatedSeries) -> Result<MultiplicitySeries> {
    if s.space() != Space::V {
        return Err(Error::SpaceMismatch(s.space(), Space::V));
    }
    let coeffs = s.terms().map(|(e, c)| (Partition::from_v_exponent(e), c.clone()));
    MultiplicitySeries::from_coeffs(s.nvars(), s.cap(), coeffs)
}

/// Multiplicity series in t-space form: `sum m_lambda t^lambda`.
pub fn to_t(m: &MultiplicitySeries) -> TruncatedSeries {
    let terms = m
        .iter()
        .map(|(p, c)| (p.to_t_exponent(m.d()).expect("at most d parts"), c.clone()));
    TruncatedSeries::from_terms(m.d(), Space::T, m.cap(), terms).expect("length d")
}

fn from_t(s: &TruncatedSeries) -> Result<MultiplicitySeries> {
    let coeffs = s
        .terms()
        .map(|(e, c)| Partition::from_t_exponent(e).map(|p| (p, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    MultiplicitySeries::from_coeffs(s.nvars(), s.cap(), coeffs)
}

/// `sum m_lambda S_lambda(T_d)` truncated at the cap of `m`.
pub fn reconstruct(m: &MultiplicitySeries) -> TruncatedSeries {
    schur_combination(m.iter(), m.d(), m.cap())
}

/// Young derivation: the multiplicity series of `g * prod 1/(1 - t_i)` given
/// that of `g`, via
/// `prod 1/(1-t_i) * sum_eps (-t_2)^e2 ... (-t_d)^ed M(g; t_1 t_2^e2,
/// t_2^(1-e2) t_3^e3, ..., t_d^(1-ed))`.
/// Each substitution sends monomials to monomials of no smaller degree, so
/// truncating at the input cap is exact.
pub fn young_derive(m: &MultiplicitySeries) -> Result<MultiplicitySeries> {
    let d = m.d();
    let cap = m.cap();
    if d == 0 {
        return Err(Error::Argument("d must be positive".into()));
    }
    let eps_all: Vec<u32> = (0..1u32 << (d - 1)).collect();
    let branches = map_ordered(&eps_all, |&mask| {
        // eps[i] for i = 1..d-1 (0-based variable index i), eps[0] unused
        let eps: Vec<u32> = (0..d).map(|i| if i == 0 { 0 } else { (mask >> (i - 1)) & 1 }).collect();
        let sign_negative = eps.iter().sum::<u32>() % 2 == 1;
        let mut out = SparsePoly::zero(d, Space::T);
        for (lambda, c) in m.iter() {
            let mut e = vec![0u32; d];
            e[0] = lambda.part(1);
            for i in 1..d {
                // variable t_{i+1} receives lambda_i from the previous slot
                // when eps is set, lambda_{i+1} from its own slot otherwise
                e[i] = if eps[i] == 1 { lambda.part(i) } else { lambda.part(i + 1) } + eps[i];
            }
            let e = ExponentVector::from(e);
            if e.total() > cap {
                continue;
            }
            out.add_term(e, if sign_negative { -c.clone() } else { c.clone() });
        }
        out
    });
    let mut acc = SparsePoly::zero(d, Space::T);
    for b in branches {
        acc = acc.add(&b)?;
    }
    let series = TruncatedSeries::new(acc, cap).mul(&TruncatedSeries::inverse_of_one_minus_each(d, Space::T, cap))?;
    from_t(&series)
}

/// Branching rule in v-coordinates: the series of `f * S_(1)` is
/// `v_1 M' + sum_{i<d} (v_{i+1}/v_i) (M' - M'|_{v_i = 0})`.
pub fn branch(mv: &TruncatedSeries) -> Result<TruncatedSeries> {
    if mv.space() != Space::V {
        return Err(Error::SpaceMismatch(mv.space(), Space::V));
    }
    let d = mv.nvars();
    let mut out = SparsePoly::zero(d, Space::V);
    for (e, c) in mv.terms() {
        let mut first = e.clone();
        first.as_mut_slice()[0] += 1;
        out.add_term(first, c.clone());
        for i in 0..d.saturating_sub(1) {
            if e[i] > 0 {
                let mut moved = e.clone();
                moved.as_mut_slice()[i] -= 1;
                moved.as_mut_slice()[i + 1] += 1;
                out.add_term(moved, c.clone());
            }
        }
    }
    Ok(TruncatedSeries::new(out, mv.cap()))
}

/// Multiplication by `S_(1^3)` in three variables, which is multiplication by
/// `v_3` in v-coordinates.
pub fn mult_e3_d3(mv: &TruncatedSeries) -> Result<TruncatedSeries> {
    if mv.space() != Space::V {
        return Err(Error::SpaceMismatch(mv.space(), Space::V));
    }
    if mv.nvars() != 3 {
        return Err(Error::UnsupportedDimension { expected: 3, got: mv.nvars() });
    }
    let v3 = SparsePoly::variable(3, Space::V, 2);
    mv.mul_poly(&v3)
}

/// Multiplicity series of `g * e_k` by reconstruct, multiply, extract.
pub fn mult_elementary(m: &MultiplicitySeries, k: usize) -> Result<MultiplicitySeries> {
    let d = m.d();
    if k > d {
        return Ok(MultiplicitySeries::zero(d, m.cap()));
    }
    let g = reconstruct(m).mul_poly(&elementary(k, d))?;
    extract(&g, d)
}
