//! The acceptance suite as library code, shared by the `acceptance` test
//! target and the `cochar selftest` command.
//!
//! Every criterion is an exact check with a wall-clock budget; a criterion
//! passes only if the check holds and finishes within budget.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{
    asym_ratio_check, default_tolerance, default_window, leading_form_2var, leading_form_pipeline_2var, probe_points,
    NPoly,
};
use crate::catalog::{compare_entry, Catalog};
use crate::error::Result;
use crate::hilbert::{hilbert_m2, hilbert_polyalg, hilbert_product, hilbert_rpq, mult_uk};
use crate::multiplicity::{
    branch, extract, mult_e3_d3, mult_elementary, reconstruct, to_v, verify, young_derive, MultiplicitySeries,
};
use crate::partitions::{partitions_up_to, Partition};
use crate::schur::{elementary, schur_poly, sum_snn};
use crate::series::{DenominatorFactor, ExponentVector, Rational, RationalExpr, SparsePoly, Space, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    /// Large-d runs; skipped by `selftest` unless asked for.
    Slow,
}

#[derive(Clone, Copy, Debug)]
pub struct Criterion {
    pub number: u32,
    pub title: &'static str,
    pub budget: Duration,
    pub tier: Tier,
    check: fn() -> Result<(bool, String)>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub number: u32,
    pub title: &'static str,
    pub holds: bool,
    pub elapsed: Duration,
    pub budget: Duration,
    pub detail: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.holds && self.elapsed <= self.budget
    }

    /// One report line, e.g. `PASS [ 7] R02 two variables (0.01s / 30s): ...`.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let over = if self.holds && !self.passed() { ", over budget" } else { "" };
        format!(
            "{verdict} [{:>2}] {} ({:.2}s / {}s{over}): {}",
            self.number,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

impl Criterion {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let (holds, detail) = match (self.check)() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome {
            number: self.number,
            title: self.title,
            holds,
            elapsed: start.elapsed(),
            budget: self.budget,
            detail,
        }
    }
}

const fn secs(n: u64) -> Duration {
    Duration::from_secs(n)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { number: 1, title: "sum of S_(n,n) closed form", budget: secs(5), tier: Tier::Fast, check: c1 },
    Criterion { number: 2, title: "M' of f and f^2", budget: secs(30), tier: Tier::Fast, check: c2 },
    Criterion { number: 3, title: "M' of f^3 in four variables", budget: secs(120), tier: Tier::Fast, check: c3 },
    Criterion { number: 4, title: "M_2 via Young derivation", budget: secs(60), tier: Tier::Fast, check: c4 },
    Criterion { number: 5, title: "U_k two routes", budget: secs(120), tier: Tier::Fast, check: c5 },
    Criterion { number: 6, title: "R11 closed form at d=4 and d=6", budget: secs(900), tier: Tier::Slow, check: c6 },
    Criterion { number: 7, title: "R02 two variables", budget: secs(30), tier: Tier::Fast, check: c7 },
    Criterion { number: 8, title: "R02 three variables", budget: secs(600), tier: Tier::Fast, check: c8 },
    Criterion { number: 9, title: "R03 two variables", budget: secs(120), tier: Tier::Fast, check: c9 },
    Criterion { number: 10, title: "exact two-variable leading forms", budget: secs(600), tier: Tier::Fast, check: c10 },
    Criterion { number: 11, title: "asymptotic ratio checks", budget: secs(300), tier: Tier::Fast, check: c11 },
    Criterion { number: 12, title: "property suites", budget: secs(900), tier: Tier::Slow, check: c12 },
];

pub fn criterion(number: u32) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.number == number)
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(Criterion::run).collect()
}

fn one_minus_each_pair(d: usize) -> Vec<DenominatorFactor> {
    let mut den = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut e = ExponentVector::zeros(d);
            e.as_mut_slice()[i] = 1;
            e.as_mut_slice()[j] = 1;
            den.push(DenominatorFactor { monomial: e, power: 1 });
        }
    }
    den
}

fn factor(e: &[u32], power: u32) -> DenominatorFactor {
    DenominatorFactor { monomial: ExponentVector::from_slice(e), power }
}

fn c1() -> Result<(bool, String)> {
    let num = SparsePoly::one(4, Space::T).sub(&elementary(4, 4))?;
    let closed = RationalExpr::fraction(num, one_minus_each_pair(4))?.expand(4, 12)?;
    let direct = sum_snn(4, 12);
    Ok((closed == direct, format!("{} terms compared", direct.len())))
}

fn c2() -> Result<(bool, String)> {
    let f = sum_snn(4, 12);
    let mf = to_v(&extract(&f, 4)?);
    let expected_f = RationalExpr::fraction(SparsePoly::one(4, Space::V), vec![factor(&[0, 1, 0, 0], 1)])?.expand(4, 12)?;
    let mf2 = to_v(&extract(&f.mul(&f)?, 4)?);
    let den = vec![factor(&[1, 0, 1, 0], 1), factor(&[0, 1, 0, 0], 2), factor(&[0, 0, 0, 1], 1)];
    let expected_f2 = RationalExpr::fraction(SparsePoly::one(4, Space::V), den)?.expand(4, 12)?;
    let (a, b) = (mf == expected_f, mf2 == expected_f2);
    Ok((a && b, format!("M'(f) {}, M'(f^2) {}", eq_word(a), eq_word(b))))
}

fn eq_word(b: bool) -> &'static str {
    if b {
        "equal"
    } else {
        "DIFFERENT"
    }
}

fn compare(id: &str, d: usize, cap: u32) -> Result<(bool, String)> {
    let r = compare_entry(Catalog::bundled(), id, d, cap)?;
    let detail = match &r.first_mismatch {
        None => format!("{id} EQUAL up to degree {cap} at d={d}"),
        Some(m) => format!(
            "{id} at d={d}: first mismatch at {} (closed form {}, pipeline {})",
            m.partition, m.expected, m.got
        ),
    };
    Ok((r.equal, detail))
}

fn c3() -> Result<(bool, String)> {
    compare("f3_V4", 4, 12)
}

fn c4() -> Result<(bool, String)> {
    let (d, cap) = (3, 10);
    let lhs = extract(&hilbert_m2(d, cap), d)?;
    let f_minus_one = MultiplicitySeries::from_coeffs(
        d,
        cap,
        (1..=cap / 2).map(|n| (Partition::new(&[n, n]).expect("partition"), Rational::one())),
    )?;
    let one_minus_e3 = MultiplicitySeries::from_coeffs(
        d,
        cap,
        [(Partition::empty(), Rational::one()), (Partition::new(&[1, 1, 1])?, -Rational::one())],
    )?;
    let rhs = young_derive(&young_derive(&f_minus_one)?)?.add(&young_derive(&one_minus_e3)?)?;
    let ok = lhs == rhs;
    Ok((ok, format!("{} multiplicities compared, {}", lhs.len(), eq_word(ok))))
}

fn c5() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for (k, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        if mult_uk(k, d, 8)? != extract(&hilbert_rpq(k, 0, d, 8)?, d)? {
            bad.push(format!("(k={k}, d={d})"));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "4 of 4 cases equal".into() } else { format!("differ at {}", bad.join(", ")) }))
}

fn c6() -> Result<(bool, String)> {
    let (a, da) = compare("R11_Vd", 4, 10)?;
    let (b, db) = compare("R11_Vd", 6, 8)?;
    Ok((a && b, format!("{da}; {db}")))
}

fn c7() -> Result<(bool, String)> {
    compare("R02_2var", 2, 30)
}

fn c8() -> Result<(bool, String)> {
    compare("R02_3var", 3, 10)
}

fn c9() -> Result<(bool, String)> {
    compare("R03_2var", 2, 20)
}

/// `coeff * n1^a n2^b * (n1 + n2)^k` style forms are built from monomial lists.
fn form(coeff: Rational, monomials: &[(i64, [u32; 2])]) -> NPoly {
    let mut p = NPoly::zero(2);
    for (c, e) in monomials {
        p.add_term(e.to_vec(), Rational::from_integer((*c).into()) * &coeff);
    }
    p
}

fn factorial(n: u32) -> Rational {
    Rational::from_integer((1..=n).fold(num_bigint::BigInt::one(), |a, k| a * k))
}

fn c10() -> Result<(bool, String)> {
    let catalog = Catalog::bundled();
    // (1/6!) n1 n2^4 (5 n1^2 + 6 n1 n2 + 2 n2^2)
    let r02 = form(factorial(6).recip(), &[(5, [3, 4]), (6, [2, 5]), (2, [1, 6])]);
    // (1/11!) n1 n2^7 (66 n1^4 + 77 n1 n2^3 + 165 n1^2 n2^2 + 165 n1^3 n2 + 14 n2^4)
    let r03 = form(
        factorial(11).recip(),
        &[(66, [5, 7]), (77, [2, 10]), (165, [3, 9]), (165, [4, 8]), (14, [1, 11])],
    );
    // (1/10!) n1 n2^6 (n1 + n2)^6
    let binom6 = [1, 6, 15, 20, 15, 6, 1];
    let r04_terms: Vec<(i64, [u32; 2])> = (0..=6u32).map(|j| (binom6[j as usize], [1 + j, 6 + (6 - j)])).collect();
    let r04 = form(factorial(10).recip(), &r04_terms);

    let got02 = leading_form_2var(catalog.get("R02_2var")?)?;
    let got03 = leading_form_2var(catalog.get("R03_2var")?)?;
    let window = default_window(0, 4).expect("window for (0,4)");
    let got04 = leading_form_pipeline_2var(0, 4, window)?;
    let parts = [("R02", got02 == r02, &got02), ("R03", got03 == r03, &got03), ("R04", got04 == r04, &got04)];
    let detail = parts
        .iter()
        .map(|(name, ok, got)| if *ok { format!("{name} exact") } else { format!("{name} recovered {got}") })
        .collect::<Vec<_>>()
        .join("; ");
    Ok((parts.iter().all(|p| p.1), detail))
}

fn c11() -> Result<(bool, String)> {
    let catalog = Catalog::bundled();
    let mut ok = true;
    let mut detail = Vec::new();
    for id in ["R11_4row", "R02_3var"] {
        let (entry, lf) = catalog.leading_form(id)?;
        let report = asym_ratio_check(entry, lf, &probe_points(lf, &[8, 16, 32]), &default_tolerance())?;
        ok &= report.pass;
        let ratios: Vec<String> = report.rows.iter().map(|r| crate::asymptotics::decimal(&r.ratio, 4)).collect();
        detail.push(format!("{id} ratios {}", ratios.join(" -> ")));
    }
    Ok((ok, detail.join("; ")))
}

/// Multiplicity series with a few random partitions and small coefficients.
pub fn random_multiplicities(rng: &mut ChaCha8Rng, d: usize, cap: u32) -> MultiplicitySeries {
    let pool = partitions_up_to(cap, d);
    let n = rng.gen_range(1..=5);
    let coeffs = (0..n).map(|_| {
        let p = pool[rng.gen_range(0..pool.len())].clone();
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        (p, Rational::from_integer(c.into()))
    });
    MultiplicitySeries::from_coeffs(d, cap, coeffs.collect::<Vec<_>>()).expect("parts fit")
}

/// Pieri rule for `S_mu * e_k`: add a vertical strip of `k` boxes.
pub fn pieri_vertical(mu: &Partition, k: usize, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let parts: Vec<u32> = (0..d).map(|i| mu.part(i + 1) + ((mask >> i) & 1)).collect();
        if let Ok(p) = Partition::new(&parts) {
            out.push(p);
        }
    }
    out
}

fn elementary_oracle(m: &MultiplicitySeries, k: usize) -> Result<MultiplicitySeries> {
    let mut coeffs = Vec::new();
    for (mu, c) in m.iter() {
        for lambda in pieri_vertical(mu, k, m.d()) {
            coeffs.push((lambda, c.clone()));
        }
    }
    MultiplicitySeries::from_coeffs(m.d(), m.cap(), coeffs)
}

fn c12() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut checked = 0usize;

    // round-trip verify on the pipeline's series
    let mut series: Vec<(String, TruncatedSeries, usize)> = Vec::new();
    for d in 1..=4usize {
        let cap = 10;
        series.push((format!("polyalg d={d}"), hilbert_polyalg(d, cap), d));
        series.push((format!("M2 d={d}"), hilbert_m2(d, cap), d));
        series.push((format!("f^2 d={d}"), sum_snn(d, cap).pow(2), d));
        for (p, q) in [(1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)] {
            series.push((format!("R{p}{q} d={d}"), hilbert_rpq(p, q, d, cap)?, d));
        }
    }
    series.push(("S_(3,2,1)".into(), TruncatedSeries::new(schur_poly(&Partition::new(&[3, 2, 1])?, 4), 6), 4));
    for (name, f, d) in &series {
        let m = extract(f, *d)?;
        checked += 1;
        if !verify(f, &m) {
            failures.push(format!("verify {name}"));
        }
        let algebra = name.starts_with('R') || name.starts_with("M2") || name.starts_with("poly");
        if algebra && !m.is_nonnegative_integral() {
            failures.push(format!("integrality {name}"));
        }
    }

    // operators against independent oracles
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0c4);
    for round in 0..50 {
        let d = rng.gen_range(1..=4usize);
        let m = random_multiplicities(&mut rng, d, 8);
        let p = hilbert_polyalg(d, 8);
        if young_derive(&m)? != extract(&reconstruct(&m).mul(&p)?, d)? {
            failures.push(format!("young_derive round {round}"));
        }
        let sum_t = SparsePoly::variable_sum(d, Space::T);
        if branch(&to_v(&m))? != to_v(&extract(&reconstruct(&m).mul_poly(&sum_t)?, d)?) {
            failures.push(format!("branch round {round}"));
        }
        let k = rng.gen_range(1..=d);
        if mult_elementary(&m, k)? != elementary_oracle(&m, k)? {
            failures.push(format!("mult_elementary round {round}"));
        }
        if d == 3 && to_v(&mult_elementary(&m, 3)?) != mult_e3_d3(&to_v(&m))? {
            failures.push(format!("mult_e3_d3 round {round}"));
        }
        checked += 3;
    }

    // permutation invariance of T-ideal products
    let (d, cap) = (3, 8);
    let (k1, m2) = (hilbert_polyalg(d, cap), hilbert_m2(d, cap));
    let orders = [
        vec![k1.clone(), m2.clone(), m2.clone(), k1.clone()],
        vec![m2.clone(), k1.clone(), k1.clone(), m2.clone()],
        vec![m2.clone(), m2.clone(), k1.clone(), k1.clone()],
        vec![k1.clone(), k1.clone(), m2.clone(), m2.clone()],
    ];
    let reference = hilbert_rpq(2, 2, d, cap)?;
    for (i, o) in orders.iter().enumerate() {
        checked += 1;
        if hilbert_product(o)? != reference {
            failures.push(format!("product order {i}"));
        }
    }

    // support of R_{1,1}: at most 5 rows, or 6 rows ending in 1; nothing beyond 7 rows
    let m7 = extract(&hilbert_rpq(1, 1, 7, 8)?, 7)?;
    checked += 1;
    for (lambda, c) in m7.iter() {
        let shape_ok = lambda.len() <= 5 || (lambda.len() == 6 && lambda.part(6) == 1);
        if !shape_ok && !c.is_zero() {
            failures.push(format!("R11 support contains {lambda}"));
        }
    }
    let m8 = extract(&hilbert_rpq(1, 1, 8, 8)?, 8)?;
    checked += 1;
    if m8.iter().any(|(lambda, _)| lambda.len() > 7) {
        failures.push("R11 has a multiplicity beyond 7 rows".into());
    }

    let detail = if failures.is_empty() {
        format!("{checked} checks hold")
    } else {
        format!("{} of {checked} checks fail: {}", failures.len(), failures.join(", "))
    };
    Ok((failures.is_empty(), detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pieri_adds_vertical_strips() {
        let mu = Partition::new(&[2, 1]).unwrap();
        let got = pieri_vertical(&mu, 2, 3);
        let expected: Vec<Partition> = [[3, 2, 0], [3, 1, 1], [2, 2, 1]]
            .iter()
            .map(|p| Partition::new(p).unwrap())
            .collect();
        assert_eq!(got.len(), 3);
        assert!(expected.iter().all(|p| got.contains(p)));
    }

    #[test]
    fn criteria_are_numbered_in_order() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.number as usize, i + 1);
        }
        assert!(criterion(13).is_none());
    }

    #[test]
    fn quick_criteria_hold() {
        for n in [1, 2, 7] {
            let o = criterion(n).unwrap().run();
            assert!(o.holds, "{}", o.line());
        }
    }
}
