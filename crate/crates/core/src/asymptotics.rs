//! Leading forms of multiplicities as polynomials in `n_i = lambda_i - lambda_{i+1}`.
//!
//! In two variables a closed form over `(1 - v_1)^a (1 - v_2)^b` has
//! coefficients that are a polynomial of bidegree `(a - 1, b - 1)` once `n_1`
//! and `n_2` exceed the numerator degrees. That polynomial is recovered by
//! exact tensor-product interpolation and checked on held-out points. With
//! three or more variables only ratio checks against a stated leading form are
//! feasible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::catalog::{coeff_at, ClosedFormEntry, LeadingForm};
use crate::error::{Error, Result};
use crate::hilbert::hilbert_rpq;
use crate::multiplicity::extract;
use crate::partitions::Partition;
use crate::series::{Rational, SparsePoly, Space};

/// Polynomial in `n_1, ..., n_k` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl NPoly {
    pub fn zero(nvars: usize) -> Self {
        NPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, n: &[u32]) -> Rational {
        let n: Vec<BigInt> = n.iter().map(|&x| BigInt::from(x)).collect();
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(&n).fold(BigInt::one(), |m, (&k, x)| m * x.pow(k));
            acc + c * Rational::from_integer(mono)
        })
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The component of highest total degree.
    pub fn top_homogeneous(&self) -> NPoly {
        let Some(top) = self.total_degree() else {
            return self.clone();
        };
        NPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == top)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// `(content, primitive)` with integer, coprime primitive coefficients and
    /// a positive leading coefficient (in the display order).
    pub fn content_split(&self) -> (Rational, NPoly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
        let mut content = Rational::new(num, den);
        if self.display_order().first().is_some_and(|(_, c)| c.is_negative()) {
            content = -content;
        }
        let primitive = NPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &content)).collect(),
        };
        (content, primitive)
    }

    /// Terms by decreasing total degree, then decreasing exponents.
    fn display_order(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], c: &BigInt, first: bool) -> fmt::Result {
        let abs = c.abs();
        match (first, c.is_negative()) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("n{}", i + 1) } else { format!("n{}^{}", i + 1, k) })
            .collect();
        if vars.is_empty() {
            write!(f, "{abs}")
        } else if abs.is_one() {
            write!(f, "{}", vars.join("*"))
        } else {
            write!(f, "{abs}*{}", vars.join("*"))
        }
    }
}

/// Printed as `content*(primitive)`, e.g. `1/720*(5*n1^3*n2^4 + 6*n1^2*n2^5 + 2*n1*n2^6)`.
impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (content, primitive) = self.content_split();
        let wrap = !content.is_one();
        if wrap {
            write!(f, "{content}*(")?;
        }
        for (k, (e, c)) in primitive.display_order().into_iter().enumerate() {
            NPoly::write_monomial(f, e, &c.to_integer(), k == 0)?;
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Coefficients `c_0..c_{k-1}` of the polynomial through `(x_i, y_i)`, via
/// Newton divided differences.
pub fn interpolate_1d(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    assert_eq!(xs.len(), ys.len());
    let k = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); k];
        for j in 0..k {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < k {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Grid `[n1_start, n1_start + deg1] x [n2_start, n2_start + deg2]`, enough
/// to determine a polynomial of bidegree `(deg1, deg2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub n1_start: u32,
    pub n2_start: u32,
    pub deg1: u32,
    pub deg2: u32,
}

impl Window {
    /// Points outside the grid used to test the fit.
    pub fn held_out(&self) -> Vec<(u32, u32)> {
        let (e1, e2) = (self.n1_start + self.deg1, self.n2_start + self.deg2);
        vec![(e1 + 1, e2 + 1), (e1 + 3, self.n2_start), (self.n1_start, e2 + 2)]
    }

    /// Largest `|lambda| = n1 + 2 n2` touched by the grid or held-out points.
    pub fn required_cap(&self) -> u32 {
        let (e1, e2) = (self.n1_start + self.deg1, self.n2_start + self.deg2);
        self.held_out()
            .into_iter()
            .chain(std::iter::once((e1, e2)))
            .map(|(a, b)| a + 2 * b)
            .max()
            .unwrap_or(0)
    }
}

/// Result of a two-variable fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub window: Window,
    pub polynomial: NPoly,
    pub leading: NPoly,
}

fn fit_grid<F>(window: Window, mut value: F) -> Result<Fit>
where
    F: FnMut(u32, u32) -> Result<Rational>,
{
    let xs2: Vec<Rational> = (0..=window.deg2).map(|j| Rational::from_integer((window.n2_start + j).into())).collect();
    let xs1: Vec<Rational> = (0..=window.deg1).map(|i| Rational::from_integer((window.n1_start + i).into())).collect();
    // rows[i][k]: coefficient of n2^k at n1 = n1_start + i
    let mut rows = Vec::new();
    for i in 0..=window.deg1 {
        let ys = (0..=window.deg2)
            .map(|j| value(window.n1_start + i, window.n2_start + j))
            .collect::<Result<Vec<_>>>()?;
        rows.push(interpolate_1d(&xs2, &ys));
    }
    let mut poly = NPoly::zero(2);
    for k in 0..=window.deg2 as usize {
        let ys: Vec<Rational> = rows.iter().map(|r| r[k].clone()).collect();
        for (i, c) in interpolate_1d(&xs1, &ys).into_iter().enumerate() {
            poly.add_term(vec![i as u32, k as u32], c);
        }
    }
    for (a, b) in window.held_out() {
        let expected = value(a, b)?;
        let predicted = poly.eval(&[a, b]);
        if expected != predicted {
            return Err(Error::WindowTooSmall(format!(
                "fit on n1 in [{}, {}], n2 in [{}, {}] predicts {predicted} at ({a}, {b}) but the value is {expected}; \
                 move the window further out or raise the bidegree",
                window.n1_start,
                window.n1_start + window.deg1,
                window.n2_start,
                window.n2_start + window.deg2
            )));
        }
    }
    let leading = poly.top_homogeneous();
    Ok(Fit { window, polynomial: poly, leading })
}

/// Puts a two-variable entry over `(1 - v_1)^a (1 - v_2)^b` and returns the
/// combined numerator with `(a, b)`.
pub fn common_denominator_2var(entry: &ClosedFormEntry) -> Result<(SparsePoly, u32, u32)> {
    let unsupported = |why: &str| Error::UnsupportedEntry(entry.id.clone(), why.into());
    if entry.nvars != 2 {
        return Err(unsupported("needs exactly two variables"));
    }
    if !entry.has_closed_form() {
        return Err(unsupported("no closed form, leading form only"));
    }
    let mut powers = Vec::new();
    for t in entry.expr.terms() {
        let (mut a, mut b) = (0, 0);
        for f in &t.denominator {
            match f.monomial.as_slice() {
                [1, 0] => a += f.power,
                [0, 1] => b += f.power,
                _ => return Err(unsupported("denominator is not of the form (1-v1)^a (1-v2)^b")),
            }
        }
        powers.push((a, b));
    }
    let a = powers.iter().map(|p| p.0).max().unwrap_or(0);
    let b = powers.iter().map(|p| p.1).max().unwrap_or(0);
    let one = SparsePoly::one(2, Space::V);
    let one_minus = |i| one.sub(&SparsePoly::variable(2, Space::V, i)).expect("same ring");
    let mut num = SparsePoly::zero(2, Space::V);
    for (t, (ta, tb)) in entry.expr.terms().iter().zip(&powers) {
        let lift = one_minus(0).pow(a - ta).mul(&one_minus(1).pow(b - tb))?;
        num = num.add(&t.numerator.mul(&lift)?)?;
    }
    Ok((num, a, b))
}

/// Exact fit of the multiplicities of a two-variable catalog entry.
pub fn fit_2var(entry: &ClosedFormEntry) -> Result<Fit> {
    let (num, a, b) = common_denominator_2var(entry)?;
    if a == 0 || b == 0 {
        return Err(Error::UnsupportedEntry(entry.id.clone(), "needs poles in both variables".into()));
    }
    let window = Window { n1_start: num.degree_in(0) + 1, n2_start: num.degree_in(1) + 1, deg1: a - 1, deg2: b - 1 };
    fit_grid(window, |n1, n2| coeff_at(entry, &[n1, n2]))
}

/// Top homogeneous component of the multiplicity polynomial of a
/// two-variable catalog entry.
pub fn leading_form_2var(entry: &ClosedFormEntry) -> Result<NPoly> {
    Ok(fit_2var(entry)?.leading)
}

/// Default interpolation windows for `R_{0,q}` in two variables.
pub fn default_window(p: u32, q: u32) -> Option<Window> {
    match (p, q) {
        (0, 2) => Some(Window { n1_start: 8, n2_start: 8, deg1: 3, deg2: 6 }),
        (0, 3) => Some(Window { n1_start: 12, n2_start: 14, deg1: 5, deg2: 11 }),
        (0, 4) => Some(Window { n1_start: 20, n2_start: 20, deg1: 7, deg2: 16 }),
        _ => None,
    }
}

/// Fit from pipeline data: `m_lambda` of `R_{p,q}` in two variables at
/// `lambda = (n1 + n2, n2)`.
pub fn fit_pipeline_2var(p: u32, q: u32, window: Window) -> Result<Fit> {
    let cap = window.required_cap();
    let m = extract(&hilbert_rpq(p, q, 2, cap)?, 2)?;
    fit_grid(window, |n1, n2| {
        Ok(m.get(&Partition::new(&[n1 + n2, n2]).expect("decreasing")))
    })
}

pub fn leading_form_pipeline_2var(p: u32, q: u32, window: Window) -> Result<NPoly> {
    Ok(fit_pipeline_2var(p, q, window)?.leading)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operand {
    Var(usize),
    Const(u32),
}

/// A conjunction of comparisons such as `n4>=1,n5=0` or `n3>=n1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    text: String,
    clauses: Vec<(Operand, Cmp, Operand)>,
}

impl Constraint {
    pub fn parse(text: &str) -> Result<Constraint> {
        let bad = |why: &str| Error::Argument(format!("constraint `{text}`: {why}"));
        let operand = |s: &str| -> Result<Operand> {
            let s = s.trim();
            if let Some(i) = s.strip_prefix('n') {
                let i: usize = i.parse().map_err(|_| bad("bad variable"))?;
                if i == 0 {
                    return Err(bad("variables start at n1"));
                }
                Ok(Operand::Var(i - 1))
            } else {
                s.parse().map(Operand::Const).map_err(|_| bad("bad operand"))
            }
        };
        let mut clauses = Vec::new();
        for clause in text.split(',').filter(|c| !c.trim().is_empty()) {
            let (op, sym) = [(Cmp::Ge, ">="), (Cmp::Le, "<="), (Cmp::Gt, ">"), (Cmp::Lt, "<"), (Cmp::Eq, "=")]
                .into_iter()
                .find(|(_, s)| clause.contains(s))
                .ok_or_else(|| bad("missing comparison"))?;
            let (l, r) = clause.split_once(sym).expect("found above");
            clauses.push((operand(l)?, op, operand(r)?));
        }
        Ok(Constraint { text: text.into(), clauses })
    }

    pub fn holds(&self, n: &[u32]) -> bool {
        let val = |o: Operand| match o {
            Operand::Var(i) => n.get(i).copied(),
            Operand::Const(c) => Some(c),
        };
        self.clauses.iter().all(|&(l, op, r)| match (val(l), val(r)) {
            (Some(a), Some(b)) => match op {
                Cmp::Ge => a >= b,
                Cmp::Le => a <= b,
                Cmp::Gt => a > b,
                Cmp::Lt => a < b,
                Cmp::Eq => a == b,
            },
            _ => false,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Sample points `s * scale + offset` along the leading form's probe
/// direction (all ones when the form has no probe).
pub fn probe_points(lf: &LeadingForm, steps: &[u32]) -> Vec<Vec<u32>> {
    steps
        .iter()
        .map(|&s| match &lf.probe {
            Some(p) => p.scale.iter().zip(&p.offset).map(|(a, b)| s * a + b).collect(),
            None => vec![s; lf.nvars],
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub point: Vec<u32>,
    pub exact: Rational,
    pub predicted: Rational,
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub id: String,
    pub form_id: String,
    pub rows: Vec<RatioRow>,
    pub tolerance: Rational,
    pub pass: bool,
}

/// Default tolerance on `|ratio - 1|` at the last sample point.
pub fn default_tolerance() -> Rational {
    Rational::new(1.into(), 4.into())
}

/// Exact ratios `m(n) / lf(n)` at the sample points. Passes when `|ratio - 1|`
/// never increases along the samples and ends within `tolerance`.
pub fn asym_ratio_check(
    entry: &ClosedFormEntry,
    lf: &LeadingForm,
    points: &[Vec<u32>],
    tolerance: &Rational,
) -> Result<RatioReport> {
    let constraint = lf.constraint.as_deref().map(Constraint::parse).transpose()?;
    let form = lf.form();
    let mut rows = Vec::new();
    for point in points {
        if point.len() != lf.nvars {
            return Err(Error::Dimension(format!("point {point:?} for a form in {} variables", lf.nvars)));
        }
        if let Some(c) = &constraint {
            if !c.holds(point) {
                return Err(Error::ConstraintViolation {
                    point: format!("{point:?}"),
                    constraint: c.as_str().into(),
                });
            }
        }
        let exact = coeff_at(entry, &padded(point, entry.nvars))?;
        let predicted = form.eval(point);
        if predicted.is_zero() {
            return Err(Error::Argument(format!("leading form vanishes at {point:?}")));
        }
        let ratio = &exact / &predicted;
        rows.push(RatioRow { point: point.clone(), exact, predicted, ratio });
    }
    let gaps: Vec<Rational> = rows.iter().map(|r| (&r.ratio - Rational::one()).abs()).collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let pass = !gaps.is_empty() && monotone && gaps.last().is_some_and(|g| g <= tolerance);
    Ok(RatioReport { id: entry.id.clone(), form_id: lf.id.clone(), rows, tolerance: tolerance.clone(), pass })
}

fn padded(point: &[u32], len: usize) -> Vec<u32> {
    let mut v = point.to_vec();
    v.resize(len.max(point.len()), 0);
    v
}

/// Fixed-point decimal rendering of an exact rational, rounded half away
/// from zero.
pub fn decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let (int, frac) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places as usize)
    }
}
