//! Catalog of closed-form multiplicity series and asymptotic leading forms.
//!
//! The formulas live in `data/catalog.json` as data. Each entry is a sum of
//! `numerator / prod (1 - v^m)^k` terms in v-variables; entries may also carry
//! leading forms, homogeneous polynomials in the difference coordinates
//! `n_i = lambda_i - lambda_{i+1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::asymptotics::NPoly;
use crate::error::{Error, Result};
use crate::hilbert::hilbert_rpq;
use crate::multiplicity::{extract, to_v};
use crate::partitions::Partition;
use crate::schur::sum_snn;
use crate::series::{
    binomial, DenominatorFactor, ExponentVector, Rational, RationalExpr, SparsePoly, Space, TruncatedSeries,
};

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.json");

const FORMAT: &str = "cochar-catalog";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    format: String,
    version: u32,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    p: Option<u32>,
    q: Option<u32>,
    #[serde(default)]
    fpower: Option<u32>,
    nvars: usize,
    #[serde(default)]
    dmax: Option<usize>,
    #[serde(default)]
    source: String,
    terms: Vec<RawTerm>,
    #[serde(default)]
    leading: Option<OneOrMany<RawLeading>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(default)]
    label: Option<String>,
    num: Vec<(String, Vec<u32>)>,
    den: Vec<RawFactor>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    mono: Vec<u32>,
    pow: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawLeading {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    nvars: Option<usize>,
    coeff_num: String,
    coeff_den: String,
    monomials: Vec<(String, Vec<u32>)>,
    error_order: u32,
    #[serde(default)]
    constraint: Option<String>,
    #[serde(default)]
    probe: Option<Probe>,
}

/// Direction used to generate ratio-check sample points: `s * scale + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub scale: Vec<u32>,
    pub offset: Vec<u32>,
}

/// What a closed form is the multiplicity series of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    /// The block triangular algebra `R_{p,q}`.
    Rpq { p: u32, q: u32 },
    /// The symmetric function `(sum S_(n,n))^k`.
    FPower(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingForm {
    pub id: String,
    pub nvars: usize,
    pub coeff: Rational,
    pub monomials: Vec<(BigInt, Vec<u32>)>,
    pub error_order: u32,
    pub constraint: Option<String>,
    pub probe: Option<Probe>,
}

impl LeadingForm {
    /// `coeff * sum c_a n^a` as a polynomial.
    pub fn form(&self) -> NPoly {
        let mut p = NPoly::zero(self.nvars);
        for (c, e) in &self.monomials {
            p.add_term(e.clone(), Rational::from_integer(c.clone()) * &self.coeff);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormEntry {
    pub id: String,
    pub algebra: Algebra,
    pub nvars: usize,
    /// Largest `d` the formula is stated for; `None` means any `d`.
    pub dmax: Option<usize>,
    pub source: String,
    /// One label per term, e.g. `A7`; a label may span several terms.
    pub labels: Vec<String>,
    pub expr: RationalExpr,
    pub leading: Vec<LeadingForm>,
}

impl ClosedFormEntry {
    pub fn has_closed_form(&self) -> bool {
        !self.expr.terms().is_empty()
    }

    /// Number of distinct term labels.
    pub fn label_count(&self) -> usize {
        self.labels.iter().collect::<BTreeSet<_>>().len()
    }

    fn check_scope(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::Argument("d must be positive".into()));
        }
        match self.dmax {
            Some(dmax) if d > dmax => Err(Error::OutOfScope { id: self.id.clone(), d, dmax }),
            _ => Ok(()),
        }
    }

    /// The closed form expanded in `d` v-variables up to t-degree `cap`,
    /// with `v_j = 0` for `j > d`.
    pub fn expand(&self, d: usize, cap: u32) -> Result<TruncatedSeries> {
        self.check_scope(d)?;
        if !self.has_closed_form() {
            return Err(Error::UnsupportedEntry(self.id.clone(), "no closed form, leading form only".into()));
        }
        self.expr.expand(d, cap)
    }

    /// The same series computed from scratch: `M'` of the Hilbert series of
    /// `R_{p,q}`, or of a power of `sum S_(n,n)`.
    pub fn pipeline(&self, d: usize, cap: u32) -> Result<TruncatedSeries> {
        self.check_scope(d)?;
        let f = match self.algebra {
            Algebra::Rpq { p, q } => hilbert_rpq(p, q, d, cap)?,
            Algebra::FPower(k) => sum_snn(d, cap).pow(k),
        };
        Ok(to_v(&extract(&f, d)?))
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<ClosedFormEntry>,
    checksum: String,
}

/// Hex SHA-256 of the catalog bytes.
pub fn checksum_of(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn parse_int(s: &str, location: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::CatalogParse {
            location: location.into(),
            message: format!("`{s}` is not a decimal integer"),
        });
    }
    s.parse().map_err(|_| Error::CatalogParse {
        location: location.into(),
        message: format!("`{s}` is not a decimal integer"),
    })
}

fn parse_err(location: String, message: impl Into<String>) -> Error {
    Error::CatalogParse { location, message: message.into() }
}

fn convert_entry(raw: RawEntry) -> Result<ClosedFormEntry> {
    let loc = |rest: &str| format!("entry `{}`{rest}", raw.id);
    let algebra = match (raw.p, raw.q, raw.fpower) {
        (Some(p), Some(q), None) if p + q > 0 => Algebra::Rpq { p, q },
        (None, None, Some(k)) if k > 0 => Algebra::FPower(k),
        _ => return Err(parse_err(loc(""), "needs either p and q, or fpower")),
    };
    if raw.nvars == 0 {
        return Err(parse_err(loc(""), "nvars must be positive"));
    }
    let mut expr = RationalExpr::new(raw.nvars, Space::V);
    let mut labels = Vec::new();
    for (k, term) in raw.terms.into_iter().enumerate() {
        let tloc = loc(&format!(", term {}", k + 1));
        let mut num = Vec::new();
        for (c, e) in &term.num {
            if e.len() != raw.nvars {
                return Err(parse_err(tloc, format!("numerator exponent {e:?} has wrong length")));
            }
            num.push((ExponentVector::from_slice(e), Rational::from_integer(parse_int(c, &tloc)?)));
        }
        let mut den = Vec::new();
        for f in &term.den {
            if f.mono.len() != raw.nvars || f.pow == 0 {
                return Err(parse_err(tloc, format!("bad denominator factor {:?}^{}", f.mono, f.pow)));
            }
            den.push(DenominatorFactor { monomial: ExponentVector::from_slice(&f.mono), power: f.pow });
        }
        let numerator = SparsePoly::from_terms(raw.nvars, Space::V, num)?;
        expr.push_term(numerator, den).map_err(|e| parse_err(tloc.clone(), e.to_string()))?;
        labels.push(term.label.unwrap_or_else(|| format!("T{}", k + 1)));
    }
    let raw_leading = match raw.leading {
        None => Vec::new(),
        Some(OneOrMany::One(l)) => vec![l],
        Some(OneOrMany::Many(v)) => v,
    };
    let mut leading = Vec::new();
    for l in raw_leading {
        let id = l.id.unwrap_or_else(|| raw.id.clone());
        let lloc = loc(&format!(", leading form `{id}`"));
        let nvars = l.nvars.unwrap_or(raw.nvars);
        let den = parse_int(&l.coeff_den, &lloc)?;
        if den.is_zero() {
            return Err(parse_err(lloc, "zero coeffDen"));
        }
        let coeff = Rational::new(parse_int(&l.coeff_num, &lloc)?, den);
        let mut monomials = Vec::new();
        for (c, e) in &l.monomials {
            if e.len() != nvars {
                return Err(parse_err(lloc, format!("monomial {e:?} has wrong length")));
            }
            if e.iter().sum::<u32>() != l.error_order + 1 {
                return Err(parse_err(lloc, format!("monomial {e:?} is not of degree errorOrder + 1")));
            }
            monomials.push((parse_int(c, &lloc)?, e.clone()));
        }
        if let Some(c) = &l.constraint {
            crate::asymptotics::Constraint::parse(c).map_err(|e| parse_err(lloc.clone(), e.to_string()))?;
        }
        if let Some(p) = &l.probe {
            if p.scale.len() != nvars || p.offset.len() != nvars {
                return Err(parse_err(lloc, "probe has wrong length"));
            }
        }
        leading.push(LeadingForm {
            id,
            nvars,
            coeff,
            monomials,
            error_order: l.error_order,
            constraint: l.constraint,
            probe: l.probe,
        });
    }
    Ok(ClosedFormEntry {
        id: raw.id,
        algebra,
        nvars: raw.nvars,
        dmax: raw.dmax,
        source: raw.source,
        labels,
        expr,
        leading,
    })
}

/// Entries that must be present, with their required number of distinct
/// term labels (`0` for leading-form-only entries).
const REQUIRED_ENTRIES: [(&str, usize); 8] = [
    ("f", 1),
    ("f2", 1),
    ("f3_V4", 1),
    ("R11_Vd", 11),
    ("R02_2var", 1),
    ("R02_3var", 23),
    ("R03_2var", 38),
    ("R04_2var", 0),
];

const REQUIRED_LEADING: [&str; 7] = ["R02_2var", "R03_2var", "R04_2var", "R11_4row", "R11_5row", "R11_6row", "R02_3var"];

impl Catalog {
    /// Parses a catalog without the completeness check.
    pub fn parse(text: &str) -> Result<Catalog> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| Error::CatalogParse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        if raw.format != FORMAT || raw.version != 1 {
            return Err(parse_err("header".into(), format!("unsupported format {} v{}", raw.format, raw.version)));
        }
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for e in raw.entries {
            if !seen.insert(e.id.clone()) {
                return Err(parse_err(format!("entry `{}`", e.id), "duplicate id"));
            }
            entries.push(convert_entry(e)?);
        }
        Ok(Catalog { entries, checksum: checksum_of(text) })
    }

    /// Parses a catalog and checks that every mandatory entry is present.
    pub fn from_json(text: &str) -> Result<Catalog> {
        let c = Catalog::parse(text)?;
        c.check_complete()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        Catalog::from_json(&std::fs::read_to_string(path)?)
    }

    /// The bundled catalog, parsed once.
    pub fn bundled() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid"))
    }

    pub fn check_complete(&self) -> Result<()> {
        for (id, labels) in REQUIRED_ENTRIES {
            let e = self.get(id).map_err(|_| Error::CatalogIncomplete(format!("missing entry `{id}`")))?;
            if e.label_count() != labels {
                return Err(Error::CatalogIncomplete(format!(
                    "entry `{id}` has {} term labels, expected {labels}",
                    e.label_count()
                )));
            }
        }
        for id in REQUIRED_LEADING {
            if self.leading_form(id).is_err() {
                return Err(Error::CatalogIncomplete(format!("missing leading form `{id}`")));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[ClosedFormEntry] {
        &self.entries
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn get(&self, id: &str) -> Result<&ClosedFormEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEntry(id.into()))
    }

    /// Looks a leading form up by its own id, returning its entry too.
    pub fn leading_form(&self, id: &str) -> Result<(&ClosedFormEntry, &LeadingForm)> {
        self.entries
            .iter()
            .flat_map(|e| e.leading.iter().map(move |l| (e, l)))
            .find(|(_, l)| l.id == id)
            .ok_or_else(|| Error::UnknownEntry(id.into()))
    }
}

/// Reads a catalog file and runs the completeness check.
pub fn load_catalog(path: &Path) -> Result<Catalog> {
    Catalog::load(path)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub partition: Partition,
    /// Coefficient from the closed form.
    pub expected: Rational,
    /// Coefficient from the pipeline.
    pub got: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub id: String,
    pub d: usize,
    pub cap: u32,
    pub equal: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// First coefficient (smallest partition in canonical order) where two
/// v-space series differ.
pub fn first_mismatch(expected: &TruncatedSeries, got: &TruncatedSeries) -> Option<Mismatch> {
    let cap = expected.cap().min(got.cap());
    let keys: BTreeSet<&ExponentVector> = expected.terms().chain(got.terms()).map(|(e, _)| e).collect();
    let mut diffs: Vec<Mismatch> = keys
        .into_iter()
        .filter(|e| e.t_degree(Space::V) <= cap)
        .filter_map(|e| {
            let (a, b) = (expected.coeff(e), got.coeff(e));
            (a != b).then(|| Mismatch { partition: Partition::from_v_exponent(e), expected: a, got: b })
        })
        .collect();
    diffs.sort_by(|x, y| x.partition.cmp(&y.partition));
    diffs.into_iter().next()
}

/// Compares a catalog closed form with the pipeline up to t-degree `cap`.
pub fn compare_entry(catalog: &Catalog, id: &str, d: usize, cap: u32) -> Result<CompareReport> {
    let entry = catalog.get(id)?;
    let expected = entry.expand(d, cap)?;
    let got = entry.pipeline(d, cap)?;
    let first_mismatch = first_mismatch(&expected, &got);
    Ok(CompareReport { id: id.into(), d, cap, equal: first_mismatch.is_none(), first_mismatch })
}

/// Coefficient of `v^nvec` in the entry's closed form, without expanding it.
///
/// Within a term, factors with the same monomial are merged; a factor
/// `(1 - v_i)^-k` contributes `C(r + k - 1, k - 1)` to whatever exponent `r`
/// of `v_i` is left over, and all other factors are enumerated.
pub fn coeff_at(entry: &ClosedFormEntry, nvec: &[u32]) -> Result<Rational> {
    if nvec.len() != entry.nvars {
        return Err(Error::Dimension(format!(
            "entry `{}` has {} variables, point has {}",
            entry.id,
            entry.nvars,
            nvec.len()
        )));
    }
    if !entry.has_closed_form() {
        return Err(Error::UnsupportedEntry(entry.id.clone(), "no closed form, leading form only".into()));
    }
    let mut total = Rational::zero();
    for term in entry.expr.terms() {
        total += term_coeff(&term.numerator, &term.denominator, nvec);
    }
    Ok(total)
}

fn term_coeff(numerator: &SparsePoly, den: &[DenominatorFactor], n: &[u32]) -> Rational {
    let nv = n.len();
    let mut merged: BTreeMap<ExponentVector, u32> = BTreeMap::new();
    for f in den {
        *merged.entry(f.monomial.clone()).or_insert(0) += f.power;
    }
    let mut simple = vec![0u32; nv];
    let mut others = Vec::new();
    for (m, k) in merged {
        match m.as_slice().iter().position(|&x| x > 0) {
            Some(i) if m.total() == 1 => simple[i] = k,
            _ => others.push((m, k)),
        }
    }
    let mut total = Rational::zero();
    for (a, c) in numerator.terms() {
        let Some(rest) = ExponentVector::from_slice(n).checked_sub(a) else {
            continue;
        };
        let mut rest: Vec<u32> = rest.as_slice().to_vec();
        let count = enumerate(&others, &simple, &mut rest);
        if !count.is_zero() {
            total += c * Rational::from_integer(count);
        }
    }
    total
}

fn enumerate(others: &[(ExponentVector, u32)], simple: &[u32], rest: &mut [u32]) -> BigInt {
    let Some(((m, k), tail)) = others.split_first() else {
        let mut prod = BigInt::one();
        for (r, &k) in rest.iter().zip(simple) {
            if k == 0 {
                if *r != 0 {
                    return BigInt::zero();
                }
            } else {
                prod *= binomial(*r as u64 + k as u64 - 1, k as u64 - 1);
            }
        }
        return prod;
    };
    let saved = rest.to_vec();
    let mut acc = BigInt::zero();
    let mut j = 0u64;
    loop {
        let weight = binomial(j + *k as u64 - 1, *k as u64 - 1);
        let inner = enumerate(tail, simple, rest);
        if !inner.is_zero() {
            acc += weight * inner;
        }
        let fits = rest.iter().zip(m.as_slice()).all(|(r, e)| r >= e);
        if !fits {
            break;
        }
        for (r, e) in rest.iter_mut().zip(m.as_slice()) {
            *r -= e;
        }
        j += 1;
    }
    rest.copy_from_slice(&saved);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn bundled_catalog_is_complete() {
        let c = Catalog::bundled();
        assert_eq!(c.get("R11_Vd").unwrap().label_count(), 11);
        assert_eq!(c.get("R02_3var").unwrap().algebra, Algebra::Rpq { p: 0, q: 2 });
        assert!(matches!(c.get("nope"), Err(Error::UnknownEntry(_))));
        assert_eq!(c.checksum().len(), 64);
    }

    #[test]
    fn missing_entry_is_reported() {
        let text = r#"{"format":"cochar-catalog","version":1,"entries":[
            {"id":"f","p":null,"q":null,"fpower":1,"nvars":2,"terms":[
              {"num":[["1",[0,0]]],"den":[{"mono":[0,1],"pow":1}]}]}]}"#;
        assert!(Catalog::parse(text).is_ok());
        assert!(matches!(Catalog::from_json(text), Err(Error::CatalogIncomplete(_))));
    }

    #[test]
    fn malformed_files_are_located() {
        match Catalog::parse("{\n \"format\": 3 }") {
            Err(Error::CatalogParse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("unexpected {other:?}"),
        }
        let float = r#"{"format":"cochar-catalog","version":1,"entries":[
            {"id":"g","p":1,"q":0,"nvars":1,"terms":[{"num":[["1.5",[0]]],"den":[]}]}]}"#;
        match Catalog::parse(float) {
            Err(Error::CatalogParse { location, .. }) => assert!(location.contains("`g`")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coeff_at_small_cases() {
        let c = Catalog::bundled();
        assert_eq!(coeff_at(c.get("f").unwrap(), &[0, 7]).unwrap(), int(1));
        assert_eq!(coeff_at(c.get("f").unwrap(), &[1, 7]).unwrap(), int(0));
        for k in 0..6 {
            assert_eq!(coeff_at(c.get("f2").unwrap(), &[0, k, 0, 0]).unwrap(), int(k as i64 + 1));
        }
    }

    #[test]
    fn coeff_at_matches_expansion() {
        let c = Catalog::bundled();
        for id in ["f2", "f3_V4", "R02_3var"] {
            let e = c.get(id).unwrap();
            let s = e.expand(e.nvars, 8).unwrap();
            for (v, coeff) in s.terms() {
                assert_eq!(&coeff_at(e, v.as_slice()).unwrap(), coeff, "{id} at {v}");
            }
        }
    }

    #[test]
    fn scope_is_enforced() {
        let c = Catalog::bundled();
        assert!(matches!(compare_entry(c, "R02_2var", 3, 4), Err(Error::OutOfScope { .. })));
        assert!(matches!(compare_entry(c, "R04_2var", 2, 4), Err(Error::UnsupportedEntry(..))));
    }

    #[test]
    fn small_comparisons() {
        let c = Catalog::bundled();
        assert!(compare_entry(c, "f", 4, 8).unwrap().equal);
        assert!(compare_entry(c, "R02_2var", 2, 10).unwrap().equal);
    }
}
