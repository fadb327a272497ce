use super::{ExponentVector, SparsePoly, Space, TruncatedSeries};
use crate::error::{Error, Result};

/// One factor `(1 - x^monomial)^power` of a denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorFactor {
    pub monomial: ExponentVector,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTerm {
    pub numerator: SparsePoly,
    pub denominator: Vec<DenominatorFactor>,
}

/// A sum of `numerator / prod (1 - m)^k` terms. Expressions are only ever
/// expanded, never simplified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    nvars: usize,
    space: Space,
    terms: Vec<RationalTerm>,
}

impl RationalExpr {
    pub fn new(nvars: usize, space: Space) -> Self {
        RationalExpr { nvars, space, terms: Vec::new() }
    }

    /// A single term.
    pub fn fraction(numerator: SparsePoly, denominator: Vec<DenominatorFactor>) -> Result<Self> {
        let mut e = RationalExpr::new(numerator.nvars(), numerator.space());
        e.push_term(numerator, denominator)?;
        Ok(e)
    }

    pub fn push_term(&mut self, numerator: SparsePoly, denominator: Vec<DenominatorFactor>) -> Result<()> {
        if numerator.nvars() != self.nvars || numerator.space() != self.space {
            return Err(Error::Dimension(format!(
                "numerator in {} {:?}-variables, expression in {} {:?}-variables",
                numerator.nvars(),
                numerator.space(),
                self.nvars,
                self.space
            )));
        }
        for f in &denominator {
            if f.monomial.len() != self.nvars {
                return Err(Error::Dimension(format!("denominator monomial {}", f.monomial)));
            }
            if f.monomial.is_zero() {
                return Err(Error::Divergent);
            }
        }
        self.terms.push(RationalTerm { numerator, denominator });
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    pub fn add(&self, other: &RationalExpr) -> Result<RationalExpr> {
        super::poly::check_compat((self.nvars, self.space), (other.nvars, other.space))?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    /// Symbolic product: distributes over terms, multiplies numerators and
    /// concatenates denominators.
    pub fn mul(&self, other: &RationalExpr) -> Result<RationalExpr> {
        super::poly::check_compat((self.nvars, self.space), (other.nvars, other.space))?;
        let mut out = RationalExpr::new(self.nvars, self.space);
        for a in &self.terms {
            for b in &other.terms {
                let mut den = a.denominator.clone();
                den.extend(b.denominator.iter().cloned());
                out.terms.push(RationalTerm { numerator: a.numerator.mul(&b.numerator)?, denominator: den });
            }
        }
        Ok(out)
    }

    /// Re-embeds into `d` variables. Variables beyond `d` are set to zero:
    /// numerator monomials containing them vanish and denominator factors
    /// containing them become 1.
    pub fn embedded(&self, d: usize) -> RationalExpr {
        let terms = self
            .terms
            .iter()
            .map(|t| RationalTerm {
                numerator: t.numerator.embedded(d),
                denominator: t
                    .denominator
                    .iter()
                    .filter_map(|f| {
                        f.monomial.resized(d).map(|m| DenominatorFactor { monomial: m, power: f.power })
                    })
                    .collect(),
            })
            .filter(|t| !t.numerator.is_zero())
            .collect();
        RationalExpr { nvars: d, space: self.space, terms }
    }

    pub fn expand(&self, d: usize, cap: u32) -> Result<TruncatedSeries> {
        expand_rational(self, d, cap)
    }
}

fn expand_term(term: &RationalTerm, space: Space, cap: u32) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::new(term.numerator.clone(), cap);
    for f in &term.denominator {
        if acc.is_zero() {
            break;
        }
        let g = TruncatedSeries::geometric(&f.monomial, f.power, space, cap)?;
        acc = acc.mul(&g)?;
    }
    Ok(acc)
}

/// Expands `expr` in `d` variables up to t-degree `cap`. Each factor
/// `(1 - m)^-k` becomes `sum_n C(n+k-1, k-1) m^n`.
pub fn expand_rational(expr: &RationalExpr, d: usize, cap: u32) -> Result<TruncatedSeries> {
    if d == 0 {
        return Err(Error::Argument("expansion needs at least one variable".into()));
    }
    let e = expr.embedded(d);
    let parts = super::kernel::map_ordered(e.terms(), |t| expand_term(t, e.space, cap));
    let mut acc = TruncatedSeries::zero(d, e.space, cap);
    for p in parts {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    fn mono(e: &[u32]) -> ExponentVector {
        ExponentVector::from_slice(e)
    }

    #[test]
    fn geometric_series() {
        let e = RationalExpr::fraction(
            SparsePoly::one(1, Space::T),
            vec![DenominatorFactor { monomial: mono(&[1]), power: 1 }],
        )
        .unwrap();
        let s = expand_rational(&e, 1, 3).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.terms().all(|(_, c)| *c == Rational::from_integer(1.into())));
    }

    #[test]
    fn zero_factor_is_rejected() {
        let r = RationalExpr::fraction(
            SparsePoly::one(2, Space::T),
            vec![DenominatorFactor { monomial: mono(&[0, 0]), power: 2 }],
        );
        assert!(matches!(r, Err(Error::Divergent)));
    }

    #[test]
    fn v_variables_beyond_d_are_set_to_zero() {
        // 1 / ((1 - v1 v3)(1 - v2)^2 (1 - v4)) restricted to d = 2 is 1/(1 - v2)^2
        let e = RationalExpr::fraction(
            SparsePoly::one(4, Space::V),
            vec![
                DenominatorFactor { monomial: mono(&[1, 0, 1, 0]), power: 1 },
                DenominatorFactor { monomial: mono(&[0, 1, 0, 0]), power: 2 },
                DenominatorFactor { monomial: mono(&[0, 0, 0, 1]), power: 1 },
            ],
        )
        .unwrap();
        let s = expand_rational(&e, 2, 8).unwrap();
        assert_eq!(s.len(), 5);
        for k in 0..=4u32 {
            assert_eq!(s.coeff(&mono(&[0, k])), Rational::from_integer((k + 1).into()));
        }
    }
}
