use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use super::coeff::Coeff;
use super::GrossError;

/// One term `coeff · ①^gexp · (ln ①)^logpow`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Coeff,
    pub gexp: Rational64,
    pub logpow: u8,
}

impl Term {
    pub fn new(coeff: Coeff, gexp: Rational64, logpow: u8) -> Self {
        Term {
            coeff,
            gexp,
            logpow,
        }
    }

    fn key(&self) -> (Rational64, u8) {
        (self.gexp, self.logpow)
    }
}

/// A finite sum of grossone terms, kept sorted by `(gexp, logpow)`
/// strictly descending with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrossNumber {
    terms: Vec<Term>,
}

impl GrossNumber {
    pub fn zero() -> Self {
        GrossNumber { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Coeff::int(n))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Coeff::Real(x))
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, Rational64::zero(), 0)
    }

    /// The grossone ① itself.
    pub fn grossone() -> Self {
        Self::monomial(Coeff::one(), Rational64::one(), 0)
    }

    /// `ln ①`.
    pub fn ln_grossone() -> Self {
        Self::monomial(Coeff::one(), Rational64::zero(), 1)
    }

    /// `①^e` for an integer exponent.
    pub fn grossone_pow(e: i64) -> Self {
        Self::monomial(Coeff::one(), Rational64::from_integer(e), 0)
    }

    pub fn monomial(c: Coeff, gexp: Rational64, logpow: u8) -> Self {
        Self::from_terms(vec![Term::new(c, gexp, logpow)])
    }

    /// Builds a normalized number from arbitrary terms.
    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        terms.sort_by_key(|t| std::cmp::Reverse(t.key()));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.key() == t.key() => last.coeff = last.coeff.add(&t.coeff),
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        GrossNumber { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.iter().all(|t| t.logpow == 0)
    }

    /// Larger than every finite number in magnitude.
    pub fn is_infinite(&self) -> bool {
        self.leading()
            .is_some_and(|t| t.gexp > Rational64::zero() || (t.gexp.is_zero() && t.logpow > 0))
    }

    /// Nonzero and smaller than every finite positive number in magnitude.
    pub fn is_infinitesimal(&self) -> bool {
        self.leading().is_some_and(|t| t.gexp < Rational64::zero())
    }

    /// Finite and not infinitesimal, or zero.
    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// The plain integer value when this is an exact finite integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [t] if t.gexp.is_zero() && t.logpow == 0 => t.coeff.as_integer(),
            _ => None,
        }
    }

    /// The constant (gexp 0, log-free) coefficient.
    pub fn constant_term(&self) -> Coeff {
        self.terms
            .iter()
            .find(|t| t.gexp.is_zero() && t.logpow == 0)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Coeff::zero)
    }

    /// Sign of the leading term.
    pub fn signum(&self) -> Ordering {
        self.leading().map_or(Ordering::Equal, |t| t.coeff.signum())
    }

    pub fn neg(&self) -> Self {
        GrossNumber {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.coeff.neg(), t.gexp, t.logpow))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| Term::new(t.coeff.mul(c), t.gexp, t.logpow))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GrossError> {
        self.mul_truncated(other, None)
    }

    /// Product with terms below `min_gexp` dropped as they are formed.
    pub fn mul_truncated(
        &self,
        other: &Self,
        min_gexp: Option<Rational64>,
    ) -> Result<Self, GrossError> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let gexp = a.gexp + b.gexp;
                if min_gexp.is_some_and(|m| gexp < m) {
                    continue;
                }
                let logpow = a.logpow + b.logpow;
                if logpow > 1 {
                    return Err(GrossError::LogOverflow);
                }
                terms.push(Term::new(a.coeff.mul(&b.coeff), gexp, logpow));
            }
        }
        Ok(Self::from_terms(terms))
    }

    pub fn pow(&self, n: u32) -> Result<Self, GrossError> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Drops every term with exponent below `min_gexp`.
    pub fn truncate(&self, min_gexp: Rational64) -> Self {
        GrossNumber {
            terms: self
                .terms
                .iter()
                .filter(|t| t.gexp >= min_gexp)
                .cloned()
                .collect(),
        }
    }

    /// Leading-term order of `self − other`.
    pub fn gross_cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }

    /// Numeric value with ① replaced by `g` (and ln① by `ln g`).
    pub fn evaluate(&self, g: f64) -> f64 {
        let lg = g.ln();
        self.terms
            .iter()
            .map(|t| {
                let e = t.gexp.to_f64().unwrap_or(f64::NAN);
                let mut v = t.coeff.to_f64() * g.powf(e);
                if t.logpow == 1 {
                    v *= lg;
                }
                v
            })
            .sum()
    }

    /// Parity under the convention that ① is divisible by every finite
    /// integer: only the constant term decides. `Ok(true)` means even.
    pub fn parity(&self) -> Result<bool, GrossError> {
        for t in &self.terms {
            if t.gexp.is_zero() && t.logpow == 0 {
                continue;
            }
            let integral_power =
                t.logpow == 0 && t.gexp.is_integer() && t.gexp > Rational64::zero();
            if !integral_power || t.coeff.as_integer().is_none() {
                return Err(GrossError::ParityUndecidable(self.to_string()));
            }
        }
        match self.constant_term().as_integer() {
            Some(c) => Ok(c.is_even()),
            None => Err(GrossError::ParityUndecidable(self.to_string())),
        }
    }

    /// Exponent of the leading term.
    pub fn leading_gexp(&self) -> Option<Rational64> {
        self.leading().map(|t| t.gexp)
    }

    pub fn abs_leading_coeff(&self) -> Option<Coeff> {
        self.leading().map(|t| t.coeff.abs())
    }
}

impl From<i64> for GrossNumber {
    fn from(n: i64) -> Self {
        GrossNumber::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> GrossNumber {
        GrossNumber::grossone()
    }

    fn c(n: i64) -> GrossNumber {
        GrossNumber::int(n)
    }

    #[test]
    fn add_examples() {
        let a = g().add(&c(1));
        let b = g().sub(&c(1));
        assert_eq!(a.add(&b), g().scale(&Coeff::int(2)));
        assert_eq!(GrossNumber::zero().add(&a), a);
        let x = GrossNumber::grossone_pow(2).scale(&Coeff::int(3)).sub(&g());
        assert_eq!(
            x.add(&g()),
            GrossNumber::grossone_pow(2).scale(&Coeff::int(3))
        );
    }

    #[test]
    fn mul_examples() {
        let p = g().add(&c(1)).mul(&g().sub(&c(1))).unwrap();
        assert_eq!(p, GrossNumber::grossone_pow(2).sub(&c(1)));
        let sq = g().sub(&c(2)).pow(2).unwrap();
        let want = GrossNumber::grossone_pow(2)
            .sub(&g().scale(&Coeff::int(4)))
            .add(&c(4));
        assert_eq!(sq, want);
        let l2 = GrossNumber::ln_grossone().scale(&Coeff::int(2));
        let l3 = GrossNumber::ln_grossone().scale(&Coeff::int(3));
        assert!(matches!(l2.mul(&l3), Err(GrossError::LogOverflow)));
    }

    #[test]
    fn cmp_examples() {
        let big = GrossNumber::real(1e100);
        assert_eq!(g().sub(&c(5)).gross_cmp(&big), Ordering::Greater);
        assert_eq!(
            GrossNumber::grossone_pow(-1).gross_cmp(&GrossNumber::zero()),
            Ordering::Greater
        );
        let l = GrossNumber::ln_grossone().scale(&Coeff::int(2));
        let half = GrossNumber::monomial(Coeff::one(), Rational64::new(1, 2), 0);
        assert_eq!(l.gross_cmp(&half), Ordering::Less);
        assert_eq!(l.gross_cmp(&big), Ordering::Greater);
    }

    #[test]
    fn inverse_monomial_cancels() {
        let p = g().mul(&GrossNumber::grossone_pow(-1)).unwrap();
        assert_eq!(p, GrossNumber::one());
    }

    #[test]
    fn parity_convention() {
        assert!(g().parity().unwrap());
        assert!(!g().add(&c(3)).parity().unwrap());
        assert!(g().scale(&Coeff::int(2)).sub(&c(4)).parity().unwrap());
        let half = GrossNumber::monomial(Coeff::one(), Rational64::new(1, 2), 0);
        assert!(half.parity().is_err());
    }

    #[test]
    fn evaluate_substitutes() {
        let x = g().sub(&c(2)).pow(2).unwrap();
        assert_eq!(x.evaluate(10.0), 64.0);
        let l = GrossNumber::ln_grossone();
        assert!((l.evaluate(std::f64::consts::E) - 1.0).abs() < 1e-15);
    }
}
