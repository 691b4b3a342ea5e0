use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::coeff::Coeff;
use super::number::{GrossNumber, Term};
use super::GrossError;

/// Lowest ①-exponent kept by series expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationOrder {
    pub min_gexp: Rational64,
}

impl TruncationOrder {
    pub fn new(min_gexp: Rational64) -> Result<Self, GrossError> {
        if min_gexp > Rational64::zero() {
            return Err(GrossError::Domain(format!(
                "truncation exponent must be <= 0, got {min_gexp}"
            )));
        }
        Ok(TruncationOrder { min_gexp })
    }

    pub fn at(min_gexp: i64) -> Self {
        Self::new(Rational64::from_integer(min_gexp)).expect("non-positive exponent")
    }

    /// The same order shifted down by `by` (for intermediate precision).
    pub fn deeper(&self, by: Rational64) -> Self {
        TruncationOrder {
            min_gexp: self.min_gexp - by.abs(),
        }
    }
}

impl Default for TruncationOrder {
    fn default() -> Self {
        Self::at(-4)
    }
}

/// Σ coeffs[k]·t^k for infinitesimal `t`, stopping once `t^k` falls below
/// the truncation order. `coeffs(k)` returns `None` to skip a power.
fn power_series(
    t: &GrossNumber,
    ord: TruncationOrder,
    mut coeffs: impl FnMut(u32) -> Option<Coeff>,
) -> Result<GrossNumber, GrossError> {
    let mut acc = GrossNumber::zero();
    if let Some(c) = coeffs(0) {
        acc = GrossNumber::constant(c);
    }
    if t.is_zero() {
        return Ok(acc);
    }
    let lead = t.leading_gexp().expect("nonzero");
    if lead >= Rational64::zero() {
        return Err(GrossError::NotInfinitesimal(t.to_string()));
    }
    let mut pow = GrossNumber::one();
    let mut k = 0u32;
    loop {
        k += 1;
        if lead * Rational64::from_integer(k as i64) < ord.min_gexp {
            break;
        }
        pow = pow.mul_truncated(t, Some(ord.min_gexp))?;
        if let Some(c) = coeffs(k) {
            acc = acc.add(&pow.scale(&c));
        }
    }
    Ok(acc.truncate(ord.min_gexp))
}

fn inv_factorial(k: u32) -> Coeff {
    let mut f = Coeff::one();
    for i in 2..=k as i64 {
        f = f.mul(&Coeff::ratio(1, i));
    }
    f
}

pub fn gross_sin(t: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    power_series(t, ord, |k| {
        (k % 2 == 1).then(|| {
            let c = inv_factorial(k);
            if k % 4 == 3 {
                c.neg()
            } else {
                c
            }
        })
    })
}

pub fn gross_cos(t: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    power_series(t, ord, |k| {
        (k % 2 == 0).then(|| {
            let c = inv_factorial(k);
            if k % 4 == 2 {
                c.neg()
            } else {
                c
            }
        })
    })
}

/// ln(1 + t) for infinitesimal `t`.
pub fn ln1p(t: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    power_series(t, ord, |k| {
        (k > 0).then(|| {
            let c = Coeff::ratio(1, k as i64);
            if k % 2 == 0 {
                c.neg()
            } else {
                c
            }
        })
    })
}

/// Generalised binomial series (1 + t)^a for infinitesimal `t`.
fn binomial(
    t: &GrossNumber,
    a: Rational64,
    ord: TruncationOrder,
) -> Result<GrossNumber, GrossError> {
    let mut coeffs = vec![Coeff::one()];
    power_series(t, ord, move |k| {
        while coeffs.len() <= k as usize {
            let j = coeffs.len() as i64;
            let prev = coeffs.last().unwrap().clone();
            let factor = (a - Rational64::from_integer(j - 1)) / Rational64::from_integer(j);
            coeffs.push(prev.mul(&Coeff::ratio(*factor.numer(), *factor.denom())));
        }
        Some(coeffs[k as usize].clone())
    })
}

/// Splits `x` into its leading monomial and the infinitesimal ratio
/// `x / lead − 1`, computed deep enough that the final product is exact
/// down to `ord`.
fn split_leading(
    x: &GrossNumber,
    ord: TruncationOrder,
    result_gexp: Rational64,
) -> Result<(Term, GrossNumber, TruncationOrder), GrossError> {
    let lead = x.leading().ok_or(GrossError::DivisionByZero)?.clone();
    if lead.logpow != 0 {
        return Err(GrossError::Domain(format!(
            "series of {x} needs a log-free leading term"
        )));
    }
    let inv = lead.coeff.recip().ok_or(GrossError::DivisionByZero)?;
    let rel_ord = TruncationOrder {
        min_gexp: (ord.min_gexp - result_gexp).min(Rational64::zero()),
    };
    let rest = GrossNumber::from_terms(x.terms()[1..].to_vec());
    let ratio = GrossNumber::from_terms(
        rest.terms()
            .iter()
            .map(|t| Term::new(t.coeff.mul(&inv), t.gexp - lead.gexp, t.logpow))
            .collect(),
    );
    Ok((lead, ratio.truncate(rel_ord.min_gexp), rel_ord))
}

fn shift(x: &GrossNumber, c: &Coeff, gexp: Rational64, ord: TruncationOrder) -> GrossNumber {
    GrossNumber::from_terms(
        x.terms()
            .iter()
            .map(|t| Term::new(t.coeff.mul(c), t.gexp + gexp, t.logpow))
            .collect(),
    )
    .truncate(ord.min_gexp)
}

/// Truncated multiplicative inverse (monomial times geometric series).
pub fn gross_inverse(x: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    let Some(lead) = x.leading() else {
        return Err(GrossError::DivisionByZero);
    };
    let out_gexp = -lead.gexp;
    let (lead, ratio, rel) = split_leading(x, ord, out_gexp)?;
    let series = binomial(&ratio, -Rational64::one(), rel)?;
    let c = lead.coeff.recip().ok_or(GrossError::DivisionByZero)?;
    Ok(shift(&series, &c, out_gexp, ord))
}

/// Truncated square root of a number with positive leading coefficient.
pub fn gross_sqrt(x: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    if x.is_zero() {
        return Ok(GrossNumber::zero());
    }
    let half = Rational64::new(1, 2);
    if x.signum() != Ordering::Greater {
        return Err(GrossError::NotPositive(x.to_string()));
    }
    let out_gexp = x.leading_gexp().unwrap() * half;
    let (lead, ratio, rel) = split_leading(x, ord, out_gexp)?;
    let series = binomial(&ratio, half, rel)?;
    let c = lead.coeff.sqrt().expect("positive");
    Ok(shift(&series, &c, out_gexp, ord))
}

/// Natural logarithm: ln c + e·ln① + ln(1 + r).
pub fn gross_ln(x: &GrossNumber, ord: TruncationOrder) -> Result<GrossNumber, GrossError> {
    if x.signum() != Ordering::Greater {
        return Err(GrossError::NotPositive(x.to_string()));
    }
    let (lead, ratio, _) = split_leading(x, ord, Rational64::zero())?;
    let mut out = GrossNumber::constant(lead.coeff.ln().expect("positive"));
    if !lead.gexp.is_zero() {
        let e = Coeff::ratio(*lead.gexp.numer(), *lead.gexp.denom());
        out = out.add(&GrossNumber::monomial(e, Rational64::zero(), 1));
    }
    Ok(out.add(&ln1p(&ratio, ord)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pi_over_go() -> GrossNumber {
        GrossNumber::monomial(Coeff::Real(PI), Rational64::from_integer(-1), 0)
    }

    fn coeff_at(x: &GrossNumber, gexp: i64) -> f64 {
        x.terms()
            .iter()
            .find(|t| t.gexp == Rational64::from_integer(gexp) && t.logpow == 0)
            .map_or(0.0, |t| t.coeff.to_f64())
    }

    #[test]
    fn cos_of_pi_over_grossone() {
        let c = gross_cos(&pi_over_go(), TruncationOrder::at(-4)).unwrap();
        assert_eq!(c.terms().len(), 3);
        assert_eq!(coeff_at(&c, 0), 1.0);
        assert!((coeff_at(&c, -2) + 4.934_802_2).abs() < 1e-7);
        assert!((coeff_at(&c, -4) - 4.058_712_1).abs() < 1e-7);
    }

    #[test]
    fn sin_of_pi_over_grossone() {
        let s = gross_sin(&pi_over_go(), TruncationOrder::at(-3)).unwrap();
        assert_eq!(s.terms().len(), 2);
        assert!((coeff_at(&s, -1) - std::f64::consts::PI).abs() < 1e-7);
        assert!((coeff_at(&s, -3) + 5.167_712_8).abs() < 1e-7);
    }

    #[test]
    fn sin_of_finite_is_rejected() {
        let r = gross_sin(&GrossNumber::one(), TruncationOrder::default());
        assert!(matches!(r, Err(GrossError::NotInfinitesimal(_))));
        assert!(gross_cos(&GrossNumber::zero(), TruncationOrder::default())
            .unwrap()
            .eq(&GrossNumber::one()));
    }

    #[test]
    fn inverse_of_polynomial() {
        let x: GrossNumber = "go + 1".parse().unwrap();
        let inv = gross_inverse(&x, TruncationOrder::at(-4)).unwrap();
        assert_eq!(inv.to_string(), "go^-1 - go^-2 + go^-3 - go^-4");
        let prod = x.mul(&inv).unwrap().truncate(Rational64::from_integer(-3));
        assert_eq!(prod, GrossNumber::one());
    }

    #[test]
    fn sqrt_is_exact_on_squares() {
        let x: GrossNumber = "go^2 - 4*go + 4".parse().unwrap();
        let r = gross_sqrt(&x, TruncationOrder::at(-6)).unwrap();
        assert_eq!(r.to_string(), "go - 2");
        assert!(gross_sqrt(&"-go".parse().unwrap(), TruncationOrder::default()).is_err());
    }

    #[test]
    fn ln_of_monomial_and_series() {
        let x: GrossNumber = "4*go^2".parse().unwrap();
        let l = gross_ln(&x, TruncationOrder::default()).unwrap();
        assert_eq!(l.terms()[0].logpow, 1);
        assert_eq!(l.terms()[0].coeff, Coeff::int(2));
        assert!((l.constant_term().to_f64() - 4f64.ln()).abs() < 1e-15);
        let y: GrossNumber = "1 + go^-1".parse().unwrap();
        let ly = gross_ln(&y, TruncationOrder::at(-3)).unwrap();
        assert_eq!(ly.to_string(), "go^-1 - 1/2*go^-2 + 1/3*go^-3");
    }

    #[test]
    fn series_agree_numerically() {
        for k in 3..=6 {
            let g = 10f64.powi(k);
            let ord = TruncationOrder::at(-4);
            let s = gross_sin(&pi_over_go(), ord).unwrap().evaluate(g);
            let c = gross_cos(&pi_over_go(), ord).unwrap().evaluate(g);
            assert!((s - (PI / g).sin()).abs() <= 1e-12 * (PI / g).sin());
            assert!((c - (PI / g).cos()).abs() <= 1e-15);
        }
    }
}
