use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::coeff::Coeff;
use super::number::GrossNumber;
use super::series::{
    gross_cos, gross_inverse, gross_ln, gross_sin, gross_sqrt, ln1p, TruncationOrder,
};
use super::GrossError;

/// Finite polygon, or an infinigon of first or second order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InfinigonOrder {
    Finite,
    FirstOrder,
    SecondOrder,
}

impl InfinigonOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            InfinigonOrder::Finite => "finite",
            InfinigonOrder::FirstOrder => "first-order",
            InfinigonOrder::SecondOrder => "second-order",
        }
    }
}

/// Side count or valence: a finite integer ≥ 3 or a positive infinite
/// log-free number.
fn check_count(x: &GrossNumber, what: &str) -> Result<(), GrossError> {
    if x.is_infinite() {
        if !x.is_log_free() || x.signum().is_lt() {
            return Err(GrossError::Domain(format!(
                "{what} must be a positive infinite integer, got {x}"
            )));
        }
        return Ok(());
    }
    match x.as_integer() {
        Some(n) if n >= BigInt::from(3) => Ok(()),
        _ => Err(GrossError::Domain(format!(
            "{what} must be an integer >= 3, got {x}"
        ))),
    }
}

fn require_infinite(lambda: &GrossNumber) -> Result<(), GrossError> {
    check_count(lambda, "side count")?;
    if !lambda.is_infinite() {
        return Err(GrossError::Domain(format!(
            "side count {lambda} is finite; use the finite polygon metrics"
        )));
    }
    Ok(())
}

pub fn classify_order(
    lambda: &GrossNumber,
    q_or_mu: &GrossNumber,
) -> Result<InfinigonOrder, GrossError> {
    check_count(lambda, "side count")?;
    check_count(q_or_mu, "valence")?;
    match (lambda.is_infinite(), q_or_mu.is_infinite()) {
        (false, false) => Ok(InfinigonOrder::Finite),
        (true, false) => Ok(InfinigonOrder::FirstOrder),
        (true, true) => Ok(InfinigonOrder::SecondOrder),
        (false, true) => Err(GrossError::Domain(format!(
            "infinite valence {q_or_mu} with finite side count {lambda} is not defined"
        ))),
    }
}

/// `(sin(π/x), cos(π/x))`: plain constants for finite `x`, Taylor series
/// of the infinitesimal angle otherwise.
fn trig_pi_over(
    x: &GrossNumber,
    ord: TruncationOrder,
) -> Result<(GrossNumber, GrossNumber), GrossError> {
    if x.is_infinite() {
        let t = gross_inverse(x, ord)?.scale(&Coeff::Real(PI));
        return Ok((gross_sin(&t, ord)?, gross_cos(&t, ord)?));
    }
    let n = x
        .as_integer()
        .and_then(|n| n.to_f64())
        .ok_or_else(|| GrossError::Domain(format!("expected an integer, got {x}")))?;
    let angle = PI / n;
    Ok((
        GrossNumber::real(angle.sin()),
        GrossNumber::real(angle.cos()),
    ))
}

struct Parts {
    a: GrossNumber,
    b: GrossNumber,
    b_minus_a2: GrossNumber,
}

/// `a = cos(π/q + π/λ)`, `b = cos²(π/q) − sin²(π/λ)` and
/// `b − a² = 2 sin(π/q) sin(π/λ) a`, the last in product form so the
/// leading infinitesimal is not lost to cancellation.
fn parts(
    q_or_mu: &GrossNumber,
    lambda: &GrossNumber,
    ord: TruncationOrder,
) -> Result<Parts, GrossError> {
    let m = Some(ord.min_gexp);
    let (sq, cq) = trig_pi_over(q_or_mu, ord)?;
    let (sl, cl) = trig_pi_over(lambda, ord)?;
    let a = cq.mul_truncated(&cl, m)?.sub(&sq.mul_truncated(&sl, m)?);
    let b = cq.mul_truncated(&cq, m)?.sub(&sl.mul_truncated(&sl, m)?);
    let b_minus_a2 = sq
        .mul_truncated(&sl, m)?
        .mul_truncated(&a, m)?
        .scale(&Coeff::int(2));
    Ok(Parts { a, b, b_minus_a2 })
}

/// `1 − d² = ((b − a²)/(a² + b))²` as a truncated grossone expansion.
pub fn eval_one_minus_d2(
    q_or_mu: &GrossNumber,
    lambda: &GrossNumber,
    ord: TruncationOrder,
) -> Result<GrossNumber, GrossError> {
    require_infinite(lambda)?;
    check_count(q_or_mu, "valence")?;
    let m = Some(ord.min_gexp);
    let p = parts(q_or_mu, lambda, ord)?;
    let a2_plus_b = p.a.mul_truncated(&p.a, m)?.add(&p.b);
    let ratio = p
        .b_minus_a2
        .mul_truncated(&gross_inverse(&a2_plus_b, ord)?, m)?;
    ratio.mul_truncated(&ratio, m)
}

/// Diameter `δ = 2 ln(1 + d) − ln(1 − d²)` with the default truncation.
pub fn eval_delta_asymptotic(
    q_or_mu: &GrossNumber,
    lambda: &GrossNumber,
) -> Result<GrossNumber, GrossError> {
    eval_delta_asymptotic_to(q_or_mu, lambda, TruncationOrder::default())
}

pub fn eval_delta_asymptotic_to(
    q_or_mu: &GrossNumber,
    lambda: &GrossNumber,
    ord: TruncationOrder,
) -> Result<GrossNumber, GrossError> {
    require_infinite(lambda)?;
    check_count(q_or_mu, "valence")?;
    // ln(1 − d²) needs 1 − d² to |ord| orders past its own leading term.
    let mut inner = ord.deeper(Rational64::from_integer(4));
    let mut eps = eval_one_minus_d2(q_or_mu, lambda, inner)?;
    let lead = eps.leading_gexp().ok_or(GrossError::DivisionByZero)?;
    if ord.min_gexp + lead < inner.min_gexp {
        inner = TruncationOrder {
            min_gexp: ord.min_gexp + lead,
        };
        eps = eval_one_minus_d2(q_or_mu, lambda, inner)?;
    }
    let d = gross_sqrt(&GrossNumber::one().sub(&eps), ord)?;
    let half_dm1 = d.sub(&GrossNumber::one()).scale(&Coeff::ratio(1, 2));
    let ln_1pd = GrossNumber::real(LN_2).add(&ln1p(&half_dm1, ord)?);
    let ln_eps = gross_ln(&eps, ord)?;
    Ok(ln_1pd
        .scale(&Coeff::int(2))
        .sub(&ln_eps)
        .truncate(ord.min_gexp))
}

/// Euclidean circumradius `ρ = a / √b` of an infinigon.
pub fn rho(
    lambda: &GrossNumber,
    q_or_mu: &GrossNumber,
    ord: TruncationOrder,
) -> Result<GrossNumber, GrossError> {
    require_infinite(lambda)?;
    check_count(q_or_mu, "valence")?;
    let p = parts(q_or_mu, lambda, ord)?;
    let inv_sqrt_b = gross_inverse(&gross_sqrt(&p.b, ord)?, ord)?;
    p.a.mul_truncated(&inv_sqrt_b, Some(ord.min_gexp))
}

/// Tile count of a depth-`ν` sector tiling.
#[derive(Debug, Clone, PartialEq)]
pub enum TileCount {
    Expanded(GrossNumber),
    /// `base^exponent` kept symbolic for infinite depth.
    Power {
        base: GrossNumber,
        exponent: GrossNumber,
    },
}

impl fmt::Display for TileCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TileCount::Expanded(x) => write!(f, "{x}"),
            TileCount::Power { base, exponent } => write!(f, "({base})^({exponent})"),
        }
    }
}

/// Tiles added per generation: `(λ−2)(q−3) − 1` for even `q`,
/// `(λ−2)(q−4)` for odd `q`.
pub fn tile_base(lambda: &GrossNumber, q_or_mu: &GrossNumber) -> Result<GrossNumber, GrossError> {
    check_count(lambda, "side count")?;
    check_count(q_or_mu, "valence")?;
    if q_or_mu.as_integer().is_some_and(|q| q < BigInt::from(4)) {
        return Err(GrossError::Domain(
            "the sector count needs valence >= 4".into(),
        ));
    }
    let lm2 = lambda.sub(&GrossNumber::int(2));
    if q_or_mu.parity()? {
        Ok(lm2
            .mul(&q_or_mu.sub(&GrossNumber::int(3)))?
            .sub(&GrossNumber::one()))
    } else {
        lm2.mul(&q_or_mu.sub(&GrossNumber::int(4)))
    }
}

pub fn tile_count(
    lambda: &GrossNumber,
    q_or_mu: &GrossNumber,
    nu: &GrossNumber,
) -> Result<TileCount, GrossError> {
    let base = tile_base(lambda, q_or_mu)?;
    if nu.is_infinite() {
        return Ok(TileCount::Power {
            base,
            exponent: nu.clone(),
        });
    }
    let n = nu.as_integer().and_then(|n| n.to_u32()).ok_or_else(|| {
        GrossError::Domain(format!("depth must be a non-negative integer, got {nu}"))
    })?;
    Ok(TileCount::Expanded(base.pow(n)?))
}
