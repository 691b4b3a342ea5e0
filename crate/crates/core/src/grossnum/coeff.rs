use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative size under which a floating sum is treated as an exact
/// cancellation.
const CANCEL_EPS: f64 = 1e-14;

/// A term coefficient: exact rational when every input was rational,
/// a double once a transcendental constant (π, ln 2, …) enters.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Exact(BigRational),
    Real(f64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Coeff::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Coeff::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Coeff::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Real(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Exact(r) if r.is_one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coeff::Real(x) => *x,
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Coeff::Exact(r) => r.cmp(&BigRational::zero()),
            Coeff::Real(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Coeff {
        match self {
            Coeff::Exact(r) => Coeff::Exact(r.abs()),
            Coeff::Real(x) => Coeff::Real(x.abs()),
        }
    }

    /// The integer value, if exact and integral.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Coeff::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a + b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let s = a + b;
                if s.abs() <= CANCEL_EPS * a.abs().max(b.abs()) {
                    Coeff::Real(0.0)
                } else {
                    Coeff::Real(s)
                }
            }
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(a) => Coeff::Exact(-a),
            Coeff::Real(x) => Coeff::Real(-x),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Real(self.to_f64() * other.to_f64()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Exact(a) => Coeff::Exact(a.recip()),
            Coeff::Real(x) => Coeff::Real(1.0 / x),
        })
    }

    /// Square root of a positive coefficient, exact for rational squares.
    pub fn sqrt(&self) -> Option<Coeff> {
        if self.signum() != Ordering::Greater {
            return None;
        }
        if let Coeff::Exact(r) = self {
            let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
            if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                return Some(Coeff::Exact(BigRational::new(n, d)));
            }
        }
        Some(Coeff::Real(self.to_f64().sqrt()))
    }

    /// Natural logarithm of a positive coefficient (exact zero for one).
    pub fn ln(&self) -> Option<Coeff> {
        if self.signum() != Ordering::Greater {
            return None;
        }
        if self.is_one() {
            return Some(Coeff::zero());
        }
        Some(Coeff::Real(self.to_f64().ln()))
    }
}

impl From<f64> for Coeff {
    fn from(x: f64) -> Self {
        Coeff::Real(x)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::int(n)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::Exact(r)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Coeff::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            // Debug formatting is the shortest round-trip form and always
            // carries a '.' or an exponent, which keeps Real distinct from Exact.
            Coeff::Real(x) => write!(f, "{x:?}"),
        }
    }
}
