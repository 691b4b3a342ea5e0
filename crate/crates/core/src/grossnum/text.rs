//! Text form of grossone numbers.
//!
//! ```text
//! number := ["-"] term (("+" | "-") term)*
//! term   := coeff ["*" "go" ["^" exp]] ["*" "ln(go)"]
//!         | "go" ["^" exp] ["*" "ln(go)"]
//!         | "ln(go)"
//! exp    := ["-"] int ["/" int] | "(" ["-"] int ["/" int] ")"
//! coeff  := int ["/" int] | decimal
//! ```
//!
//! `①` is accepted as a synonym for `go`. Integer and fraction
//! coefficients are exact; decimals become floating coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::number::{GrossNumber, Term};
use super::GrossError;

impl fmt::Display for GrossNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_term(f, t)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    let c = t.coeff.abs();
    let bare = t.gexp.is_zero() && t.logpow == 0;
    let mut first = true;
    if bare || !c.is_one() {
        write!(f, "{c}")?;
        first = false;
    }
    if !t.gexp.is_zero() {
        if !first {
            write!(f, "*")?;
        }
        write!(f, "go")?;
        if !t.gexp.is_one() {
            if t.gexp.is_integer() {
                write!(f, "^{}", t.gexp.numer())?;
            } else {
                write!(f, "^({}/{})", t.gexp.numer(), t.gexp.denom())?;
            }
        }
        first = false;
    }
    if t.logpow == 1 {
        if !first {
            write!(f, "*")?;
        }
        write!(f, "ln(go)")?;
    }
    Ok(())
}

impl FromStr for GrossNumber {
    type Err = GrossError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).number()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, msg: &str) -> Result<T, GrossError> {
        Err(GrossError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn eat_go(&mut self) -> bool {
        self.eat("go") || self.eat("①")
    }

    fn eat_ln(&mut self) -> Result<bool, GrossError> {
        if !self.eat("ln") {
            return Ok(false);
        }
        if !(self.eat("(") && self.eat_go() && self.eat(")")) {
            return self.err("expected ln(go)");
        }
        Ok(true)
    }

    fn number(&mut self) -> Result<GrossNumber, GrossError> {
        let mut terms = Vec::new();
        let mut neg = self.eat("-");
        loop {
            let mut t = self.term()?;
            if neg {
                t.coeff = t.coeff.neg();
            }
            terms.push(t);
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            neg = if self.eat("+") {
                false
            } else if self.eat("-") {
                true
            } else {
                return self.err("expected '+' or '-'");
            };
        }
        Ok(GrossNumber::from_terms(terms))
    }

    fn term(&mut self) -> Result<Term, GrossError> {
        self.skip_ws();
        let mut coeff = None;
        if self
            .rest()
            .starts_with(|c: char| c.is_ascii_digit() || c == '.')
        {
            coeff = Some(self.coeff()?);
        }
        let mut gexp = Rational64::zero();
        let mut logpow = 0;
        let mut need_factor = coeff.is_none();
        loop {
            if coeff.is_some() || !need_factor {
                let save = self.pos;
                if !self.eat("*") {
                    break;
                }
                if !self.peek_factor() {
                    self.pos = save;
                    return self.err("expected 'go' or 'ln(go)' after '*'");
                }
            }
            if self.eat_go() {
                if !gexp.is_zero() {
                    return self.err("repeated 'go' factor");
                }
                gexp = if self.eat("^") {
                    self.exponent()?
                } else {
                    Rational64::one()
                };
                if gexp.is_zero() {
                    return self.err("zero exponent");
                }
            } else if self.eat_ln()? {
                if logpow == 1 {
                    return self.err("repeated ln(go) factor");
                }
                logpow = 1;
            } else if need_factor {
                return self.err("expected a term");
            } else {
                break;
            }
            need_factor = false;
            if coeff.is_none() {
                coeff = Some(Coeff::one());
            }
        }
        Ok(Term::new(coeff.unwrap_or_else(Coeff::one), gexp, logpow))
    }

    fn peek_factor(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        r.starts_with("go") || r.starts_with('①') || r.starts_with("ln")
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        self.pos += n;
        &self.src[start..self.pos]
    }

    fn coeff(&mut self) -> Result<Coeff, GrossError> {
        let start = self.pos;
        let int = self.digits();
        let r = self.rest();
        let is_decimal = r.starts_with('.') || r.starts_with('e') || r.starts_with('E');
        if is_decimal {
            if self.rest().starts_with('.') {
                self.pos += 1;
                self.digits();
            }
            let r = self.rest();
            if r.starts_with('e') || r.starts_with('E') {
                self.pos += 1;
                if self.rest().starts_with(['+', '-']) {
                    self.pos += 1;
                }
                if self.digits().is_empty() {
                    return self.err("malformed exponent");
                }
            }
            return match self.src[start..self.pos].parse::<f64>() {
                Ok(x) => Ok(Coeff::Real(x)),
                Err(_) => self.err("malformed decimal"),
            };
        }
        let n: BigInt = int.parse().map_err(|_| GrossError::Parse {
            pos: start,
            msg: "malformed integer".into(),
        })?;
        if self.rest().starts_with('/') {
            self.pos += 1;
            let d = self.digits();
            let d: BigInt = match d.parse() {
                Ok(d) => d,
                Err(_) => return self.err("malformed denominator"),
            };
            if d.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Coeff::Exact(BigRational::new(n, d)));
        }
        Ok(Coeff::Exact(BigRational::from_integer(n)))
    }

    fn exponent(&mut self) -> Result<Rational64, GrossError> {
        let paren = self.eat("(");
        let neg = self.eat("-");
        self.skip_ws();
        let n: i64 = match self.digits().parse() {
            Ok(n) => n,
            Err(_) => return self.err("malformed exponent"),
        };
        let mut d = 1i64;
        if self.rest().starts_with('/') {
            self.pos += 1;
            d = match self.digits().parse() {
                Ok(d) if d != 0 => d,
                _ => return self.err("malformed exponent denominator"),
            };
        }
        if paren && !self.eat(")") {
            return self.err("expected ')'");
        }
        let e = Rational64::new(n, d);
        Ok(if neg { -e } else { e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> GrossNumber {
        s.parse().unwrap()
    }

    #[test]
    fn prints_polynomial() {
        let x = parse("go - 2").pow(2).unwrap();
        assert_eq!(x.to_string(), "go^2 - 4*go + 4");
    }

    #[test]
    fn parses_grammar_examples() {
        let a = parse("1 - 29.6088*go^-2");
        assert_eq!(a.terms().len(), 2);
        assert_eq!(a.terms()[1].gexp, Rational64::from_integer(-2));
        assert_eq!(a.terms()[1].coeff, Coeff::Real(-29.6088));
        let b = parse("2*ln(go)");
        assert_eq!(b, GrossNumber::ln_grossone().scale(&Coeff::int(2)));
        assert_eq!(parse("①"), GrossNumber::grossone());
        assert_eq!(parse("go^(1/2)").terms()[0].gexp, Rational64::new(1, 2));
        assert_eq!(parse("3/2*go*ln(go)").terms()[0].logpow, 1);
        assert_eq!(parse("0"), GrossNumber::zero());
    }

    #[test]
    fn round_trip_is_lossless() {
        for s in [
            "go^2 - 4*go + 4",
            "-go^(1/2) + 3/7*go^-1*ln(go)",
            "2*ln(go) + 1.2345678901234567",
            "-1/3*go^(-5/2) - 2.5e-20",
        ] {
            let x = parse(s);
            assert_eq!(parse(&x.to_string()), x, "{s}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "go +", "2**go", "go^", "ln(x)", "go go", "1/0"] {
            assert!(s.parse::<GrossNumber>().is_err(), "{s}");
        }
    }
}
