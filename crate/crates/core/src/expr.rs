//! Construction expressions for certified reals: rational literals, field
//! operations, and square roots, with a small text grammar used by the
//! configuration file format.
//!
//! Grammar: integers, decimal literals, `/`, `+`, `-`, `*`, `sqrt(...)`,
//! parentheses, unary minus. Printing is canonical, so
//! `parse(print(e)) == e` structurally.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Rat(Rat),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Sqrt(Arc<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected {0} at offset {1}")]
    Expected(&'static str, usize),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let frac_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == frac_start {
                        return Err(ParseError::Expected("digits after decimal point", i));
                    }
                    let int_part: BigInt = s[start..frac_start - 1].parse().unwrap();
                    let frac = &s[frac_start..i];
                    let frac_val: BigInt = frac.parse().unwrap();
                    let denom = BigInt::from(10u32).pow(frac.len() as u32);
                    out.push((
                        Tok::Num(Rat::from(int_part) + Rat::new(frac_val, denom)),
                        start,
                    ));
                } else {
                    let v: BigInt = s[start..i].parse().unwrap();
                    out.push((Tok::Num(Rat::from(v)), start));
                }
            }
            's' => {
                if s[i..].starts_with("sqrt") {
                    out.push((Tok::Sqrt, i));
                    i += 4;
                } else {
                    return Err(ParseError::UnexpectedChar(c, i));
                }
            }
            _ => return Err(ParseError::UnexpectedChar(c, i)),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &'static str) -> Result<(), ParseError> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            Some(_) => Err(ParseError::Expected(what, self.offset())),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    lhs = fold(Expr::Add(Arc::new(lhs), Arc::new(rhs)));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    lhs = fold(Expr::Sub(Arc::new(lhs), Arc::new(rhs)));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.atom()?;
                    lhs = fold(Expr::Mul(Arc::new(lhs), Arc::new(rhs)));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.atom()?;
                    lhs = fold(Expr::Div(Arc::new(lhs), Arc::new(rhs)));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some(Tok::Num(q)) => Ok(Expr::Rat(q)),
            Some(Tok::Minus) => Ok(fold(Expr::Neg(Arc::new(self.atom()?)))),
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "closing ')'")?;
                Ok(Expr::Sqrt(Arc::new(inner)))
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "closing ')'")?;
                Ok(inner)
            }
            Some(_) => Err(ParseError::Expected("number, sqrt, or '('", self.offset())),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Collapse purely rational subexpressions so that equal rationals always
/// parse to the same node and reprint identically (e.g. `(-1)/2` and
/// `-1/2` both become the rational -1/2). Division by a literal zero is
/// left intact for the evaluator to reject.
fn fold(e: Expr) -> Expr {
    use num_traits::Zero;
    let both = |a: &Expr, b: &Expr| match (a, b) {
        (Expr::Rat(x), Expr::Rat(y)) => Some((x.clone(), y.clone())),
        _ => None,
    };
    match &e {
        Expr::Add(a, b) => both(a, b).map(|(x, y)| Expr::Rat(x + y)),
        Expr::Sub(a, b) => both(a, b).map(|(x, y)| Expr::Rat(x - y)),
        Expr::Mul(a, b) => both(a, b).map(|(x, y)| Expr::Rat(x * y)),
        Expr::Div(a, b) => both(a, b)
            .filter(|(_, y)| !y.is_zero())
            .map(|(x, y)| Expr::Rat(x / y)),
        Expr::Neg(a) => match a.as_ref() {
            Expr::Rat(x) => Some(Expr::Rat(-x.clone())),
            _ => None,
        },
        _ => None,
    }
    .unwrap_or(e)
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, ParseError> {
        let toks = lex(s)?;
        let mut p = Parser { toks, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(ParseError::Trailing(p.offset()));
        }
        Ok(e)
    }

    pub fn rational(q: Rat) -> Expr {
        Expr::Rat(q)
    }

    /// Outward rational interval at the given resolution. `None` when a
    /// division cannot be carried out at this precision (denominator interval
    /// straddles zero) or a square-root argument is not yet provably
    /// nonnegative.
    pub fn bounds(&self, bits: u32) -> Option<(Rat, Rat)> {
        match self {
            Expr::Rat(q) => Some((q.clone(), q.clone())),
            Expr::Add(a, b) => {
                let (al, ah) = a.bounds(bits)?;
                let (bl, bh) = b.bounds(bits)?;
                Some((al + bl, ah + bh))
            }
            Expr::Sub(a, b) => {
                let (al, ah) = a.bounds(bits)?;
                let (bl, bh) = b.bounds(bits)?;
                Some((al - bh, ah - bl))
            }
            Expr::Neg(a) => {
                let (al, ah) = a.bounds(bits)?;
                Some((-ah, -al))
            }
            Expr::Mul(a, b) => {
                let (al, ah) = a.bounds(bits)?;
                let (bl, bh) = b.bounds(bits)?;
                let cands = [&al * &bl, &al * &bh, &ah * &bl, &ah * &bh];
                let lo = cands.iter().min().unwrap().clone();
                let hi = cands.iter().max().unwrap().clone();
                Some((lo, hi))
            }
            Expr::Div(a, b) => {
                let (al, ah) = a.bounds(bits)?;
                let (bl, bh) = b.bounds(bits)?;
                if !bl.is_positive() && !bh.is_negative() {
                    return None; // denominator not separated from zero
                }
                let cands = [&al / &bl, &al / &bh, &ah / &bl, &ah / &bh];
                let lo = cands.iter().min().unwrap().clone();
                let hi = cands.iter().max().unwrap().clone();
                Some((lo, hi))
            }
            Expr::Sqrt(a) => {
                let (al, ah) = a.bounds(bits)?;
                if ah.is_negative() {
                    return None;
                }
                let al = if al.is_negative() { Rat::zero() } else { al };
                let lo = crate::rat::sqrt_bounds(&al, bits).0;
                let hi = crate::rat::sqrt_bounds(&ah, bits).1;
                Some((lo, hi))
            }
        }
    }

    /// Evaluate into the quadratic-tower normal form, when representable.
    pub fn to_radical(&self) -> Option<crate::radical::Radical> {
        use crate::radical::Radical;
        match self {
            Expr::Rat(q) => Some(Radical::from_rat(q.clone())),
            Expr::Add(a, b) => Some(a.to_radical()? + b.to_radical()?),
            Expr::Sub(a, b) => Some(a.to_radical()? - b.to_radical()?),
            Expr::Neg(a) => Some(-a.to_radical()?),
            Expr::Mul(a, b) => Some(a.to_radical()? * b.to_radical()?),
            Expr::Div(a, b) => {
                let d = b.to_radical()?;
                Some(a.to_radical()? * d.inverse()?)
            }
            Expr::Sqrt(a) => a.to_radical()?.sqrt(),
        }
    }
}

fn fmt_rat(q: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom() == &BigInt::from(1) {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // parenthesize every compound operand: verbose but canonical
        fn atomic(e: &Expr) -> bool {
            matches!(e, Expr::Sqrt(_))
                || matches!(e, Expr::Rat(q) if !q.is_negative() && q.denom() == &BigInt::from(1))
        }
        fn sub(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if atomic(e) {
                write!(f, "{}", e)
            } else {
                write!(f, "({})", e)
            }
        }
        match self {
            Expr::Rat(q) => fmt_rat(q, f),
            Expr::Add(a, b) => {
                sub(a, f)?;
                write!(f, " + ")?;
                sub(b, f)
            }
            Expr::Sub(a, b) => {
                sub(a, f)?;
                write!(f, " - ")?;
                sub(b, f)
            }
            Expr::Mul(a, b) => {
                sub(a, f)?;
                write!(f, "*")?;
                sub(b, f)
            }
            Expr::Div(a, b) => {
                sub(a, f)?;
                write!(f, "/")?;
                sub(b, f)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                sub(a, f)
            }
            Expr::Sqrt(a) => write!(f, "sqrt({})", a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn parse_basics() {
        assert_eq!(Expr::parse("3/4").unwrap(), Expr::parse("(3)/(4)").unwrap());
        assert_eq!(Expr::parse("0.5").unwrap(), Expr::Rat(rat(1, 2)));
        let e = Expr::parse("sqrt(3)/2").unwrap();
        assert_eq!(
            e.to_radical().unwrap(),
            crate::radical::sqrt_int(3) * rat(1, 2)
        );
        assert!(Expr::parse("sqrt(").is_err());
        assert!(Expr::parse("1 + ").is_err());
        assert!(Expr::parse("abc").is_err());
    }

    #[test]
    fn roundtrip_print_parse() {
        for s in [
            "1/2 + sqrt(3)/2",
            "sqrt(1/4) + 1/2",
            "-(3/4)",
            "sqrt(2 + sqrt(3))",
            "(1 - sqrt(5))/2",
        ] {
            let e = Expr::parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(Expr::parse(&printed).unwrap(), e, "roundtrip of {s}");
        }
    }

    #[test]
    fn normal_form_of_disguised_one() {
        let e = Expr::parse("sqrt(1/4) + 1/2").unwrap();
        assert_eq!(e.to_radical().unwrap(), crate::radical::Radical::one());
    }

    #[test]
    fn interval_eval() {
        let e = Expr::parse("sqrt(2)*sqrt(2)").unwrap();
        let (lo, hi) = e.bounds(64).unwrap();
        assert!(lo <= rat(2, 1) && rat(2, 1) <= hi);
        assert!(&hi - &lo < rat(1, 1 << 30));
    }
}
