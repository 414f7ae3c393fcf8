//! Text syntax for scalars and potentials.
//!
//! ```text
//! scalar    := sum of products of numbers, `L`, parentheses, with `^n`
//! term      := [scalar "*"] arrow ("*" arrow)*
//! potential := ["-"] term (("+" | "-") term)*
//! arrow     := identifier other than `L`, or any text in backticks
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::ids::ArrowId;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Quoted(String),
    Op(char),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                j = k + 1;
                it.next();
            }
            out.push((i, Tok::Num(s[i..j].parse().unwrap())));
        } else if is_ident_start(c) {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !is_ident_char(d) {
                    break;
                }
                j = k + d.len_utf8();
                it.next();
            }
            out.push((i, Tok::Ident(s[i..j].to_string())));
        } else if c == '`' {
            it.next();
            let start = i + 1;
            let mut end = None;
            for (k, d) in it.by_ref() {
                if d == '`' {
                    end = Some(k);
                    break;
                }
            }
            match end {
                Some(e) if e > start => out.push((i, Tok::Quoted(s[start..e].to_string()))),
                Some(_) => return err(i, "empty quoted arrow id"),
                None => return err(i, "unterminated backtick"),
            }
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            it.next();
        } else {
            return err(i, format!("unexpected character {:?}", c));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(s)?, at: 0, end: s.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn starts_scalar_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Num(_)) | Some(Tok::Op('(')) => true,
            Some(Tok::Ident(s)) => s == "L",
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let p = self.pos();
                self.at += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return err(p, "division by zero");
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let e: u32 = n.try_into().or_else(|_| err(p, "exponent too large"))?;
                if e > 4096 {
                    return err(p, "exponent too large");
                }
                let mut acc = Scalar::one();
                for _ in 0..e {
                    acc = &acc * &base;
                }
                Ok(acc)
            }
            _ => err(p, "expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Scalar::Rational(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(s)) if s == "L" => {
                self.at += 1;
                Ok(Scalar::lambda())
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return err(self.pos(), "expected ')'");
                }
                Ok(v)
            }
            Some(t) => err(p, format!("unexpected token {:?}", t)),
            None => err(p, "unexpected end of input"),
        }
    }

    fn arrow(&mut self) -> Option<ArrowId> {
        let id = match self.peek()? {
            Tok::Ident(s) if s != "L" => ArrowId::new(s),
            Tok::Quoted(s) => ArrowId::new(s),
            _ => return None,
        };
        self.at += 1;
        Some(id)
    }

    /// One signed term of a potential. `first` allows a missing sign.
    fn potential_term(&mut self, first: bool) -> Result<(Scalar, Vec<ArrowId>), ParseError> {
        let mut coef = Scalar::one();
        if self.eat('-') {
            coef = -coef;
        } else if !self.eat('+') && !first {
            return err(self.pos(), "expected '+' or '-' between terms");
        }
        if self.starts_scalar_atom() {
            let c = self.power()?;
            coef = &coef * &c;
            loop {
                if self.peek() == Some(&Tok::Op('/')) {
                    let p = self.pos();
                    self.at += 1;
                    let d = self.power()?;
                    if d.is_zero() {
                        return err(p, "division by zero");
                    }
                    coef = &coef / &d;
                } else if self.peek() == Some(&Tok::Op('*')) {
                    self.at += 1;
                    if self.starts_scalar_atom() {
                        let c = self.power()?;
                        coef = &coef * &c;
                    } else {
                        break;
                    }
                } else {
                    return err(self.pos(), "expected '*' before the arrow word");
                }
            }
        }
        let mut word = Vec::new();
        loop {
            match self.arrow() {
                Some(a) => word.push(a),
                None => return err(self.pos(), "expected an arrow id"),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((coef, word))
    }
}

/// Parses a scalar expression over `Q(L)`.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(s)?;
    let v = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos(), "trailing input");
    }
    Ok(v)
}

/// Parses potential text into raw `(coefficient, word)` terms, unnormalized.
pub fn parse_terms(s: &str) -> Result<Vec<(Scalar, Vec<ArrowId>)>, ParseError> {
    let mut p = Parser::new(s)?;
    let mut out = Vec::new();
    if p.peek().is_none() || p.toks.len() == 1 && p.peek() == Some(&Tok::Num(BigInt::from(0))) {
        return Ok(out);
    }
    while p.peek().is_some() {
        let first = out.is_empty();
        out.push(p.potential_term(first)?);
    }
    Ok(out)
}

/// Renders an arrow id so that it parses back as the same id.
pub fn quote_arrow(a: &ArrowId) -> String {
    let s = a.as_str();
    let plain = s != "L" && s.chars().next().is_some_and(is_ident_start) && s.chars().all(is_ident_char);
    if plain {
        s.to_string()
    } else {
        format!("`{}`", s)
    }
}

/// Writes `c*body` with the sign folded into the separator.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, c: &Scalar, body: &str, first: bool) -> fmt::Result {
    let (neg, abs) = match c {
        Scalar::Rational(r) if r.is_negative() => (true, Scalar::Rational(-r)),
        _ => (false, c.clone()),
    };
    if neg {
        write!(f, "-")?;
    } else if !first {
        write!(f, "+")?;
    }
    match &abs {
        Scalar::Rational(_) if abs.is_one() => write!(f, "{}", body),
        Scalar::Rational(r) => write!(f, "{}*{}", r, body),
        Scalar::Function(_) => write!(f, "({})*{}", abs, body),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_expressions() {
        assert_eq!(parse_scalar("2/3").unwrap(), Scalar::from_ratio(2, 3));
        assert_eq!(parse_scalar("-(1+1)^3").unwrap(), Scalar::from_int(-8));
        let l = Scalar::lambda();
        assert_eq!(parse_scalar("L^2 - L").unwrap(), &(&l * &l) - &l);
        assert_eq!(parse_scalar("1/(L-1)*(L-1)").unwrap(), Scalar::one());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("2 3").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn potential_terms() {
        let t = parse_terms("L*a*b*c - d*g*c + 2/3*`x*`*y").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].0, Scalar::lambda());
        assert_eq!(t[1].0, Scalar::from_int(-1));
        assert_eq!(t[2].0, Scalar::from_ratio(2, 3));
        assert_eq!(t[2].1, vec![ArrowId::new("x*"), ArrowId::new("y")]);
        let t = parse_terms("-(L+1)/2*a*b").unwrap();
        assert_eq!(t[0].0, parse_scalar("-(L+1)/2").unwrap());
        assert!(parse_terms("").unwrap().is_empty());
        assert!(parse_terms("0").unwrap().is_empty());
    }

    #[test]
    fn potential_errors_point_at_offset() {
        let e = parse_terms("a*b c").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_terms("2*").is_err());
        assert!(parse_terms("a*`b").is_err());
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_arrow(&ArrowId::new("a1")), "a1");
        assert_eq!(quote_arrow(&ArrowId::new("L")), "`L`");
        assert_eq!(quote_arrow(&ArrowId::new("[x z]")), "`[x z]`");
    }
}
