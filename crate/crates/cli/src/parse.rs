//! Parser for polynomial equations in `x` and `y` and for rational
//! literals.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | "x" | "y" | "(" expr ")"
//! ```
//!
//! Division is only allowed by a nonzero constant. Juxtaposition such as
//! `2xy` is rejected.

use num_bigint::BigInt;
use weier_core::exact::{parse_rational, BPoly, Rational, Ring};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(char),
    Op(char),
    LParen,
    RParen,
}

fn syntax(pos: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { pos, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, CliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(syntax(i, "decimal literals are not exact; write p/q"));
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(digits.parse().expect("ascii digits"))));
            }
            '.' => return Err(syntax(i, "decimal literals are not exact; write p/q")),
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                // `xy` is two variables side by side; the parser reports it
                if !word.chars().all(|ch| ch == 'x' || ch == 'y') {
                    return Err(CliError::UnknownVariable { name: word, pos: start });
                }
                out.extend(word.chars().enumerate().map(|(k, ch)| (start + k, Tok::Var(ch))));
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((i, Tok::Op(c)));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            _ => return Err(syntax(i, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

type P = BPoly<Rational>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Tok::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<P, CliError> {
        let mut acc = self.term()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<P, CliError> {
        let mut acc = self.unary()?;
        loop {
            if let Some(op) = self.eat_op(&['*', '/']) {
                let at = self.offset();
                let rhs = self.unary()?;
                acc = if op == '*' {
                    acc.mul(&rhs)
                } else {
                    match constant_of(&rhs) {
                        Some(c) if !c.is_zero() => acc.scale(&c.recip()),
                        Some(_) => return Err(syntax(at, "division by zero")),
                        None => return Err(syntax(at, "can only divide by a constant")),
                    }
                };
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen)) {
                return Err(syntax(self.offset(), "implicit multiplication is not allowed; use '*'"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<P, CliError> {
        match self.eat_op(&['-', '+']) {
            Some('-') => Ok(self.unary()?.neg()),
            Some(_) => self.unary(),
            None => self.power(),
        }
    }

    fn power(&mut self) -> Result<P, CliError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_none() {
            return Ok(base);
        }
        let at = self.offset();
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => {
                let e: u32 = n.try_into().map_err(|_| syntax(at, "exponent too large"))?;
                self.pos += 1;
                let mut acc = P::constant(Rational::one());
                for _ in 0..e {
                    acc = acc.mul(&base);
                }
                Ok(acc)
            }
            _ => Err(syntax(at, "exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<P, CliError> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(P::constant(Rational::from_integer(n))),
            Tok::Var('x') => Ok(P::x()),
            Tok::Var(_) => Ok(P::y()),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.offset(), "expected ')'")),
                }
            }
            Tok::RParen => Err(syntax(at, "unexpected ')'")),
            Tok::Op(c) => Err(syntax(at, format!("unexpected '{c}'"))),
        }
    }
}

fn constant_of(p: &P) -> Option<Rational> {
    match p.total_degree() {
        None => Some(Rational::zero()),
        Some(0) => Some(p.coeff(0, 0)),
        _ => None,
    }
}

/// Parses a polynomial in `x` and `y`; an equation `lhs = rhs` becomes
/// `lhs - rhs`. Positions in errors are character offsets.
pub fn parse_poly(text: &str) -> Result<BPoly<Rational>, CliError> {
    if let Some((lhs, rhs)) = text.split_once('=') {
        let l = parse_side(lhs, 0)?;
        let r = parse_side(rhs, lhs.chars().count() + 1)?;
        return Ok(l.sub(&r));
    }
    parse_side(text, 0)
}

fn parse_side(text: &str, shift: usize) -> Result<P, CliError> {
    let shifted = |e: CliError| match e {
        CliError::Syntax { pos, message } => CliError::Syntax { pos: pos + shift, message },
        CliError::UnknownVariable { name, pos } => CliError::UnknownVariable { name, pos: pos + shift },
        other => other,
    };
    let toks = tokenize(text).map_err(shifted)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() };
    let out = p.expr().map_err(shifted)?;
    if p.pos < p.toks.len() {
        return Err(shifted(syntax(p.offset(), "unexpected trailing input")));
    }
    Ok(out)
}

/// Parses a rational abscissa or ordinate: an integer, `p/q`, or a
/// constant expression such as `-(1/3)`.
pub fn parse_number(text: &str) -> Result<Rational, CliError> {
    if let Some(q) = parse_rational(text) {
        return Ok(q);
    }
    if let Some(i) = text.find('.') {
        return Err(syntax(i, "decimal literals are not exact; write p/q"));
    }
    match parse_poly(text) {
        Ok(p) => constant_of(&p).ok_or_else(|| CliError::Usage(format!("'{text}' is not a number"))),
        Err(_) => Err(CliError::Core(weier_core::Error::IrrationalAbscissaUnsupported(text.to_string()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weier_core::exact::rat;

    #[test]
    fn cubic_round_trips() {
        let f = parse_poly("x^3-y^3+2*x*y+x-2*y+1").unwrap();
        assert_eq!(f.to_string(), "x^3-y^3+2*x*y+x-2*y+1");
        assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn equations_and_parentheses() {
        let f = parse_poly("x^2 + y^2 = 1").unwrap();
        assert_eq!(f.to_string(), "x^2+y^2-1");
        let g = parse_poly("(x - 1)*(x + 1) - -y/2").unwrap();
        assert_eq!(g.to_string(), "x^2+1/2*y-1");
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        match parse_poly("x^3-y^3+2xy") {
            Err(CliError::Syntax { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("2(x+1)"), Err(CliError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x y"), Err(CliError::Syntax { .. })));
    }

    #[test]
    fn unknown_variables() {
        assert!(matches!(parse_poly("x+z"), Err(CliError::UnknownVariable { ref name, pos: 2 }) if name == "z"));
    }

    #[test]
    fn malformed_input() {
        for bad in ["", "x+", "(x", "x^y", "x/(y)", "1.5*x", "x/0", "x)"] {
            assert!(matches!(parse_poly(bad), Err(CliError::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_number("-(1/3)*3").unwrap(), rat(-1));
        assert!(matches!(parse_number("0.5"), Err(CliError::Syntax { .. })));
        assert!(matches!(
            parse_number("sqrt(2)"),
            Err(CliError::Core(weier_core::Error::IrrationalAbscissaUnsupported(_)))
        ));
    }
}
