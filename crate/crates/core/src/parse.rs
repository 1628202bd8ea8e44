//! Text parsers for polynomials, grammars, rationals and parameter tuples.
//!
//! Polynomial syntax: terms joined by `+`/`-`, factors joined by `*`, integer
//! or `p/q` coefficients, identifiers with optional `^` signed integer
//! exponents, and parenthesised sub-expressions raised to small nonnegative
//! powers. Grammar files hold one rule per line, `u -> u*v^3`, with `#`
//! comments.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::grammar::Grammar;
use crate::polyring::{BigRational, LaurentPoly, Monomial, VariableId};

const MAX_EXPONENT: i64 = 1 << 20;
const MAX_GROUP_POWER: i64 = 16;
const MAX_NESTING: usize = 32;
const MAX_DIGITS: usize = 512;
// Bounds the work of a single product while parsing untrusted input.
const MAX_PRODUCT_WORK: usize = 1 << 20;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
    depth: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            line,
            col0,
            depth: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col0 + self.pos + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] == b' ' || self.src[self.pos] == b'\t')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        if self.pos - start > MAX_DIGITS {
            return Err(ParseError::new(
                self.line,
                self.col0 + start + 1,
                "integer literal too long",
            ));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("validated digits"))
    }

    fn small_int(&mut self, limit: i64) -> Result<i64, ParseError> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let start = self.pos;
        let value = self.digits()?;
        let value = if negative { -value } else { value };
        match i64::try_from(&value) {
            Ok(v) if v.abs() <= limit => Ok(v),
            _ => Err(ParseError::new(
                self.line,
                self.col0 + start + 1,
                format!("exponent magnitude exceeds {limit}"),
            )),
        }
    }

    fn ident(&mut self) -> Option<VariableId> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return None,
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        Some(VariableId::new(name))
    }

    fn poly(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::zero();
        let mut sign_negative = false;
        if self.eat(b'-') {
            sign_negative = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            if sign_negative {
                acc -= &t;
            } else {
                acc += &t;
            }
            if self.eat(b'+') {
                sign_negative = false;
            } else if self.eat(b'-') {
                sign_negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = self.checked_mul(&acc, &f)?;
        }
        Ok(acc)
    }

    fn checked_mul(&self, a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly, ParseError> {
        if a.len().saturating_mul(b.len()) > MAX_PRODUCT_WORK {
            return Err(self.err("expression too large"));
        }
        Ok(a * b)
    }

    fn factor(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let numer = self.digits()?;
                let denom = if self.eat(b'/') {
                    let d = self.digits()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(LaurentPoly::constant(BigRational::new(numer, denom)))
            }
            Some(b'(') => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(self.err("parentheses nested too deeply"));
                }
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.depth -= 1;
                if self.eat(b'^') {
                    let e = self.small_int(MAX_EXPONENT)?;
                    if let Some((m, c)) = inner.as_single_term() {
                        let exps_ok = m
                            .iter()
                            .all(|(_, k)| k.checked_mul(e).is_some_and(|p| p.abs() <= MAX_EXPONENT));
                        let bits = c.numer().bits().max(c.denom().bits());
                        let coeff_ok = c.numer().magnitude().is_one() && c.denom().is_one()
                            || bits.saturating_mul(e.unsigned_abs()) <= 1 << 16;
                        if !exps_ok || !coeff_ok {
                            return Err(self.err("power too large"));
                        }
                        return inner
                            .pow(e)
                            .ok_or_else(|| self.err("cannot invert a zero group"));
                    }
                    if inner.is_zero() {
                        return if e < 0 {
                            Err(self.err("cannot invert a zero group"))
                        } else if e == 0 {
                            Ok(LaurentPoly::one())
                        } else {
                            Ok(LaurentPoly::zero())
                        };
                    }
                    if !(0..=MAX_GROUP_POWER).contains(&e) {
                        return Err(self.err(format!(
                            "power of a multi-term group must lie in 0..={MAX_GROUP_POWER}"
                        )));
                    }
                    let mut acc = LaurentPoly::one();
                    for _ in 0..e {
                        acc = self.checked_mul(&acc, &inner)?;
                    }
                    Ok(acc)
                } else {
                    Ok(inner)
                }
            }
            _ => {
                let x = self
                    .ident()
                    .ok_or_else(|| self.err("expected a number, variable or `(`"))?;
                let e = if self.eat(b'^') {
                    self.small_int(MAX_EXPONENT)?
                } else {
                    1
                };
                Ok(LaurentPoly::term(Monomial::var_pow(&x, e), BigRational::one()))
            }
        }
    }
}

/// Parses a single polynomial expression.
pub fn parse_poly(src: &str) -> Result<LaurentPoly, ParseError> {
    if src.contains('\n') {
        let col = src.find('\n').unwrap_or(0);
        return Err(ParseError::new(1, col + 1, "polynomial must fit on one line"));
    }
    let mut cur = Cursor::new(src, 1, 0);
    if cur.at_end() {
        return Err(cur.err("empty polynomial"));
    }
    let p = cur.poly()?;
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(p)
}

/// Parses a grammar file: one `letter -> polynomial` rule per line.
///
/// The alphabet is the list of rule heads in order of appearance; every
/// variable used on a right-hand side must have its own rule.
pub fn parse_grammar(src: &str) -> Result<Grammar, ParseError> {
    let mut rules: Vec<(VariableId, LaurentPoly, usize)> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let arrow = line
            .find("->")
            .ok_or_else(|| ParseError::new(line_no, 1, "expected `letter -> polynomial`"))?;
        let mut head = Cursor::new(&line[..arrow], line_no, 0);
        let x = head
            .ident()
            .ok_or_else(|| head.err("expected a letter before `->`"))?;
        if !head.at_end() {
            return Err(head.err("expected `->` after the letter"));
        }
        if let Some((_, _, first)) = rules.iter().find(|(y, _, _)| *y == x) {
            return Err(ParseError::new(
                line_no,
                1,
                format!("duplicate rule for `{x}` (first defined on line {first})"),
            ));
        }
        let rhs_src = &line[arrow + 2..];
        let mut rhs = Cursor::new(rhs_src, line_no, arrow + 2);
        if rhs.at_end() {
            return Err(rhs.err("empty right-hand side"));
        }
        let p = rhs.poly()?;
        if !rhs.at_end() {
            return Err(rhs.err("unexpected trailing input"));
        }
        rules.push((x, p, line_no));
    }
    if rules.is_empty() {
        return Err(ParseError::new(1, 1, "grammar has no rules"));
    }
    let alphabet: Vec<VariableId> = rules.iter().map(|(x, _, _)| x.clone()).collect();
    for (_, p, line_no) in &rules {
        if let Some(stray) = p.variables().into_iter().find(|y| !alphabet.contains(y)) {
            return Err(ParseError::new(
                *line_no,
                1,
                format!("`{stray}` has no rule of its own"),
            ));
        }
    }
    Grammar::new(rules.into_iter().map(|(x, p, _)| (x, p)))
        .map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// Parses an exact rational: `p`, `-p` or `p/q`.
pub fn parse_rational(src: &str) -> Result<BigRational, ParseError> {
    let mut cur = Cursor::new(src, 1, 0);
    let negative = if cur.eat(b'-') {
        true
    } else {
        cur.eat(b'+');
        false
    };
    let numer = cur.digits()?;
    let denom = if cur.eat(b'/') {
        let d = cur.digits()?;
        if d.is_zero() {
            return Err(cur.err("zero denominator"));
        }
        d
    } else {
        BigInt::one()
    };
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    let q = BigRational::new(numer, denom);
    Ok(if negative { -q } else { q })
}

/// Parses a comma-separated list of exactly `len` rationals (`0,1,0,1,0,0`).
pub fn parse_rational_list(src: &str, len: usize) -> Result<Vec<BigRational>, ParseError> {
    let mut out = Vec::with_capacity(len);
    let mut offset = 0;
    for piece in src.split(',') {
        let q = parse_rational(piece).map_err(|e| {
            ParseError::new(1, offset + e.column, format!("item {}: {}", out.len() + 1, e.message))
        })?;
        out.push(q);
        offset += piece.len() + 1;
    }
    if out.len() != len {
        return Err(ParseError::new(
            1,
            1,
            format!("expected {len} comma-separated values, got {}", out.len()),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rational};

    #[test]
    fn parses_rendered_forms() {
        for src in [
            "u*v^5 + 2*u^4*v^2",
            "7/2*u^-1",
            "-v^2 + u^2",
            "-u - 1/3",
            "0",
            "1",
            "u*v^8 + 13*u^4*v^5 + 4*u^7*v^2",
        ] {
            assert_eq!(parse_poly(src).unwrap().to_string(), src);
        }
    }

    #[test]
    fn parses_products_groups_and_spacing() {
        let p = parse_poly(" (u + v) * (u - v) ").unwrap();
        assert_eq!(p.to_string(), "-v^2 + u^2");
        let q = parse_poly("3*u*u^-1").unwrap();
        assert_eq!(q, LaurentPoly::constant(int(3)));
        let r = parse_poly("(2*u)^-2").unwrap();
        assert_eq!(r.to_string(), "1/4*u^-2");
        assert_eq!(parse_poly("1/2*x").unwrap().coefficient(&Monomial::var(&"x".into())), rational(1, 2));
    }

    #[test]
    fn reports_positions() {
        let e = parse_poly("u + * v").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_poly("u^").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_poly("1/0").unwrap_err();
        assert!(e.message.contains("zero denominator"));
        assert!(parse_poly("(u+v)^40").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("u v").is_err());
    }

    #[test]
    fn grammar_file_round() {
        let g = parse_grammar("# Whitney m=3 r=2\nu -> u*v^3\nv -> u^3*v\n").unwrap();
        assert_eq!(g.alphabet().len(), 2);
        assert_eq!(g.rule(&"u".into()).unwrap().to_string(), "u*v^3");
        assert_eq!(g.to_string(), "u -> u*v^3\nv -> u^3*v\n");
    }

    #[test]
    fn grammar_errors_carry_lines() {
        let e = parse_grammar("u -> u*v\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("`v`"));
        let e = parse_grammar("u -> u\nu -> v\nv -> v").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_grammar("u -> u\nv => v").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_grammar("u -> u +").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(parse_grammar("\n# nothing\n").is_err());
    }

    #[test]
    fn rationals_and_lists() {
        assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        let l = parse_rational_list("0,1,0,1,0,-1/2", 6).unwrap();
        assert_eq!(l[5], rational(-1, 2));
        assert!(parse_rational_list("0,1", 6).is_err());
        let e = parse_rational_list("0,x", 2).unwrap_err();
        assert_eq!(e.column, 3);
    }
}
