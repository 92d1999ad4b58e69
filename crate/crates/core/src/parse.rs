//! Textual syntax for polynomials and conformal elements.
//!
//! Polynomials: `2*d + 5*l`, `d^2 - 4*l^2`, `3/2*d + 3*l`, with `^` for
//! powers and `p/q` rationals. Parenthesized subexpressions are allowed and
//! juxtaposition with a generator token multiplies, so bracket-table entries
//! read `(2*d + 5*l) J3` or `l^3 c`. The printer and parser round-trip.

use std::fmt;

use crate::conformal::ConformalElement;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::vars::Var;

/// A parse failure, with a 0-based byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

fn err<T>(col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { col, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number {s}"),
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
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
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(input[start..i].to_string())));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(input[start..i].to_string())));
            }
            other => return err(i, format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

/// An element-expression atom: either a scalar polynomial factor or a basis
/// symbol (`J<k>` or the central element `c` in element context).
enum Atom<C: Scalar> {
    Scalar(Poly<Var, C>),
    Generator(usize),
    Center,
}

struct Parser<C: Scalar> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// In element mode `J<k>` is a generator and a bare `c` is the center.
    element_mode: bool,
    _marker: std::marker::PhantomData<C>,
}

impl<C: Scalar> Parser<C> {
    fn new(input: &str, element_mode: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            element_mode,
            _marker: std::marker::PhantomData,
        })
    }

    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_col(&self) -> usize {
        self.toks.last().map_or(0, |(c, t)| c + format!("{t}").len())
    }

    /// expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<(Poly<Var, C>, ConformalElement<C>), ParseError> {
        let mut scalar = Poly::zero();
        let mut elem = ConformalElement::zero();
        let mut negate = false;
        if let Some((_, Tok::Minus)) = self.peek() {
            self.next();
            negate = true;
        } else if let Some((_, Tok::Plus)) = self.peek() {
            self.next();
        }
        loop {
            let (s, e) = self.term()?;
            if negate {
                scalar.sub_assign_ref(&s);
                elem = &elem - &e;
            } else {
                scalar.add_assign_ref(&s);
                elem = &elem + &e;
            }
            match self.peek() {
                Some((_, Tok::Plus)) => {
                    self.next();
                    negate = false;
                }
                Some((_, Tok::Minus)) => {
                    self.next();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok((scalar, elem))
    }

    /// term := factor (('*'|'/')? factor)*  — juxtaposition multiplies.
    fn term(&mut self) -> Result<(Poly<Var, C>, ConformalElement<C>), ParseError> {
        let mut scalar = Poly::one();
        let mut basis: Option<Atom<C>> = None;
        let mut any = false;
        loop {
            let divide = match self.peek() {
                Some((_, Tok::Star)) => {
                    if !any {
                        let (c, t) = self.next().unwrap();
                        return err(c, format!("expected a factor, found {t}"));
                    }
                    self.next();
                    false
                }
                Some((_, Tok::Slash)) => {
                    if !any {
                        let (c, t) = self.next().unwrap();
                        return err(c, format!("expected a factor, found {t}"));
                    }
                    self.next();
                    true
                }
                Some((_, Tok::Num(_))) | Some((_, Tok::Ident(_))) | Some((_, Tok::LParen)) => {
                    false
                }
                _ => break,
            };
            let col = self.peek().map_or(self.end_col(), |(c, _)| *c);
            let atom = self.factor()?;
            match atom {
                Atom::Scalar(p) => {
                    if divide {
                        if p.num_terms() != 1 || !p.terms().next().unwrap().0.is_one() {
                            return err(col, "division is only defined by nonzero constants");
                        }
                        let c0 = p.constant_term();
                        if c0.is_zero() {
                            return err(col, "division by zero");
                        }
                        scalar = scalar.scale(&(C::one() / c0));
                    } else {
                        scalar = scalar.mul_ref(&p);
                    }
                }
                b @ (Atom::Generator(_) | Atom::Center) => {
                    if divide {
                        return err(col, "cannot divide by a basis symbol");
                    }
                    if basis.is_some() {
                        return err(col, "a term may contain at most one basis symbol");
                    }
                    basis = Some(b);
                }
            }
            any = true;
        }
        if !any {
            let col = self.peek().map_or(self.end_col(), |(c, _)| *c);
            return err(col, "expected a term");
        }
        let elem = match basis {
            None => ConformalElement::zero(),
            Some(Atom::Generator(k)) => ConformalElement::from_coeff(k, scalar.clone()),
            Some(Atom::Center) => ConformalElement::central(scalar.clone()),
            Some(Atom::Scalar(_)) => unreachable!(),
        };
        let scalar_out = if elem.is_zero() { scalar } else { Poly::zero() };
        Ok((scalar_out, elem))
    }

    /// factor := atom ('^' number)?
    fn factor(&mut self) -> Result<Atom<C>, ParseError> {
        let atom = self.atom()?;
        if let Some((_, Tok::Caret)) = self.peek() {
            let (ccol, _) = self.next().unwrap();
            let e: u32 = match self.next() {
                Some((c, Tok::Num(n))) => n
                    .parse()
                    .map_err(|_| ParseError { col: c, msg: format!("bad exponent {n}") })?,
                Some((c, t)) => return err(c, format!("expected an exponent, found {t}")),
                None => return err(ccol + 1, "expected an exponent"),
            };
            return match atom {
                Atom::Scalar(p) => Ok(Atom::Scalar(p.pow(e))),
                _ => err(ccol, "powers of basis symbols are not defined"),
            };
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Atom<C>, ParseError> {
        match self.next() {
            Some((c, Tok::Num(n))) => {
                // Digit-by-digit keeps the value exact for any scalar field.
                let mut v = C::zero();
                let ten = C::int(10);
                for ch in n.chars() {
                    let digit = ch.to_digit(10).ok_or_else(|| ParseError {
                        col: c,
                        msg: format!("bad number {n}"),
                    })?;
                    v = v * ten.clone() + C::int(digit as i64);
                }
                Ok(Atom::Scalar(Poly::constant(v)))
            }
            Some((c, Tok::Ident(name))) => {
                if self.element_mode {
                    if let Some(rest) = name.strip_prefix('J') {
                        let k: usize = rest.parse().map_err(|_| ParseError {
                            col: c,
                            msg: format!("bad generator index in {name}"),
                        })?;
                        return Ok(Atom::Generator(k));
                    }
                    if name == "c" {
                        return Ok(Atom::Center);
                    }
                }
                match Var::from_name(&name) {
                    Some(v) => Ok(Atom::Scalar(Poly::var(v))),
                    None => err(c, format!("unknown variable {name}")),
                }
            }
            Some((_, Tok::LParen)) => {
                let (scalar, elem) = self.expr()?;
                match self.next() {
                    Some((_, Tok::RParen)) => {}
                    Some((c, t)) => return err(c, format!("expected ')', found {t}")),
                    None => return err(self.end_col(), "unbalanced '('"),
                }
                if elem.is_zero() {
                    Ok(Atom::Scalar(scalar))
                } else {
                    err(0, "parenthesized basis elements cannot be used as factors")
                }
            }
            Some((c, t)) => err(c, format!("expected a factor, found {t}")),
            None => err(self.end_col(), "unexpected end of input"),
        }
    }
}

/// Parse a scalar polynomial over the variable registry.
pub fn parse_poly<C: Scalar>(input: &str) -> Result<Poly<Var, C>, ParseError> {
    let mut p = Parser::<C>::new(input, false)?;
    let (scalar, _) = p.expr()?;
    if let Some((c, t)) = p.peek() {
        return err(*c, format!("trailing input: {t}"));
    }
    Ok(scalar)
}

/// Parse a conformal element such as `(2*d + 5*l) J3 + l^3 c`.
///
/// Terms without a basis symbol are rejected: an element is a combination of
/// generators `J<k>` and (optionally) the central symbol `c`.
pub fn parse_element<C: Scalar>(input: &str) -> Result<ConformalElement<C>, ParseError> {
    let mut p = Parser::<C>::new(input, true)?;
    let (scalar, elem) = p.expr()?;
    if let Some((c, t)) = p.peek() {
        return err(*c, format!("trailing input: {t}"));
    }
    if !scalar.is_zero() {
        return err(0, "element terms must carry a basis symbol (J<k> or c)");
    }
    Ok(elem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn poly(s: &str) -> Poly<Var, Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parses_the_documented_syntax() {
        assert_eq!(poly("2*d + 5*l").to_string(), "2*d + 5*l");
        assert_eq!(poly("d^2 - 4*l^2").to_string(), "d^2 - 4*l^2");
        assert_eq!(poly("3/2*d + 3*l").to_string(), "3/2*d + 3*l");
        assert_eq!(poly("(d + 2*l)*(d - 2*l)").to_string(), "d^2 - 4*l^2");
        assert_eq!(poly("-l^3 + 1/2"), poly("1/2 - l^3"));
        assert_eq!(poly("l1*l2^2 + D*A + a - c").to_string(), poly("l1*l2^2 + D*A + a - c").to_string());
    }

    #[test]
    fn printer_round_trips() {
        for s in ["2*d + 5*l", "d^2 - 4*l^2", "3/2*d + 3*l", "-l^3", "0", "7", "-1/3*d*m + nu"] {
            let p = poly(s);
            assert_eq!(parse_poly::<Rat>(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn element_syntax() {
        let e = parse_element::<Rat>("(2*d + 5*l) J3").unwrap();
        assert_eq!(e.coeff(3).to_string(), "2*d + 5*l");
        let e = parse_element::<Rat>("(d + 2*l) J0 + l^3 c").unwrap();
        assert_eq!(e.coeff(0).to_string(), "d + 2*l");
        assert_eq!(e.central_coeff().to_string(), "l^3");
        let e = parse_element::<Rat>("2 J1 - J0").unwrap();
        assert_eq!(e.coeff(1).to_string(), "2");
        assert_eq!(e.coeff(0).to_string(), "-1");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly::<Rat>("2*d + 5*q").unwrap_err();
        assert_eq!(e.col, 8);
        let e = parse_poly::<Rat>("2*(d + l").unwrap_err();
        assert!(e.msg.contains("unbalanced"));
        let e = parse_element::<Rat>("(d) J1 J2").unwrap_err();
        assert!(e.msg.contains("at most one basis symbol"));
        assert!(parse_element::<Rat>("d + l").is_err());
        let e = parse_poly::<Rat>("d/(l)").unwrap_err();
        assert!(e.msg.contains("constants"));
    }
}
