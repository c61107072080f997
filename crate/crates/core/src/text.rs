//! Plain-text syntax for elements and operators.
//!
//! Elements: `-3/2*x1^2*xi1 + xi2 - 4`. Factors multiply left to right with
//! the algebra's signs, so `xi2*xi1` parses to `-xi1*xi2`.
//!
//! Operators: the same syntax plus derivative factors `d[g]` / `d[g^k]`
//! which must follow all multiplier factors of a term: `2*x1*d[x1]*d[xi1]`.
//! Derivatives compose left to right, so `d[xi2]*d[xi1]` is normal-ordered
//! to `-d[xi1]*d[xi2]`. Printing always yields the normal form, and parsing
//! the printed form gives back an equal value.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Element, GeneratorTable, Monomial};
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::Scalar;

fn write_scalar_prefix(f: &mut dyn fmt::Write, c: &Scalar, first: bool, bare: bool) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let a = c.abs();
    if bare {
        write!(f, "{a}")
    } else if a.is_one() {
        Ok(())
    } else {
        write!(f, "{a}*")
    }
}

fn write_monomial(f: &mut dyn fmt::Write, table: &GeneratorTable, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(table.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

pub(crate) fn write_element(f: &mut fmt::Formatter<'_>, e: &Element) -> fmt::Result {
    if e.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in e.terms().enumerate() {
        write_scalar_prefix(f, c, i == 0, m.is_unit())?;
        write_monomial(f, e.table(), m)?;
    }
    Ok(())
}

pub(crate) fn write_operator(f: &mut fmt::Formatter<'_>, op: &Operator) -> fmt::Result {
    if op.is_zero() {
        return f.write_str("0");
    }
    let table = op.table();
    for (i, t) in op.terms().enumerate() {
        let bare = t.multiplier.is_unit() && t.derivatives.is_unit();
        write_scalar_prefix(f, &t.coeff, i == 0, bare)?;
        let mut need_star = false;
        if !t.multiplier.is_unit() {
            write_monomial(f, table, &t.multiplier)?;
            need_star = true;
        }
        for (g, &e) in t.derivatives.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if need_star {
                f.write_str("*")?;
            }
            need_star = true;
            write!(f, "d[{}", table.name(g))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            f.write_str("]")?;
        }
    }
    Ok(())
}

/// Exact rational literal: `3`, `-3/2`, `+7`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let err = |m: &str| Error::Parse {
        column: 1,
        message: format!("{m}: `{s}`"),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(err("signed denominator"));
            }
            d.parse().map_err(|_| err("bad denominator"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Scalar::new(num, den))
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBracket,
    RBracket,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            column: self.column(),
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the token and the column it starts at.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let col = self.column();
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, col));
        };
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = simple {
            self.pos += 1;
            return Ok((t, col));
        }
        if c.is_ascii_digit() {
            let len = rest
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Num(rest[..len].to_string()), col));
        }
        if c.is_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), col));
        }
        Err(self.err(format!("unexpected character `{c}`")))
    }

    fn peek(&mut self) -> Result<Tok> {
        let save = self.pos;
        let t = self.next()?.0;
        self.pos = save;
        Ok(t)
    }
}

/// One parsed term: coefficient, ordered multiplier factors, ordered
/// derivative factors (generator index, exponent).
struct RawTerm {
    coeff: Scalar,
    factors: Vec<(usize, u32)>,
    derivs: Vec<(usize, u32)>,
}

fn parse_terms(table: &GeneratorTable, src: &str, allow_derivs: bool) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer::new(src);
    let mut out = vec![];
    loop {
        let (tok, col) = lx.next()?;
        let negative = match tok {
            Tok::End if out.is_empty() => {
                return Err(Error::Parse {
                    column: col,
                    message: "empty expression".into(),
                })
            }
            Tok::End => return Ok(out),
            Tok::Plus => false,
            Tok::Minus => true,
            first if out.is_empty() => {
                out.push(parse_term(
                    table,
                    &mut lx,
                    Some((first, col)),
                    allow_derivs,
                )?);
                continue;
            }
            other => {
                return Err(Error::Parse {
                    column: col,
                    message: format!("expected `+` or `-`, found {other:?}"),
                })
            }
        };
        let mut term = parse_term(table, &mut lx, None, allow_derivs)?;
        if negative {
            term.coeff = -term.coeff;
        }
        out.push(term);
    }
}

fn parse_term(
    table: &GeneratorTable,
    lx: &mut Lexer<'_>,
    mut pending: Option<(Tok, usize)>,
    allow_derivs: bool,
) -> Result<RawTerm> {
    let mut term = RawTerm {
        coeff: Scalar::one(),
        factors: vec![],
        derivs: vec![],
    };
    let mut expect_factor = true;
    loop {
        let (tok, col) = match pending.take() {
            Some(p) => p,
            None => lx.next()?,
        };
        if !expect_factor {
            match tok {
                Tok::Star => {
                    expect_factor = true;
                    continue;
                }
                _ => {
                    // hand the token back
                    lx.pos = byte_offset(lx.src, col);
                    return Ok(term);
                }
            }
        }
        match tok {
            Tok::Num(n) => {
                let mut c = parse_scalar(&n).map_err(|_| Error::Parse {
                    column: col,
                    message: format!("bad number `{n}`"),
                })?;
                if lx.peek()? == Tok::Slash {
                    lx.next()?;
                    let (d, dcol) = lx.next()?;
                    let Tok::Num(d) = d else {
                        return Err(Error::Parse {
                            column: dcol,
                            message: "expected denominator".into(),
                        });
                    };
                    let den = parse_scalar(&d).unwrap();
                    if den.is_zero() {
                        return Err(Error::Parse {
                            column: dcol,
                            message: "zero denominator".into(),
                        });
                    }
                    c /= den;
                }
                term.coeff *= c;
            }
            Tok::Ident(name) if name == "d" && lx.peek()? == Tok::LBracket => {
                if !allow_derivs {
                    return Err(Error::Parse {
                        column: col,
                        message: "derivatives are not allowed in an element".into(),
                    });
                }
                lx.next()?;
                let (g, gcol) = lx.next()?;
                let Tok::Ident(g) = g else {
                    return Err(Error::Parse {
                        column: gcol,
                        message: "expected generator name".into(),
                    });
                };
                let idx = lookup(table, &g, gcol)?;
                let e = parse_exponent(lx)?;
                if e > 1 && table.is_odd(idx) {
                    return Err(Error::Parse {
                        column: gcol,
                        message: format!("odd generator `{g}` takes derivative exponent at most 1"),
                    });
                }
                let (rb, rcol) = lx.next()?;
                if rb != Tok::RBracket {
                    return Err(Error::Parse {
                        column: rcol,
                        message: "expected `]`".into(),
                    });
                }
                term.derivs.push((idx, e));
            }
            Tok::Ident(name) => {
                let idx = lookup(table, &name, col)?;
                if !term.derivs.is_empty() {
                    return Err(Error::Parse {
                        column: col,
                        message: "multiplier factors must precede derivative factors".into(),
                    });
                }
                let e = parse_exponent(lx)?;
                term.factors.push((idx, e));
            }
            other => {
                return Err(Error::Parse {
                    column: col,
                    message: format!("unexpected {other:?}"),
                })
            }
        }
        expect_factor = false;
    }
}

fn byte_offset(src: &str, column: usize) -> usize {
    src.char_indices()
        .nth(column - 1)
        .map(|(b, _)| b)
        .unwrap_or(src.len())
}

fn parse_exponent(lx: &mut Lexer<'_>) -> Result<u32> {
    if lx.peek()? != Tok::Caret {
        return Ok(1);
    }
    lx.next()?;
    let (t, col) = lx.next()?;
    match t {
        Tok::Num(n) => n.parse().map_err(|_| Error::Parse {
            column: col,
            message: format!("bad exponent `{n}`"),
        }),
        _ => Err(Error::Parse {
            column: col,
            message: "expected exponent".into(),
        }),
    }
}

fn lookup(table: &GeneratorTable, name: &str, col: usize) -> Result<usize> {
    table.index_of(name).ok_or_else(|| Error::Parse {
        column: col,
        message: format!("unknown generator `{name}`"),
    })
}

fn factor_product(table: &Arc<GeneratorTable>, factors: &[(usize, u32)]) -> Element {
    let mut acc = Element::one(table);
    for &(i, e) in factors {
        for _ in 0..e {
            acc = &acc
                * &Element::monomial(table, Monomial::generator(table.len(), i), Scalar::one());
        }
    }
    acc
}

pub fn parse_element(table: &Arc<GeneratorTable>, src: &str) -> Result<Element> {
    let mut out = Element::zero(table);
    for t in parse_terms(table, src, false)? {
        out += &factor_product(table, &t.factors).scale(&t.coeff);
    }
    Ok(out)
}

pub fn parse_operator(table: &Arc<GeneratorTable>, src: &str) -> Result<Operator> {
    let mut out = Operator::zero(table);
    for t in parse_terms(table, src, true)? {
        let mut op = Operator::multiplication(&factor_product(table, &t.factors).scale(&t.coeff));
        for &(i, e) in &t.derivs {
            for _ in 0..e {
                op = op
                    .compose(&Operator::partial(table, i))
                    .expect("same table");
            }
        }
        out = &out + &op;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{ratio, scalar};

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new([("x1", 0), ("x2", 0), ("xi1", 1), ("xi2", 1)]).unwrap()
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar("4/6").unwrap(), ratio(2, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1/-2").is_err());
        assert!(parse_scalar("a").is_err());
    }

    #[test]
    fn element_round_trip() {
        let t = table();
        let e = parse_element(&t, "-3/2*x1^2*xi1 + xi2 - 4 + 2/3*x2*xi2*xi1").unwrap();
        let printed = e.to_string();
        assert_eq!(parse_element(&t, &printed).unwrap(), e);
        assert_eq!(parse_element(&t, "0").unwrap(), Element::zero(&t));
        assert_eq!(Element::zero(&t).to_string(), "0");
    }

    #[test]
    fn factor_order_carries_sign() {
        let t = table();
        let a = parse_element(&t, "xi2*xi1").unwrap();
        let b = parse_element(&t, "-xi1*xi2").unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_element(&t, "2 * xi1 * 1/2").unwrap(),
            parse_element(&t, "xi1").unwrap()
        );
    }

    #[test]
    fn element_errors_are_positioned() {
        let t = table();
        match parse_element(&t, "x1 + y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_element(&t, "d[x1]"),
            Err(Error::Parse { column: 1, .. })
        ));
        assert!(parse_element(&t, "").is_err());
        assert!(parse_element(&t, "x1 x2").is_err());
    }

    #[test]
    fn operator_round_trip() {
        let t = table();
        let op = parse_operator(&t, "d[x1]*d[xi1] + d[x2]*d[xi2] - 1/2*x1*xi2*d[xi1] + 3").unwrap();
        let printed = op.to_string();
        assert_eq!(parse_operator(&t, &printed).unwrap(), op);
        let swapped = parse_operator(&t, "d[xi2]*d[xi1]").unwrap();
        assert_eq!(swapped, -parse_operator(&t, "d[xi1]*d[xi2]").unwrap());
        assert!(parse_operator(&t, "d[xi1]*x1").is_err());
        assert!(matches!(
            parse_operator(&t, "x1*d[xi1^2]"),
            Err(Error::Parse { column: 6, .. })
        ));
        assert!(parse_operator(&t, "d[x1^2]").is_ok());
        assert_eq!(
            parse_operator(&t, "2")
                .unwrap()
                .apply(&Element::one(&t))
                .unwrap(),
            Element::scalar(&t, scalar(2))
        );
    }
}
