//! Text grammar for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := number | var ['^' int]
//! number := int ['/' int]
//! var    := 'x' int | 'y' int
//! ```
//! Whitespace is ignored. Variables `x0..x<n-1>` give a projective polynomial,
//! `y1..y<n>` an affine one; the two styles cannot be mixed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Fp, Fq, FqField};
use crate::error::{Error, Result};
use crate::monomial::ExponentVec;
use crate::poly::{Polynomial, VarStyle};

/// Requested coefficient domain for parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainTag {
    Rational,
    Integer,
    PrimeField(u64),
    ExtensionField(u64, u32),
}

/// A parsed polynomial in any supported domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPoly {
    Rational(Polynomial<BigRational>),
    Integer(Polynomial<BigInt>),
    PrimeField(Polynomial<Fp>),
    ExtensionField(Polynomial<Fq>),
}

impl std::fmt::Display for AnyPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyPoly::Rational(p) => p.fmt(f),
            AnyPoly::Integer(p) => p.fmt(f),
            AnyPoly::PrimeField(p) => p.fmt(f),
            AnyPoly::ExtensionField(p) => p.fmt(f),
        }
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }
}

/// Parses into rational coefficients; every other domain is derived from this.
fn parse_raw(text: &str, arity: usize) -> Result<Polynomial<BigRational>> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut style: Option<VarStyle> = None;
    let mut terms: Vec<(ExponentVec, BigRational)> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match lx.peek() {
            None if first => return lx.err("empty input"),
            None => break,
            Some(b'+') => lx.pos += 1,
            Some(b'-') => {
                lx.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return lx.err(format!("unexpected '{}'", c as char)),
        }
        first = false;
        let mut coeff = sign;
        let mut exps = vec![0u32; arity];
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = lx.int()?;
                    let mut q = BigRational::from_integer(num);
                    if lx.peek() == Some(b'/') {
                        lx.pos += 1;
                        let den = lx.int()?;
                        if den.is_zero() {
                            return lx.err("zero denominator");
                        }
                        q /= BigRational::from_integer(den);
                    }
                    coeff *= q;
                }
                Some(c @ (b'x' | b'y')) => {
                    let var_pos = lx.pos;
                    lx.pos += 1;
                    let this = if c == b'x' {
                        VarStyle::Projective
                    } else {
                        VarStyle::Affine
                    };
                    match style {
                        Some(s) if s != this => {
                            return lx.err("mixed x and y variables");
                        }
                        _ => style = Some(this),
                    }
                    if !matches!(lx.s.get(lx.pos), Some(d) if d.is_ascii_digit()) {
                        return lx.err("expected variable index");
                    }
                    let idx: usize = lx
                        .int()?
                        .try_into()
                        .map_err(|_| Error::Parse {
                            pos: var_pos,
                            msg: "variable index too large".into(),
                        })?;
                    let slot = match this {
                        VarStyle::Projective => Some(idx),
                        VarStyle::Affine => idx.checked_sub(1),
                    };
                    let slot = match slot {
                        Some(s) if s < arity => s,
                        _ => return Err(Error::VariableOutOfRange { index: idx, arity }),
                    };
                    let mut e = 1u32;
                    if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        e = lx
                            .int()?
                            .try_into()
                            .map_err(|_| Error::Parse {
                                pos: lx.pos,
                                msg: "exponent too large".into(),
                            })?;
                    }
                    exps[slot] += e;
                }
                None => return lx.err("unexpected end of input"),
                Some(c) => return lx.err(format!("unexpected '{}'", c as char)),
            }
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
            } else {
                break;
            }
        }
        terms.push((ExponentVec::new(exps), coeff));
        match lx.peek() {
            None => break,
            Some(b'+') | Some(b'-') => {}
            Some(c) => return lx.err(format!("unexpected '{}'", c as char)),
        }
    }
    Ok(Polynomial::from_terms(
        arity,
        style.unwrap_or(VarStyle::Projective),
        terms,
    ))
}

pub fn parse_rational(text: &str, arity: usize) -> Result<Polynomial<BigRational>> {
    parse_raw(text, arity)
}

pub fn parse_integer(text: &str, arity: usize) -> Result<Polynomial<BigInt>> {
    parse_raw(text, arity)?.to_integer()
}

pub fn parse_prime_field(text: &str, arity: usize, p: u64) -> Result<Polynomial<Fp>> {
    let q = parse_raw(text, arity)?;
    let pb = BigInt::from(p);
    for (_, c) in q.terms() {
        if (c.denom() % &pb).is_zero() {
            return Err(Error::CoefficientNotInDomain(c.to_string()));
        }
    }
    Ok(q.map_coeffs(|c| {
        Fp::from_bigint(c.numer(), p).mul(&Fp::from_bigint(c.denom(), p).inv().unwrap())
    }))
}

pub fn parse_extension_field(text: &str, arity: usize, p: u64, e: u32) -> Result<Polynomial<Fq>> {
    let fp = parse_prime_field(text, arity, p)?;
    let field = FqField::get(p, e);
    Ok(fp.map_coeffs(|c| field.from_i64(c.value() as i64)))
}

/// Parses `text` into the requested domain.
pub fn parse_poly(text: &str, arity: usize, domain: DomainTag) -> Result<AnyPoly> {
    Ok(match domain {
        DomainTag::Rational => AnyPoly::Rational(parse_rational(text, arity)?),
        DomainTag::Integer => AnyPoly::Integer(parse_integer(text, arity)?),
        DomainTag::PrimeField(p) => AnyPoly::PrimeField(parse_prime_field(text, arity, p)?),
        DomainTag::ExtensionField(p, e) => {
            AnyPoly::ExtensionField(parse_extension_field(text, arity, p, e)?)
        }
    })
}
