//! Text form of polynomial Hamiltonians.
//!
//! Printing is canonical: terms sorted by descending `p`-degree, then by
//! descending momentum exponent, then by descending `(x, u)` degree, with
//! factors ordered `coefficient * x… * u * p…`. Variables are `x1…xn`, `u`,
//! `p1…pn`; the parser also accepts bare `x` and `p` for `x1` and `p1`.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use super::coeff::Coeff;
use super::poly::{FloatHamiltonian, PolyPHamiltonian, RationalHamiltonian};
use super::xu::XuMonomial;
use crate::error::{Error, Result};

impl<C: Coeff> fmt::Display for PolyPHamiltonian<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows: Vec<(&Vec<u32>, &XuMonomial, &C)> = self
            .terms()
            .flat_map(|(a, g)| g.terms().map(move |(m, c)| (a, m, c)))
            .collect();
        if rows.is_empty() {
            return write!(f, "0");
        }
        rows.sort_by_key(|(a, m, _)| {
            (
                Reverse(a.iter().sum::<u32>()),
                Reverse((*a).clone()),
                Reverse(m.degree()),
                Reverse(m.x.clone()),
                Reverse(m.u),
            )
        });
        for (i, (alpha, m, c)) in rows.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (j, &e) in m.x.iter().enumerate() {
                factors.push(power(&format!("x{}", j + 1), e));
            }
            factors.push(power("u", m.u));
            for (j, &e) in alpha.iter().enumerate() {
                factors.push(power(&format!("p{}", j + 1), e));
            }
            factors.retain(|s| !s.is_empty());
            let mag = if neg { -c.clone() } else { c.clone() };
            let is_unit = mag == C::one();
            if !is_unit || factors.is_empty() {
                factors.insert(0, mag.render());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn power(name: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    X(usize),
    U,
    P(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((i, Tok::Plus)),
            '-' => out.push((i, Tok::Minus)),
            '*' => out.push((i, Tok::Star)),
            '/' => out.push((i, Tok::Slash)),
            '^' => out.push((i, Tok::Caret)),
            '(' => out.push((i, Tok::LParen)),
            ')' => out.push((i, Tok::RParen)),
            '0'..='9' | '.' => {
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        while j < b.len() && b[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Tok::Num(s[start..i].to_string())));
                continue;
            }
            'x' | 'p' | 'u' => {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &s[start + 1..i];
                let tok = if c == 'u' {
                    if !digits.is_empty() {
                        return Err(Error::parse(start, "u takes no index"));
                    }
                    Tok::U
                } else {
                    let idx = if digits.is_empty() {
                        1
                    } else {
                        digits
                            .parse::<usize>()
                            .map_err(|_| Error::parse(start, "bad variable index"))?
                    };
                    if idx == 0 {
                        return Err(Error::parse(start, "variable indices start at 1"));
                    }
                    if c == 'x' {
                        Tok::X(idx)
                    } else {
                        Tok::P(idx)
                    }
                };
                if i < b.len() && (b[i] as char).is_ascii_alphabetic() {
                    return Err(Error::parse(
                        start,
                        format!("unknown identifier near '{}'", &s[start..]),
                    ));
                }
                out.push((start, tok));
                continue;
            }
            _ => return Err(Error::parse(i, format!("unexpected character '{c}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, C> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    n: usize,
    end: usize,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff> Parser<'_, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<PolyPHamiltonian<C>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyPHamiltonian<C>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let c = as_constant(&d)
                        .ok_or_else(|| Error::parse(at, "can only divide by a constant"))?;
                    if c.is_zero() {
                        return Err(Error::parse(at, "division by zero"));
                    }
                    acc = acc.scale(&(C::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<PolyPHamiltonian<C>> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolyPHamiltonian<C>> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        let e = match self.toks.get(self.pos) {
            Some((_, Tok::Num(s))) => s
                .parse::<u32>()
                .map_err(|_| Error::parse(at, "exponent must be a non-negative integer"))?,
            _ => return Err(Error::parse(at, "expected an integer exponent")),
        };
        self.pos += 1;
        let mut out = PolyPHamiltonian::constant(self.n, C::one());
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<PolyPHamiltonian<C>> {
        let at = self.here();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let c = C::parse_literal(&s)
                    .ok_or_else(|| Error::parse(at, format!("bad number '{s}'")))?;
                Ok(PolyPHamiltonian::constant(self.n, c))
            }
            Tok::X(i) => self.indexed(at, i, PolyPHamiltonian::x),
            Tok::P(i) => self.indexed(at, i, PolyPHamiltonian::p),
            Tok::U => Ok(PolyPHamiltonian::u(self.n)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::parse(self.here(), "expected ')'")),
                }
            }
            other => Err(Error::parse(at, format!("unexpected token {other:?}"))),
        }
    }

    fn indexed(
        &self,
        at: usize,
        i: usize,
        make: fn(usize, usize) -> PolyPHamiltonian<C>,
    ) -> Result<PolyPHamiltonian<C>> {
        if i > self.n {
            return Err(Error::parse(
                at,
                format!("index {i} exceeds dimension {}", self.n),
            ));
        }
        Ok(make(self.n, i - 1))
    }
}

fn as_constant<C: Coeff>(h: &PolyPHamiltonian<C>) -> Option<C> {
    if h.is_zero() {
        return Some(C::zero());
    }
    let n = h.dim();
    let f = h.coefficient(&vec![0; n]);
    if h.monomial_count() == f.len() && f.len() == 1 {
        let c = f.constant_term();
        (!c.is_zero()).then_some(c)
    } else {
        None
    }
}

/// Parses a Hamiltonian on J¹(ℝⁿ). With `n = None` the dimension is the
/// largest variable index used (at least 1).
pub fn parse_hamiltonian<C: Coeff>(s: &str, n: Option<usize>) -> Result<PolyPHamiltonian<C>> {
    let toks = tokenize(s)?;
    let used = toks
        .iter()
        .map(|(_, t)| match t {
            Tok::X(i) | Tok::P(i) => *i,
            _ => 1,
        })
        .max()
        .unwrap_or(1);
    let n = n.unwrap_or(used);
    if n == 0 {
        return Err(Error::Precondition(
            "jet dimension must be at least 1".into(),
        ));
    }
    let mut p = Parser::<C> {
        toks: &toks,
        pos: 0,
        n,
        end: s.len(),
        _c: std::marker::PhantomData,
    };
    let h = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::parse(p.here(), "unexpected trailing input"));
    }
    Ok(h)
}

impl FromStr for RationalHamiltonian {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_hamiltonian(s, None)
    }
}

impl FromStr for FloatHamiltonian {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_hamiltonian(s, None)
    }
}
