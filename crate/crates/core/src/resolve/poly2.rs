//! Sparse polynomials in two variables over the rationals.
//!
//! The resolution engine keeps every strict transform in local coordinates
//! `(u, v)` centred at the point under study; the textual form uses `x` and
//! `y`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::{fmt_rat, Poly, Rat};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    /// `(i, j) -> coefficient of x^i y^j`, no zero entries.
    terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Rat) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Poly2::constant(Rat::one())
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    pub fn x() -> Self {
        Poly2::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly2::monomial(Rat::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, key: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.push(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.push((i + k, j + l), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(&k, a)| (k, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut out = Poly2::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicity at the origin; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(0, 0))
    }

    /// Strict transform in the chart `x = x' y`, where the exceptional curve
    /// is `{y = 0}`.
    pub fn chart_y(&self) -> Poly2 {
        let m = self.order().unwrap_or(0);
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, i + j - m), c.clone()))
                .collect(),
        }
    }

    /// Strict transform in the chart `y = y' x`, where the exceptional curve
    /// is `{x = 0}`.
    pub fn chart_x(&self) -> Poly2 {
        let m = self.order().unwrap_or(0);
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + j - m, j), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `x -> x + c`.
    pub fn shift_x(&self, c: &Rat) -> Poly2 {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.terms {
            // binomial expansion of (x + c)^i
            let mut binom = Rat::one();
            let mut cpow: Vec<Rat> = Vec::with_capacity(i as usize + 1);
            cpow.push(Rat::one());
            for _ in 0..i {
                let next = cpow.last().expect("nonempty") * c;
                cpow.push(next);
            }
            for k in 0..=i {
                out.push((k, j), a * &binom * &cpow[(i - k) as usize]);
                binom =
                    binom * Rat::from_integer((i - k).into()) / Rat::from_integer((k + 1).into());
            }
        }
        out
    }

    /// `p(x, 0)` as a polynomial in `x`.
    pub fn on_x_axis(&self) -> Poly {
        let mut coeffs = vec![Rat::zero(); self.degree_x().unwrap_or(0) as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                coeffs[i as usize] = c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// `p(x, t)` as a polynomial in `x`.
    pub fn at_y(&self, t: &Rat) -> Poly {
        let mut coeffs = vec![Rat::zero(); self.degree_x().unwrap_or(0) as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[i as usize] += c * num_traits::pow(t.clone(), j as usize);
        }
        Poly::new(coeffs)
    }

    /// `p(t, y)` as a polynomial in `y`.
    pub fn at_x(&self, t: &Rat) -> Poly {
        self.swap().at_y(t)
    }

    pub fn swap(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// Whether `self = c * other` for some nonzero rational `c`.
    pub fn is_proportional(&self, other: &Poly2) -> bool {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return false;
        }
        let mut ratio: Option<Rat> = None;
        for ((k1, a), (k2, b)) in self.terms.iter().zip(&other.terms) {
            if k1 != k2 {
                return false;
            }
            let r = a / b;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                Some(_) => return false,
            }
        }
        true
    }

    pub fn parse(text: &str) -> Result<Poly2, String> {
        let norm = text.replace('\u{2212}', "-");
        let mut p = Parser {
            src: norm.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(format!(
                "unexpected {:?} at offset {}",
                p.src[p.pos] as char, p.pos
            ));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly2, String> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2, String> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err("division by zero".into());
                    }
                    acc = acc.scale(&(Rat::one() / d));
                }
                Some(c) if c == b'(' || c == b'x' || c == b'y' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly2, String> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            if e.is_negative() || e > Rat::from_integer(64.into()) {
                return Err(format!("unsupported exponent {}", fmt_rat(&e)));
            }
            let e: u32 = e
                .to_integer()
                .try_into()
                .map_err(|_| "exponent too large".to_string())?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly2, String> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly2::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Poly2::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(format!("expected ')' at offset {}", self.pos));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly2::constant(self.integer()?)),
            Some(c) => Err(format!("unexpected {:?} at offset {}", c as char, self.pos)),
            None => Err("unexpected end of input".into()),
        }
    }

    fn integer(&mut self) -> Result<Rat, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a number at offset {start}"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Rat::from_integer(s.parse().expect("digits parse")))
    }
}

/// Descending total degree, then descending power of `x`.
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse((k.0 + k.1, k.0)));
        for (n, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mono = match *k {
                (0, 0) => String::new(),
                (i, j) => {
                    let v = |name: &str, e: u32| match e {
                        0 => None,
                        1 => Some(name.to_string()),
                        e => Some(format!("{name}^{e}")),
                    };
                    [v("x", i), v("y", j)]
                        .into_iter()
                        .flatten()
                        .collect::<Vec<_>>()
                        .join("*")
                }
            };
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => fmt_rat(&mag),
                (false, true) => mono,
                (false, false) => format!("{}*{}", fmt_rat(&mag), mono),
            };
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
