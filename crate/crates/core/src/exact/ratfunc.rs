use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{fmt_rat, Poly, Rat};

/// Primitive linear form `nu + n*s` with `n > 0` and `gcd(nu, n) = 1`.
///
/// Ordered by `(n, nu)`, which is the order factors are printed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinFactor {
    n: i64,
    nu: i64,
}

impl LinFactor {
    /// Splits `nu + n*s` into `content * factor`. A constant (`n = 0`)
    /// yields no factor and the whole value as content.
    ///
    /// Panics if both `nu` and `n` are zero.
    pub fn normalize(nu: i64, n: i64) -> (Rat, Option<LinFactor>) {
        assert!(
            nu != 0 || n != 0,
            "the zero linear form has no factorization"
        );
        if n == 0 {
            return (Rat::from_integer(nu.into()), None);
        }
        let mut g = nu.gcd(&n);
        if n < 0 {
            g = -g;
        }
        (
            Rat::from_integer(g.into()),
            Some(LinFactor {
                n: n / g,
                nu: nu / g,
            }),
        )
    }

    pub fn nu(&self) -> i64 {
        self.nu
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// The value of `s` where this factor vanishes, `-nu/n`.
    pub fn root(&self) -> Rat {
        Rat::new((-self.nu).into(), self.n.into())
    }

    pub fn eval(&self, s: &Rat) -> Rat {
        Rat::from_integer(self.nu.into()) + Rat::from_integer(self.n.into()) * s
    }

    pub fn poly(&self) -> Poly {
        Poly::from_ints(&[self.nu, self.n])
    }
}

impl fmt::Display for LinFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "({}+s)", self.nu)
        } else {
            write!(f, "({}+{}*s)", self.nu, self.n)
        }
    }
}

/// Rational function `scalar * numerator / prod(factor^k)` in canonical form.
///
/// The numerator is primitive with integer coefficients and positive leading
/// coefficient, and it does not vanish at the root of any denominator factor.
/// Two values are equal exactly when their fields are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scalar: Rat,
    numerator: Poly,
    denominator: BTreeMap<LinFactor, u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation at the pole s = {0}")]
    AtPole(String),
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            scalar: Rat::zero(),
            numerator: Poly::one(),
            denominator: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_parts(c, Poly::one(), BTreeMap::new())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_parts(Rat::one(), p, BTreeMap::new())
    }

    /// `1 / (nu + n*s)^k`
    pub fn inv_linear(nu: i64, n: i64, k: u32) -> Self {
        let mut t = Terms::new();
        t.push(Rat::one(), Poly::one(), &vec![(nu, n); k as usize]);
        t.finish()
    }

    /// Builds the canonical form of `scalar * numer / prod(den)`, cancelling
    /// common roots by exact synthetic division.
    pub fn from_parts(scalar: Rat, numer: Poly, den: BTreeMap<LinFactor, u32>) -> Self {
        if scalar.is_zero() || numer.is_zero() {
            return Self::zero();
        }
        let mut scalar = scalar;
        let mut numer = numer;
        let mut denominator = BTreeMap::new();
        for (f, k) in den {
            let root = f.root();
            let mut left = k;
            while left > 0 {
                let (q, r) = numer.div_root(&root);
                if !r.is_zero() {
                    break;
                }
                numer = q;
                scalar /= Rat::from_integer(f.n.into());
                left -= 1;
            }
            if left > 0 {
                denominator.insert(f, left);
            }
        }
        let (content, prim) = numer.primitive_part();
        RatFunc {
            scalar: scalar * content,
            numerator: prim,
            denominator,
        }
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinFactor, u32> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator.degree().unwrap_or(0)
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.values().map(|&k| k as usize).sum()
    }

    /// Poles as (location, order), ascending by location.
    pub fn poles(&self) -> Vec<(Rat, u32)> {
        let mut out: Vec<_> = self
            .denominator
            .iter()
            .map(|(f, &k)| (f.root(), k))
            .collect();
        out.sort();
        out
    }

    /// Order of the pole at `s0` (zero when `s0` is not a pole).
    pub fn pole_order(&self, s0: &Rat) -> u32 {
        self.denominator
            .iter()
            .find(|(f, _)| &f.root() == s0)
            .map_or(0, |(_, &k)| k)
    }

    /// Pole order at `s0` and the coefficient of `(s - s0)^-order` in the
    /// Laurent expansion; `None` if `s0` is not a pole.
    pub fn laurent_leading(&self, s0: &Rat) -> Option<(u32, Rat)> {
        let order = self.pole_order(s0);
        if order == 0 {
            return None;
        }
        let mut den = Rat::one();
        for (f, &k) in &self.denominator {
            let v = if &f.root() == s0 {
                Rat::from_integer(f.n().into())
            } else {
                f.eval(s0)
            };
            for _ in 0..k {
                den *= &v;
            }
        }
        Some((order, &self.scalar * self.numerator.eval(s0) / den))
    }

    pub fn evaluate(&self, s0: &Rat) -> Result<Rat, EvalError> {
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        let mut den = Rat::one();
        for (f, &k) in &self.denominator {
            let v = f.eval(s0);
            if v.is_zero() {
                return Err(EvalError::AtPole(fmt_rat(s0)));
            }
            for _ in 0..k {
                den *= &v;
            }
        }
        Ok(&self.scalar * self.numerator.eval(s0) / den)
    }

    fn over_common(&self, den: &BTreeMap<LinFactor, u32>) -> Poly {
        let mut p = self.numerator.scale(&self.scalar);
        for (f, &k) in den {
            let have = self.denominator.get(f).copied().unwrap_or(0);
            for _ in have..k {
                p = &p * &f.poly();
            }
        }
        p
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut den = self.denominator.clone();
        for (f, &k) in &other.denominator {
            let e = den.entry(*f).or_insert(0);
            *e = (*e).max(k);
        }
        let numer = &self.over_common(&den) + &other.over_common(&den);
        Self::from_parts(Rat::one(), numer, den)
    }

    pub fn neg(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        RatFunc {
            scalar: -self.scalar.clone(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.denominator.clone();
        for (f, &k) in &other.denominator {
            *den.entry(*f).or_insert(0) += k;
        }
        Self::from_parts(
            &self.scalar * &other.scalar,
            &self.numerator * &other.numerator,
            den,
        )
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        Self::from_parts(
            &self.scalar * c,
            self.numerator.clone(),
            self.denominator.clone(),
        )
    }

    pub fn parse(text: &str) -> Result<RatFunc, RatFuncParseError> {
        Parser::new(text).ratfunc()
    }
}

/// Canonical ASCII rendering:
/// `scalar * (numerator) / ((nu1+N1*s)^k1 * ...)`, factors sorted by `(N, nu)`.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(
            f,
            "{} * ({}) / (",
            fmt_rat(&self.scalar),
            self.numerator.render("s")
        )?;
        if self.denominator.is_empty() {
            f.write_str("1")?;
        }
        for (i, (fac, &k)) in self.denominator.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{fac}")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        f.write_str(")")
    }
}

/// Accumulates terms `coef * numer / prod(nu_i + n_i*s)` and sums them over
/// one common denominator before a single cancellation pass.
#[derive(Clone, Debug, Default)]
pub struct Terms {
    terms: Vec<(Poly, Vec<LinFactor>)>,
}

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    /// Factors are raw `(nu, n)` pairs; integer content and constant factors
    /// are folded into the coefficient.
    pub fn push(&mut self, coef: Rat, numer: Poly, factors: &[(i64, i64)]) {
        if coef.is_zero() || numer.is_zero() {
            return;
        }
        let mut c = coef;
        let mut fs = Vec::with_capacity(factors.len());
        for &(nu, n) in factors {
            let (content, f) = LinFactor::normalize(nu, n);
            c /= content;
            fs.extend(f);
        }
        self.terms.push((numer.scale(&c), fs));
    }

    pub fn finish(self) -> RatFunc {
        let mut den: BTreeMap<LinFactor, u32> = BTreeMap::new();
        for (_, fs) in &self.terms {
            let mut local: BTreeMap<LinFactor, u32> = BTreeMap::new();
            for f in fs {
                *local.entry(*f).or_insert(0) += 1;
            }
            for (f, k) in local {
                let e = den.entry(f).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let mut total = Poly::zero();
        for (numer, fs) in &self.terms {
            let mut local: BTreeMap<LinFactor, u32> = BTreeMap::new();
            for f in fs {
                *local.entry(*f).or_insert(0) += 1;
            }
            let mut p = numer.clone();
            for (f, &k) in &den {
                let have = local.get(f).copied().unwrap_or(0);
                for _ in have..k {
                    p = &p * &f.poly();
                }
            }
            total = &total + &p;
        }
        RatFunc::from_parts(Rat::one(), total, den)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("rational function syntax error at byte {pos}: {msg}")]
pub struct RatFuncParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, RatFuncParseError> {
        Err(RatFuncParseError {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
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

    fn expect(&mut self, c: u8) -> Result<(), RatFuncParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt, RatFuncParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small(&mut self) -> Result<u32, RatFuncParseError> {
        match self.integer()?.to_u32() {
            Some(v) => Ok(v),
            None => self.err("exponent out of range"),
        }
    }

    /// `INT ['/' INT]`, unsigned.
    fn magnitude(&mut self) -> Result<Rat, RatFuncParseError> {
        let n = self.integer()?;
        let save = self.pos;
        if self.eat(b'/') {
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let d = self.integer()?;
                if d.is_zero() {
                    return self.err("zero denominator");
                }
                return Ok(Rat::new(n, d));
            }
            self.pos = save;
        }
        Ok(Rat::from_integer(n))
    }

    fn term(&mut self) -> Result<Poly, RatFuncParseError> {
        let mut coef = Rat::one();
        let mut has_coef = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coef = self.magnitude()?;
            has_coef = true;
            let save = self.pos;
            if self.eat(b'*') {
                if self.peek() != Some(b's') {
                    self.pos = save;
                    return Ok(Poly::constant(coef));
                }
            } else {
                return Ok(Poly::constant(coef));
            }
        }
        if self.eat(b's') {
            let mut k = 1;
            if self.eat(b'^') {
                k = self.small()?;
            }
            let mut c = vec![Rat::zero(); k as usize + 1];
            c[k as usize] = coef;
            return Ok(Poly::new(c));
        }
        if has_coef {
            return Ok(Poly::constant(coef));
        }
        self.err("expected a term")
    }

    fn poly(&mut self) -> Result<Poly, RatFuncParseError> {
        let mut neg = self.eat(b'-');
        let mut acc = Poly::zero();
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn ratfunc(&mut self) -> Result<RatFunc, RatFuncParseError> {
        let neg = self.eat(b'-');
        let mut scalar = self.magnitude()?;
        if neg {
            scalar = -scalar;
        }
        if self.peek().is_none() && scalar.is_zero() {
            return Ok(RatFunc::zero());
        }
        self.expect(b'*')?;
        self.expect(b'(')?;
        let numer = self.poly()?;
        self.expect(b')')?;
        self.expect(b'/')?;
        self.expect(b'(')?;
        let mut den: BTreeMap<LinFactor, u32> = BTreeMap::new();
        if self.peek() == Some(b'1') {
            self.integer()?;
        } else {
            loop {
                self.expect(b'(')?;
                let p = self.poly()?;
                self.expect(b')')?;
                let mut k = 1;
                if self.eat(b'^') {
                    k = self.small()?;
                }
                if p.degree() != Some(1) {
                    return self.err("denominator factors must be linear in s");
                }
                let (content, prim) = p.primitive_part();
                let ints = prim.to_i64s();
                let Some(ints) = ints else {
                    return self.err("factor coefficients out of range");
                };
                let (c2, f) = LinFactor::normalize(ints[0], ints[1]);
                let f = f.expect("degree one");
                let c = content * c2;
                for _ in 0..k {
                    scalar /= &c;
                }
                *den.entry(f).or_insert(0) += k;
                if !self.eat(b'*') {
                    break;
                }
            }
        }
        self.expect(b')')?;
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(RatFunc::from_parts(scalar, numer, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn one_over(fs: &[(i64, i64)]) -> RatFunc {
        let mut t = Terms::new();
        t.push(Rat::one(), Poly::one(), fs);
        t.finish()
    }

    #[test]
    fn additive_identity_and_like_terms() {
        let a = one_over(&[(1, 1)]);
        assert_eq!(a.add(&RatFunc::zero()), a);
        let two = a.add(&a);
        assert_eq!(two.scalar(), &int(2));
        assert_eq!(two.numerator(), &Poly::one());
        assert_eq!(two.to_string(), "2 * (1) / ((1+s))");
    }

    #[test]
    fn cancellation_in_sum() {
        // -1/(5(1+2s)) + 1/(5(1+2s)(1+s)) = (-(1+s) + 1) / (5(1+2s)(1+s))
        let a = one_over(&[(1, 2)]).scale(&rat(-1, 5));
        let b = one_over(&[(1, 2), (1, 1)]).scale(&rat(1, 5));
        let sum = a.add(&b);
        assert_eq!(sum.scalar(), &rat(-1, 5));
        assert_eq!(sum.evaluate(&int(1)), Ok(rat(-1, 15) + rat(1, 30)));
        assert_eq!(sum.numerator(), &Poly::from_ints(&[0, 1]));
        let den: Vec<_> = sum
            .denominator()
            .iter()
            .map(|(f, &k)| (f.nu(), f.n(), k))
            .collect();
        assert_eq!(den, vec![(1, 1, 1), (1, 2, 1)]);
    }

    #[test]
    fn content_moves_to_scalar() {
        let f = one_over(&[(2, 12), (2, 12)]);
        assert_eq!(f.to_string(), "1/4 * (1) / ((1+6*s)^2)");
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(one_over(&[(1, 1)]).evaluate(&int(1)), Ok(rat(1, 2)));
        assert!(one_over(&[(1, 1)]).evaluate(&int(-1)).is_err());
        let printed = RatFunc::from_parts(
            Rat::one(),
            Poly::from_ints(&[70, 1051, 5138, 7864, -1368]),
            [
                (LinFactor::normalize(10, 57).1.unwrap(), 1),
                (LinFactor::normalize(7, 38).1.unwrap(), 1),
                (LinFactor::normalize(1, 6).1.unwrap(), 2),
                (LinFactor::normalize(1, 1).1.unwrap(), 1),
            ]
            .into_iter()
            .collect(),
        );
        assert_eq!(printed.evaluate(&int(0)), Ok(int(1)));
        assert_eq!(printed.pole_order(&rat(-1, 6)), 2);
    }

    #[test]
    fn full_cancellation_to_polynomial() {
        let f = RatFunc::from_poly(Poly::from_ints(&[1, 1])).mul(&one_over(&[(1, 1)]));
        assert_eq!(f, RatFunc::constant(int(1)));
        assert_eq!(f.to_string(), "1 * (1) / (1)");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(RatFunc::parse("1 * (s) / ((1+s^2))").is_err());
        assert!(RatFunc::parse("1 * (s) /").is_err());
        assert_eq!(RatFunc::parse("0"), Ok(RatFunc::zero()));
    }

    fn small_factor() -> impl Strategy<Value = (i64, i64)> {
        (1i64..8, 0i64..6)
    }

    prop_compose! {
        fn arb_ratfunc()(terms in prop::collection::vec(
            (-20i64..20, 1i64..6, prop::collection::vec(small_factor(), 0..3)), 0..4)) -> RatFunc {
            let mut t = Terms::new();
            for (c, d, fs) in terms {
                t.push(rat(c, d), Poly::one(), &fs);
            }
            t.finish()
        }
    }

    proptest! {
        #[test]
        fn add_commutes_and_subtraction_inverts(a in arb_ratfunc(), b in arb_ratfunc()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }

        #[test]
        fn canonical_rendering_round_trips(a in arb_ratfunc()) {
            let text = a.to_string();
            prop_assert_eq!(RatFunc::parse(&text).unwrap(), a);
        }

        #[test]
        fn vanishing_order_is_additive(
            p in prop::collection::vec(-6i64..6, 1..5),
            q in prop::collection::vec(-6i64..6, 1..5),
            r in prop::sample::select(vec![(-1i64, 1i64), (-1, 2), (1, 3), (0, 1), (2, 1)]),
            extra in 0u32..3,
        ) {
            let root = rat(r.0, r.1);
            let lin = Poly::root_factor(&root).pow(extra);
            let p = &Poly::from_ints(&p) * &lin;
            let q = Poly::from_ints(&q);
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = &p * &q;
            prop_assert_eq!(
                pq.vanishing_order(&root).unwrap(),
                p.vanishing_order(&root).unwrap() + q.vanishing_order(&root).unwrap()
            );
        }
    }
}
