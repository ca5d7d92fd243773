use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{bigint_gcd, Rat};

/// Dense univariate polynomial over the rationals. Index is degree.
///
/// The leading coefficient is nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `nu + n*s`
    pub fn linear(nu: Rat, n: Rat) -> Self {
        Self::new(vec![nu, n])
    }

    /// The monomial `s - root`.
    pub fn root_factor(root: &Rat) -> Self {
        Self::new(vec![-root.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Synthetic division by `s - root`: returns (quotient, remainder).
    pub fn div_root(&self, root: &Rat) -> (Poly, Rat) {
        if self.is_zero() {
            return (Self::zero(), Rat::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for k in (0..n).rev() {
            let v = &self.coeffs[k] + &carry * root;
            if k == 0 {
                return (Self::new(quot), v);
            }
            quot[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Largest `k` with `(s - s0)^k` dividing `self`. `None` for the zero polynomial.
    pub fn vanishing_order(&self, s0: &Rat) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_root(s0);
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Splits `self = content * primitive` where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), Self::zero());
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            let v = c.numer() * (&lcm / c.denom());
            g = bigint_gcd(&g, &v);
        }
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        let content = Rat::new(g, lcm);
        let prim = self.scale(&content.recip());
        (content, prim)
    }

    /// Rational roots with multiplicities, sorted ascending.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut p = self.clone();
        let zero = Rat::zero();
        if let Some(k) = p.vanishing_order(&zero) {
            if k > 0 {
                out.push((zero.clone(), k));
                for _ in 0..k {
                    p = p.div_root(&zero).0;
                }
            }
        }
        if p.degree().unwrap_or(0) > 0 {
            let (_, prim) = p.primitive_part();
            let a0 = prim.coeffs[0].numer().abs();
            let an = prim.leading().unwrap().numer().abs();
            let nums = big_divisors(&a0);
            let dens = big_divisors(&an);
            let mut seen = std::collections::BTreeSet::new();
            for u in &nums {
                for v in &dens {
                    for sign in [1i32, -1] {
                        let cand = Rat::new(u * BigInt::from(sign), v.clone());
                        if !seen.insert(cand.clone()) {
                            continue;
                        }
                        if let Some(k) = p.vanishing_order(&cand) {
                            if k > 0 {
                                out.push((cand, k));
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Divides out every rational root, leaving the part without rational roots.
    pub fn strip_rational_roots(&self) -> Poly {
        let mut p = self.clone();
        for (r, k) in self.rational_roots() {
            for _ in 0..k {
                p = p.div_root(&r).0;
            }
        }
        p
    }

    /// Renders in ascending powers of `var`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag_s = super::fmt_rat(&mag);
            match k {
                0 => out.push_str(&mag_s),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag_s);
                        out.push('*');
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push('^');
                        out.push_str(&k.to_string());
                    }
                }
            }
        }
        out
    }
}

/// Positive divisors by trial division. Cofactors left after trial division
/// up to 10^6 are treated as prime.
fn big_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.abs();
    if m.is_zero() {
        return vec![BigInt::one()];
    }
    let mut d = 2u64;
    while d <= 1_000_000 && BigInt::from(d) * BigInt::from(d) <= m {
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            primes.push((bd, e));
        }
        d += 1;
    }
    if !m.is_one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("s"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Poly {
    /// Coefficients as machine integers, if they are all integral and fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn vanishing_order_examples() {
        let p = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(p.vanishing_order(&int(-1)), Some(2));
        assert_eq!(Poly::from_ints(&[2, 1]).vanishing_order(&int(-1)), Some(0));
        let printed = Poly::from_ints(&[70, 1051, 5138, 7864, -1368]);
        assert_eq!(printed.vanishing_order(&rat(-1, 6)), Some(0));
        assert!(!printed.eval(&rat(-1, 6)).is_zero());
        assert_eq!(Poly::zero().vanishing_order(&int(0)), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // s^2 - 1
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(a.gcd(&c), Poly::from_ints(&[1, 1]));
        assert!(a.is_squarefree());
        assert!(!c.is_squarefree());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2s - 1)^2 (s + 3) s (s^2 + 1)
        let p = &(&(&Poly::from_ints(&[-1, 2]).pow(2) * &Poly::from_ints(&[3, 1]))
            * &Poly::from_ints(&[0, 1]))
            * &Poly::from_ints(&[1, 0, 1]);
        assert_eq!(
            p.rational_roots(),
            vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]
        );
        assert_eq!(
            p.strip_rational_roots().monic(),
            Poly::from_ints(&[1, 0, 1])
        );
    }

    #[test]
    fn primitive_part_sign_and_content() {
        let p = Poly::new(vec![rat(1, 2), rat(-3, 4)]);
        let (c, q) = p.primitive_part();
        assert_eq!(c, rat(-1, 4));
        assert_eq!(q, Poly::from_ints(&[-2, 3]));
    }

    #[test]
    fn render_ascending() {
        let p = Poly::from_ints(&[70, 1051, 0, -1, -1368]);
        assert_eq!(p.render("s"), "70 + 1051*s - s^3 - 1368*s^4");
    }
}
