//! Exact arithmetic: big rationals, dense univariate polynomials over the
//! rationals, and rational functions whose denominators are kept as factored
//! products of primitive linear forms `nu + N*s`.

mod poly;
mod ratfunc;

pub use poly::Poly;
pub use ratfunc::{EvalError, LinFactor, RatFunc, RatFuncParseError, Terms};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a`, or `a/b`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let t = text.trim().replace('\u{2212}', "-");
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (t.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Renders `n` or `n/d`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(r: &Rat) -> Rat {
    r - r.floor()
}

pub(crate) fn bigint_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rat("-7/38"), Some(rat(-7, 38)));
        assert_eq!(parse_rat(" 4/2 "), Some(int(2)));
        assert_eq!(parse_rat("\u{2212}2/3"), Some(rat(-2, 3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&rat(10, -57)), "-10/57");
        assert_eq!(fmt_rat(&int(3)), "3");
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac_part(&rat(-1, 6)), rat(5, 6));
        assert_eq!(frac_part(&rat(-3, 2)), rat(1, 2));
        assert_eq!(frac_part(&int(-1)), int(0));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(18), vec![1, 2, 3, 6, 9, 18]);
        assert_eq!(divisors(19), vec![1, 19]);
        assert_eq!(divisors(1), vec![1]);
    }
}
