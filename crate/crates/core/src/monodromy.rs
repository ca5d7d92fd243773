//! Monodromy of the Milnor fibration from an ordinary resolution graph
//! (A'Campo): `Delta(t) = (t - 1) prod (t^N_i - 1)^(-chi_i)` over the
//! exceptional curves, with `chi_i` the Euler characteristic of the curve
//! minus its intersections with other components of the total transform of
//! `f`. Form arrows are not part of that total transform and are ignored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact::{divisors, frac_part, Poly, Rat};
use crate::graph::{GraphError, ResGraph, Violation};
use crate::resolve::milnor_from_resolution;

#[derive(Debug, Error)]
pub enum MonodromyError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("graph is not ordinary")]
    NotOrdinary,
    #[error("primitive {order}-th roots of unity have multiplicity {mult}")]
    NegativeMultiplicity { order: u64, mult: i64 },
    #[error("Milnor number mismatch: characteristic polynomial has degree {degree}, resolution gives {resolution}")]
    Inconsistent { degree: i64, resolution: i64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `prod (t^m - 1)^{e_m}`, zero exponents dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycProduct {
    pub factors: BTreeMap<u64, i64>,
}

impl CycProduct {
    pub fn one() -> Self {
        CycProduct::default()
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        let mut p = CycProduct::one();
        for &(m, e) in pairs {
            p.mul_factor(m, e);
        }
        p
    }

    pub fn mul_factor(&mut self, m: u64, e: i64) {
        let slot = self.factors.entry(m).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&m);
        }
    }

    pub fn mul(&self, other: &CycProduct) -> CycProduct {
        let mut p = self.clone();
        for (&m, &e) in &other.factors {
            p.mul_factor(m, e);
        }
        p
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(&m, &e)| m as i64 * e).sum()
    }

    /// Multiplicity of a primitive `d`-th root of unity.
    pub fn root_multiplicity(&self, d: u64) -> i64 {
        self.factors
            .iter()
            .filter(|(&m, _)| m % d == 0)
            .map(|(_, &e)| e)
            .sum()
    }

    /// Orders `d` of the roots of unity occurring, with multiplicities.
    pub fn root_orders(&self) -> BTreeMap<u64, i64> {
        let mut out = BTreeMap::new();
        for &m in self.factors.keys() {
            for d in divisors(m) {
                out.entry(d).or_insert_with(|| self.root_multiplicity(d));
            }
        }
        out.retain(|_, e| *e != 0);
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.root_orders().values().all(|&e| e >= 0)
    }

    /// Multiplicity of `exp(2 pi i s0)` as a root.
    pub fn eigenvalue_multiplicity(&self, s0: &Rat) -> i64 {
        self.root_multiplicity(order_of(s0))
    }

    /// Dense expansion; `None` if the product is not a polynomial.
    pub fn expand(&self) -> Option<Poly> {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (&m, &e) in &self.factors {
            let mut c = vec![0i64; m as usize + 1];
            c[0] = -1;
            c[m as usize] = 1;
            let f = Poly::from_ints(&c).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num = &num * &f;
            } else {
                den = &den * &f;
            }
        }
        let (q, r) = num.div_rem(&den);
        r.is_zero().then_some(q)
    }
}

/// Order of `exp(2 pi i s0)` in the circle group.
pub fn order_of(s0: &Rat) -> u64 {
    frac_part(s0)
        .denom()
        .to_u64()
        .expect("denominator fits in u64")
}

/// Sorted by `m` descending; numerator factors first.
impl fmt::Display for CycProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |m: u64, e: i64| {
            let base = if m == 1 {
                "(t-1)".to_string()
            } else {
                format!("(t^{m}-1)")
            };
            if e.abs() == 1 {
                base
            } else {
                format!("{base}^{}", e.abs())
            }
        };
        let num: Vec<String> = self
            .factors
            .iter()
            .rev()
            .filter(|(_, &e)| e > 0)
            .map(|(&m, &e)| term(m, e))
            .collect();
        let den: Vec<String> = self
            .factors
            .iter()
            .rev()
            .filter(|(_, &e)| e < 0)
            .map(|(&m, &e)| term(m, e))
            .collect();
        let num = if num.is_empty() {
            "1".to_string()
        } else {
            num.join(" ")
        };
        if den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "{num} / {}", den.join(" "))
        }
    }
}

fn checked(g: &ResGraph) -> Result<(), MonodromyError> {
    let v = g.validate();
    if !v.is_empty() {
        return Err(MonodromyError::Invalid(v));
    }
    if !g.is_ordinary() {
        return Err(MonodromyError::NotOrdinary);
    }
    Ok(())
}

/// Characteristic polynomial of the monodromy on `H_1` of the Milnor fibre.
pub fn char_poly(g: &ResGraph) -> Result<CycProduct, MonodromyError> {
    checked(g)?;
    let mut p = CycProduct::from_pairs(&[(1, 1)]);
    for v in g.exceptional() {
        p.mul_factor(v.n, -g.chi_open_curve(&v.id)?);
    }
    for (d, e) in p.root_orders() {
        if e < 0 {
            return Err(MonodromyError::NegativeMultiplicity { order: d, mult: e });
        }
    }
    Ok(p)
}

/// Monodromy zeta function `prod (t^N_i - 1)^(chi_i)`, the inverse of
/// `Delta(t) / (t - 1)`.
pub fn monodromy_zeta(g: &ResGraph) -> Result<CycProduct, MonodromyError> {
    checked(g)?;
    let mut p = CycProduct::one();
    for v in g.exceptional() {
        p.mul_factor(v.n, g.chi_open_curve(&v.id)?);
    }
    Ok(p)
}

/// Degree of the characteristic polynomial, checked against the
/// resolution count.
pub fn milnor(g: &ResGraph) -> Result<u64, MonodromyError> {
    let degree = char_poly(g)?.degree();
    let resolution = milnor_from_resolution(g)?;
    if degree != resolution {
        return Err(MonodromyError::Inconsistent { degree, resolution });
    }
    Ok(degree as u64)
}

/// Whether `exp(2 pi i s0)` is a monodromy eigenvalue, with its multiplicity.
pub fn is_eigenvalue(g: &ResGraph, s0: &Rat) -> Result<(bool, u64), MonodromyError> {
    let m = char_poly(g)?.eigenvalue_multiplicity(s0);
    Ok((m > 0, m.max(0) as u64))
}

/// The polynomial whose roots carry the size-two Jordan blocks of the
/// monodromy of the five-branch example, recorded as reference data.
pub fn jordan_reference() -> CycProduct {
    CycProduct::from_pairs(&[(3, 1), (6, 1), (2, 2), (1, -4)])
}

pub const JORDAN_SIZE2_BLOCKS: u32 = 9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::fixtures;

    #[test]
    fn node_and_cusp() {
        let node = fixtures::graph("node").unwrap();
        let p = char_poly(&node).unwrap();
        assert_eq!(p, CycProduct::from_pairs(&[(1, 1)]));
        assert_eq!(milnor(&node).unwrap(), 1);

        let cusp = fixtures::graph("cusp").unwrap();
        let p = char_poly(&cusp).unwrap();
        assert_eq!(
            p,
            CycProduct::from_pairs(&[(6, 1), (1, 1), (2, -1), (3, -1)])
        );
        assert_eq!(p.expand().unwrap(), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(milnor(&cusp).unwrap(), 2);
    }

    #[test]
    fn five_branch_example() {
        let g = fixtures::graph("fab_fig1").unwrap();
        let p = char_poly(&g).unwrap();
        assert_eq!(
            p,
            CycProduct::from_pairs(&[(1, 1), (57, 2), (38, 3), (18, 3), (19, -5)])
        );
        assert_eq!(
            p.to_string(),
            "(t^57-1)^2 (t^38-1)^3 (t^18-1)^3 (t-1) / (t^19-1)^5"
        );
        assert_eq!(milnor(&g).unwrap(), 188);
        assert_eq!(is_eigenvalue(&g, &rat(-1, 6)).unwrap(), (true, 3));
        assert_eq!(is_eigenvalue(&g, &rat(-1, 19)).unwrap(), (false, 0));
        assert_eq!(
            is_eigenvalue(&g, &int(-1)).unwrap().1,
            p.root_multiplicity(1) as u64
        );
        // decorations for a form do not change the monodromy
        let g2 = fixtures::graph("fab_fig2").unwrap();
        assert_eq!(char_poly(&g2).unwrap(), p);
    }

    #[test]
    fn jordan_reference_roots() {
        let j = jordan_reference();
        assert_eq!(j.degree(), 9);
        assert_eq!(j.degree() as u32, JORDAN_SIZE2_BLOCKS);
        assert!(j.is_polynomial());
        for s0 in [
            rat(-1, 6),
            rat(-1, 2),
            rat(-1, 3),
            rat(-3, 2),
            rat(-5, 3),
            rat(-5, 6),
        ] {
            assert!(j.eigenvalue_multiplicity(&s0) >= 1, "{s0}");
        }
    }

    #[test]
    fn zeta_is_inverse_of_reduced_char_poly() {
        let g = fixtures::graph("fab_fig1").unwrap();
        let z = monodromy_zeta(&g).unwrap();
        let d = char_poly(&g).unwrap();
        let mut prod = z.mul(&d);
        prod.mul_factor(1, -1);
        assert_eq!(prod, CycProduct::one());
    }
}
