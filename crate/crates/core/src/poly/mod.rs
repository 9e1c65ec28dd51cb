//! Sparse polynomials with rational coefficients, and maps built from them.

mod classify;
mod parse;

pub use classify::{b_map_data, classify_at_origin, compose_poly, germ_of, BMapGerm, Classification, PolyMap};
pub use parse::parse_poly;

use crate::linalg::{fmt_q, Q};
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The coordinate `x_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars, "variable x{i} out of range");
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial(e), Q::one());
        p
    }

    pub fn monomial(e: Vec<u32>, c: Q) -> Self {
        let mut p = Poly::zero(e.len());
        p.add_term(Monomial(e), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> Q {
        self.terms.get(&Monomial(e.to_vec())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&vec![0; self.nvars])
    }

    /// `∂/∂x_i` at the origin.
    pub fn linear_coefficient(&self, i: usize) -> Q {
        let mut e = vec![0; self.nvars];
        e[i - 1] = 1;
        self.coefficient(&e)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Q::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.nvars);
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                if k > 0 {
                    t *= num::pow(xi.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes `x_i := subs[i-1]`, giving a polynomial in `n` variables.
    pub fn substitute(&self, subs: &[Poly], n: usize) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        assert!(subs.iter().all(|s| s.nvars == n));
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (s, &k) in subs.iter().zip(&e.0) {
                if k > 0 {
                    t = &t * &s.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Coordinatewise minimum exponent over the support; `None` for zero.
    pub fn content(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect()))
    }

    /// Exact division by `x^e`; every term must be divisible.
    pub fn div_monomial(&self, e: &[u32]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let q: Vec<u32> = m.0.iter().zip(e).map(|(a, b)| a.checked_sub(*b).expect("not divisible")).collect();
            out.add_term(Monomial(q), c.clone());
        }
        out
    }

    pub fn coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    /// Highest term first, e.g. `x1^2*x2 - 3/2*x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qi};

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 3]);
        let c = Monomial(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn arithmetic_and_printing() {
        let x = Poly::var(2, 1);
        let y = Poly::var(2, 2);
        let p = &(&x * &x) - &y.scale(&q(3, 2));
        assert_eq!(p.to_string(), "x1^2 - 3/2*x2");
        assert_eq!(p.eval(&[qi(2), qi(2)]), qi(1));
        assert!((&p - &p).is_zero());
        assert_eq!(Poly::zero(1).to_string(), "0");
    }

    #[test]
    fn substitution() {
        let x = Poly::var(1, 1);
        let x2 = x.pow(2);
        let x3 = x.pow(3);
        assert_eq!(x2.substitute(&[x3], 1), x.pow(6));
    }

    #[test]
    fn content_and_division() {
        let x = Poly::var(2, 1);
        let y = Poly::var(2, 2);
        let p = &(&x * &y) + &(&x.pow(2) * &y);
        assert_eq!(p.content(), Some(vec![1, 1]));
        let u = p.div_monomial(&[1, 1]);
        assert_eq!(u.constant_term(), qi(1));
        assert_eq!(Poly::zero(2).content(), None);
    }
}
