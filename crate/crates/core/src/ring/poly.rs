//! Sparse polynomials with integer coefficients, keyed by exponent tuples in
//! graded-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::modp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// True when `other` divides `self`.
    pub fn divisible_by(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over Z or Z/m; `modulus == 0` means Z. Terms never hold zero
/// coefficients, so derived equality is equality of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt, m: &BigInt) -> Self {
        Self::monomial(nvars, Mono::one(nvars), c, m)
    }

    pub fn monomial(nvars: usize, e: Mono, c: BigInt, m: &BigInt) -> Self {
        let mut p = Poly::zero(nvars);
        let c = modp(&c, m);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn coeff(&self, e: &Mono) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn push(&mut self, e: Mono, c: BigInt, m: &BigInt) {
        let v = modp(&(self.coeff(&e) + c), m);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Poly, m: &BigInt) -> Poly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.push(e.clone(), c.clone(), m);
        }
        r
    }

    pub fn neg(&self, m: &BigInt) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let v = modp(&-c, m);
            if !v.is_zero() {
                r.terms.insert(e.clone(), v);
            }
        }
        r
    }

    pub fn sub(&self, other: &Poly, m: &BigInt) -> Poly {
        self.add(&other.neg(m), m)
    }

    pub fn scale(&self, c: &BigInt, m: &BigInt) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, a) in &self.terms {
            let v = modp(&(a * c), m);
            if !v.is_zero() {
                r.terms.insert(e.clone(), v);
            }
        }
        r
    }

    pub fn mul(&self, other: &Poly, m: &BigInt) -> Poly {
        let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                *acc.entry(e1.mul(e2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(e, c)| (e, modp(&c, m)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32, m: &BigInt) -> Poly {
        let mut r = Poly::constant(self.nvars, BigInt::one(), m);
        for _ in 0..k {
            r = r.mul(self, m);
        }
        r
    }

    /// Human-readable form, highest grlex term first, e.g. `x^2*y+2*x-1`.
    pub fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &BigInt::zero();
            let a = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in vars.iter().zip(&e.0) {
                match k {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{k}")),
                }
            }
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> BigInt {
        BigInt::zero()
    }

    #[test]
    fn grlex_order() {
        let a = Mono(vec![2, 0]);
        let b = Mono(vec![0, 3]);
        let c = Mono(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn arithmetic_and_render() {
        let x = Poly::monomial(2, Mono::var(2, 0), BigInt::one(), &z());
        let y = Poly::monomial(2, Mono::var(2, 1), BigInt::one(), &z());
        let s = x.add(&y, &z());
        let sq = s.mul(&s, &z());
        let vars = vec!["x".to_string(), "y".to_string()];
        assert_eq!(sq.render(&vars), "x^2+2*x*y+y^2");
        let m2 = BigInt::from(2);
        let sq2 = s.pow(2, &m2);
        assert_eq!(sq2.render(&vars), "x^2+y^2");
        assert!(s.sub(&s, &z()).is_zero());
    }
}
