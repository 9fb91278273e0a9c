//! Coefficient rings for Witt vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{inv_mod, modp};
use crate::error::{Error, Result};
use crate::linalg::lattice::{solve_mod, Lattice};
use crate::linalg::mat::Mat;
use crate::ring::{AlgElem, BaseRing, RingElement, TestAlgebra};

pub trait Coeff {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, c: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse, or None for non-units.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Additive order of 1, 0 when infinite.
    fn characteristic(&self) -> BigInt;
    fn render(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

impl Coeff for BaseRing {
    type Elem = RingElement;

    fn zero(&self) -> RingElement {
        BaseRing::zero(self)
    }
    fn one(&self) -> RingElement {
        BaseRing::one(self)
    }
    fn from_int(&self, c: &BigInt) -> RingElement {
        BaseRing::from_int(self, c.clone())
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        BaseRing::add(self, a, b)
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        BaseRing::neg(self, a)
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        BaseRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        BaseRing::is_zero(self, a)
    }

    /// Scalars by the extended Euclidean algorithm; a polynomial unit is a
    /// unit constant plus a nilpotent, inverted by the finite geometric series.
    fn inverse(&self, a: &RingElement) -> Option<RingElement> {
        if !self.is_unit(a) {
            return None;
        }
        let m = self.modulus();
        match a {
            RingElement::Int(v) if !m.is_zero() => Some(RingElement::Int(inv_mod(v, &m)?)),
            RingElement::Int(v) => Some(RingElement::Int(v.clone())),
            RingElement::Poly(_) => {
                let c0 = self.scalar_part(a);
                let c0inv = self.from_int(inv_mod(&c0, &m)?);
                // a = c0 (1 + n), n nilpotent
                let n = BaseRing::sub(self, &BaseRing::mul(self, a, &c0inv), &BaseRing::one(self));
                let mn = BaseRing::neg(self, &n);
                let mut sum = BaseRing::one(self);
                let mut term = BaseRing::one(self);
                loop {
                    term = BaseRing::mul(self, &term, &mn);
                    if BaseRing::is_zero(self, &term) {
                        break;
                    }
                    sum = BaseRing::add(self, &sum, &term);
                }
                Some(BaseRing::mul(self, &sum, &c0inv))
            }
            RingElement::Loc { .. } => None,
        }
    }

    fn characteristic(&self) -> BigInt {
        self.modulus()
    }

    fn render(&self, a: &RingElement) -> String {
        BaseRing::render(self, a)
    }
}

impl Coeff for TestAlgebra {
    type Elem = AlgElem;

    fn zero(&self) -> AlgElem {
        TestAlgebra::zero(self)
    }
    fn one(&self) -> AlgElem {
        TestAlgebra::one(self)
    }
    fn from_int(&self, c: &BigInt) -> AlgElem {
        TestAlgebra::scale(self, c, &TestAlgebra::one(self))
    }
    fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        TestAlgebra::add(self, a, b)
    }
    fn neg(&self, a: &AlgElem) -> AlgElem {
        TestAlgebra::neg(self, a)
    }
    fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        TestAlgebra::mul(self, a, b)
    }

    fn inverse(&self, a: &AlgElem) -> Option<AlgElem> {
        if !self.is_unit(a) {
            return None;
        }
        let r = self.rank();
        let m = Mat::from_rows(self.mul_matrix(a), r);
        solve_mod(&m, &self.moduli, &Lattice::zero(&self.moduli), &TestAlgebra::one(self))
            .map(|mut v| {
                self.reduce(&mut v);
                v
            })
    }

    fn characteristic(&self) -> BigInt {
        self.modulus()
    }

    fn render(&self, a: &AlgElem) -> String {
        self.render_element(a)
    }
}

/// F_p[t₁^{1/D}, …, t_k^{1/D}] with D = p^{n−1}. Exponents are stored as
/// numerators over D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracPolyRing {
    pub p: u64,
    pub den: u32,
    pub vars: Vec<String>,
}

pub type FracPoly = BTreeMap<Vec<u32>, u64>;

impl FracPolyRing {
    pub fn new(p: u64, den: u32, k: usize) -> FracPolyRing {
        let vars = if k == 1 { vec!["t".to_string()] } else { (1..=k).map(|i| format!("t{i}")).collect() };
        FracPolyRing { p, den, vars }
    }

    pub fn monomial(&self, num: &[u32], c: u64) -> FracPoly {
        let mut f = FracPoly::new();
        if c % self.p != 0 {
            f.insert(num.to_vec(), c % self.p);
        }
        f
    }

    /// Whether every exponent is an integer.
    pub fn is_integral(&self, f: &FracPoly) -> bool {
        f.keys().all(|e| e.iter().all(|&x| x % self.den == 0))
    }

    pub fn render_exponent(&self, num: u32) -> String {
        let g = num.gcd(&self.den);
        let (a, b) = (num / g, self.den / g);
        if b == 1 {
            if a == 1 {
                String::new()
            } else {
                format!("^{a}")
            }
        } else {
            format!("^({a}/{b})")
        }
    }

    pub fn render_monomial(&self, num: &[u32]) -> String {
        let parts: Vec<String> = num
            .iter()
            .zip(&self.vars)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, v)| format!("{v}{}", self.render_exponent(e)))
            .collect();
        parts.join("*")
    }
}

impl Coeff for FracPolyRing {
    type Elem = FracPoly;

    fn zero(&self) -> FracPoly {
        FracPoly::new()
    }
    fn one(&self) -> FracPoly {
        self.monomial(&vec![0; self.vars.len()], 1)
    }
    fn from_int(&self, c: &BigInt) -> FracPoly {
        let r = modp(c, &BigInt::from(self.p)).to_u64().unwrap_or(0);
        self.monomial(&vec![0; self.vars.len()], r)
    }
    fn add(&self, a: &FracPoly, b: &FracPoly) -> FracPoly {
        let mut r = a.clone();
        for (e, c) in b {
            let v = (r.get(e).copied().unwrap_or(0) + c) % self.p;
            if v == 0 {
                r.remove(e);
            } else {
                r.insert(e.clone(), v);
            }
        }
        r
    }
    fn neg(&self, a: &FracPoly) -> FracPoly {
        a.iter().map(|(e, c)| (e.clone(), self.p - c)).collect()
    }
    fn mul(&self, a: &FracPoly, b: &FracPoly) -> FracPoly {
        let mut r = FracPoly::new();
        for (e1, c1) in a {
            for (e2, c2) in b {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let v = r.entry(e).or_insert(0);
                *v = (*v + c1 * c2) % self.p;
            }
        }
        r.retain(|_, c| *c != 0);
        r
    }

    fn inverse(&self, a: &FracPoly) -> Option<FracPoly> {
        if a.len() != 1 {
            return None;
        }
        let (e, c) = a.iter().next()?;
        if e.iter().any(|&x| x != 0) {
            return None;
        }
        let inv = inv_mod(&BigInt::from(*c), &BigInt::from(self.p))?;
        Some(self.from_int(&inv))
    }

    fn characteristic(&self) -> BigInt {
        BigInt::from(self.p)
    }

    fn render(&self, a: &FracPoly) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = a
            .iter()
            .rev()
            .map(|(e, c)| {
                let m = self.render_monomial(e);
                match (m.is_empty(), *c == 1) {
                    (true, _) => c.to_string(),
                    (false, true) => m,
                    (false, false) => format!("{c}*{m}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// Additive order of 1 is a power of p (needed for the V-adic inverse).
pub fn p_power_characteristic<C: Coeff>(c: &C, p: u64) -> bool {
    let mut m = c.characteristic();
    if m.is_zero() {
        return false;
    }
    let pb = BigInt::from(p);
    while (&m % &pb).is_zero() {
        m /= &pb;
    }
    m.is_one()
}

pub fn check_char<C: Coeff>(c: &C, p: u64) -> Result<()> {
    if p_power_characteristic(c, p) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "coefficient characteristic {} is not a power of {p}",
            c.characteristic()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_algebra, parse_ring};

    #[test]
    fn polynomial_unit_inverse() {
        let r = parse_ring("Z/4[t]").unwrap();
        let u = r.parse_element("3 + 2*t").unwrap();
        let v = Coeff::inverse(&r, &u).unwrap();
        assert_eq!(BaseRing::mul(&r, &u, &v), BaseRing::one(&r));
        assert!(Coeff::inverse(&r, &r.parse_element("1 + t").unwrap()).is_none());
    }

    #[test]
    fn algebra_inverse() {
        let b = parse_algebra("Z/4[x]/(x^2)").unwrap();
        let u = b.parse_element("1 + x").unwrap();
        let v = Coeff::inverse(&b, &u).unwrap();
        assert_eq!(TestAlgebra::mul(&b, &u, &v), TestAlgebra::one(&b));
        assert!(Coeff::inverse(&b, &b.parse_element("2 + x").unwrap()).is_none());
    }

    #[test]
    fn frac_poly_render_and_arith() {
        let r = FracPolyRing::new(2, 4, 1);
        let a = r.monomial(&[3], 1);
        assert_eq!(r.render(&a), "t^(3/4)");
        assert_eq!(r.render(&r.mul(&a, &r.monomial(&[1], 1))), "t");
        assert!(r.is_zero(&r.add(&a, &a)));
        assert!(!r.is_integral(&a));
    }

    #[test]
    fn characteristic_gate() {
        assert!(check_char(&parse_ring("Z/8").unwrap(), 2).is_ok());
        assert!(check_char(&parse_ring("Z/6").unwrap(), 2).is_err());
        assert!(check_char(&parse_ring("Z").unwrap(), 3).is_err());
    }
}
