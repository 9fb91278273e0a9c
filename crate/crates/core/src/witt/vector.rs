//! Witt vectors over a coefficient ring, by substitution into the laws.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::coeff::{check_char, Coeff};
use super::law::{IntPoly, WittLaw};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector<E> {
    pub comps: Vec<E>,
}

pub struct WittRing<C: Coeff> {
    pub coeff: C,
    pub law: Arc<WittLaw>,
}

/// Substitutes `vals` for the variables of `f`, skipping terms that contain
/// a zero variable.
fn substitute<C: Coeff>(c: &C, f: &IntPoly, vals: &[C::Elem]) -> C::Elem {
    let zero: Vec<bool> = vals.iter().map(|v| c.is_zero(v)).collect();
    let mut powers: Vec<Vec<C::Elem>> = vec![Vec::new(); vals.len()];
    let mut acc = c.zero();
    for (exps, coef) in f.iter() {
        if exps.iter().enumerate().any(|(i, &e)| e > 0 && zero[i]) {
            continue;
        }
        let k = c.from_int(coef);
        if c.is_zero(&k) {
            continue;
        }
        let mut term = k;
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let table = &mut powers[i];
            if table.is_empty() {
                table.push(c.one());
            }
            while table.len() <= e as usize {
                let next = c.mul(table.last().unwrap(), &vals[i]);
                table.push(next);
            }
            term = c.mul(&term, &table[e as usize]);
        }
        acc = c.add(&acc, &term);
    }
    acc
}

impl<C: Coeff> WittRing<C> {
    pub fn new(coeff: C, law: Arc<WittLaw>) -> WittRing<C> {
        WittRing { coeff, law }
    }

    pub fn p(&self) -> u64 {
        self.law.p
    }

    pub fn n(&self) -> usize {
        self.law.n as usize
    }

    pub fn vector(&self, comps: Vec<C::Elem>) -> Result<WittVector<C::Elem>> {
        if comps.len() != self.n() {
            return Err(Error::Invalid(format!("expected {} components, got {}", self.n(), comps.len())));
        }
        Ok(WittVector { comps })
    }

    pub fn zero(&self) -> WittVector<C::Elem> {
        WittVector { comps: vec![self.coeff.zero(); self.n()] }
    }

    pub fn one(&self) -> WittVector<C::Elem> {
        self.teichmuller(&self.coeff.one())
    }

    fn binary(&self, laws: &[IntPoly], u: &WittVector<C::Elem>, v: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        let vals: Vec<C::Elem> = u.comps.iter().chain(&v.comps).cloned().collect();
        WittVector { comps: laws.iter().map(|f| substitute(&self.coeff, f, &vals)).collect() }
    }

    pub fn add(&self, u: &WittVector<C::Elem>, v: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        self.binary(&self.law.sum, u, v)
    }

    pub fn mul(&self, u: &WittVector<C::Elem>, v: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        self.binary(&self.law.product, u, v)
    }

    pub fn neg(&self, u: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        self.binary(&self.law.negation, u, &self.zero())
    }

    pub fn sub(&self, u: &WittVector<C::Elem>, v: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        self.add(u, &self.neg(v))
    }

    pub fn teichmuller(&self, a: &C::Elem) -> WittVector<C::Elem> {
        let mut comps = vec![self.coeff.zero(); self.n()];
        comps[0] = a.clone();
        WittVector { comps }
    }

    pub fn verschiebung(&self, u: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        let mut comps = vec![self.coeff.zero()];
        comps.extend(u.comps[..self.n() - 1].iter().cloned());
        WittVector { comps }
    }

    pub fn project_mu(&self, u: &WittVector<C::Elem>) -> C::Elem {
        u.comps[0].clone()
    }

    /// c·u by double-and-add.
    pub fn int_mul(&self, c: &BigInt, u: &WittVector<C::Elem>) -> WittVector<C::Elem> {
        let mut k = c.abs();
        let mut base = if c.is_negative() { self.neg(u) } else { u.clone() };
        let mut acc = self.zero();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.add(&acc, &base);
            }
            k /= &two;
            if !k.is_zero() {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// w_i(u) evaluated in the coefficient ring.
    pub fn ghost(&self, u: &WittVector<C::Elem>, i: usize) -> C::Elem {
        let p = self.p();
        (0..=i).fold(self.coeff.zero(), |acc, j| {
            let a = self.coeff.pow(&u.comps[j], p.pow((i - j) as u32));
            let pj = self.coeff.from_int(&num_traits::pow(BigInt::from(p), j));
            self.coeff.add(&acc, &self.coeff.mul(&pj, &a))
        })
    }

    /// Inverse along the V-filtration: the i-th component of u·w is
    /// w_i·w_i(u) plus terms in w_0..w_{i−1}, so each step is one exact solve.
    /// Ok(None) is the non-unit verdict (μ(u) is not a unit).
    pub fn unit_inverse(&self, u: &WittVector<C::Elem>) -> Result<Option<WittVector<C::Elem>>> {
        check_char(&self.coeff, self.p())?;
        if self.coeff.inverse(&u.comps[0]).is_none() {
            return Ok(None);
        }
        let one = self.one();
        let mut w = self.zero();
        for i in 0..self.n() {
            w.comps[i] = self.coeff.zero();
            let rest = substitute(
                &self.coeff,
                &self.law.product[i],
                &u.comps.iter().chain(&w.comps).cloned().collect::<Vec<_>>(),
            );
            let g = self.coeff.inverse(&self.ghost(u, i)).ok_or_else(|| {
                Error::Internal(format!("ghost component {i} of a unit is not invertible"))
            })?;
            w.comps[i] = self.coeff.mul(&self.coeff.sub(&one.comps[i], &rest), &g);
        }
        if self.mul(u, &w) != one {
            return Err(Error::Internal("V-adic inverse failed verification".into()));
        }
        Ok(Some(w))
    }

    pub fn render(&self, u: &WittVector<C::Elem>) -> String {
        let parts: Vec<String> = u.comps.iter().map(|a| self.coeff.render(a)).collect();
        format!("({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::law::witt_laws;
    use super::*;
    use crate::ring::{parse_ring, BaseRing, RingElement};
    use proptest::prelude::*;

    fn ring(spec: &str, p: u64, n: u32) -> WittRing<BaseRing> {
        WittRing::new(parse_ring(spec).unwrap(), witt_laws(p, n).unwrap())
    }

    fn vec_of(w: &WittRing<BaseRing>, comps: &[&str]) -> WittVector<RingElement> {
        w.vector(comps.iter().map(|s| w.coeff.parse_element(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn one_plus_one_in_w2_f2() {
        let w = ring("F2", 2, 2);
        let one = vec_of(&w, &["1", "0"]);
        assert_eq!(w.add(&one, &one), vec_of(&w, &["0", "1"]));
        // 1 + 1 + 1 + 1 = 0, while 2 ≠ 0
        assert_eq!(w.int_mul(&BigInt::from(4), &one), w.zero());
        assert_ne!(w.int_mul(&BigInt::from(2), &one), w.zero());
    }

    #[test]
    fn v_t_squared_vanishes() {
        let w = ring("F2[t]", 2, 2);
        let v = vec_of(&w, &["0", "t"]);
        assert_eq!(w.mul(&v, &v), w.zero());
    }

    #[test]
    fn identities_with_zero_and_one() {
        let w = ring("F3[t]", 3, 3);
        let u = vec_of(&w, &["1 + t", "t^2", "2"]);
        assert_eq!(w.add(&u, &w.zero()), u);
        assert_eq!(w.mul(&u, &w.one()), u);
        assert_eq!(w.add(&u, &w.neg(&u)), w.zero());
        assert_eq!(w.coeff.render(&w.project_mu(&vec_of(&w, &["1", "t", "0"]))), "1");
    }

    #[test]
    fn teichmuller_is_multiplicative_over_f2() {
        for p_n in [(2, 2), (2, 3)] {
            let w = ring("F2", p_n.0, p_n.1);
            for a in 0..2 {
                for b in 0..2 {
                    let (ea, eb) = (w.coeff.from_i64(a), w.coeff.from_i64(b));
                    let ab = BaseRing::mul(&w.coeff, &ea, &eb);
                    assert_eq!(w.mul(&w.teichmuller(&ea), &w.teichmuller(&eb)), w.teichmuller(&ab));
                }
            }
        }
    }

    #[test]
    fn teichmuller_multiplicative_over_polynomials() {
        let w = ring("F2[t]", 2, 3);
        let a = w.coeff.parse_element("1 + t").unwrap();
        let b = w.coeff.parse_element("t + t^3").unwrap();
        let ab = BaseRing::mul(&w.coeff, &a, &b);
        assert_eq!(w.mul(&w.teichmuller(&a), &w.teichmuller(&b)), w.teichmuller(&ab));
    }

    #[test]
    fn verschiebung_additive_on_w2_f2() {
        let w = ring("F2", 2, 2);
        let all: Vec<_> = (0..4).map(|i| vec_of(&w, &[&(i % 2).to_string(), &(i / 2).to_string()])).collect();
        let mut pairs = 0;
        for u in &all {
            for v in &all {
                assert_eq!(w.add(&w.verschiebung(u), &w.verschiebung(v)), w.verschiebung(&w.add(u, v)));
                pairs += 1;
            }
        }
        assert_eq!(pairs, 16);
    }

    #[test]
    fn inverses() {
        let w = ring("F2[t]", 2, 2);
        let u = vec_of(&w, &["1", "t"]);
        assert_eq!(w.unit_inverse(&u).unwrap(), Some(u.clone()));
        assert_eq!(w.unit_inverse(&vec_of(&w, &["0", "1"])).unwrap(), None);
        assert_eq!(w.unit_inverse(&w.one()).unwrap(), Some(w.one()));
        let w3 = ring("Z/9[t]", 3, 3);
        let u = vec_of(&w3, &["2 + 3*t", "t", "t^2 + 1"]);
        let inv = w3.unit_inverse(&u).unwrap().unwrap();
        assert_eq!(w3.mul(&u, &inv), w3.one());
        assert!(ring("Z", 2, 2).unit_inverse(&ring("Z", 2, 2).one()).is_err());
    }

    #[test]
    fn p_power_kills_everything() {
        let w = ring("F3[t]", 3, 2);
        let u = vec_of(&w, &["1 + t", "2*t^2"]);
        assert_eq!(w.int_mul(&BigInt::from(9), &u), w.zero());
        // p = V F on an F_p-algebra
        let f = vec_of(&w, &["1 + t^3", "2*t^6"]);
        assert_eq!(w.int_mul(&BigInt::from(3), &u), w.verschiebung(&f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_axioms_over_f2_t(cs in proptest::collection::vec(0u8..16, 9)) {
            let w = ring("F2[t]", 2, 3);
            let el = |bits: u8| -> RingElement {
                let terms: Vec<String> = (0..4).filter(|i| bits >> i & 1 == 1).map(|i| format!("t^{i}")).collect();
                let text = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                w.coeff.parse_element(&text).unwrap()
            };
            let mk = |i: usize| w.vector(cs[3 * i..3 * i + 3].iter().map(|&b| el(b)).collect()).unwrap();
            let (a, b, c) = (mk(0), mk(1), mk(2));
            prop_assert_eq!(w.add(&w.add(&a, &b), &c), w.add(&a, &w.add(&b, &c)));
            prop_assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
            prop_assert_eq!(w.mul(&a, &w.add(&b, &c)), w.add(&w.mul(&a, &b), &w.mul(&a, &c)));
            prop_assert_eq!(w.mul(&a, &b), w.mul(&b, &a));
        }
    }
}
