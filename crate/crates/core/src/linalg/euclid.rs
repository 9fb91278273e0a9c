//! Euclidean domains used by the Smith engine: Z and F_p[x].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::Mat;
use crate::arith::{inv_mod, modp};

pub trait Euclid: Clone + Debug {
    type E: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Division with remainder; the remainder has smaller norm than `b`.
    fn divrem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// Euclidean norm used for pivot choice (|a| on Z, degree on F_p[x]).
    fn norm(&self, a: &Self::E) -> BigInt;
    /// Unit `u` with `u*a` the canonical associate, and its inverse.
    fn normal_unit(&self, a: &Self::E) -> (Self::E, Self::E);

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }

    fn divides(&self, a: &Self::E, b: &Self::E) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.divrem(b, a).1)
    }

    fn canonical(&self, a: &Self::E) -> Self::E {
        self.mul(&self.normal_unit(a).0, a)
    }

    fn is_unit(&self, a: &Self::E) -> bool {
        !self.is_zero(a) && self.norm(a) == self.norm(&self.one())
    }

    /// Normalized gcd.
    fn gcd(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.divrem(&x, &y).1;
            x = y;
            y = r;
        }
        if self.is_zero(&x) {
            x
        } else {
            self.canonical(&x)
        }
    }

    fn lcm(&self, a: &Self::E, b: &Self::E) -> Self::E {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let g = self.gcd(a, b);
        self.canonical(&self.mul(&self.divrem(a, &g).0, b))
    }

    fn mat_mul(&self, a: &Mat<Self::E>, b: &Mat<Self::E>) -> Mat<Self::E> {
        assert_eq!(a.cols, b.rows, "dimension mismatch in product");
        let mut m = Mat::filled(a.rows, b.cols, self.zero());
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if self.is_zero(x) {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if !self.is_zero(y) {
                        let v = self.add(m.get(i, j), &self.mul(x, y));
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    fn mat_add(&self, a: &Mat<Self::E>, b: &Mat<Self::E>) -> Mat<Self::E> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Mat::from_fn(a.rows, a.cols, |i, j| self.add(a.get(i, j), b.get(i, j)))
    }

    fn mat_neg(&self, a: &Mat<Self::E>) -> Mat<Self::E> {
        Mat::from_fn(a.rows, a.cols, |i, j| self.neg(a.get(i, j)))
    }

    fn identity(&self, n: usize) -> Mat<Self::E> {
        Mat::from_fn(n, n, |i, j| if i == j { self.one() } else { self.zero() })
    }

    fn zeros(&self, r: usize, c: usize) -> Mat<Self::E> {
        Mat::filled(r, c, self.zero())
    }

    fn is_zero_mat(&self, a: &Mat<Self::E>) -> bool {
        a.data.iter().all(|x| self.is_zero(x))
    }

    fn scalar_mat(&self, n: usize, c: &Self::E) -> Mat<Self::E> {
        Mat::from_fn(n, n, |i, j| if i == j { c.clone() } else { self.zero() })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ZZ;

impl Euclid for ZZ {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn divrem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        // symmetric remainder keeps entries small
        let (q, r) = a.div_mod_floor(b);
        let babs = b.abs();
        if &(&r * 2) > &babs {
            let adj = if b.is_positive() { BigInt::one() } else { -BigInt::one() };
            (q + &adj, r - b)
        } else {
            (q, r)
        }
    }
    fn norm(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
    fn normal_unit(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.is_negative() {
            (-BigInt::one(), -BigInt::one())
        } else {
            (BigInt::one(), BigInt::one())
        }
    }
}

/// F_p[x] with dense coefficient vectors, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpX {
    pub p: BigInt,
}

impl FpX {
    pub fn new(p: BigInt) -> Self {
        FpX { p }
    }

    fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn from_coeffs(&self, c: &[i64]) -> Vec<BigInt> {
        Self::trim(c.iter().map(|&x| modp(&BigInt::from(x), &self.p)).collect())
    }

    pub fn x_pow(&self, k: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::one();
        v
    }

    pub fn degree(&self, a: &[BigInt]) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }
}

impl Euclid for FpX {
    type E = Vec<BigInt>;

    fn zero(&self) -> Vec<BigInt> {
        vec![]
    }
    fn one(&self) -> Vec<BigInt> {
        vec![BigInt::one()]
    }
    fn is_zero(&self, a: &Vec<BigInt>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default();
                modp(&x, &self.p)
            })
            .collect();
        Self::trim(v)
    }
    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        Self::trim(a.iter().map(|c| modp(&-c, &self.p)).collect())
    }
    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        Self::trim(v.into_iter().map(|c| modp(&c, &self.p)).collect())
    }
    fn divrem(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let lead_inv = inv_mod(b.last().unwrap(), &self.p).expect("p prime");
        let mut r = a.clone();
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = modp(&(r.last().unwrap() * &lead_inv), &self.p);
            for (i, y) in b.iter().enumerate() {
                r[shift + i] = modp(&(&r[shift + i] - &c * y), &self.p);
            }
            q[shift] = c;
            r = Self::trim(r);
        }
        (Self::trim(q), r)
    }
    fn norm(&self, a: &Vec<BigInt>) -> BigInt {
        BigInt::from(a.len())
    }
    fn normal_unit(&self, a: &Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
        match a.last() {
            None => (self.one(), self.one()),
            Some(l) => {
                let inv = inv_mod(l, &self.p).expect("p prime");
                (vec![inv], vec![l.clone()])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fpx_division() {
        let r = FpX::new(BigInt::from(3));
        let a = r.from_coeffs(&[1, 0, 1]); // x^2+1
        let b = r.from_coeffs(&[1, 1]); // x+1
        let (q, rem) = r.divrem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert_eq!(rem, r.from_coeffs(&[2]));
        assert_eq!(r.gcd(&r.from_coeffs(&[0, 2]), &r.from_coeffs(&[0, 0, 1])), r.from_coeffs(&[0, 1]));
    }

    #[test]
    fn zz_symmetric_remainder() {
        let (q, r) = ZZ.divrem(&BigInt::from(7), &BigInt::from(4));
        assert_eq!((q, r), (BigInt::from(2), BigInt::from(-1)));
        assert!(ZZ.divides(&BigInt::from(3), &BigInt::from(-9)));
        assert_eq!(ZZ.lcm(&BigInt::from(4), &BigInt::from(6)), BigInt::from(12));
    }
}
