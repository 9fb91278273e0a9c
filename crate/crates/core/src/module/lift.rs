//! The Euclidean ring a base is lifted to: Z for Z, Z/m, F_p and F_p[x] for
//! F_p[x]; elements stay `RingElement`s.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Euclid, FpX, Mat, ZZ};
use crate::ring::{BaseRing, Mono, Poly, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub base: BaseRing,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Z,
    Fpx(FpX),
}

impl Lift {
    pub fn new(base: &BaseRing) -> Result<Lift> {
        let kind = match base {
            BaseRing::Integers | BaseRing::IntegersMod(_) | BaseRing::PrimeField(_) => Kind::Z,
            BaseRing::UnivariatePoly(c, _) => match &**c {
                BaseRing::PrimeField(p) => Kind::Fpx(FpX::new(p.clone())),
                other => return Err(Error::NotEuclidean(format!("{other}[x] is not a principal ideal domain"))),
            },
            other => return Err(Error::NotEuclidean(other.to_string())),
        };
        Ok(Lift { base: base.clone(), kind })
    }

    /// Extra relation scalar: m for Z/m and F_p, none otherwise.
    pub fn modulus(&self) -> Option<BigInt> {
        match (&self.base, &self.kind) {
            (BaseRing::IntegersMod(m) | BaseRing::PrimeField(m), Kind::Z) => Some(m.clone()),
            _ => None,
        }
    }

    /// The lifted ring as a BaseRing (Z or F_p[x]).
    pub fn lifted_ring(&self) -> BaseRing {
        match self.kind {
            Kind::Z => BaseRing::Integers,
            Kind::Fpx(_) => self.base.clone(),
        }
    }

    /// Canonical base element of a lifted value.
    pub fn down(&self, a: &RingElement) -> RingElement {
        match a {
            RingElement::Int(v) => self.base.from_int(v.clone()),
            other => other.clone(),
        }
    }

    pub fn down_mat(&self, a: &Mat<RingElement>) -> Mat<RingElement> {
        Mat::from_fn(a.rows, a.cols, |i, j| self.down(a.get(i, j)))
    }

    fn dense(&self, a: &RingElement) -> Vec<BigInt> {
        let p = a.as_poly();
        let deg = p.degree().map_or(0, |d| d as usize + 1);
        let mut v = vec![BigInt::zero(); deg];
        for (e, c) in &p.terms {
            v[e.0[0] as usize] = c.clone();
        }
        v
    }

    fn sparse(&self, v: &[BigInt]) -> RingElement {
        let mut p = Poly::zero(1);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Mono(vec![i as u32]), c.clone());
            }
        }
        RingElement::Poly(p)
    }
}

impl Euclid for Lift {
    type E = RingElement;

    fn zero(&self) -> RingElement {
        match &self.kind {
            Kind::Z => RingElement::Int(BigInt::zero()),
            Kind::Fpx(_) => RingElement::Poly(Poly::zero(1)),
        }
    }
    fn one(&self) -> RingElement {
        match &self.kind {
            Kind::Z => RingElement::Int(BigInt::one()),
            Kind::Fpx(f) => self.sparse(&f.one()),
        }
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Int(v) => v.is_zero(),
            RingElement::Poly(p) => p.is_zero(),
            RingElement::Loc { num, .. } => num.is_zero(),
        }
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match &self.kind {
            Kind::Z => RingElement::Int(a.as_int() + b.as_int()),
            Kind::Fpx(_) => self.base.add(a, b),
        }
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        match &self.kind {
            Kind::Z => RingElement::Int(-a.as_int()),
            Kind::Fpx(_) => self.base.neg(a),
        }
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match &self.kind {
            Kind::Z => RingElement::Int(a.as_int() * b.as_int()),
            Kind::Fpx(_) => self.base.mul(a, b),
        }
    }
    fn divrem(&self, a: &RingElement, b: &RingElement) -> (RingElement, RingElement) {
        match &self.kind {
            Kind::Z => {
                let (q, r) = ZZ.divrem(a.as_int(), b.as_int());
                (RingElement::Int(q), RingElement::Int(r))
            }
            Kind::Fpx(f) => {
                let (q, r) = f.divrem(&self.dense(a), &self.dense(b));
                (self.sparse(&q), self.sparse(&r))
            }
        }
    }
    fn norm(&self, a: &RingElement) -> BigInt {
        match &self.kind {
            Kind::Z => ZZ.norm(a.as_int()),
            Kind::Fpx(f) => f.norm(&self.dense(a)),
        }
    }
    fn normal_unit(&self, a: &RingElement) -> (RingElement, RingElement) {
        match &self.kind {
            Kind::Z => {
                let (u, v) = ZZ.normal_unit(a.as_int());
                (RingElement::Int(u), RingElement::Int(v))
            }
            Kind::Fpx(f) => {
                let (u, v) = f.normal_unit(&self.dense(a));
                (self.sparse(&u), self.sparse(&v))
            }
        }
    }
}

/// Matrix product with base-ring arithmetic (any base, including multivariate).
pub fn base_mat_mul(base: &BaseRing, a: &Mat<RingElement>, b: &Mat<RingElement>) -> Mat<RingElement> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut m = Mat::filled(a.rows, b.cols, base.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if base.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if !base.is_zero(y) {
                    let v = base.add(m.get(i, j), &base.mul(x, y));
                    m.set(i, j, v);
                }
            }
        }
    }
    m
}
