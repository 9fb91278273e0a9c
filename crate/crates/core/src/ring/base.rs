//! Base rings and their canonical elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Mono, Poly};
use crate::arith::{big, is_prime, modp};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseRing {
    Integers,
    IntegersMod(BigInt),
    PrimeField(BigInt),
    InvertedIntegers(BigInt),
    UnivariatePoly(Box<BaseRing>, String),
    MultivariatePoly(Box<BaseRing>, Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingElement {
    Int(BigInt),
    /// `num / n^exp` in Z[1/n] with `exp` minimal.
    Loc { num: BigInt, exp: u32 },
    Poly(Poly),
}

impl BaseRing {
    pub fn integers_mod(m: i64) -> BaseRing {
        BaseRing::IntegersMod(big(m))
    }

    pub fn prime_field(p: i64) -> BaseRing {
        BaseRing::PrimeField(big(p))
    }

    pub fn poly(coeff: BaseRing, var: &str) -> BaseRing {
        BaseRing::UnivariatePoly(Box::new(coeff), var.to_string())
    }

    /// Characteristic-style modulus of the scalars: 0 for Z and Z[1/n].
    pub fn modulus(&self) -> BigInt {
        match self {
            BaseRing::IntegersMod(m) | BaseRing::PrimeField(m) => m.clone(),
            BaseRing::Integers | BaseRing::InvertedIntegers(_) => BigInt::zero(),
            BaseRing::UnivariatePoly(c, _) | BaseRing::MultivariatePoly(c, _) => c.modulus(),
        }
    }

    pub fn coefficient_ring(&self) -> &BaseRing {
        match self {
            BaseRing::UnivariatePoly(c, _) | BaseRing::MultivariatePoly(c, _) => c,
            other => other,
        }
    }

    pub fn vars(&self) -> Vec<String> {
        match self {
            BaseRing::UnivariatePoly(_, v) => vec![v.clone()],
            BaseRing::MultivariatePoly(_, vs) => vs.clone(),
            _ => vec![],
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars().len()
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, BaseRing::UnivariatePoly(..) | BaseRing::MultivariatePoly(..))
    }

    fn validate(&self) -> Result<()> {
        match self {
            BaseRing::Integers => Ok(()),
            BaseRing::IntegersMod(m) => {
                if m < &big(2) {
                    Err(Error::Parse(format!("modulus {m} must be at least 2")))
                } else {
                    Ok(())
                }
            }
            BaseRing::PrimeField(p) => {
                if is_prime(p) {
                    Ok(())
                } else {
                    Err(Error::Parse(format!("{p} is not prime")))
                }
            }
            BaseRing::InvertedIntegers(n) => {
                if n < &big(2) {
                    Err(Error::Parse(format!("inverted integer {n} must be at least 2")))
                } else {
                    Ok(())
                }
            }
            BaseRing::UnivariatePoly(c, v) => {
                c.validate_coeff()?;
                check_var(v)
            }
            BaseRing::MultivariatePoly(c, vs) => {
                c.validate_coeff()?;
                let mut seen = std::collections::BTreeSet::new();
                for v in vs {
                    check_var(v)?;
                    if !seen.insert(v) {
                        return Err(Error::Parse(format!("repeated variable {v}")));
                    }
                }
                if vs.len() < 2 {
                    return Err(Error::Parse("multivariate ring needs two or more variables".into()));
                }
                Ok(())
            }
        }
    }

    fn validate_coeff(&self) -> Result<()> {
        match self {
            BaseRing::Integers | BaseRing::IntegersMod(_) | BaseRing::PrimeField(_) => self.validate(),
            BaseRing::InvertedIntegers(_) => Err(Error::Unsupported(
                "polynomial rings over Z[1/n] have no element arithmetic here".into(),
            )),
            _ => Err(Error::Parse("nested polynomial ring".into())),
        }
    }

    // ---- element arithmetic ----

    pub fn zero(&self) -> RingElement {
        self.from_int(BigInt::zero())
    }

    pub fn one(&self) -> RingElement {
        self.from_int(BigInt::one())
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        self.from_int(big(v))
    }

    pub fn from_int(&self, v: BigInt) -> RingElement {
        match self {
            BaseRing::Integers => RingElement::Int(v),
            BaseRing::IntegersMod(m) | BaseRing::PrimeField(m) => RingElement::Int(modp(&v, m)),
            BaseRing::InvertedIntegers(n) => loc_canon(v, 0, n),
            BaseRing::UnivariatePoly(..) | BaseRing::MultivariatePoly(..) => {
                RingElement::Poly(Poly::constant(self.nvars(), v, &self.modulus()))
            }
        }
    }

    pub fn var(&self, name: &str) -> Result<RingElement> {
        let vars = self.vars();
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name} in {self}")))?;
        Ok(RingElement::Poly(Poly::monomial(
            vars.len(),
            Mono::var(vars.len(), i),
            BigInt::one(),
            &self.modulus(),
        )))
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Int(v) => v.is_zero(),
            RingElement::Loc { num, .. } => num.is_zero(),
            RingElement::Poly(p) => p.is_zero(),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.binop(a, b, Op::Add)
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.binop(a, b, Op::Mul)
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        match (self, a) {
            (BaseRing::InvertedIntegers(_), RingElement::Loc { num, exp }) => {
                RingElement::Loc { num: -num, exp: *exp }
            }
            (_, RingElement::Int(v)) => self.from_int(-v),
            (_, RingElement::Poly(p)) => RingElement::Poly(p.neg(&self.modulus())),
            _ => panic!("element {a:?} does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &RingElement, k: u32) -> RingElement {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    fn binop(&self, a: &RingElement, b: &RingElement, op: Op) -> RingElement {
        match self {
            BaseRing::Integers | BaseRing::IntegersMod(_) | BaseRing::PrimeField(_) => {
                let (x, y) = (a.as_int(), b.as_int());
                let r = match op {
                    Op::Add => x + y,
                    Op::Mul => x * y,
                };
                self.from_int(r)
            }
            BaseRing::InvertedIntegers(n) => {
                let (RingElement::Loc { num: x, exp: i }, RingElement::Loc { num: y, exp: j }) = (a, b)
                else {
                    panic!("element does not belong to {self}");
                };
                match op {
                    Op::Add => {
                        let e = (*i).max(*j);
                        let x = x * crate::arith::pow(n, (e - i) as u64);
                        let y = y * crate::arith::pow(n, (e - j) as u64);
                        loc_canon(x + y, e, n)
                    }
                    Op::Mul => loc_canon(x * y, i + j, n),
                }
            }
            _ => {
                let m = self.modulus();
                let (RingElement::Poly(x), RingElement::Poly(y)) = (a, b) else {
                    panic!("element does not belong to {self}");
                };
                RingElement::Poly(match op {
                    Op::Add => x.add(y, &m),
                    Op::Mul => x.mul(y, &m),
                })
            }
        }
    }

    /// Unit test for scalar rings; polynomial units are the constant units
    /// when the coefficient ring is reduced (always true for supported bases
    /// except Z/m with m not squarefree, where nilpotent-coefficient units are
    /// also detected by reduction mod the radical).
    pub fn is_unit(&self, a: &RingElement) -> bool {
        match (self, a) {
            (BaseRing::Integers, RingElement::Int(v)) => v.abs().is_one(),
            (BaseRing::IntegersMod(m) | BaseRing::PrimeField(m), RingElement::Int(v)) => v.gcd(m).is_one(),
            (BaseRing::InvertedIntegers(n), RingElement::Loc { num, .. }) => {
                let mut r = num.abs();
                if r.is_zero() {
                    return false;
                }
                for (p, _) in crate::arith::factor(n) {
                    while (&r % &p).is_zero() {
                        r /= &p;
                    }
                }
                r.is_one()
            }
            (_, RingElement::Poly(p)) => {
                let m = self.modulus();
                let rad: BigInt = crate::arith::factor(&m).iter().map(|(q, _)| q.clone()).product();
                let c0 = p.coeff(&Mono::one(p.nvars));
                let coeff = self.coefficient_ring().clone();
                if !coeff.is_unit(&coeff.from_int(c0)) {
                    return false;
                }
                // all higher coefficients nilpotent
                p.terms
                    .iter()
                    .filter(|(e, _)| e.degree() > 0)
                    .all(|(_, c)| !m.is_zero() && (c % &rad).is_zero())
            }
            _ => false,
        }
    }

    pub fn render(&self, a: &RingElement) -> String {
        match a {
            RingElement::Int(v) => v.to_string(),
            RingElement::Loc { num, exp } => {
                if *exp == 0 {
                    num.to_string()
                } else if let BaseRing::InvertedIntegers(n) = self {
                    let d = crate::arith::pow(n, *exp as u64);
                    format!("{num}/{d}")
                } else {
                    unreachable!()
                }
            }
            RingElement::Poly(p) => p.render(&self.vars()),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<RingElement> {
        let mut p = ExprParser { ring: self, s: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input in element {s:?}")));
        }
        Ok(v)
    }

    /// Canonical constant coefficient of a polynomial or the scalar itself.
    pub fn scalar_part(&self, a: &RingElement) -> BigInt {
        match a {
            RingElement::Int(v) => v.clone(),
            RingElement::Loc { num, exp } => {
                assert_eq!(*exp, 0, "fraction has no integer part");
                num.clone()
            }
            RingElement::Poly(p) => p.coeff(&Mono::one(p.nvars)),
        }
    }
}

fn check_var(v: &str) -> Result<()> {
    let ok = !v.is_empty()
        && v.chars().next().unwrap().is_ascii_alphabetic()
        && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::Parse(format!("bad variable name {v:?}")))
    }
}

fn loc_canon(mut num: BigInt, mut exp: u32, n: &BigInt) -> RingElement {
    if num.is_zero() {
        return RingElement::Loc { num, exp: 0 };
    }
    while exp > 0 && (&num % n).is_zero() {
        num /= n;
        exp -= 1;
    }
    RingElement::Loc { num, exp }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
}

impl RingElement {
    pub fn as_int(&self) -> &BigInt {
        match self {
            RingElement::Int(v) => v,
            _ => panic!("expected an integer element, got {self:?}"),
        }
    }

    pub fn as_poly(&self) -> &Poly {
        match self {
            RingElement::Poly(p) => p,
            _ => panic!("expected a polynomial element, got {self:?}"),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::IntegersMod(m) => write!(f, "Z/{m}"),
            BaseRing::PrimeField(p) => write!(f, "F{p}"),
            BaseRing::InvertedIntegers(n) => write!(f, "Z[1/{n}]"),
            BaseRing::UnivariatePoly(c, v) => write!(f, "{c}[{v}]"),
            BaseRing::MultivariatePoly(c, vs) => write!(f, "{c}[{}]", vs.join(",")),
        }
    }
}

/// Parses `Z | Z/<m> | F<p> | Z[1/<n>] | <base>[<var>,...]`; `Z[x][y]` and
/// `Z[x,y]` denote the same ring.
pub fn parse_ring(spec: &str) -> Result<BaseRing> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let (head, mut rest) = if let Some(r) = s.strip_prefix("Z[1/") {
        let end = r.find(']').ok_or_else(|| Error::Parse(format!("unclosed bracket in {spec:?}")))?;
        let n: BigInt = r[..end]
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer in {spec:?}")))?;
        (BaseRing::InvertedIntegers(n), &r[end + 1..])
    } else if let Some(r) = s.strip_prefix("Z/") {
        let end = r.find('[').unwrap_or(r.len());
        let m: BigInt = r[..end]
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in {spec:?}")))?;
        (BaseRing::IntegersMod(m), &r[end..])
    } else if let Some(r) = s.strip_prefix('F') {
        let end = r.find('[').unwrap_or(r.len());
        let p: BigInt = r[..end]
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in {spec:?}")))?;
        (BaseRing::PrimeField(p), &r[end..])
    } else if let Some(r) = s.strip_prefix('Z') {
        (BaseRing::Integers, r)
    } else {
        return Err(Error::Parse(format!("unrecognised ring {spec:?}")));
    };
    head.validate()?;
    let mut vars: Vec<String> = Vec::new();
    while !rest.is_empty() {
        let r = rest
            .strip_prefix('[')
            .ok_or_else(|| Error::Parse(format!("unexpected {rest:?} in {spec:?}")))?;
        let end = r.find(']').ok_or_else(|| Error::Parse(format!("unclosed bracket in {spec:?}")))?;
        for v in r[..end].split(',') {
            vars.push(v.to_string());
        }
        rest = &r[end + 1..];
    }
    let ring = match vars.len() {
        0 => head,
        1 => BaseRing::UnivariatePoly(Box::new(head), vars.pop().unwrap()),
        _ => BaseRing::MultivariatePoly(Box::new(head), vars),
    };
    ring.validate()?;
    Ok(ring)
}

struct ExprParser<'a> {
    ring: &'a BaseRing,
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn expr(&mut self) -> Result<RingElement> {
        let r = self.ring;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                r.neg(&t)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    acc = self.divide(acc, &d)?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'(' => {
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, a: RingElement, d: &BigInt) -> Result<RingElement> {
        let BaseRing::InvertedIntegers(n) = self.ring else {
            return self.err("division only allowed in Z[1/n]");
        };
        // d must divide a power of n
        let mut k = 0u32;
        let mut pw = BigInt::one();
        while !(&pw % d).is_zero() {
            pw *= n;
            k += 1;
            if k > 64 {
                return self.err("denominator is not a divisor of a power of n");
            }
        }
        let RingElement::Loc { num, exp } = a else { unreachable!() };
        Ok(loc_canon(num * (pw / d), exp + k, n))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn factor(&mut self) -> Result<RingElement> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                v
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.ring.from_int(n)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                self.ring.var(name)?
            }
            _ => return self.err("expected a factor"),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_ring("Z/12").unwrap(), BaseRing::integers_mod(12));
        assert_eq!(parse_ring("F7").unwrap(), BaseRing::prime_field(7));
        assert!(parse_ring("F4").is_err());
        assert!(parse_ring("Z/1").is_err());
        assert!(parse_ring("Q").is_err());
        assert_eq!(parse_ring("Z[1/6]").unwrap(), BaseRing::InvertedIntegers(big(6)));
        assert_eq!(parse_ring("F2[x]").unwrap(), BaseRing::poly(BaseRing::prime_field(2), "x"));
        assert_eq!(parse_ring("Z[x][y]").unwrap(), parse_ring("Z[x,y]").unwrap());
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["Z", "Z/12", "F7", "Z[1/10]", "F3[t]", "Z/4[x]", "F2[s,t,u]", "Z[x,y]"] {
            let r = parse_ring(s).unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(parse_ring(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn elements() {
        let r = parse_ring("Z/6").unwrap();
        assert_eq!(r.parse_element("-1").unwrap(), RingElement::Int(big(5)));
        let l = parse_ring("Z[1/6]").unwrap();
        let a = l.parse_element("1/3").unwrap();
        assert_eq!(l.render(&a), "2/6");
        let b = l.mul(&a, &l.from_i64(3));
        assert_eq!(b, l.one());
        assert!(l.is_unit(&l.from_i64(12)));
        assert!(!l.is_unit(&l.from_i64(5)));
        let p = parse_ring("F2[x,y]").unwrap();
        let e = p.parse_element("(x+y)^2").unwrap();
        assert_eq!(p.render(&e), "x^2+y^2");
        assert_eq!(p.parse_element(&p.render(&e)).unwrap(), e);
        assert!(p.parse_element("z").is_err());
    }

    #[test]
    fn units() {
        let z4x = parse_ring("Z/4[x]").unwrap();
        assert!(z4x.is_unit(&z4x.parse_element("1+2*x").unwrap()));
        assert!(!z4x.is_unit(&z4x.parse_element("1+x").unwrap()));
        let z = BaseRing::Integers;
        assert!(z.is_unit(&z.from_i64(-1)));
    }
}
