//! Finite test algebras: products of monomial quotients of (Z/m)[vars].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::base::{parse_ring, BaseRing, RingElement};
use super::poly::Mono;
use crate::arith::{big, lcm, modp, prime_power};
use crate::error::{Error, Result};

/// One factor of a test algebra: `(Z/modulus)[vars] / (ideal + degree >= trunc)`.
/// A zero modulus means the coefficients are Z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub modulus: BigInt,
    pub vars: Vec<String>,
    pub ideal: Vec<Mono>,
    pub trunc: Option<u32>,
}

/// Coordinates with respect to the standard-monomial basis.
pub type AlgElem = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestAlgebra {
    pub components: Vec<Component>,
    pub basis: Vec<(usize, Mono)>,
    /// Per-basis-element additive order, 0 when infinite.
    pub moduli: Vec<BigInt>,
    /// Explicit images of base-ring variables (variable name -> element text).
    pub hom: BTreeMap<String, String>,
    table: Vec<Option<usize>>,
    units: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    /// Generators (as elements) of the radical as an abelian group.
    pub radical: Vec<AlgElem>,
    pub residue_char: BigInt,
    /// Exponent e of the coefficient ring Z/p^e.
    pub coeff_exponent: u32,
}

impl Component {
    fn standard_monomials(&self) -> Result<Vec<Mono>> {
        let n = self.vars.len();
        let mut caps = Vec::with_capacity(n);
        for i in 0..n {
            let pure = self
                .ideal
                .iter()
                .filter(|g| g.0.iter().enumerate().all(|(j, &e)| j == i || e == 0) && g.0[i] > 0)
                .map(|g| g.0[i])
                .min();
            let cap = match (pure, self.trunc) {
                (Some(a), Some(d)) => a.min(d),
                (Some(a), None) => a,
                (None, Some(d)) => d,
                (None, None) => {
                    return Err(Error::Invalid(format!(
                        "variable {} is not nilpotent: quotient has infinite rank",
                        self.vars[i]
                    )))
                }
            };
            caps.push(cap);
        }
        let mut out = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            let m = Mono(e.clone());
            let in_ideal = self.ideal.iter().any(|g| m.divisible_by(g))
                || self.trunc.is_some_and(|d| m.degree() >= d);
            if !in_ideal {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort();
                    return Ok(out);
                }
                e[i] += 1;
                if e[i] < caps[i] {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    fn render(&self) -> String {
        let k = if self.modulus.is_zero() {
            "Z".to_string()
        } else if crate::arith::is_prime(&self.modulus) {
            format!("F{}", self.modulus)
        } else {
            format!("Z/{}", self.modulus)
        };
        if self.vars.is_empty() {
            return k;
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.ideal.is_empty() {
            let gens: Vec<String> = self
                .ideal
                .iter()
                .map(|g| super::poly::Poly::monomial(self.vars.len(), g.clone(), BigInt::one(), &BigInt::zero()).render(&self.vars))
                .collect();
            parts.push(format!("({})", gens.join(",")));
        }
        if let Some(d) = self.trunc {
            parts.push(format!("({})^{d}", self.vars.join(",")));
        }
        format!("{k}[{}]/{}", self.vars.join(","), parts.join("+"))
    }
}

impl TestAlgebra {
    pub fn new(components: Vec<Component>) -> Result<TestAlgebra> {
        if components.is_empty() {
            return Err(Error::Invalid("test algebra needs at least one factor".into()));
        }
        let mut basis = Vec::new();
        let mut moduli = Vec::new();
        let mut units = Vec::new();
        for (ci, c) in components.iter().enumerate() {
            if c.modulus < BigInt::zero() || c.modulus.is_one() {
                return Err(Error::Invalid(format!("bad coefficient modulus {}", c.modulus)));
            }
            let std = c.standard_monomials()?;
            if std.is_empty() {
                return Err(Error::Invalid("factor of rank 0".into()));
            }
            units.push(basis.len());
            for m in std {
                basis.push((ci, m));
                moduli.push(c.modulus.clone());
            }
        }
        let b = basis.len();
        let index: BTreeMap<(usize, Mono), usize> =
            basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut table = vec![None; b * b];
        for i in 0..b {
            for j in 0..b {
                let (ci, mi) = &basis[i];
                let (cj, mj) = &basis[j];
                if ci == cj {
                    table[i * b + j] = index.get(&(*ci, mi.mul(mj))).copied();
                }
            }
        }
        Ok(TestAlgebra { components, basis, moduli, hom: BTreeMap::new(), table, units })
    }

    /// Single monomial quotient over `k` (a Z/m, F_p or Z).
    pub fn monomial(k: &BaseRing, vars: &[&str], ideal: &[&[u32]], trunc: Option<u32>) -> Result<TestAlgebra> {
        let modulus = match k {
            BaseRing::IntegersMod(m) | BaseRing::PrimeField(m) => m.clone(),
            BaseRing::Integers => BigInt::zero(),
            _ => return Err(Error::Invalid(format!("test algebra coefficients must be Z/m or F_p, got {k}"))),
        };
        let comp = Component {
            modulus,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            ideal: ideal.iter().map(|g| Mono(g.to_vec())).collect(),
            trunc,
        };
        for g in &comp.ideal {
            if g.0.len() != vars.len() {
                return Err(Error::Invalid("ideal generator arity mismatch".into()));
            }
        }
        TestAlgebra::new(vec![comp])
    }

    pub fn product(a: &TestAlgebra, b: &TestAlgebra) -> Result<TestAlgebra> {
        let mut comps = a.components.clone();
        comps.extend(b.components.iter().cloned());
        let mut t = TestAlgebra::new(comps)?;
        t.hom = a.hom.clone();
        for (k, v) in &b.hom {
            if a.hom.get(k).is_some_and(|w| w != v) {
                return Err(Error::Invalid(format!("conflicting explicit images for {k}")));
            }
            t.hom.insert(k.clone(), v.clone());
        }
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// lcm of the factor moduli: the natural coefficient ring Z/modulus.
    pub fn modulus(&self) -> BigInt {
        self.components.iter().fold(BigInt::one(), |acc, c| lcm(&acc, &c.modulus))
    }

    pub fn component_range(&self, ci: usize) -> std::ops::Range<usize> {
        let start = self.units[ci];
        let end = self.units.get(ci + 1).copied().unwrap_or(self.rank());
        start..end
    }

    pub fn zero(&self) -> AlgElem {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn one(&self) -> AlgElem {
        let mut e = self.zero();
        for &u in &self.units {
            e[u] = BigInt::one();
        }
        e
    }

    pub fn basis_elem(&self, i: usize) -> AlgElem {
        let mut e = self.zero();
        e[i] = BigInt::one();
        e
    }

    pub fn reduce(&self, v: &mut AlgElem) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            *x = modp(x, m);
        }
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut r: AlgElem = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut r);
        r
    }

    pub fn neg(&self, a: &AlgElem) -> AlgElem {
        let mut r: AlgElem = a.iter().map(|x| -x).collect();
        self.reduce(&mut r);
        r
    }

    pub fn scale(&self, c: &BigInt, a: &AlgElem) -> AlgElem {
        let mut r: AlgElem = a.iter().map(|x| x * c).collect();
        self.reduce(&mut r);
        r
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i * self.rank() + j]
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let n = self.rank();
        let mut r = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                if let Some(k) = self.table[i * n + j] {
                    r[k] += &a[i] * &b[j];
                }
            }
        }
        self.reduce(&mut r);
        r
    }

    pub fn pow(&self, a: &AlgElem, k: u32) -> AlgElem {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    /// Matrix of multiplication by `a` on the basis (column j = a * e_j).
    pub fn mul_matrix(&self, a: &AlgElem) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if let Some(k) = self.table[i * n + j] {
                    m[k][j] += &a[i];
                }
            }
        }
        for (k, row) in m.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x = modp(x, &self.moduli[k]);
            }
        }
        m
    }

    /// Image of a variable by name: explicit hom entry, else the algebra
    /// variable of the same name in every factor that has it, else 0.
    pub fn var_image(&self, name: &str) -> Result<AlgElem> {
        if let Some(text) = self.hom.get(name) {
            return self.parse_element(text);
        }
        let mut e = self.zero();
        for (ci, c) in self.components.iter().enumerate() {
            if let Some(vi) = c.vars.iter().position(|v| v == name) {
                let m = Mono::var(c.vars.len(), vi);
                if let Some(idx) = self.basis.iter().position(|(cj, mj)| *cj == ci && *mj == m) {
                    e[idx] = BigInt::one();
                }
            }
        }
        Ok(e)
    }

    /// Checks that Z/modulus(base) maps into the algebra.
    pub fn check_base(&self, base: &BaseRing) -> Result<()> {
        let m = base.modulus();
        match base.coefficient_ring() {
            BaseRing::InvertedIntegers(_) => {
                return Err(Error::Unsupported("evaluation over Z[1/n] bases".into()))
            }
            _ => {}
        }
        if !m.is_zero() {
            for c in &self.components {
                if c.modulus.is_zero() || !(&m % &c.modulus).is_zero() {
                    return Err(Error::Invalid(format!(
                        "algebra {self} is not an algebra over {base}: factor modulus {} does not divide {m}",
                        c.modulus
                    )));
                }
            }
        }
        Ok(())
    }

    /// Structure map of a base-ring element.
    pub fn image(&self, base: &BaseRing, a: &RingElement) -> Result<AlgElem> {
        match a {
            RingElement::Int(v) => Ok(self.scale(v, &self.one())),
            RingElement::Loc { .. } => Err(Error::Unsupported("evaluation over Z[1/n] bases".into())),
            RingElement::Poly(p) => {
                let vars = base.vars();
                let imgs: Vec<AlgElem> = vars.iter().map(|v| self.var_image(v)).collect::<Result<_>>()?;
                let mut acc = self.zero();
                for (e, c) in &p.terms {
                    let mut t = self.scale(c, &self.one());
                    for (i, &k) in e.0.iter().enumerate() {
                        if k > 0 {
                            t = self.mul(&t, &self.pow(&imgs[i], k));
                        }
                    }
                    acc = self.add(&acc, &t);
                }
                Ok(acc)
            }
        }
    }

    /// Parses an element written in the variables of the first factor that
    /// carries them; constants map to multiples of 1.
    pub fn parse_element(&self, text: &str) -> Result<AlgElem> {
        let mut vars: Vec<String> = Vec::new();
        for c in &self.components {
            for v in &c.vars {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        let ring = match vars.len() {
            0 => BaseRing::Integers,
            1 => BaseRing::UnivariatePoly(Box::new(BaseRing::Integers), vars[0].clone()),
            _ => BaseRing::MultivariatePoly(Box::new(BaseRing::Integers), vars.clone()),
        };
        let e = ring.parse_element(text)?;
        let mut plain = self.clone();
        plain.hom.clear();
        plain.image(&ring, &e)
    }

    pub fn render_element(&self, a: &AlgElem) -> String {
        let mut parts = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            let mut p = super::poly::Poly::zero(c.vars.len());
            for i in self.component_range(ci) {
                if !a[i].is_zero() {
                    p.terms.insert(self.basis[i].1.clone(), a[i].clone());
                }
            }
            parts.push(p.render(&c.vars));
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join(", "))
        }
    }

    /// Number of elements, if finite.
    pub fn cardinality(&self) -> Option<BigInt> {
        let mut n = BigInt::one();
        for m in &self.moduli {
            if m.is_zero() {
                return None;
            }
            n *= m;
        }
        Some(n)
    }

    /// All elements, in lexicographic coordinate order.
    pub fn elements(&self, cap: usize) -> Result<Vec<AlgElem>> {
        let card = self
            .cardinality()
            .ok_or_else(|| Error::CapExceeded(format!("{self} is infinite")))?;
        if card > BigInt::from(cap) {
            return Err(Error::CapExceeded(format!("{self} has {card} elements, cap {cap}")));
        }
        let mut out = vec![self.zero()];
        for i in 0..self.rank() {
            let m: usize = crate::arith::to_usize(&self.moduli[i]).unwrap();
            let mut next = Vec::with_capacity(out.len() * m);
            for e in &out {
                for v in 0..m {
                    let mut f = e.clone();
                    f[i] = BigInt::from(v);
                    next.push(f);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn is_unit(&self, a: &AlgElem) -> bool {
        // unit iff its image in each factor's residue ring is a unit of the
        // coefficient ring: the constant term is a unit mod the modulus
        for (ci, c) in self.components.iter().enumerate() {
            let u = &a[self.units[ci]];
            let ok = if c.modulus.is_zero() {
                u.is_one() || *u == big(-1)
            } else {
                u.gcd(&c.modulus).is_one()
            };
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn local_data(&self) -> Result<LocalData> {
        if self.components.len() != 1 {
            return Err(Error::NotLocal(format!("{self} is a nontrivial product")));
        }
        let c = &self.components[0];
        let (p, e) = prime_power(&c.modulus)
            .ok_or_else(|| Error::NotLocal(format!("coefficient modulus {} is not a prime power", c.modulus)))?;
        let mut radical = Vec::new();
        for i in 0..self.rank() {
            if self.basis[i].1.degree() > 0 {
                radical.push(self.basis_elem(i));
            } else if e > 1 {
                radical.push(self.scale(&p, &self.basis_elem(i)));
            }
        }
        Ok(LocalData { radical, residue_char: p, coeff_exponent: e })
    }

    /// Exhaustive associativity/commutativity/unit check on basis triples.
    pub fn check_axioms(&self) -> bool {
        let n = self.rank();
        let one = self.one();
        for i in 0..n {
            let ei = self.basis_elem(i);
            if self.mul(&one, &ei) != ei {
                return false;
            }
            for j in 0..n {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return false;
                }
                for k in 0..n {
                    let l = self.basis_product(i, j).and_then(|x| self.basis_product(x, k));
                    let r = self.basis_product(j, k).and_then(|x| self.basis_product(i, x));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Projection onto the factors `comps` as a coordinate selection.
    pub fn project(&self, comps: std::ops::Range<usize>) -> Result<(TestAlgebra, Vec<usize>)> {
        let mut t = TestAlgebra::new(self.components[comps.clone()].to_vec())?;
        t.hom = self.hom.clone();
        let coords: Vec<usize> = comps.flat_map(|ci| self.component_range(ci)).collect();
        Ok((t, coords))
    }
}

impl fmt::Display for TestAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.render()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Parses e.g. `Z/4`, `F2[x]/(x^2)`, `F3[s,t]/(s,t)^2`, `F2[s,t]/(s^2,t^3)+(s,t)^4`,
/// and products `Z/4 x Z/3`.
pub fn parse_algebra(spec: &str) -> Result<TestAlgebra> {
    let pieces: Vec<&str> = spec
        .split(['×'])
        .flat_map(|s| s.split(" x "))
        .map(|s| s.trim())
        .collect();
    let mut comps = Vec::new();
    for piece in pieces {
        comps.push(parse_component(piece)?);
    }
    TestAlgebra::new(comps)
}

fn parse_component(spec: &str) -> Result<Component> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let (ring_part, ideal_part) = match s.find("]/") {
        Some(i) => (&s[..=i], Some(&s[i + 2..])),
        None => (s.as_str(), None),
    };
    let ring = parse_ring(ring_part)?;
    let modulus = match ring.coefficient_ring() {
        BaseRing::IntegersMod(m) | BaseRing::PrimeField(m) => m.clone(),
        BaseRing::Integers => BigInt::zero(),
        other => return Err(Error::Parse(format!("unsupported algebra coefficients {other}"))),
    };
    let vars = ring.vars();
    let mut comp = Component { modulus, vars: vars.clone(), ideal: vec![], trunc: None };
    let Some(ideal) = ideal_part else {
        return Ok(comp);
    };
    for part in split_top(ideal, '+') {
        let (inner, power) = match part.rfind(")^") {
            Some(i) => (&part[..=i], Some(part[i + 2..].parse::<u32>().map_err(|_| Error::Parse(format!("bad power in {part:?}")))?)),
            None => (part, None),
        };
        let inner = inner
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("ideal piece {part:?} must be parenthesised")))?;
        let zr = BaseRing::MultivariatePoly(Box::new(BaseRing::Integers), {
            let mut v = vars.clone();
            if v.len() == 1 {
                v.push("__dummy".into());
            }
            v
        });
        let mut gens: Vec<Mono> = Vec::new();
        for g in inner.split(',') {
            let e = zr.parse_element(g)?;
            let p = e.as_poly();
            if p.terms.len() != 1 {
                return Err(Error::Parse(format!("ideal generator {g:?} is not a monomial")));
            }
            let m = p.terms.keys().next().unwrap();
            gens.push(Mono(m.0[..vars.len()].to_vec()));
        }
        match power {
            None => comp.ideal.extend(gens),
            Some(d) => {
                let all_vars = gens.len() == vars.len()
                    && (0..vars.len()).all(|i| gens.iter().any(|g| *g == Mono::var(vars.len(), i)));
                if all_vars {
                    comp.trunc = Some(comp.trunc.map_or(d, |t| t.min(d)));
                } else {
                    // expand products of d generators
                    let mut acc = vec![Mono::one(vars.len())];
                    for _ in 0..d {
                        let mut next = Vec::new();
                        for a in &acc {
                            for g in &gens {
                                let m = a.mul(g);
                                if !next.contains(&m) {
                                    next.push(m);
                                }
                            }
                        }
                        acc = next;
                    }
                    comp.ideal.extend(acc);
                }
            }
        }
    }
    Ok(comp)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Serialized form of a test algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Text(String),
    Product { product: Vec<AlgebraSpec> },
    Monomial {
        coeff: String,
        #[serde(default)]
        vars: Vec<String>,
        #[serde(default)]
        ideal: IdealSpec,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        hom: BTreeMap<String, String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpec {
    #[serde(default)]
    pub monomials: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<TestAlgebra> {
        match self {
            AlgebraSpec::Text(s) => parse_algebra(s),
            AlgebraSpec::Product { product } => {
                let mut it = product.iter();
                let first = it.next().ok_or_else(|| Error::Invalid("empty product".into()))?.build()?;
                it.try_fold(first, |acc, s| TestAlgebra::product(&acc, &s.build()?))
            }
            AlgebraSpec::Monomial { coeff, vars, ideal, hom } => {
                let mut text = coeff.clone();
                if !vars.is_empty() {
                    text.push_str(&format!("[{}]", vars.join(",")));
                    let mut pieces = Vec::new();
                    if !ideal.monomials.is_empty() {
                        pieces.push(format!("({})", ideal.monomials.join(",")));
                    }
                    if let Some(d) = ideal.trunc {
                        pieces.push(format!("({})^{d}", vars.join(",")));
                    }
                    if !pieces.is_empty() {
                        text.push('/');
                        text.push_str(&pieces.join("+"));
                    }
                }
                let mut t = parse_algebra(&text)?;
                t.hom = hom.clone();
                Ok(t)
            }
        }
    }

    pub fn from_algebra(t: &TestAlgebra) -> AlgebraSpec {
        let specs: Vec<AlgebraSpec> = t
            .components
            .iter()
            .map(|c| {
                let single = TestAlgebra::new(vec![c.clone()]).expect("valid factor");
                let coeff = single.to_string().split('[').next().unwrap().to_string();
                AlgebraSpec::Monomial {
                    coeff,
                    vars: c.vars.clone(),
                    ideal: IdealSpec {
                        monomials: c
                            .ideal
                            .iter()
                            .map(|g| super::poly::Poly::monomial(c.vars.len(), g.clone(), BigInt::one(), &BigInt::zero()).render(&c.vars))
                            .collect(),
                        trunc: c.trunc,
                    },
                    hom: BTreeMap::new(),
                }
            })
            .collect();
        let mut spec = if specs.len() == 1 {
            specs.into_iter().next().unwrap()
        } else {
            AlgebraSpec::Product { product: specs }
        };
        if let AlgebraSpec::Monomial { hom, .. } = &mut spec {
            *hom = t.hom.clone();
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_plane() {
        let b = parse_algebra("F2[s,t]/(s,t)^2").unwrap();
        assert_eq!(b.rank(), 3);
        let s = b.var_image("s").unwrap();
        let t = b.var_image("t").unwrap();
        assert_eq!(b.mul(&s, &t), b.zero());
        assert_eq!(b.mul(&s, &s), b.zero());
        let ld = b.local_data().unwrap();
        assert_eq!(ld.radical.len(), 2);
        assert_eq!(ld.residue_char, big(2));
    }

    #[test]
    fn ranks() {
        assert_eq!(parse_algebra("F3[s,t,u]/(s,t,u)^3").unwrap().rank(), 10);
        let b = parse_algebra("Z/4[x]/(x^2)").unwrap();
        assert_eq!(b.rank(), 2);
        let x = b.var_image("x").unwrap();
        assert_eq!(b.mul(&x, &x), b.zero());
        assert!(parse_algebra("F2[x,y]/(x^2)").is_err());
        assert_eq!(parse_algebra("F2[s,t]/(s^2,t^2)").unwrap().rank(), 4);
        assert_eq!(parse_algebra("F2[s,t]/(s,t)^2+(s^3)").unwrap().rank(), 3);
    }

    #[test]
    fn products_and_locality() {
        let a = parse_algebra("Z/4 x Z/3").unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(a.modulus(), big(12));
        assert!(a.local_data().is_err());
        let z8 = parse_algebra("Z/8").unwrap();
        let ld = z8.local_data().unwrap();
        assert_eq!(ld.radical, vec![vec![big(2)]]);
        assert_eq!(ld.coeff_exponent, 3);
        let p = TestAlgebra::product(&parse_algebra("F2[s]/(s^2)").unwrap(), &parse_algebra("F2").unwrap()).unwrap();
        assert_eq!(p.rank(), 3);
        let e1 = p.basis_elem(0);
        let e2 = p.basis_elem(2);
        assert_eq!(p.mul(&e1, &e2), p.zero());
        assert_eq!(p.add(&e1, &e2), p.one());
        assert!(p.check_axioms());
    }

    #[test]
    fn structure_map() {
        let base = parse_ring("F2[x]").unwrap();
        let b = parse_algebra("F2[x]/(x^2)").unwrap();
        let e = base.parse_element("x^2+x+1").unwrap();
        assert_eq!(b.image(&base, &e).unwrap(), vec![big(1), big(1)]);
        assert!(parse_algebra("Z/8").unwrap().check_base(&parse_ring("Z/12").unwrap()).is_err());
        assert!(parse_algebra("Z/4").unwrap().check_base(&parse_ring("Z/12").unwrap()).is_ok());
    }

    #[test]
    fn spec_roundtrip() {
        for s in ["Z/4", "F2[x]/(x^2)", "F3[s,t]/(s,t)^2", "Z/4 x Z/3"] {
            let t = parse_algebra(s).unwrap();
            let spec = AlgebraSpec::from_algebra(&t);
            let json = serde_json::to_string(&spec).unwrap();
            let back: AlgebraSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap(), t);
        }
    }
}
