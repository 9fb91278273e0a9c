//! Monomial subrings Σ c_i R₀ t^i + t^c R₀[t] (optionally ⊗ R₀[x]) and
//! principal-ideal arithmetic in the coefficient ring R₀.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_prime};
use crate::error::{Error, Result};
use crate::ring::BaseRing;

/// Principal ideals of R₀ ∈ {Z, Z[1/n], F_p, Z/m}, each stored by a
/// normalized generator: |c| over Z, |c| with the primes of n removed over
/// Z[1/n], gcd(c, m) over Z/m (so the zero ideal is m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideals {
    pub ring: BaseRing,
}

impl Ideals {
    pub fn new(ring: &BaseRing) -> Result<Ideals> {
        match ring {
            BaseRing::Integers | BaseRing::InvertedIntegers(_) | BaseRing::PrimeField(_) | BaseRing::IntegersMod(_) => {
                Ok(Ideals { ring: ring.clone() })
            }
            other => Err(Error::Unsupported(format!("coefficient ring {other}"))),
        }
    }

    pub fn norm(&self, c: &BigInt) -> BigInt {
        match &self.ring {
            BaseRing::Integers => c.abs(),
            BaseRing::InvertedIntegers(n) => {
                let mut r = c.abs();
                if r.is_zero() {
                    return r;
                }
                for (q, _) in factor(n) {
                    while (&r % &q).is_zero() {
                        r /= &q;
                    }
                }
                r
            }
            BaseRing::PrimeField(m) | BaseRing::IntegersMod(m) => c.gcd(m),
            _ => unreachable!(),
        }
    }

    pub fn zero(&self) -> BigInt {
        self.norm(&BigInt::zero())
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        self.norm(a).is_one()
    }

    pub fn is_zero(&self, a: &BigInt) -> bool {
        self.norm(a) == self.zero()
    }

    /// x ∈ (a).
    pub fn contains(&self, a: &BigInt, x: &BigInt) -> bool {
        let (a, x) = (self.norm(a), self.norm(x));
        if a.is_zero() {
            x.is_zero()
        } else {
            (x % a).is_zero()
        }
    }

    /// (a) ⊆ (b).
    pub fn le(&self, a: &BigInt, b: &BigInt) -> bool {
        self.contains(b, a)
    }

    pub fn sum(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(&a.gcd(b))
    }

    pub fn product(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(&(a * b))
    }

    pub fn meet(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (a, b) = (self.norm(a), self.norm(b));
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.norm(&a.lcm(&b))
    }

    /// (a : d) = {r : r·d ∈ (a)}.
    pub fn colon(&self, a: &BigInt, d: &BigInt) -> BigInt {
        let (a, d) = (self.norm(a), self.norm(d));
        if a.is_zero() {
            return if d.is_zero() { BigInt::one() } else { BigInt::zero() };
        }
        self.norm(&(&a / a.gcd(&d)))
    }

    /// Whether R₀/(a) is an integral domain (and nonzero).
    pub fn quotient_is_domain(&self, a: &BigInt) -> bool {
        let a = self.norm(a);
        if a.is_one() {
            return false;
        }
        match &self.ring {
            BaseRing::Integers | BaseRing::InvertedIntegers(_) => a.is_zero() || is_prime(&a),
            BaseRing::PrimeField(_) | BaseRing::IntegersMod(_) => is_prime(&a),
            _ => false,
        }
    }

    /// Whether R₀/(a) is reduced.
    pub fn quotient_is_reduced(&self, a: &BigInt) -> bool {
        let a = self.norm(a);
        a.is_zero() || factor(&a).iter().all(|(_, e)| *e == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSubring {
    pub r0: BaseRing,
    /// Normalized c_0 … c_{cond−1}; c_0 = 1.
    pub coeffs: Vec<BigInt>,
    pub cond: usize,
    pub extra_variable: bool,
    /// Generators as written, for display.
    pub spec: String,
}

impl MonomialSubring {
    pub fn ideals(&self) -> Ideals {
        Ideals::new(&self.r0).expect("validated coefficient ring")
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        if i < self.cond {
            self.coeffs[i].clone()
        } else {
            BigInt::one()
        }
    }

    pub fn is_normal(&self) -> bool {
        self.cond == 0
    }

    /// c_i·c_j ∈ (c_{i+j}) for all i, j.
    pub fn is_closed(&self) -> bool {
        let id = self.ideals();
        (0..self.cond.max(1)).all(|i| {
            (0..self.cond.max(1)).all(|j| id.le(&id.product(&self.coeff(i), &self.coeff(j)), &self.coeff(i + j)))
        }) && id.is_unit(&self.coeff(0))
    }

    /// Builds the subring from monomial generators c·t^i (i ≥ 1).
    pub fn from_generators(r0: BaseRing, gens: &[(BigInt, usize)], extra_variable: bool, spec: &str) -> Result<MonomialSubring> {
        let id = Ideals::new(&r0)?;
        if gens.iter().any(|(_, d)| *d == 0) {
            return Err(Error::Invalid("constant generators are already in the subring".into()));
        }
        let unit_deg: Vec<usize> = gens.iter().filter(|(c, _)| id.is_unit(c)).map(|(_, d)| *d).collect();
        let run = *unit_deg
            .iter()
            .min()
            .ok_or_else(|| Error::Invalid(format!("{spec}: no generator with unit coefficient, conductor is infinite")))?;
        let maxdeg = gens.iter().map(|(_, d)| *d).max().unwrap_or(1);
        let limit = 2 * maxdeg * maxdeg + 4 * maxdeg + 8;
        let mut d: Vec<BigInt> = vec![BigInt::one()];
        for i in 1..limit + run {
            let mut acc = id.zero();
            for (c, dg) in gens {
                if *dg <= i {
                    acc = id.sum(&acc, &id.product(c, &d[i - dg]));
                }
            }
            d.push(acc);
        }
        // the first run of `run` units starts the conductor: multiplying by
        // the unit generator of degree `run` keeps every later degree a unit
        let cond = (0..limit)
            .find(|&s| d[s..s + run].iter().all(|c| id.is_unit(c)))
            .ok_or_else(|| Error::Invalid(format!("{spec}: normalization is not finite over the subring")))?;
        let coeffs = d[..cond].to_vec();
        let ring = MonomialSubring { r0, coeffs, cond, extra_variable, spec: spec.to_string() };
        if !ring.is_closed() {
            return Err(Error::Internal(format!("{spec}: closure is not multiplicatively closed")));
        }
        Ok(ring)
    }

    /// Adjoins c·t^i.
    pub fn adjoin(&self, c: &BigInt, i: usize) -> Result<MonomialSubring> {
        let mut gens = self.generators();
        gens.push((c.clone(), i));
        let mut ring = MonomialSubring::from_generators(self.r0.clone(), &gens, self.extra_variable, "")?;
        ring.spec = ring.render();
        Ok(ring)
    }

    /// Monomial generators: one per degree below the conductor plus t^c … t^{2c−1}.
    pub fn generators(&self) -> Vec<(BigInt, usize)> {
        let id = self.ideals();
        let mut g: Vec<(BigInt, usize)> = (1..self.cond).map(|j| (self.coeff(j), j)).filter(|(c, _)| !id.is_zero(c)).collect();
        for j in self.cond.max(1)..2 * self.cond.max(1) {
            g.push((BigInt::one(), j));
        }
        g
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.generators().iter().map(|(c, i)| render_mono(c, *i)).collect();
        if self.is_normal() {
            parts = vec!["t".into()];
        }
        if self.extra_variable {
            parts.push("x".into());
        }
        if let BaseRing::InvertedIntegers(n) = &self.r0 {
            parts.insert(0, format!("1/{n}"));
            return format!("Z[{}]", parts.join(","));
        }
        format!("{}[{}]", ring_name(&self.r0), parts.join(","))
    }
}

pub fn ring_name(r: &BaseRing) -> String {
    match r {
        BaseRing::Integers => "Z".into(),
        BaseRing::InvertedIntegers(n) => format!("Z[1/{n}]"),
        BaseRing::PrimeField(p) => format!("F{p}"),
        BaseRing::IntegersMod(m) => format!("Z/{m}"),
        other => other.to_string(),
    }
}

pub fn render_mono(c: &BigInt, i: usize) -> String {
    let t = if i == 1 { "t".to_string() } else { format!("t^{i}") };
    if c.is_one() {
        t
    } else {
        format!("{c}{t}")
    }
}

fn parse_coeff_ring(s: &str) -> Result<BaseRing> {
    let s = s.trim();
    let bad = || Error::Parse(format!("unknown coefficient ring {s:?}"));
    if s == "Z" {
        return Ok(BaseRing::Integers);
    }
    if let Some(m) = s.strip_prefix("Z/") {
        let m: BigInt = m.trim().parse().map_err(|_| bad())?;
        if m <= BigInt::one() {
            return Err(bad());
        }
        return Ok(if is_prime(&m) { BaseRing::PrimeField(m) } else { BaseRing::IntegersMod(m) });
    }
    let rest = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')).ok_or_else(bad)?;
    let p: BigInt = rest.trim().parse().map_err(|_| bad())?;
    if !is_prime(&p) {
        return Err(Error::Parse(format!("{p} is not prime")));
    }
    Ok(BaseRing::PrimeField(p))
}

/// `R0[<gens>]` with generators `t^i`, `<c>t^i`, `<c>*t^i`, `1/<n>`, `x`.
pub fn parse_subring(spec: &str) -> Result<MonomialSubring> {
    let s = spec.trim();
    let open = s.find('[').ok_or_else(|| Error::Parse(format!("expected R0[...] in {s:?}")))?;
    if !s.ends_with(']') {
        return Err(Error::Parse(format!("missing closing bracket in {s:?}")));
    }
    let mut r0 = parse_coeff_ring(&s[..open])?;
    let body = &s[open + 1..s.len() - 1];
    let mut gens = Vec::new();
    let mut extra = false;
    for tok in body.split(',').map(str::trim) {
        if tok == "x" {
            extra = true;
        } else if let Some(n) = tok.strip_prefix("1/") {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad inverse {tok:?}")))?;
            if n <= BigInt::one() {
                return Err(Error::Parse(format!("bad inverse {tok:?}")));
            }
            r0 = match r0 {
                BaseRing::Integers => BaseRing::InvertedIntegers(n),
                BaseRing::InvertedIntegers(m) => BaseRing::InvertedIntegers(m * n),
                other => return Err(Error::Parse(format!("cannot invert {n} in {other}"))),
            };
        } else {
            let tpos = tok.find('t').ok_or_else(|| Error::Parse(format!("bad generator {tok:?}")))?;
            let cpart = tok[..tpos].trim().trim_end_matches('*').trim();
            let c: BigInt = match cpart {
                "" => BigInt::one(),
                "-" => BigInt::from(-1),
                other => other.parse().map_err(|_| Error::Parse(format!("bad coefficient in {tok:?}")))?,
            };
            let epart = tok[tpos + 1..].trim();
            let e: usize = if epart.is_empty() {
                1
            } else {
                epart
                    .strip_prefix('^')
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in {tok:?}")))?
            };
            gens.push((c, e));
        }
    }
    if gens.is_empty() {
        return Err(Error::Parse(format!("no t-generators in {s:?}")));
    }
    MonomialSubring::from_generators(r0, &gens, extra, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn cusp_and_twisted_cusp() {
        let a = parse_subring("Z[t^2,t^3]").unwrap();
        assert_eq!((a.cond, a.coeffs.clone()), (2, vec![big(1), big(0)]));
        let b = parse_subring("Z[5t,t^2,t^3]").unwrap();
        assert_eq!((b.cond, b.coeffs.clone()), (2, vec![big(1), big(5)]));
        assert_eq!(b.render(), "Z[5t,t^2,t^3]");
        assert_eq!(parse_subring("Z[-5t,t^2,t^3]").unwrap().coeffs, b.coeffs);
    }

    #[test]
    fn degenerate_and_inverted() {
        let a = parse_subring("F2[t]").unwrap();
        assert!(a.is_normal() && a.cond == 0);
        let b = parse_subring("Z[1/5,t^2,t^3]").unwrap();
        assert_eq!(b.r0, BaseRing::InvertedIntegers(big(5)));
        // 5 is a unit there, so 5t generates everything in degree 1
        assert!(parse_subring("Z[1/5,5t,t^2,t^3]").unwrap().is_normal());
        assert!(parse_subring("F2[t^2,t^3,x]").unwrap().extra_variable);
    }

    #[test]
    fn numerical_semigroups() {
        let a = parse_subring("F2[t^3,t^4,t^5]").unwrap();
        assert_eq!(a.cond, 3);
        let b = parse_subring("F2[t^3,t^5,t^7]").unwrap();
        assert_eq!(b.cond, 5);
        assert_eq!(b.coeffs, vec![big(1), big(2), big(2), big(1), big(2)]);
        let c = parse_subring("Z[t^4,t^6,t^9]").unwrap();
        // gaps of ⟨4,6,9⟩ end at 11
        assert_eq!(c.cond, 12);
        assert!(c.is_closed());
    }

    #[test]
    fn rejects() {
        assert!(parse_subring("Z[t^2]").is_err());
        assert!(parse_subring("Z[2t,2t^2]").is_err());
        assert!(parse_subring("Q[t]").is_err());
        assert!(parse_subring("Z[t^2,t^3").is_err());
        assert!(parse_subring("F4[t]").is_err());
    }

    #[test]
    fn ideal_ops() {
        let z = Ideals::new(&BaseRing::Integers).unwrap();
        assert_eq!(z.colon(&big(12), &big(8)), big(3));
        assert_eq!(z.colon(&big(0), &big(0)), big(1));
        assert_eq!(z.meet(&big(4), &big(6)), big(12));
        let m = Ideals::new(&BaseRing::IntegersMod(big(12))).unwrap();
        assert_eq!(m.zero(), big(12));
        assert!(m.contains(&big(4), &big(0)));
        assert!(m.quotient_is_domain(&big(3)) && !m.quotient_is_domain(&big(12)));
        let l = Ideals::new(&BaseRing::InvertedIntegers(big(10))).unwrap();
        assert!(l.is_unit(&big(20)));
        assert_eq!(l.norm(&big(30)), big(3));
    }
}
