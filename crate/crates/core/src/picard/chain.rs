//! Chains A = A₀ ⊂ A₁ ⊂ … ⊂ R₀[t] with prime conductors [A_{k−1} : A_k].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::subring::{render_mono, Ideals, MonomialSubring};
use crate::error::{Error, Result};
use crate::ring::BaseRing;

const MAX_STEPS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// R₀/(e₀) is a domain.
    pub base_domain: bool,
    /// Every nonzero graded piece (c_i)/(e_i) has annihilator exactly (e₀).
    pub faithful: bool,
    /// Products of generators of nonzero pieces checked (all degrees < 2c).
    pub products_checked: usize,
    pub zero_products: Vec<(usize, usize)>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.base_domain && self.faithful && self.zero_products.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    /// The monomial y adjoined.
    pub adjoined: String,
    pub ring: MonomialSubring,
    /// [A_{k−1} : A_k] as ⊕ e_i t^i ⊆ A_{k−1}, e_i = 1 from e.len() on.
    pub colon: Vec<BigInt>,
    pub colon_text: String,
    /// A_{k−1}/[A_{k−1} : A_k] as graded pieces.
    pub quotient: String,
    pub certificate: Certificate,
}

/// [A : A[y]] degreewise: e_i = (c_i) ∩ ∩_{j≥1} (c_{i+j} : d_j) where d is
/// the degree data of A[y].
pub fn colon_ideal(a: &MonomialSubring, over: &MonomialSubring) -> Vec<BigInt> {
    let id = a.ideals();
    let top = a.cond.max(over.cond);
    let mut e: Vec<BigInt> = (0..top)
        .map(|i| {
            (1..=top).fold(id.norm(&a.coeff(i)), |acc, j| {
                let d = over.coeff(j);
                if id.is_zero(&d) {
                    acc
                } else {
                    id.meet(&acc, &id.colon(&a.coeff(i + j), &d))
                }
            })
        })
        .collect();
    while e.last().is_some_and(|x| id.is_unit(x)) {
        e.pop();
    }
    e
}

/// I ⊆ J degreewise.
fn included(id: &Ideals, i: &[BigInt], j: &[BigInt]) -> bool {
    let at = |v: &[BigInt], k: usize| v.get(k).cloned().unwrap_or_else(BigInt::one);
    (0..i.len().max(j.len())).all(|k| id.le(&at(i, k), &at(j, k)))
}

pub fn certify(a: &MonomialSubring, e: &[BigInt]) -> Certificate {
    let id = a.ideals();
    let at = |k: usize| e.get(k).cloned().unwrap_or_else(BigInt::one);
    let e0 = id.norm(&at(0));
    let nonzero: Vec<usize> = (0..2 * a.cond.max(1)).filter(|&i| !id.contains(&at(i), &a.coeff(i))).collect();
    let faithful = nonzero.iter().all(|&i| {
        let (c, ei) = (id.norm(&a.coeff(i)), id.norm(&at(i)));
        // (c)/(e) ≅ R₀/(e : c)
        id.norm(&id.colon(&ei, &c)) == e0
    });
    let mut zero_products = Vec::new();
    let mut products_checked = 0;
    for (x, &i) in nonzero.iter().enumerate() {
        for &j in &nonzero[x..] {
            if i + j >= 2 * a.cond.max(1) {
                continue;
            }
            products_checked += 1;
            if id.contains(&at(i + j), &id.product(&a.coeff(i), &a.coeff(j))) {
                zero_products.push((i, j));
            }
        }
    }
    Certificate { base_domain: id.quotient_is_domain(&e0), faithful, products_checked, zero_products }
}

fn render_pieces(a: &MonomialSubring, e: &[BigInt]) -> String {
    let id = a.ideals();
    let at = |k: usize| e.get(k).cloned().unwrap_or_else(BigInt::one);
    let parts: Vec<String> = (0..e.len())
        .filter(|&i| !id.contains(&at(i), &a.coeff(i)))
        .map(|i| {
            let (c, ei) = (id.norm(&a.coeff(i)), id.norm(&at(i)));
            let piece = if id.is_zero(&ei) { format!("({c})") } else { format!("({c})/({ei})") };
            if i == 0 {
                piece
            } else {
                format!("{piece}t^{i}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn render_ideal(a: &MonomialSubring, e: &[BigInt]) -> String {
    let id = a.ideals();
    let mut parts: Vec<String> = Vec::new();
    let mut kept: Vec<(usize, BigInt)> = Vec::new();
    for (i, x) in e.iter().enumerate() {
        let c = id.norm(x);
        if id.is_zero(&c) || kept.iter().any(|(k, y)| id.contains(y, &c) && a.ideals().is_unit(&a.coeff(i - k))) {
            continue;
        }
        kept.push((i, c.clone()));
        parts.push(if i == 0 { c.to_string() } else { render_mono(&c, i) });
    }
    for i in e.len()..e.len() + a.cond.max(1) {
        if !kept.iter().any(|(k, y)| y.is_one() && a.ideals().is_unit(&a.coeff(i - k))) {
            kept.push((i, BigInt::one()));
            parts.push(render_mono(&BigInt::one(), i));
        }
    }
    format!("({})", parts.join(","))
}

/// Candidate monomials a·t^i ∉ A below the conductor.
fn candidates(a: &MonomialSubring) -> Vec<(BigInt, usize)> {
    let id = a.ideals();
    let field = matches!(a.r0, BaseRing::PrimeField(_));
    let nonzero_lcm = (0..a.cond).map(|i| a.coeff(i)).filter(|c| !c.is_zero()).fold(BigInt::one(), |l, c| num_integer::lcm(l, c));
    let mut out = Vec::new();
    for i in 1..a.cond {
        let c = id.norm(&a.coeff(i));
        if field {
            if id.is_zero(&c) {
                out.push((BigInt::one(), i));
            }
            continue;
        }
        let pool = if c.is_zero() { nonzero_lcm.clone() } else { c.clone() };
        let mut k = BigInt::one();
        while k <= pool {
            if (&pool % &k).is_zero() && !id.contains(&c, &k) {
                out.push((k.clone(), i));
            }
            k += 1;
        }
    }
    out
}

/// Adjoins monomials one at a time, each time taking y with [A : A[y]]
/// maximal (ties: smallest degree, then smallest coefficient).
pub fn conductor_chain(a: &MonomialSubring) -> Result<Vec<ChainStep>> {
    if !matches!(a.r0, BaseRing::PrimeField(_) | BaseRing::Integers) {
        return Err(Error::Unsupported("conductor chains need a field or Z as coefficient ring".into()));
    }
    let mut cur = a.clone();
    let mut steps = Vec::new();
    while !cur.is_normal() {
        if steps.len() == MAX_STEPS {
            return Err(Error::Internal("chain did not reach the normalization".into()));
        }
        let id = cur.ideals();
        let scored: Vec<((BigInt, usize), MonomialSubring, Vec<BigInt>)> = candidates(&cur)
            .into_iter()
            .map(|(c, i)| {
                let next = cur.adjoin(&c, i)?;
                let e = colon_ideal(&cur, &next);
                Ok(((c, i), next, e))
            })
            .collect::<Result<_>>()?;
        let best = scored
            .iter()
            .filter(|(_, _, e)| !scored.iter().any(|(_, _, f)| included(&id, e, f) && !included(&id, f, e)))
            .min_by(|x, y| (x.0 .1, &x.0 .0).cmp(&(y.0 .1, &y.0 .0)))
            .ok_or_else(|| Error::Internal("no monomial outside the subring below its conductor".into()))?;
        let ((c, i), next, e) = best.clone();
        let certificate = certify(&cur, &e);
        steps.push(ChainStep {
            adjoined: render_mono(&c, i),
            colon_text: render_ideal(&cur, &e),
            quotient: render_pieces(&cur, &e),
            ring: next.clone(),
            colon: e,
            certificate,
        });
        cur = next;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::super::subring::parse_subring;
    use super::*;

    fn chain(spec: &str) -> Vec<ChainStep> {
        conductor_chain(&parse_subring(spec).unwrap()).unwrap()
    }

    #[test]
    fn cusp() {
        let c = chain("Z[t^2,t^3]");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].adjoined, "t");
        assert_eq!(c[0].colon_text, "(t^2,t^3)");
        assert_eq!(c[0].quotient, "(1)");
        assert!(c[0].certificate.holds());
        assert!(c[0].ring.is_normal());
    }

    #[test]
    fn semigroup_three_four_five() {
        // t and t² give the same colon t³F₂[t]; the tie goes to t
        let a = parse_subring("F2[t^3,t^4,t^5]").unwrap();
        let via_t2 = colon_ideal(&a, &a.adjoin(&BigInt::one(), 2).unwrap());
        let via_t = colon_ideal(&a, &a.adjoin(&BigInt::one(), 1).unwrap());
        assert_eq!(via_t, via_t2);
        let c = chain("F2[t^3,t^4,t^5]");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].adjoined, "t");
        assert!(c[0].certificate.holds());
    }

    #[test]
    fn semigroup_three_five_seven() {
        let c = chain("F2[t^3,t^5,t^7]");
        let adj: Vec<&str> = c.iter().map(|s| s.adjoined.as_str()).collect();
        assert_eq!(adj, vec!["t^2", "t"]);
        assert!(c.iter().all(|s| s.certificate.holds()));
    }

    #[test]
    fn twisted_cusps_over_z() {
        let c = chain("Z[5t,t^2,t^3]");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].quotient, "(1)/(5)");
        assert!(c[0].certificate.holds());
        // 2t gives a larger colon than t
        let c4 = chain("Z[4t,t^2,t^3]");
        let adj: Vec<&str> = c4.iter().map(|s| s.adjoined.as_str()).collect();
        assert_eq!(adj, vec!["2t", "t"]);
        assert!(c4.iter().all(|s| s.certificate.holds()), "{c4:?}");
    }

    #[test]
    fn normal_ring_has_empty_chain() {
        assert!(chain("F3[t]").is_empty());
        assert!(conductor_chain(&parse_subring("Z/6[t^2,t^3]").unwrap()).is_err());
    }

    #[test]
    fn certificate_rejects_non_prime() {
        let a = parse_subring("Z[4t,t^2,t^3]").unwrap();
        // [A : Z[t]] = (4, 4t, t²): quotient Z/4 is not a domain
        let e = colon_ideal(&a, &parse_subring("Z[t]").unwrap());
        assert_eq!(e, vec![BigInt::from(4), BigInt::from(4)]);
        assert!(!certify(&a, &e).holds());
    }

    #[test]
    fn longer_semigroups_certify() {
        for spec in ["F3[t^4,t^6,t^9]", "Z[t^4,t^5,t^6,t^7]", "F5[t^5,t^7]", "Z[6t,t^2,t^3]"] {
            let c = chain(spec);
            assert!(!c.is_empty());
            assert!(c.iter().all(|s| s.certificate.holds()), "{spec}: {c:?}");
            assert!(c.last().unwrap().ring.is_normal());
        }
    }
}
