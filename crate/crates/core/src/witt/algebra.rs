//! W_n(B) for a finite F_p-algebra B as an explicit ring table.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::law::witt_laws;
use super::vector::{WittRing, WittVector};
use crate::arith::{is_prime, to_usize};
use crate::error::{Error, Result};
use crate::ring::{AlgElem, TestAlgebra};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WittTable {
    pub p: u64,
    pub n: u32,
    pub algebra: String,
    pub order: usize,
    /// Elements rendered as component tuples, in table order (index 0 is 0).
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    /// Additive order of 1.
    pub characteristic: u64,
    pub pn_kills_all: bool,
    /// Additive group generated by 1 is everything.
    pub cyclic: bool,
    /// Units found by exhaustive search.
    pub units: Vec<usize>,
    /// witt_unit gives the same verdict (and a correct inverse) on every element.
    pub unit_test_agrees: bool,
}

impl WittTable {
    /// Associativity, commutativity, distributivity and identities, on all
    /// triples.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            if self.add[a][self.zero] != a || self.mul[a][self.one] != a {
                return false;
            }
            if !(0..n).any(|b| self.add[a][b] == self.zero) {
                return false;
            }
            for b in 0..n {
                if self.add[a][b] != self.add[b][a] || self.mul[a][b] != self.mul[b][a] {
                    return false;
                }
                for c in 0..n {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]]
                        || self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]
                        || self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]]
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The prime p when B is an F_p-algebra.
fn char_p(b: &TestAlgebra) -> Result<u64> {
    let m = b.modulus();
    let p = to_usize(&m).map(|v| v as u64);
    match p {
        Some(p) if is_prime(&m) && b.components.iter().all(|c| c.modulus == m) => Ok(p),
        _ => Err(Error::Invalid(format!("{b} is not an F_p-algebra"))),
    }
}

pub fn witt_algebra(b: &TestAlgebra, n: u32, cap: usize) -> Result<WittTable> {
    let p = char_p(b)?;
    let base = b.elements(cap)?;
    let order = base
        .len()
        .checked_pow(n)
        .filter(|&o| o <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("|W_{n}({b})| = {}^{n} exceeds cap {cap}", base.len())))?;
    let w = WittRing::new(b.clone(), witt_laws(p, n)?);
    let mut tuples: Vec<Vec<AlgElem>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .iter()
            .flat_map(|t| base.iter().map(move |x| [t.clone(), vec![x.clone()]].concat()))
            .collect();
    }
    let elems: Vec<WittVector<AlgElem>> = tuples.into_iter().map(|comps| WittVector { comps }).collect();
    let index: HashMap<Vec<AlgElem>, usize> = elems.iter().enumerate().map(|(i, e)| (e.comps.clone(), i)).collect();
    let look = |v: &WittVector<AlgElem>| -> Result<usize> {
        index
            .get(&v.comps)
            .copied()
            .ok_or_else(|| Error::Internal(format!("{} not in table", w.render(v))))
    };
    let mut add = vec![vec![0; order]; order];
    let mut mul = vec![vec![0; order]; order];
    for i in 0..order {
        for j in i..order {
            let s = look(&w.add(&elems[i], &elems[j]))?;
            let m = look(&w.mul(&elems[i], &elems[j]))?;
            add[i][j] = s;
            add[j][i] = s;
            mul[i][j] = m;
            mul[j][i] = m;
        }
    }
    let zero = look(&w.zero())?;
    let one = look(&w.one())?;
    let mut characteristic = 1u64;
    let mut x = one;
    while x != zero {
        x = add[x][one];
        characteristic += 1;
    }
    let pn = p.pow(n) as usize;
    let pn_kills_all = (0..order).all(|a| {
        let mut s = zero;
        for _ in 0..pn {
            s = add[s][a];
        }
        s == zero
    });
    let units: Vec<usize> = (0..order).filter(|&a| mul[a].contains(&one)).collect();
    let mut unit_test_agrees = true;
    for (a, e) in elems.iter().enumerate() {
        let verdict = w.unit_inverse(e)?;
        let exhaustive = units.contains(&a);
        match verdict {
            Some(inv) => unit_test_agrees &= exhaustive && mul[a][look(&inv)?] == one,
            None => unit_test_agrees &= !exhaustive,
        }
    }
    Ok(WittTable {
        p,
        n,
        algebra: b.to_string(),
        order,
        elements: elems.iter().map(|e| w.render(e)).collect(),
        add,
        mul,
        zero,
        one,
        characteristic,
        pn_kills_all,
        cyclic: characteristic as usize == order,
        units,
        unit_test_agrees,
    })
}

/// Whether W_n(F_p) is cyclic of order p^n, by its table.
pub fn prime_field_is_cyclic(p: u64, n: u32) -> Result<bool> {
    let b = crate::ring::parse_algebra(&format!("F{p}"))?;
    let t = witt_algebra(&b, n, 1 << 16)?;
    Ok(t.cyclic && t.order as u64 == p.pow(n) && BigInt::from(t.characteristic) == BigInt::from(p.pow(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_algebra;

    #[test]
    fn w2_f2_is_z4() {
        let t = witt_algebra(&parse_algebra("F2").unwrap(), 2, 1000).unwrap();
        assert_eq!((t.order, t.characteristic), (4, 4));
        assert!(t.cyclic && t.pn_kills_all && t.check_axioms());
        assert_eq!(t.units.len(), 2);
        assert!(t.unit_test_agrees);
    }

    #[test]
    fn w1_f3_is_f3() {
        let t = witt_algebra(&parse_algebra("F3").unwrap(), 1, 1000).unwrap();
        assert_eq!((t.order, t.characteristic, t.units.len()), (3, 3, 2));
    }

    #[test]
    fn prime_fields_cyclic() {
        for p in [2, 3] {
            for n in 1..=3 {
                assert!(prime_field_is_cyclic(p, n).unwrap(), "p={p} n={n}");
                let t = witt_algebra(&parse_algebra(&format!("F{p}")).unwrap(), n, 1000).unwrap();
                assert!(t.check_axioms(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn dual_numbers_over_f2() {
        let t = witt_algebra(&parse_algebra("F2[s]/(s^2)").unwrap(), 2, 1000).unwrap();
        assert_eq!((t.order, t.characteristic), (16, 4));
        assert!(!t.cyclic && t.pn_kills_all && t.check_axioms() && t.unit_test_agrees);
        // units are the vectors with unit μ: 2 choices of a₀, 4 of a₁
        assert_eq!(t.units.len(), 8);
    }

    #[test]
    fn cap_and_characteristic_errors() {
        assert!(matches!(
            witt_algebra(&parse_algebra("F2[s]/(s^2)").unwrap(), 3, 32),
            Err(Error::CapExceeded(_))
        ));
        assert!(witt_algebra(&parse_algebra("Z/4").unwrap(), 2, 100).is_err());
    }

    #[test]
    fn product_algebra() {
        let t = witt_algebra(&parse_algebra("F2 x F2").unwrap(), 2, 1000).unwrap();
        // W_2(F2 × F2) = Z/4 × Z/4
        assert_eq!((t.order, t.characteristic, t.units.len()), (16, 4, 4));
        assert!(t.unit_test_agrees && t.check_axioms());
    }
}
