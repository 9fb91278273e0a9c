//! Abelian group descriptors: Z^r ⊕ finite part ⊕ countable tagged summands.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_prime, pow};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// Free abelian of countably infinite rank.
    FreeCountableRank,
    /// F_p-vector space of countably infinite rank.
    ModPCountable(BigInt),
    /// The additive group of Z[1/n].
    InvertedIntegersAdditive(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbGroup {
    pub free_rank: u32,
    /// Invariant factors d₁ | d₂ | …, all > 1.
    pub torsion: Vec<BigInt>,
    pub tags: Vec<Tag>,
}

impl AbGroup {
    pub fn trivial() -> AbGroup {
        AbGroup { free_rank: 0, torsion: vec![], tags: vec![] }
    }

    /// Z/d, with d = 0 meaning Z.
    pub fn cyclic(d: &BigInt) -> AbGroup {
        AbGroup::trivial().plus(&AbGroup { free_rank: if d.is_zero() { 1 } else { 0 }, torsion: if d.is_zero() { vec![] } else { vec![d.clone()] }, tags: vec![] })
    }

    pub fn tagged(t: Tag) -> AbGroup {
        AbGroup::trivial().plus(&AbGroup { free_rank: 0, torsion: vec![], tags: vec![t] })
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.tags.is_empty()
    }

    /// Finite order, when there are no infinite summands.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 || !self.tags.is_empty() {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    /// Direct sum, in canonical form.
    pub fn plus(&self, other: &AbGroup) -> AbGroup {
        let mut tags: Vec<Tag> = self.tags.iter().chain(&other.tags).cloned().collect();
        tags.sort();
        // countable sums absorb copies of themselves; Z[1/n] does not
        tags.dedup_by(|a, b| a == b && !matches!(a, Tag::InvertedIntegersAdditive(_)));
        let countable_free = tags.contains(&Tag::FreeCountableRank);
        let countable_p: Vec<BigInt> = tags
            .iter()
            .filter_map(|t| if let Tag::ModPCountable(p) = t { Some(p.clone()) } else { None })
            .collect();
        // primary decomposition
        let mut primary: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for d in self.torsion.iter().chain(&other.torsion) {
            for (q, e) in factor(d) {
                primary.entry(q).or_default().push(e);
            }
        }
        for (q, exps) in primary.iter_mut() {
            if countable_p.contains(q) {
                exps.retain(|&e| e > 1);
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        // largest invariant factor first, then reversed
        let mut torsion: Vec<BigInt> = (0..len)
            .map(|k| primary.iter().filter_map(|(q, es)| es.get(k).map(|&e| pow(q, e as u64))).product())
            .collect();
        torsion.reverse();
        let free_rank = if countable_free { 0 } else { self.free_rank + other.free_rank };
        AbGroup { free_rank, torsion, tags }
    }

    pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a AbGroup>) -> AbGroup {
        parts.into_iter().fold(AbGroup::trivial(), |acc, g| acc.plus(g))
    }

    /// Wording of the paper's table where it applies.
    pub fn describe(&self) -> String {
        let single = self.free_rank as usize + self.torsion.len() + self.tags.len() == 1;
        if single {
            if self.free_rank == 1 {
                return "Z".into();
            }
            if let [d] = self.torsion.as_slice() {
                return if is_prime(d) { format!("F_{d}") } else { format!("Z/{d}") };
            }
            return match &self.tags[0] {
                Tag::FreeCountableRank => "free abelian of countably infinite rank".into(),
                Tag::ModPCountable(p) => format!("F_{p}-vector space of countably infinite rank"),
                Tag::InvertedIntegersAdditive(n) => format!("Z[1/{n}]"),
            };
        }
        self.to_string()
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        parts.extend(self.tags.iter().map(|t| match t {
            Tag::FreeCountableRank => "Z^(∞)".to_string(),
            Tag::ModPCountable(p) => format!("F_{p}^(∞)"),
            Tag::InvertedIntegersAdditive(n) => format!("Z[1/{n}]"),
        }));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// (Z/k)^* by the Chinese remainder theorem; k = 0 gives Z^* = {±1}.
pub fn units_mod(k: &BigInt) -> AbGroup {
    if k.is_zero() {
        return AbGroup::cyclic(&BigInt::from(2));
    }
    let mut g = AbGroup::trivial();
    for (q, e) in factor(k) {
        if q == BigInt::from(2) {
            match e {
                1 => {}
                2 => g = g.plus(&AbGroup::cyclic(&BigInt::from(2))),
                _ => {
                    g = g.plus(&AbGroup::cyclic(&BigInt::from(2)));
                    g = g.plus(&AbGroup::cyclic(&pow(&BigInt::from(2), (e - 2) as u64)));
                }
            }
        } else {
            let order = pow(&q, (e - 1) as u64) * (&q - BigInt::one());
            g = g.plus(&AbGroup::cyclic(&order));
        }
    }
    g
}

/// Additive group of R₀/(a) when R₀ ∈ {Z, Z[1/n], Z/m}: a = 0 over Z[1/n]
/// gives Z[1/n].
pub fn additive_quotient(inverted: Option<&BigInt>, a: &BigInt) -> AbGroup {
    match (inverted, a.is_zero()) {
        (Some(n), true) => AbGroup::tagged(Tag::InvertedIntegersAdditive(n.clone())),
        _ => AbGroup::cyclic(a),
    }
}

/// A countable direct sum of copies of Z/a (a = 0: of Z), if describable.
pub fn countable_sum(a: &BigInt) -> Option<AbGroup> {
    if a.is_zero() {
        return Some(AbGroup::tagged(Tag::FreeCountableRank));
    }
    if a.is_one() {
        return Some(AbGroup::trivial());
    }
    let f = factor(a);
    if f.iter().any(|(_, e)| *e > 1) {
        return None;
    }
    Some(AbGroup::sum_all(f.iter().map(|(q, _)| AbGroup::tagged(Tag::ModPCountable(q.clone()))).collect::<Vec<_>>().iter()))
}

/// gcd-free helper for tests: order of the finite part.
pub fn exponent(g: &AbGroup) -> BigInt {
    g.torsion.iter().fold(BigInt::one(), |a, b| a.lcm(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn canonical_form() {
        let g = AbGroup::cyclic(&big(4)).plus(&AbGroup::cyclic(&big(6))).plus(&AbGroup::cyclic(&big(0)));
        assert_eq!(g.torsion, vec![big(2), big(12)]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.to_string(), "Z ⊕ Z/2 ⊕ Z/12");
        let h = AbGroup::cyclic(&big(3)).plus(&AbGroup::cyclic(&big(2)));
        assert_eq!(h.torsion, vec![big(6)]);
    }

    #[test]
    fn absorption() {
        let g = AbGroup::cyclic(&big(0)).plus(&AbGroup::tagged(Tag::FreeCountableRank));
        assert_eq!(g.describe(), "free abelian of countably infinite rank");
        let h = AbGroup::cyclic(&big(2)).plus(&AbGroup::tagged(Tag::ModPCountable(big(2))));
        assert_eq!(h.describe(), "F_2-vector space of countably infinite rank");
        let k = AbGroup::cyclic(&big(4)).plus(&AbGroup::tagged(Tag::ModPCountable(big(2))));
        assert_eq!(k.torsion, vec![big(4)]);
        let z = AbGroup::tagged(Tag::InvertedIntegersAdditive(big(5)));
        assert_eq!(z.plus(&z).tags.len(), 2);
    }

    #[test]
    fn unit_groups_mod_k() {
        assert_eq!(units_mod(&big(0)).to_string(), "Z/2");
        assert_eq!(units_mod(&big(8)).torsion, vec![big(2), big(2)]);
        assert_eq!(units_mod(&big(9)).torsion, vec![big(6)]);
        assert_eq!(units_mod(&big(2)), AbGroup::trivial());
        for k in 2..60i64 {
            let phi = (1..k).filter(|u| u.gcd(&k) == 1).count();
            assert_eq!(units_mod(&big(k)).order(), Some(big(phi as i64)), "k={k}");
        }
    }

    #[test]
    fn describe_words() {
        assert_eq!(AbGroup::cyclic(&big(5)).describe(), "F_5");
        assert_eq!(AbGroup::cyclic(&big(0)).describe(), "Z");
        assert_eq!(AbGroup::trivial().describe(), "0");
        assert!(countable_sum(&big(4)).is_none());
        assert_eq!(countable_sum(&big(6)).unwrap().tags.len(), 2);
    }
}
