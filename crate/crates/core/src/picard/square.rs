//! Milnor conductor squares and Pic(A) from the unit sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::group::{additive_quotient, countable_sum, units_mod, AbGroup, Tag};
use super::subring::{parse_subring, render_mono, ring_name, Ideals, MonomialSubring};
use crate::arith::factor;
use crate::error::{Error, Result};
use crate::ring::BaseRing;

/// ⊕_{i<len} R₀/(m_i)·t^i, optionally ⊗ R₀[x], with t^len = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncated {
    pub r0: BaseRing,
    pub x: bool,
    pub mods: Vec<BigInt>,
}

impl Truncated {
    fn ideals(&self) -> Ideals {
        Ideals::new(&self.r0).expect("validated coefficient ring")
    }

    /// Products of positive-degree basis monomials vanish.
    pub fn square_zero(&self) -> bool {
        let id = self.ideals();
        let n = self.mods.len();
        (1..n).all(|i| (1..n).all(|j| i + j >= n || id.is_unit(&self.mods[i + j]) || id.is_unit(&self.mods[i]) || id.is_unit(&self.mods[j])))
    }

    pub fn render(&self) -> String {
        let id = self.ideals();
        if self.mods.iter().all(|m| id.is_unit(m)) {
            return "0".into();
        }
        let mut base = ring_name(&self.r0);
        if self.x {
            base.push_str("[x]");
        }
        format!("{base}[t]/({})", ideal_generators(&id, &self.mods).join(","))
    }
}

/// Minimal monomial generators of ⊕ b_i t^i (b_i = 1 from b.len() on).
fn ideal_generators(id: &Ideals, b: &[BigInt]) -> Vec<String> {
    let mut kept: Vec<BigInt> = Vec::new();
    let mut parts = Vec::new();
    for (i, x) in b.iter().enumerate() {
        if id.is_zero(x) || kept.iter().any(|k| id.contains(k, x)) {
            continue;
        }
        kept.push(x.clone());
        parts.push(if i == 0 { id.norm(x).to_string() } else { render_mono(&id.norm(x), i) });
    }
    if b.is_empty() {
        parts.push("1".into());
    } else if !kept.iter().any(|k| id.is_unit(k)) {
        parts.push(render_mono(&BigInt::one(), b.len()));
    }
    parts
}

/// Unit group of a truncated ring R ⊕ N with N² = 0: R^* × (1 + N) with
/// 1 + N ≅ N. Returns the group and a generator label per summand source.
pub fn unit_group(q: &Truncated) -> Result<(AbGroup, Vec<String>)> {
    if !q.square_zero() {
        return Err(Error::Unsupported(format!("{}: nilpotent part does not square to zero", q.render())));
    }
    let id = q.ideals();
    let m0 = q.mods.first().map(|m| id.norm(m)).unwrap_or_else(BigInt::one);
    let mut labels = Vec::new();
    let reduced = match (&q.r0, m0.is_zero()) {
        _ if m0.is_one() => AbGroup::trivial(),
        (BaseRing::Integers, true) => {
            labels.push("-1".to_string());
            units_mod(&BigInt::zero())
        }
        (BaseRing::InvertedIntegers(n), true) => {
            labels.push("-1".to_string());
            let primes = factor(n);
            labels.extend(primes.iter().map(|(p, _)| p.to_string()));
            AbGroup::cyclic(&BigInt::from(2)).plus(&AbGroup { free_rank: primes.len() as u32, torsion: vec![], tags: vec![] })
        }
        (_, _) => {
            if q.x && !id.quotient_is_reduced(&m0) {
                return Err(Error::Unsupported(format!("units of (R0/{m0})[x] with R0/{m0} not reduced")));
            }
            labels.push(format!("(Z/{m0})^*"));
            units_mod(&m0)
        }
    };
    let mut g = reduced;
    for (i, m) in q.mods.iter().enumerate().skip(1) {
        let m = id.norm(m);
        if m.is_one() {
            continue;
        }
        let part = if q.x {
            match (&q.r0, m.is_zero()) {
                (BaseRing::InvertedIntegers(n), true) => {
                    return Err(Error::Unsupported(format!("countable sum of Z[1/{n}] in degree {i}")))
                }
                _ => countable_sum(&m).ok_or_else(|| Error::Unsupported(format!("countable sum of Z/{m}")))?,
            }
        } else {
            let inv = if let BaseRing::InvertedIntegers(n) = &q.r0 { Some(n) } else { None };
            additive_quotient(inv, &m)
        };
        labels.push(format!("1+{}", render_mono(&BigInt::one(), i)) + if q.x { "·f(x)" } else { "" });
        g = g.plus(&part);
    }
    Ok((g, labels))
}

/// Pic vanishing axioms: Pic(R) = 0 for R ∈ {Z, Z[1/n], F_p, Z/m} and for
/// R[x] with R reduced.
pub fn pic_vanishes(r0: &BaseRing, quotient_by: &BigInt, x: bool) -> bool {
    let Ok(id) = Ideals::new(r0) else { return false };
    !x || id.quotient_is_reduced(quotient_by)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorSquare {
    pub ring: MonomialSubring,
    /// 𝔠 = ⊕ b_i t^i, b_i = 1 from the conductor degree on.
    pub conductor: Vec<BigInt>,
    /// Ā/𝔠.
    pub bar_quotient: Truncated,
    /// A/𝔠 = ⊕ (c_i)/(b_i) t^i.
    pub a_quotient: Vec<BigInt>,
    pub cartesian: bool,
    pub square_zero: bool,
}

impl MilnorSquare {
    pub fn render_conductor(&self) -> String {
        format!("({})", ideal_generators(&self.ring.ideals(), &self.conductor).join(","))
    }
}

/// 𝔠 = largest Ā-ideal in A: b_i = ∩_{j ≥ 0} (c_{i+j}).
pub fn conductor_square(a: &MonomialSubring) -> Result<MilnorSquare> {
    let id = a.ideals();
    let b: Vec<BigInt> = (0..a.cond).map(|i| (i..a.cond).fold(BigInt::one(), |acc, j| id.meet(&acc, &a.coeff(j)))).collect();
    square_with_ideal(a, &b)
}

/// The square for an arbitrary Ā-ideal ⊕ b_i t^i contained in A (b_i = 1
/// from degree b.len() on).
pub fn square_with_ideal(a: &MonomialSubring, b: &[BigInt]) -> Result<MilnorSquare> {
    let id = a.ideals();
    let b: Vec<BigInt> = b.iter().map(|x| id.norm(x)).collect();
    let bi = |i: usize| b.get(i).cloned().unwrap_or_else(BigInt::one);
    let top = a.cond.max(b.len()) + 2;
    for i in 0..top {
        if !id.le(&bi(i), &bi(i + 1)) {
            return Err(Error::Invalid(format!("not an ideal of the normalization: degree {i} to {}", i + 1)));
        }
        if !id.le(&bi(i), &a.coeff(i)) {
            return Err(Error::Invalid(format!("ideal is not contained in {} in degree {i}", a.render())));
        }
    }
    // A = Ā ×_{Ā/𝔠} A/𝔠 degreewise: r ∈ R₀ lies in the fibre product iff
    // r mod b_i ∈ (c_i)/(b_i), i.e. r ∈ (c_i) + (b_i)
    let cartesian = (0..top).all(|i| id.sum(&a.coeff(i), &bi(i)) == id.norm(&a.coeff(i)));
    let bar_quotient = Truncated { r0: a.r0.clone(), x: a.extra_variable, mods: b.clone() };
    let square_zero = bar_quotient.square_zero();
    Ok(MilnorSquare {
        ring: a.clone(),
        a_quotient: (0..b.len()).map(|i| a.coeff(i)).collect(),
        conductor: b,
        bar_quotient,
        cartesian,
        square_zero,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicResult {
    pub ring: String,
    pub conductor: String,
    pub bar_quotient: String,
    pub units_bar_quotient: AbGroup,
    pub group: AbGroup,
    /// Generator of each summand of Pic(A), as a unit of Ā/𝔠.
    pub generators: Vec<String>,
    pub description: String,
}

/// Pic(A) = coker[Ā^* × (A/𝔠)^* → (Ā/𝔠)^*].
///
/// Degree 0 of A/𝔠 equals degree 0 of Ā/𝔠, so (A/𝔠)^* covers R^*; Ā^* = R₀^*
/// lands there too. What remains is (1+N)/(1+N') ≅ ⊕_{i≥1} R₀/(c_i).
pub fn picard_from_square(sq: &MilnorSquare) -> Result<PicResult> {
    let a = &sq.ring;
    let id = a.ideals();
    if !sq.cartesian {
        return Err(Error::Invalid("square is not cartesian".into()));
    }
    if !pic_vanishes(&a.r0, &BigInt::zero(), a.extra_variable) {
        return Err(Error::Unsupported(format!("Pic of the normalization over {} is outside the axiom table", ring_name(&a.r0))));
    }
    let b0 = sq.conductor.first().cloned().unwrap_or_else(BigInt::one);
    if !pic_vanishes(&a.r0, &b0, a.extra_variable) {
        return Err(Error::Unsupported(format!("Pic of A/c with degree-0 part R0/({b0}) is outside the axiom table")));
    }
    let (units_bar, _) = unit_group(&sq.bar_quotient)?;
    let mut group = AbGroup::trivial();
    let mut generators = Vec::new();
    for i in 1..sq.conductor.len() {
        let (c, b) = (id.norm(&a.coeff(i)), &sq.conductor[i]);
        // (R₀/b)/((c)/(b)) = R₀/(c)
        debug_assert!(id.le(b, &c));
        if c.is_one() {
            continue;
        }
        let part = if a.extra_variable {
            match (&a.r0, c.is_zero()) {
                (BaseRing::InvertedIntegers(n), true) => {
                    return Err(Error::Unsupported(format!("countable sum of Z[1/{n}]")));
                }
                _ => countable_sum(&c).ok_or_else(|| Error::Unsupported(format!("countable sum of Z/{c}")))?,
            }
        } else {
            let inv = if let BaseRing::InvertedIntegers(n) = &a.r0 { Some(n) } else { None };
            additive_quotient(inv, &c)
        };
        let unit = render_mono(&BigInt::one(), i);
        generators.push(if a.extra_variable { format!("1+{unit}·f(x), f ∈ R0[x]") } else { format!("1+{unit}") });
        group = group.plus(&part);
    }
    Ok(PicResult {
        ring: a.render(),
        conductor: sq.render_conductor(),
        bar_quotient: sq.bar_quotient.render(),
        units_bar_quotient: units_bar,
        description: group.describe(),
        group,
        generators,
    })
}

pub fn picard(spec: &str) -> Result<PicResult> {
    let a = parse_subring(spec)?;
    picard_from_square(&conductor_square(&a)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub row: usize,
    pub ring: String,
    pub p: Option<u64>,
    pub expected: String,
    pub computed: String,
    pub group: AbGroup,
    pub matches: bool,
}

/// The six rows of the table, rows 3–6 once per prime.
pub fn reproduce_table(primes: &[u64]) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    let mut push = |row: usize, spec: String, p: Option<u64>, expected: AbGroup| -> Result<()> {
        let r = picard(&spec)?;
        out.push(TableRow {
            row,
            ring: spec,
            p,
            expected: expected.describe(),
            computed: r.description,
            matches: r.group == expected,
            group: r.group,
        });
        Ok(())
    };
    push(1, "Z[t^2,t^3]".into(), None, AbGroup::cyclic(&BigInt::zero()))?;
    push(2, "Z[t^2,t^3,x]".into(), None, AbGroup::tagged(Tag::FreeCountableRank))?;
    for &p in primes {
        let pb = BigInt::from(p);
        push(3, format!("Z[{p}t,t^2,t^3]"), Some(p), AbGroup::cyclic(&pb))?;
        push(4, format!("Z[{p}t,t^2,t^3,x]"), Some(p), AbGroup::tagged(Tag::ModPCountable(pb.clone())))?;
        push(5, format!("Z[1/{p},t^2,t^3]"), Some(p), AbGroup::tagged(Tag::InvertedIntegersAdditive(pb.clone())))?;
        push(6, format!("F{p}[t^2,t^3,x]"), Some(p), AbGroup::tagged(Tag::ModPCountable(pb)))?;
    }
    out.sort_by_key(|r| (r.row, r.p));
    Ok(out)
}
