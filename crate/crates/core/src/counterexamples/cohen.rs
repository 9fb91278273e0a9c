//! H(B) for F = coker(O → O(1), sx − ty) on P³ over F_p[s,t], at
//! B = F_p[s,t]/(s^k, t^k).
//!
//! H(B) is the degree-0 part of Ann_R(sx − ty) modulo the annihilators in
//! the four localizations omitting one variable (Čech reading, all
//! denominator exponents ≥ 1). Since sx − ty does not involve z, w this is
//! ⊕_{c,d ≥ 1} Q_{c+d}·z^{−c}w^{−d}, where Q_e is the x,y-degree e part of
//! the second Čech cohomology of Ann_{B[x,y]}(sx − ty).

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::blocks::{lemma_generator, Block};
use super::fp;
use crate::arith::{binomial, is_prime};
use crate::error::{Error, Result};

pub const MAX_K: u32 = 12;

/// (st)^{k−j} Σ_{i<j} (sx)^i (ty)^{j−1−i} / (x^a y^b z^c w^d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohenGenerator {
    pub j: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl CohenGenerator {
    pub fn render(&self, k: u32) -> String {
        format!(
            "(st)^{} * sum_{{i=0}}^{} (sx)^i (ty)^({}-i) / (x^{} y^{} z^{} w^{})",
            k - self.j,
            self.j - 1,
            self.j - 1,
            self.a,
            self.b,
            self.c,
            self.d
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohenReport {
    pub k: u32,
    pub p: u64,
    pub generators: Vec<CohenGenerator>,
    /// Σ_{j=5}^k C(j−2, 3).
    pub mu_formula: BigInt,
    /// Size of the listed generating set.
    pub mu_generators: usize,
    /// dim_{F_p} H(B)/(s,t)H(B) by linear algebra over all blocks.
    pub mu_direct: usize,
    /// dim_{F_p} H(B).
    pub dim: usize,
    pub generators_annihilate: bool,
    /// Every listed generator is nonzero modulo (s,t)·H(B).
    pub generators_independent: bool,
}

impl CohenReport {
    pub fn consistent(&self) -> bool {
        self.generators_annihilate
            && self.generators_independent
            && BigInt::from(self.mu_generators) == self.mu_formula
            && BigInt::from(self.mu_direct) == self.mu_formula
    }
}

pub fn mu_formula(k: u32) -> BigInt {
    (5..=k as i64).map(|j| binomial(j - 2, 3)).sum()
}

pub fn check_prime(p: u64) -> Result<()> {
    if p > 1 << 20 || !is_prime(&BigInt::from(p)) {
        return Err(Error::Invalid(format!("{p} is not a small prime")));
    }
    Ok(())
}

struct Local {
    k: i64,
    p: u64,
    cache: HashMap<(i64, i64, i64), Vec<Vec<u64>>>,
}

impl Local {
    fn ann(&mut self, u: i64, v: i64, e: i64) -> Vec<Vec<u64>> {
        let (k, p) = (self.k, self.p);
        self.cache
            .entry((u, v, e))
            .or_insert_with(|| Block::new(k, u, v, e, true).annihilator(p, true))
            .clone()
    }

    /// Ann_x + Ann_y + s·Ann(u−1, v) + t·Ann(u, v−1) inside block (u, v, e).
    fn decomposable(&mut self, blk: &Block) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut sub = blk.annihilator_on(p, |i| blk.a(i) >= 0);
        sub.extend(blk.annihilator_on(p, |i| blk.b(i) >= 0));
        let (u, v, e) = (blk.u, blk.v, blk.e);
        let ks = self.ann(u - 1, v, e);
        sub.extend(blk.shift_from(&Block::new(self.k, u - 1, v, e, true), &ks, 1, 0));
        let kt = self.ann(u, v - 1, e);
        sub.extend(blk.shift_from(&Block::new(self.k, u, v - 1, e, true), &kt, 0, 1));
        sub
    }
}

pub fn cohen_h1(k: u32, p: u64) -> Result<CohenReport> {
    if k == 0 || k > MAX_K {
        return Err(Error::Invalid(format!("k = {k} is outside 1..={MAX_K}")));
    }
    check_prime(p)?;
    let ki = k as i64;
    let mut st = Local { k: ki, p, cache: HashMap::new() };
    let mut mu_direct = 0usize;
    let mut dim = 0usize;
    // blocks with u, v ≤ 0 lie in a localization; e ≤ 2k − 2 bounds the rest
    for e in 2..=2 * ki {
        for u in 1..=2 * ki {
            for v in 1..=2 * ki {
                let blk = Block::new(ki, u, v, e, true);
                if blk.dim() == 0 {
                    continue;
                }
                let kk = st.ann(u, v, e);
                if kk.is_empty() {
                    continue;
                }
                let mult = (e - 1) as usize;
                let mut cech = blk.annihilator_on(p, |i| blk.a(i) >= 0);
                cech.extend(blk.annihilator_on(p, |i| blk.b(i) >= 0));
                dim += mult * (kk.len() - fp::span_dim(&cech, p));
                let sub = st.decomposable(&blk);
                let d_sub = fp::span_dim(&sub, p);
                let mut all = sub.clone();
                all.extend(kk.iter().cloned());
                if fp::span_dim(&all, p) != kk.len() {
                    return Err(Error::Internal(format!("block ({u},{v},{e}) leaves the annihilator")));
                }
                mu_direct += mult * (kk.len() - d_sub);
            }
        }
    }
    let mut generators = Vec::new();
    let mut annihilate = true;
    let mut independent = true;
    for j in 5..=k {
        for a in 1..j {
            for b in 1..j {
                for c in 1..j {
                    let used = a + b + c;
                    if used >= j - 1 {
                        continue;
                    }
                    let d = j - 1 - used;
                    generators.push(CohenGenerator { j, a, b, c, d });
                }
            }
        }
    }
    // one independence check per (j, a, b): the z, w part only repeats it
    let mut seen = std::collections::BTreeSet::new();
    for g in &generators {
        if !seen.insert((g.j, g.a, g.b)) {
            continue;
        }
        let (blk, vec) = lemma_generator(ki, g.j as i64, 0, 0, g.a as i64, g.b as i64, true);
        if !blk.is_annihilated(&vec, p) {
            annihilate = false;
        }
        let sub = st.decomposable(&blk);
        let mut with = sub.clone();
        with.push(vec);
        if fp::span_dim(&with, p) != fp::span_dim(&sub, p) + 1 {
            independent = false;
        }
    }
    Ok(CohenReport {
        k,
        p,
        mu_generators: generators.len(),
        generators,
        mu_formula: mu_formula(k),
        mu_direct,
        dim,
        generators_annihilate: annihilate,
        generators_independent: independent,
    })
}
